"""Dirac operators and an explicit orthogonal basis of spherical monogenics in R^3.

The degree-d basis is obtained from the degree ``k = d + 1`` harmonics:
``F_d^0 = D H_k^0`` and ``F_d^n = D H_k^{2n} - (D H_k^{2n+1}) e12`` for
``1 <= n <= d``, where D is the Dirac operator.  Every member has a closed form
in ``(theta, phi)`` built from exponentials of bivectors; the Cartesian
polynomial route through :class:`PolyField` gives the same functions exactly
and is kept as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .clifford3 import (
    E12,
    E13,
    E23,
    PRODUCT,
    Multivector3,
    bivector_arr,
    conj_arr,
    exp_bivector_arr,
    gp,
    rotor12,
    scalar_arr,
    vector_arr,
    wedge_arr,
)
from .harmonics import _angles, harmonic_constant, harmonic_to_poly
from .orthopoly import gegenbauer, jacobi, jacobi_deriv, legendre
from .polyfield import PolyField
from .sphere_quad import SpherePoint, spherical_to_cartesian

_E12 = E12.to_array()
_E13 = E13.to_array()
_E23 = E23.to_array()
POLE_TOL = 1e-8


def dirac(f: PolyField) -> PolyField:
    """Exact left Dirac derivative ``sum_j e_j df/dx_j``."""
    return f.dirac()


def gamma_poly(f: PolyField) -> PolyField:
    """Spherical Dirac operator ``-sum_{i<j} e_ij (x_i d_j - x_j d_i)`` on a polynomial."""
    out = PolyField()
    for (i, j), blade in (((0, 1), _E12), ((0, 2), _E13), ((1, 2), _E23)):
        xi, xj = PolyField.variable(i), PolyField.variable(j)
        ang = xi * f.partial(j) - xj * f.partial(i)
        out = out - ang.lmul(blade)
    return out


def _mv_values(vals) -> np.ndarray:
    vals = np.asarray(vals, dtype=float)
    return vals if vals.shape[-1:] == (8,) else scalar_arr(vals)


def gamma_op(f, p, h: float = 1e-6, d_theta=None, d_phi=None) -> np.ndarray:
    """Spherical Dirac operator at ``p`` in angular coordinates.

    ``Gamma f = (1/sin phi) e23 e^{-e12 theta} e^{phi e13 e^{-e12 theta}} df/dtheta
    + e13 e^{-e12 theta} df/dphi``.  ``f(theta, phi)`` returns real or
    multivector values; partials are central differences unless supplied.
    """
    theta, phi, _ = _angles(p)
    if np.any(np.minimum(phi, np.pi - phi) < POLE_TOL):
        raise ValueError("gamma_op is singular at the poles")
    if d_theta is None:
        d_theta = (_mv_values(f(theta + h, phi)) - _mv_values(f(theta - h, phi))) / (2 * h)
    if d_phi is None:
        d_phi = (_mv_values(f(theta, phi + h)) - _mv_values(f(theta, phi - h))) / (2 * h)
    d_theta, d_phi = _mv_values(d_theta), _mv_values(d_phi)
    rot = rotor12(-theta)
    tilt = exp_bivector_arr(phi[..., None] * _tilt_axis(theta))
    first = gp(gp(gp(_E23, rot), tilt), d_theta) / np.sin(phi)[..., None]
    return first + gp(gp(_E13, rot), d_phi)


def _tilt_axis(theta) -> np.ndarray:
    """``e13 e^{-e12 theta} = e13 cos(theta) + e23 sin(theta)``."""
    theta = np.asarray(theta, dtype=float)
    return bivector_arr(np.zeros_like(theta), np.cos(theta), np.sin(theta))


def _tilt_axis_plus(theta) -> np.ndarray:
    """``e13 e^{e12 theta} = e13 cos(theta) - e23 sin(theta)``."""
    theta = np.asarray(theta, dtype=float)
    return bivector_arr(np.zeros_like(theta), np.cos(theta), -np.sin(theta))


def eval_F(k_minus_1: int, n: int, p) -> np.ndarray:
    """Closed-form (unnormalised) monogenic ``F_{k-1}^n``, ``0 <= n <= k-1``.

    ``p`` is a :class:`SpherePoint`, a ``(theta, phi)`` tuple or unit vectors
    ``(..., 3)``.  Returns multivector values ``(..., 8)``.
    """
    k = k_minus_1 + 1
    if k_minus_1 < 0:
        raise ValueError(f"degree must be nonnegative, got {k_minus_1}")
    if not 0 <= n <= k_minus_1:
        raise IndexError(f"index {n} outside 0..{k_minus_1}")
    theta, phi, _ = _angles(p)
    u, s = np.cos(phi), np.sin(phi)
    omega = vector_arr(spherical_to_cartesian(theta, phi))
    c = harmonic_constant(k, n)
    e13_rot = gp(_E13, rotor12(-theta))
    if n == 0:
        radial = scalar_arr(c * k * legendre(k, u))
        tangential = e13_rot * (c * jacobi_deriv((k, 0, 0), u) * s)[..., None]
        return gp(omega, radial - tangential)
    tilt = exp_bivector_arr(-phi[..., None] * _tilt_axis(theta))
    first = gp(gp(e13_rot, tilt), rotor12(-n * theta)) * ((k - n) * jacobi((k - n, n, n), u))[..., None]
    second = gp(_E13, rotor12(-(n + 1) * theta)) * (k * jacobi((k - n - 1, n, n), u))[..., None]
    return gp(omega, (first - second) * (c * s ** (n - 1))[..., None])


def eval_last(k_minus_1: int, p, odd: bool = False) -> np.ndarray:
    """Closed form of ``D H_k^{2k}`` (or ``D H_k^{2k+1}`` when ``odd``)."""
    k = k_minus_1 + 1
    theta, phi, _ = _angles(p)
    omega = vector_arr(spherical_to_cartesian(theta, phi))
    tilt = exp_bivector_arr(-phi[..., None] * _tilt_axis_plus(theta))
    core = gp(gp(rotor12(theta), tilt), rotor12(-k * theta))
    core = gp(core, _E23 if odd else _E13)
    return gp(omega, core * (harmonic_constant(k, k) * k * np.sin(phi) ** (k - 1))[..., None])


def F_poly(k_minus_1: int, n: int) -> PolyField:
    """``F_{k-1}^n`` through exact Dirac derivatives of Cartesian harmonics."""
    k = k_minus_1 + 1
    if not 0 <= n <= k_minus_1:
        raise IndexError(f"index {n} outside 0..{k_minus_1}")
    if n == 0:
        return harmonic_to_poly(k, 0).dirac()
    return harmonic_to_poly(k, 2 * n).dirac() - harmonic_to_poly(k, 2 * n + 1).dirac().rmul(_E12)


def F_norm_sq(k_minus_1: int, n: int) -> float:
    """Squared L2 norm of ``F_{k-1}^n`` (normalised measure).

    ``k(2k+1)`` for n = 0 and ``2(k-n)(2k+1)`` for n >= 1.
    """
    k = k_minus_1 + 1
    if n == 0:
        return float(k * (2 * k + 1))
    return float(2 * (k - n) * (2 * k + 1))


@dataclass(frozen=True)
class MonogenicBasis:
    """Orthonormal basis ``{F~_d^n}`` of degree-d spherical monogenics."""

    degree: int

    @property
    def size(self) -> int:
        return self.degree + 1

    @cached_property
    def norms(self) -> np.ndarray:
        return np.sqrt([F_norm_sq(self.degree, n) for n in range(self.size)])

    def unnormalized(self, n: int, p) -> np.ndarray:
        return eval_F(self.degree, n, p)

    def __call__(self, n: int, p) -> np.ndarray:
        return eval_F(self.degree, n, p) / self.norms[n]

    def evaluate(self, p) -> np.ndarray:
        """All normalised members at ``p``; shape ``(degree+1, ..., 8)``."""
        return np.stack([self(n, p) for n in range(self.size)])

    def last(self, p) -> np.ndarray:
        """Normalised ``D H_k^{2k}``, which equals ``F~_d^d e13``."""
        k = self.degree + 1
        return eval_last(self.degree, p) / math.sqrt(k * (2 * k + 1))


def export_samples(degree: int, n: int, theta, phi) -> dict:
    """Normalised ``F~_degree^n`` sampled at ``(theta, phi)`` pairs, JSON-ready."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    vals = MonogenicBasis(degree)(n, (theta, phi))
    samples = [
        {"theta": float(t), "phi": float(p), "value": Multivector3(v).to_dict()}
        for t, p, v in zip(theta, phi, vals)
    ]
    return {"k": degree, "n": n, "samples": samples}


def extra_relation_check(k: int, n_points: int = 100, seed: int = 0) -> dict:
    """Check the relations tying ``D H_k^{2k}`` and ``D H_k^{2k+1}`` to the basis.

    Reports maximum deviations of
    ``Y^{2k} - Y^{2k+1} e12`` (exact, on polynomials),
    the closed forms of ``Y^{2k}``, ``Y^{2k+1}`` against exact Dirac derivatives,
    and ``F~^k - F~^{k-1} e13`` on the normalised basis.
    """
    if k < 1:
        raise ValueError("the relation needs k >= 1")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_points, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y_even = harmonic_to_poly(k, 2 * k).dirac()
    y_odd = harmonic_to_poly(k, 2 * k + 1).dirac()
    basis = MonogenicBasis(k - 1)
    last = basis.last(x)
    prev = basis(k - 1, x)
    return {
        "k": k,
        "poly_y2k_minus_y2k1_e12": (y_even - y_odd.rmul(_E12)).max_abs_coeff(),
        "closed_y2k": float(np.max(np.abs(eval_last(k - 1, x) - y_even(x)))),
        "closed_y2k1": float(np.max(np.abs(eval_last(k - 1, x, odd=True) - y_odd(x)))),
        "last_minus_prev_e13": float(np.max(np.abs(last - gp(prev, _E13)))),
    }


def kernel_K(m: int, k: int, x, y) -> np.ndarray:
    """Monogenic reproducing kernel
    ``(k+m-2)/(m-2) C_k^mu(<x,y>) + (x ^ y) C_{k-1}^{mu+1}(<x,y>)``, ``mu = m/2 - 1``.

    Broadcasts over leading axes; returns ``(..., 8)`` with scalar and
    bivector parts only.
    """
    if m < 3:
        raise ValueError(f"dimension must be at least 3, got {m}")
    if m != 3:
        raise NotImplementedError("the bivector part is implemented for R^3 only")
    x = x.cartesian if isinstance(x, SpherePoint) else np.asarray(x, dtype=float)
    y = y.cartesian if isinstance(y, SpherePoint) else np.asarray(y, dtype=float)
    t = np.clip(np.sum(x * y, axis=-1), -1.0, 1.0)
    mu = m / 2.0 - 1.0
    scal = (k + m - 2) / (m - 2) * gegenbauer(k, mu, t)
    return scalar_arr(scal) + wedge_arr(x, y) * gegenbauer(k - 1, mu + 1.0, t)[..., None]


def equator_points(k: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2.0 * np.pi * np.arange(k + 1) / (k + 1)
    return theta, np.full(k + 1, np.pi / 2)


def equator_gram(k: int) -> np.ndarray:
    """``E[n, l] = sum_j conj(F~_k^n(eta_j)) F~_k^l(eta_j)`` over k+1 equally spaced
    equator points; shape ``(k+1, k+1, 8)``."""
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    vals = MonogenicBasis(k).evaluate(equator_points(k))
    return np.einsum("anp,bnq,pqr->abr", conj_arr(vals), vals, PRODUCT)


def equator_diagonal_closed_form(k: int) -> np.ndarray:
    """Closed form of the diagonal of :func:`equator_gram`.

    With ``K = k + 1``, parity of ``P^(n,n)`` at 0 kills one cross term, leaving
    ``(k+1) c^2 [(K-n)^2 P_{K-n}^(n,n)(0)^2 + K^2 P_{K-n-1}^(n,n)(0)^2] / |F^n|^2``
    for n >= 1 and ``(k+1) c^2 [K^2 P_K(0)^2 + P_K'(0)^2] / |F^0|^2`` for n = 0.
    """
    big = k + 1
    out = np.empty(k + 1)
    for n in range(k + 1):
        c2 = harmonic_constant(big, n) ** 2
        if n == 0:
            bracket = big**2 * legendre(big, 0.0) ** 2 + jacobi_deriv((big, 0, 0), 0.0) ** 2
        else:
            bracket = (big - n) ** 2 * jacobi((big - n, n, n), 0.0) ** 2 + big**2 * jacobi(
                (big - n - 1, n, n), 0.0
            ) ** 2
        out[n] = (k + 1) * c2 * bracket / F_norm_sq(k, n)
    return out

