"""Orthonormal real spherical harmonics on R^3, the harmonic reproducing kernel
and zonal harmonic bases assembled from kernel translates.

Basis labels follow the convention ``0, 2, 3, ..., 2k+1``: label 0 is the
axially symmetric harmonic, labels ``2n`` and ``2n+1`` carry ``cos(n theta)``
and ``sin(n theta)`` for ``1 <= n <= k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from .orthopoly import gegenbauer, jacobi, legendre
from .polyfield import PolyField
from .qlinalg import SingularGramError, hermitian_inv_sqrt, jacobi_eigh
from .sphere_quad import SpherePoint, cartesian_to_spherical


def harmonic_labels(k: int) -> list[int]:
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return [0] + list(range(2, 2 * k + 2))


def _order(k: int, label: int) -> tuple[int, bool]:
    """Azimuthal order and whether the label carries ``sin``."""
    if label == 0:
        return 0, False
    if label < 2 or label > 2 * k + 1:
        raise IndexError(f"harmonic label {label} is outside {{0, 2..{2 * k + 1}}} for degree {k}")
    return label // 2, label % 2 == 1


def harmonic_constant(k: int, n: int) -> float:
    """Constant making ``r^k sin^n(phi) P_{k-n}^(n,n)(cos phi) trig(n theta)`` unit norm
    under the normalised surface measure."""
    if n == 0:
        return math.sqrt(2 * k + 1)
    return math.sqrt(2.0 * (2 * k + 1) * math.factorial(k - n) * math.factorial(k + n)) / (
        2**n * math.factorial(k)
    )


def _angles(p):
    if isinstance(p, SpherePoint):
        return np.float64(p.theta), np.float64(p.phi), np.float64(1.0)
    if isinstance(p, tuple) and len(p) == 2:
        return np.asarray(p[0], dtype=float), np.asarray(p[1], dtype=float), np.float64(1.0)
    x = np.asarray(p, dtype=float)
    theta, phi = cartesian_to_spherical(x)
    return theta, phi, np.linalg.norm(x, axis=-1)


def eval_H(k: int, label: int, p, r=None):
    """Closed-form ``H_k^label``.

    ``p`` is a :class:`SpherePoint`, a ``(theta, phi)`` tuple of arrays, or
    cartesian points ``(..., 3)`` (whose norm supplies r unless given).
    """
    n, use_sin = _order(k, label)
    theta, phi, radius = _angles(p)
    if r is not None:
        radius = np.asarray(r, dtype=float)
    trig = np.sin(n * theta) if use_sin else np.cos(n * theta)
    c = harmonic_constant(k, n)
    return c * radius**k * np.sin(phi) ** n * jacobi((k - n, n, n), np.cos(phi)) * trig


def eval_H_all(k: int, x) -> np.ndarray:
    """All ``2k+1`` harmonics at cartesian points; shape ``(2k+1, ...)``."""
    return np.stack([eval_H(k, lab, x) for lab in harmonic_labels(k)])


def _jacobi_coeffs(m: int, a: float) -> np.ndarray:
    """Monomial coefficients of ``P_m^(a,a)``, built with the same recurrence."""
    p_prev = Polynomial([1.0])
    if m == 0:
        return p_prev.coef
    p_cur = Polynomial([0.0, a + 1.0])
    for j in range(2, m + 1):
        c = 2 * j + 2 * a
        a1 = 2.0 * j * (j + 2 * a) * (c - 2.0)
        a2 = (c - 1.0) * c * (c - 2.0)
        a3 = 2.0 * (j + a - 1.0) ** 2 * c
        p_prev, p_cur = p_cur, (Polynomial([0.0, a2]) * p_cur - a3 * p_prev) / a1
    coef = np.zeros(m + 1)
    coef[: len(p_cur.coef)] = p_cur.coef
    return coef


_R2 = PolyField({(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})


@lru_cache(maxsize=256)
def harmonic_to_poly(k: int, label: int) -> PolyField:
    """Cartesian form of ``H_k^label`` as a homogeneous polynomial of degree k.

    ``r^n sin^n(phi) cos(n theta) = Re (x1 + i x2)^n`` and ``r^{k-n}
    P_{k-n}^(n,n)(x3 / r)`` only involves even powers of r by parity.
    """
    n, use_sin = _order(k, label)
    planar = {}
    for j in range(n + 1):
        # i^j split into real / imaginary parts
        re, im = ((1, 0), (0, 1), (-1, 0), (0, -1))[j % 4]
        val = im if use_sin else re
        if val:
            planar[(n - j, j, 0)] = math.comb(n, j) * val
    m = k - n
    radial = PolyField()
    for j, cj in enumerate(_jacobi_coeffs(m, n)):
        if (m - j) % 2 or cj == 0.0:
            continue
        term = PolyField({(0, 0, j): cj})
        for _ in range((m - j) // 2):
            term = term * _R2
        radial = radial + term
    return (PolyField(planar) * radial).scale(harmonic_constant(k, n))


def kernel_R(m: int, k: int, x, y):
    """Harmonic reproducing kernel ``(2k+m-2)/(m-2) C_k^{m/2-1}(<x, y>)``.

    Broadcasts over leading axes of unit vectors ``x`` and ``y``.
    """
    if m < 3:
        raise ValueError(f"dimension must be at least 3, got {m}")
    x = x.cartesian if isinstance(x, SpherePoint) else np.asarray(x, dtype=float)
    y = y.cartesian if isinstance(y, SpherePoint) else np.asarray(y, dtype=float)
    t = np.clip(np.sum(x * y, axis=-1), -1.0, 1.0)
    if m == 3:
        return (2 * k + 1) * legendre(k, t)
    return (2 * k + m - 2) / (m - 2) * gegenbauer(k, m / 2.0 - 1.0, t)


@dataclass(frozen=True, eq=False)
class ZonalHarmonicBasis:
    """``Z_t(x) = sum_j R_k(x, eta_j) a_jt`` with ``A = G^{-1/2}``."""

    k: int
    points: np.ndarray
    G: np.ndarray
    A: np.ndarray

    def __call__(self, x) -> np.ndarray:
        """Values of every ``Z_t`` at points ``(N, 3)``; shape ``(N, 2k+1)``."""
        x = np.asarray(x, dtype=float)
        kern = kernel_R(3, self.k, x[..., None, :], self.points)
        return kern @ self.A

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "points": self.points.tolist(),
            "G": self.G.tolist(),
            "A": self.A.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ZonalHarmonicBasis:
        return cls(int(data["k"]), np.asarray(data["points"], dtype=float),
                   np.asarray(data["G"], dtype=float), np.asarray(data["A"], dtype=float))


def harmonic_gram(k: int, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    return kernel_R(3, k, pts[:, None, :], pts[None, :, :])


def zonal_harmonic_basis(k: int, eta, floor: float = 1e-12) -> ZonalHarmonicBasis:
    pts = np.asarray([p.cartesian if isinstance(p, SpherePoint) else p for p in eta], dtype=float)
    if pts.shape != (2 * k + 1, 3):
        raise ValueError(f"degree {k} needs {2 * k + 1} points, got array of shape {pts.shape}")
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    g = harmonic_gram(k, pts)
    try:
        a = hermitian_inv_sqrt(g, floor=floor).real
    except SingularGramError as exc:
        raise SingularGramError(f"degenerate ensemble: {exc}") from exc
    return ZonalHarmonicBasis(k, pts, g, 0.5 * (a + a.T))


def is_diagonally_dominant(a) -> bool:
    """Each diagonal magnitude exceeds the summed off-diagonal magnitudes of its row.

    Accepts real ``(n, n)`` or even-valued ``(n, n, 4)`` matrices.
    """
    a = np.asarray(a, dtype=float)
    mag = np.linalg.norm(a, axis=-1) if a.ndim == 3 else np.abs(a)
    diag = np.diag(mag)
    return bool(np.all(diag > mag.sum(axis=1) - diag))


def gram_eigenvalues(g) -> np.ndarray:
    return jacobi_eigh(g)[0]
