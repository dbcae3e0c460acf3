"""Points, quadrature and Clifford-valued inner products on the unit sphere S^2.

Inner products use the *normalised* surface measure ``dsigma / 4pi``.  That is
the measure under which the kernels ``(2k+1) P_k(<x,y>)`` and ``K_k`` are
reproducing and under which a Gram matrix of kernel translates equals the
matrix of kernel values.  :func:`integrate` returns raw surface integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .clifford3 import PRODUCT, Multivector3, conj_arr, scalar_arr

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class SpherePoint:
    """Unit vector ``(cos t sin p, sin t sin p, cos p)`` for azimuth t, polar angle p."""

    theta: float
    phi: float

    @property
    def cartesian(self) -> np.ndarray:
        st = math.sin(self.phi)
        return np.array([math.cos(self.theta) * st, math.sin(self.theta) * st, math.cos(self.phi)])

    @classmethod
    def from_cartesian(cls, x) -> SpherePoint:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise ValueError("cannot place the origin on the sphere")
        x = x / r
        theta = math.atan2(x[1], x[0]) % (2.0 * math.pi)
        phi = math.acos(min(1.0, max(-1.0, x[2])))
        return cls(theta, phi)


def spherical_to_cartesian(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    s = np.sin(phi)
    return np.stack([np.cos(theta) * s, np.sin(theta) * s, np.cos(phi)], axis=-1)


def cartesian_to_spherical(x) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    theta = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2.0 * np.pi)
    phi = np.arccos(np.clip(x[..., 2] / r, -1.0, 1.0))
    return theta, phi


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    degree: int
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "points", spherical_to_cartesian(self.theta, self.phi))

    @property
    def nodes(self) -> list[SpherePoint]:
        return [SpherePoint(float(t), float(p)) for t, p in zip(self.theta, self.phi)]

    def __len__(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=64)
def product_rule(deg: int) -> QuadratureRule:
    """Gauss-Legendre in cos(phi) times trapezoid in theta.

    ``deg + 1`` Legendre nodes and ``2 deg + 2`` azimuthal nodes integrate
    every polynomial of total degree ``<= 2 deg`` restricted to S^2 exactly.
    """
    if deg < 0:
        raise ValueError(f"rule degree must be nonnegative, got {deg}")
    u, wu = np.polynomial.legendre.leggauss(deg + 1)
    n_theta = 2 * deg + 2
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    tt, uu = np.meshgrid(theta, u, indexing="ij")
    ww = np.broadcast_to((2.0 * np.pi / n_theta) * wu, tt.shape)
    rule = QuadratureRule(tt.ravel(), np.arccos(uu.ravel()), np.ascontiguousarray(ww).ravel(), deg)
    for arr in (rule.theta, rule.phi, rule.weights, rule.points):
        arr.setflags(write=False)
    return rule


def _values(f, q: QuadratureRule) -> np.ndarray:
    vals = f(q.points) if callable(f) else f
    vals = np.asarray(vals, dtype=float)
    if vals.shape == (len(q),):
        vals = scalar_arr(vals)
    if vals.shape != (len(q), 8):
        raise ValueError(f"expected {len(q)} multivector samples, got shape {vals.shape}")
    return vals


def integrate(f, q: QuadratureRule):
    """Raw surface integral of a real or multivector-valued function.

    ``f`` is a callable on ``(N, 3)`` cartesian nodes, or precomputed samples.
    """
    vals = f(q.points) if callable(f) else f
    vals = np.asarray(vals, dtype=float)
    return np.tensordot(q.weights, vals, axes=(0, 0))


def inner(f, g, q: QuadratureRule) -> Multivector3:
    """``<f, g> = mean over S^2 of conj(f) g`` (normalised measure)."""
    fv = _values(f, q)
    gv = _values(g, q)
    prod = np.einsum("ni,nj,ijk->nk", conj_arr(fv), gv, PRODUCT)
    return Multivector3(q.weights @ prod / FOUR_PI)


def gram(samples, q: QuadratureRule) -> np.ndarray:
    """Multivector Gram matrix ``G[a, b] = <F_a, F_b>`` from samples ``(B, N, 8)``.

    Real samples ``(B, N)`` are promoted to scalars.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim == 2:
        s = scalar_arr(s)
    wc = conj_arr(s) * (q.weights / FOUR_PI)[None, :, None]
    pair = np.einsum("ani,bnj->abij", wc, s)
    return np.einsum("abij,ijk->abk", pair, PRODUCT)


def _as_vec(p) -> np.ndarray:
    return p.cartesian if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)


def tangent_project(p, v) -> np.ndarray:
    """Component of ``v`` orthogonal to the unit vector ``p``."""
    p = _as_vec(p)
    v = np.asarray(v, dtype=float)
    return v - np.dot(v, p) * p


def geodesic_step(p, w, t: float, tol: float = 1e-10) -> np.ndarray:
    """Point ``cos(t) p + sin(t) w`` on the great circle through p along unit tangent w."""
    p = _as_vec(p)
    w = np.asarray(w, dtype=float)
    if abs(np.dot(p, w)) > tol:
        raise ValueError("direction is not tangent to the sphere at p")
    if abs(np.linalg.norm(w) - 1.0) > tol:
        raise ValueError("direction must be a unit vector")
    out = math.cos(t) * p + math.sin(t) * w
    return out / np.linalg.norm(out)
