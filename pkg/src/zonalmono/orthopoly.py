"""Jacobi, Legendre and Gegenbauer polynomials via three-term recurrences.

All evaluators accept scalars or numpy arrays for ``x`` and broadcast.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class JacobiParams:
    n: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"degree must be nonnegative, got {self.n}")
        if self.alpha <= -1 or self.beta <= -1:
            raise ValueError(f"alpha, beta must exceed -1, got ({self.alpha}, {self.beta})")


def _as_params(p) -> JacobiParams:
    return p if isinstance(p, JacobiParams) else JacobiParams(*p)


def jacobi(p, x):
    """``P_n^(alpha, beta)(x)``; ``p`` is a :class:`JacobiParams` or ``(n, alpha, beta)``."""
    p = _as_params(p)
    n, a, b = p.n, float(p.alpha), float(p.beta)
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p_cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for m in range(2, n + 1):
        c = 2 * m + a + b
        a1 = 2.0 * m * (m + a + b) * (c - 2.0)
        a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b)
        a3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c
        p_prev, p_cur = p_cur, (a2 * p_cur - a3 * p_prev) / a1
    return p_cur


def jacobi_deriv(p, x):
    """d/dx ``P_n^(alpha, beta)(x) = (n + alpha + beta + 1)/2 * P_{n-1}^(alpha+1, beta+1)(x)``.

    The shifted-parameter identity is regular at ``x = +-1``, so it is used
    everywhere instead of dividing by ``1 - x^2``.
    """
    p = _as_params(p)
    x = np.asarray(x, dtype=float)
    if p.n == 0:
        return np.zeros_like(x)
    return 0.5 * (p.n + p.alpha + p.beta + 1.0) * jacobi((p.n - 1, p.alpha + 1.0, p.beta + 1.0), x)


def legendre(k: int, x):
    return jacobi((k, 0.0, 0.0), x)


def gegenbauer(k: int, mu: float, x):
    """``C_k^mu(x)``, with the convention ``C_{-1}^mu = 0``."""
    x = np.asarray(x, dtype=float)
    if k < 0:
        return np.zeros_like(x)
    c_prev = np.ones_like(x)
    if k == 0:
        return c_prev
    c_cur = 2.0 * mu * x
    for m in range(2, k + 1):
        c_prev, c_cur = c_cur, (2.0 * (m + mu - 1.0) * x * c_cur - (m + 2.0 * mu - 2.0) * c_prev) / m
    return c_cur


def gegenbauer_deriv(k: int, mu: float, x):
    return 2.0 * mu * gegenbauer(k - 1, mu + 1.0, x)
