"""Cartesian polynomials in (x1, x2, x3) with multivector coefficients.

Used as an exact-differentiation oracle: Dirac, Laplace and Euler operators
act termwise on monomials, with no discretisation error.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .clifford3 import Multivector3, gp

_UNIT = np.eye(3, dtype=int)


def _coeff(c) -> np.ndarray:
    if isinstance(c, Multivector3):
        return c.to_array()
    arr = np.asarray(c, dtype=float)
    if arr.shape == ():
        out = np.zeros(8)
        out[0] = float(arr)
        return out
    if arr.shape != (8,):
        raise ValueError("coefficients are scalars or 8-component multivectors")
    return arr


class PolyField:
    """Immutable map from exponent triples ``(a, b, c)`` to multivector coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            arr = _coeff(c)
            if np.any(arr != 0.0):
                clean[tuple(int(e) for e in mono)] = arr
        self._terms = clean

    @classmethod
    def constant(cls, c) -> PolyField:
        return cls({(0, 0, 0): c})

    @classmethod
    def variable(cls, j: int) -> PolyField:
        """The coordinate function ``x_{j+1}`` (0-based index)."""
        return cls({tuple(_UNIT[j]): 1.0})

    @property
    def terms(self) -> dict:
        return {m: c.copy() for m, c in self._terms.items()}

    def degrees(self) -> set[int]:
        return {sum(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def max_abs_coeff(self) -> float:
        return max((float(np.max(np.abs(c))) for c in self._terms.values()), default=0.0)

    def is_zero(self, atol: float = 0.0) -> bool:
        return self.max_abs_coeff() <= atol

    def __add__(self, other: PolyField) -> PolyField:
        out = defaultdict(lambda: np.zeros(8))
        for src in (self._terms, other._terms):
            for m, c in src.items():
                out[m] = out[m] + c
        return PolyField(out)

    def __neg__(self) -> PolyField:
        return PolyField({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: PolyField) -> PolyField:
        return self + (-other)

    def scale(self, s: float) -> PolyField:
        return PolyField({m: s * c for m, c in self._terms.items()})

    def lmul(self, a) -> PolyField:
        """``a * f`` with a constant multivector on the left."""
        a = _coeff(a)
        return PolyField({m: gp(a, c) for m, c in self._terms.items()})

    def rmul(self, a) -> PolyField:
        """``f * a`` with a constant multivector on the right."""
        a = _coeff(a)
        return PolyField({m: gp(c, a) for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        if not isinstance(other, PolyField):
            return NotImplemented
        out = defaultdict(lambda: np.zeros(8))
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
                out[m] = out[m] + gp(ca, cb)
        return PolyField(out)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        return NotImplemented

    def partial(self, j: int) -> PolyField:
        out = {}
        for m, c in self._terms.items():
            if m[j]:
                dm = list(m)
                dm[j] -= 1
                out[tuple(dm)] = m[j] * c
        return PolyField(out)

    def dirac(self) -> PolyField:
        """Left Dirac operator ``sum_j e_j d/dx_j``."""
        out = PolyField()
        for j in range(3):
            e = np.zeros(8)
            e[1 + j] = 1.0
            out = out + self.partial(j).lmul(e)
        return out

    def laplacian(self) -> PolyField:
        out = PolyField()
        for j in range(3):
            out = out + self.partial(j).partial(j)
        return out

    def euler(self) -> PolyField:
        """``sum_j x_j d/dx_j``; multiplies a degree-k homogeneous field by k."""
        return PolyField({m: sum(m) * c for m, c in self._terms.items()})

    def __call__(self, x) -> np.ndarray:
        """Evaluate at points ``(..., 3)``; returns ``(..., 8)``."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (8,))
        for (a, b, c), coeff in self._terms.items():
            mono = x[..., 0] ** a * x[..., 1] ** b * x[..., 2] ** c
            out += mono[..., None] * coeff
        return out

    def __repr__(self):
        return f"PolyField({len(self._terms)} terms, degrees={sorted(self.degrees())})"
