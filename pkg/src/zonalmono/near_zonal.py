"""Near-zonal orthonormal bases of spherical monogenics from kernel translates.

``Z_t(x) = sum_j K_k(x, eta_j) a_jt`` with ``a_jt`` in the even subalgebra and
``A* G A = I``, where ``G_ij = K_k(eta_i, eta_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford3 import PRODUCT, conj_arr, even_part_arr, from_even_arr
from .monogenics import kernel_K
from .qlinalg import (
    SingularGramError,
    coefficient_matrix,
    even_adjoint,
    even_matmul,
    even_min_eigenvalue,
)
from .sphere_opt import Ensemble, objective_monogenic


def monogenic_gram(k: int, points) -> np.ndarray:
    """``G_ij = K_k(eta_i, eta_j)`` as an ``(N, N, 4)`` even-valued matrix."""
    pts = np.asarray(points, dtype=float)
    full = kernel_K(3, k, pts[:, None, :], pts[None, :, :])
    return even_part_arr(full)


@dataclass(frozen=True, eq=False)
class NearZonalBasis:
    k: int
    eta: Ensemble
    G: np.ndarray
    A: np.ndarray

    @property
    def size(self) -> int:
        return self.k + 1

    def __call__(self, x) -> np.ndarray:
        """All ``Z_t`` at points ``(N, 3)``; returns ``(N, k+1, 8)``."""
        x = np.asarray(x, dtype=float)
        kern = kernel_K(3, self.k, x[..., None, :], self.eta.points)  # (N, J, 8)
        return np.einsum("njp,jtq,pqr->ntr", kern, from_even_arr(self.A), PRODUCT)

    def orthonormality_residual(self) -> float:
        """Max entry norm of ``A* G A - I``."""
        resid = even_matmul(even_matmul(even_adjoint(self.A), self.G), self.A)
        resid[np.arange(self.size), np.arange(self.size), 0] -= 1.0
        return float(np.max(np.linalg.norm(resid, axis=-1)))

    def deviations(self) -> list[float]:
        return [zonality_deviation(self, t) for t in range(self.size)]

    def to_dict(self, objective: float | None = None) -> dict:
        obj = objective_monogenic(self.k, self.eta) if objective is None else objective
        return {
            "k": self.k,
            "points": self.eta.tolist(),
            "G": [[_even_dict(e) for e in row] for row in self.G],
            "A": [[_even_dict(e) for e in row] for row in self.A],
            "objective": obj,
            "deviations": self.deviations(),
        }


    @classmethod
    def from_dict(cls, data: dict) -> NearZonalBasis:
        def even_matrix(rows):
            return np.array([[[e["s"], e["e12"], e["e13"], e["e23"]] for e in row] for row in rows], dtype=float)

        return cls(int(data["k"]), Ensemble(data["points"]), even_matrix(data["G"]), even_matrix(data["A"]))


def _even_dict(e) -> dict:
    return {"s": float(e[0]), "e12": float(e[1]), "e13": float(e[2]), "e23": float(e[3])}


def build(k: int, eta) -> NearZonalBasis:
    ens = eta if isinstance(eta, Ensemble) else Ensemble(eta)
    if len(ens) != k + 1:
        raise ValueError(f"degree {k} needs {k + 1} points, got {len(ens)}")
    g = monogenic_gram(k, ens.points)
    try:
        a = coefficient_matrix(g)
    except SingularGramError as exc:
        raise SingularGramError(f"degenerate ensemble: {exc}") from exc
    return NearZonalBasis(k, ens, g, a)


def zonality_deviation(basis: NearZonalBasis, t: int) -> float:
    """``[<b, G b>]_0`` with b the t-th column of A minus its diagonal entry.

    Equals the squared L2 distance between ``Z_t`` and ``K_k(., eta_t) a_tt``.
    """
    if not 0 <= t < basis.size:
        raise IndexError(f"basis index {t} outside 0..{basis.size - 1}")
    b = basis.A[:, t, :].copy()
    b[t] = 0.0
    gb = even_matmul(basis.G, b[:, None, :])[:, 0, :]
    quad = np.einsum("jp,jq,pqr->r", conj_arr(from_even_arr(b)), from_even_arr(gb), PRODUCT)
    return float(quad[0])


def gram_min_eigenvalue(k: int, points) -> float:
    return even_min_eigenvalue(monogenic_gram(k, points))
