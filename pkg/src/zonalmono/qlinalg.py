"""Quaternionic matrices, the complex adjoint chi, and Hermitian inverse square roots.

Matrices over the even subalgebra are arrays ``(n, n, 4)`` of coefficients on
``(1, e12, e13, e23)``; quaternionic matrices are ``(n, n, 4)`` arrays on
``(1, e1, e2, e12)``.  Writing ``q = q1 + q2 e2`` with ``q1 = w + z e12`` and
``q2 = y - x e12`` identifies ``e12`` with the imaginary unit.
"""
from __future__ import annotations

import numpy as np

from .clifford3 import PRODUCT, _quat_mul, even_part_arr, from_even_arr, tau_arr, tau_inv_arr


class SingularGramError(ValueError):
    """Raised when a Gram matrix has an eigenvalue below the invertibility floor."""


class StructureError(ValueError):
    """Raised when a complex matrix is not the complex adjoint of a quaternionic one."""


def chi(a) -> np.ndarray:
    """Complex adjoint ``[[A1, A2], [-conj(A2), conj(A1)]]`` of a quaternionic matrix."""
    a = np.asarray(a, dtype=float)
    w, x, y, z = np.moveaxis(a, -1, 0)
    a1 = w + 1j * z
    a2 = y - 1j * x
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def chi_inv(c, atol: float = 1e-8) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    two_n = c.shape[0]
    if c.ndim != 2 or c.shape[1] != two_n or two_n % 2:
        raise StructureError(f"expected a square matrix of even size, got {c.shape}")
    n = two_n // 2
    c11, c12 = c[:n, :n], c[:n, n:]
    c21, c22 = c[n:, :n], c[n:, n:]
    scale = max(1.0, float(np.max(np.abs(c))))
    dev = max(
        float(np.max(np.abs(c22 - c11.conj()), initial=0.0)),
        float(np.max(np.abs(c21 + c12.conj()), initial=0.0)),
    )
    if dev > atol * scale:
        raise StructureError(f"matrix is not chi-structured (block deviation {dev:.3g})")
    a1 = 0.5 * (c11 + c22.conj())
    a2 = 0.5 * (c12 - c21.conj())
    return np.stack([a1.real, -a2.imag, a2.real, a1.imag], axis=-1)


def quat_identity(n: int) -> np.ndarray:
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def quat_matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _quat_mul(a[:, :, None, :], b[None, :, :, :]).sum(axis=1)


def quat_adjoint(a) -> np.ndarray:
    """Conjugate transpose ``A*`` of a quaternionic matrix."""
    a = np.swapaxes(np.asarray(a, dtype=float), 0, 1).copy()
    a[..., 1:] *= -1.0
    return a


def even_identity(n: int) -> np.ndarray:
    return quat_identity(n)


def even_matmul(a, b) -> np.ndarray:
    """Matrix product over the even subalgebra (entry order is load-bearing)."""
    am = from_even_arr(a)
    bm = from_even_arr(b)
    return even_part_arr(np.einsum("ilp,ljq,pqk->ijk", am, bm, PRODUCT))


def even_adjoint(a) -> np.ndarray:
    return quat_adjoint(a)


def is_self_adjoint(a, atol: float = 1e-12) -> bool:
    a = np.asarray(a, dtype=float)
    return bool(np.allclose(a, quat_adjoint(a), rtol=0.0, atol=atol))


def _off_norm(c: np.ndarray) -> float:
    off = c - np.diag(np.diag(c))
    return float(np.linalg.norm(off))


def jacobi_eigh(c, tol: float = 1e-13, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ascending real eigenvalues and a unitary matrix of column
    eigenvectors; each column is phased so its first non-negligible entry is
    real and positive.
    """
    a = np.array(c, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("jacobi_eigh expects a square matrix")
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-10 * max(1.0, float(np.max(np.abs(a), initial=0.0)))):
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    target = tol * max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        if _off_norm(a) < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                cs = 1.0 / np.hypot(t, 1.0)
                sn = t * cs
                # J = diag(1, conj(phase)) @ [[cs, sn], [-sn, cs]]
                j2 = np.array([[cs, sn], [-sn * phase.conjugate(), cs * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j2
                a[idx, :] = j2.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j2
    else:
        if _off_norm(a) >= target:
            raise RuntimeError("Jacobi iteration did not converge")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    for col in range(n):
        nz = np.flatnonzero(np.abs(v[:, col]) > 1e-12)
        if nz.size:
            z = v[nz[0], col]
            v[:, col] *= abs(z) / z
    return w, v


def hermitian_inv_sqrt(c, floor: float = 1e-10) -> np.ndarray:
    """``C^{-1/2} = V diag(lambda^{-1/2}) V*`` for Hermitian positive definite C."""
    w, v = jacobi_eigh(c)
    if w.size and w[0] < floor:
        raise SingularGramError(f"smallest eigenvalue {w[0]:.3g} is below the floor {floor:g}")
    out = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def min_eigenvalue(c) -> float:
    return float(jacobi_eigh(c)[0][0])


def even_min_eigenvalue(g) -> float:
    """Smallest eigenvalue of ``chi(tau(G))`` for an even-valued Gram matrix."""
    return min_eigenvalue(chi(tau_arr(g)))


def coefficient_matrix(g, floor: float = 1e-10) -> np.ndarray:
    """``A = tau^-1 chi^-1 (chi tau G)^{-1/2}``, so that ``A* G A = I``.

    ``g`` is a self-adjoint ``(n, n, 4)`` even-valued matrix.
    """
    g = np.asarray(g, dtype=float)
    if not is_self_adjoint(g, atol=1e-10):
        raise ValueError("Gram matrix is not self-adjoint")
    root = hermitian_inv_sqrt(chi(tau_arr(g)), floor=floor)
    return tau_inv_arr(chi_inv(root))


def complex_to_json(c) -> list:
    """Complex matrix as nested ``[re, im]`` pairs."""
    c = np.asarray(c, dtype=complex)
    return np.stack([c.real, c.imag], axis=-1).tolist()


def complex_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]
