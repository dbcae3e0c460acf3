"""Named numerical self-checks run by ``zonalmono verify``.

Each check returns a :class:`CheckResult`; a check passes when its worst
observed error is within tolerance.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from . import clifford3
from .clifford3 import conj_arr, gp, tau_arr
from .harmonics import eval_H_all, harmonic_gram, kernel_R
from .monogenics import (
    F_norm_sq,
    F_poly,
    MonogenicBasis,
    equator_gram,
    extra_relation_check,
    kernel_K,
)
from .near_zonal import monogenic_gram
from .qlinalg import chi, even_min_eigenvalue, min_eigenvalue, quat_adjoint, quat_identity, quat_matmul
from .sphere_quad import gram, product_rule

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    error: float
    tol: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _result(name: str, error: float, tol: float, detail: str = "") -> CheckResult:
    error = float(error)
    return CheckResult(name, bool(error <= tol), error, tol, detail)


def _unit(rng, n: int) -> np.ndarray:
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def check_clifford_associativity(rng, trials: int = 100) -> CheckResult:
    a, b, c = rng.standard_normal((3, trials, 8))
    err = np.max(np.abs(gp(gp(a, b), c) - gp(a, gp(b, c))))
    # generators must square to -1 as well
    gens = np.eye(8)[1:4]
    err = max(err, np.max(np.abs(gp(gens, gens) + np.eye(8)[0])))
    return _result("clifford_associativity", err, 1e-12)


def check_chi_tau(rng, trials: int = 100, n: int = 3) -> CheckResult:
    err = 0.0
    for _ in range(trials):
        a, b = rng.standard_normal((2, n, n, 4))
        err = max(
            err,
            np.max(np.abs(chi(quat_matmul(a, b)) - chi(a) @ chi(b))),
            np.max(np.abs(chi(quat_adjoint(a)) - chi(a).conj().T)),
            np.max(np.abs(chi(a + b) - chi(a) - chi(b))),
            np.max(np.abs(chi(quat_identity(n)) - np.eye(2 * n))),
        )
        x, y = rng.standard_normal((2, 4))
        ex, ey = clifford3.from_even_arr(x), clifford3.from_even_arr(y)
        prod = clifford3.even_part_arr(gp(ex, ey))
        tx, ty = tau_arr(x), tau_arr(y)
        err = max(
            err,
            np.max(np.abs(tau_arr(prod) - clifford3._quat_mul(tx, ty))),
            np.max(np.abs(tau_arr(x + y) - tx - ty)),
            np.max(np.abs(tau_arr(clifford3.even_part_arr(conj_arr(ex))) - tx * [1, -1, -1, -1])),
        )
    return _result("chi_tau_properties", err, 1e-12)


def check_harmonic_orthonormality(k_max: int, quad_deg: int) -> CheckResult:
    q = product_rule(quad_deg)
    err = 0.0
    for k in range(k_max + 1):
        g = gram(eval_H_all(k, q.points), q)[..., 0]
        err = max(err, np.max(np.abs(g - np.eye(2 * k + 1))))
    return _result("harmonic_orthonormality", err, 1e-9, f"k = 0..{k_max}")


def check_monogenic_orthonormality(k_max: int, quad_deg: int) -> CheckResult:
    q = product_rule(quad_deg)
    err = 0.0
    for d in range(k_max + 1):
        g = gram(MonogenicBasis(d).evaluate(q.points), q)
        target = np.zeros_like(g)
        target[np.arange(d + 1), np.arange(d + 1), 0] = 1.0
        err = max(err, np.max(np.abs(g - target)))
    return _result("monogenic_orthonormality", err, 1e-9, f"degree 0..{k_max}")


def check_norm_theorem(k_max: int, quad_deg: int) -> CheckResult:
    q = product_rule(quad_deg)
    err = 0.0
    for d in range(k_max + 1):
        basis = MonogenicBasis(d)
        vals = np.stack([basis.unnormalized(n, q.points) for n in range(d + 1)])
        g = gram(vals, q)
        for n in range(d + 1):
            exact = F_norm_sq(d, n)
            err = max(err, abs(g[n, n, 0] - exact) / exact)
    return _result("norm_theorem", err, 1e-9, "relative error of squared norms")


def check_closed_form_oracle(k_max: int, rng, n_points: int = 100) -> CheckResult:
    x = _unit(rng, n_points)
    err = 0.0
    for d in range(k_max + 1):
        basis = MonogenicBasis(d)
        for n in range(d + 1):
            exact = F_poly(d, n)(x)
            scale = max(1.0, float(np.max(np.abs(exact))))
            err = max(err, np.max(np.abs(basis.unnormalized(n, x) - exact)) / scale)
    return _result("closed_form_oracle", err, 1e-9)


def check_remark_relation(k_max: int) -> CheckResult:
    err = 0.0
    for k in range(1, k_max + 1):
        rep = extra_relation_check(k)
        err = max(err, *(v for key, v in rep.items() if key != "k"))
    return _result("last_member_relation", err, 1e-9, f"k = 1..{k_max}")


def check_kernel_reproduction(k_max: int, rng, n_points: int = 50) -> CheckResult:
    x, y = _unit(rng, n_points), _unit(rng, n_points)
    err = 0.0
    for k in range(k_max + 1):
        h = np.einsum("tn,tn->n", eval_H_all(k, x), eval_H_all(k, y))
        err = max(err, np.max(np.abs(h - kernel_R(3, k, x, y))))
        basis = MonogenicBasis(k)
        fx, fy = basis.evaluate(x), basis.evaluate(y)
        summed = gp(fx, conj_arr(fy)).sum(axis=0)
        err = max(err, np.max(np.abs(summed - kernel_K(3, k, x, y))))
    return _result("kernel_reproduction", err, 1e-9)


def check_equator_diagonality(k_max: int) -> CheckResult:
    err = 0.0
    worst = ""
    for k in range(k_max + 1):
        g = equator_gram(k)
        off = g.copy()
        off[np.arange(k + 1), np.arange(k + 1)] = 0.0
        e = float(np.max(np.abs(off), initial=0.0))
        if np.min(g[np.arange(k + 1), np.arange(k + 1), 0]) <= 0.0:
            e = np.inf
        if e > err:
            err, worst = e, f"worst at k = {k}"
    return _result("equator_diagonality", err, 1e-9, worst)


def check_gram_psd(k_max: int, rng, trials: int = 20) -> CheckResult:
    worst = 0.0
    for k in range(k_max + 1):
        for _ in range(trials):
            worst = min(worst, min_eigenvalue(harmonic_gram(k, _unit(rng, 2 * k + 1))))
            worst = min(worst, even_min_eigenvalue(monogenic_gram(k, _unit(rng, k + 1))))
    return _result("gram_psd", max(0.0, -worst), 1e-9, "most negative eigenvalue, negated")


def run_all(k_max: int = 6, quad_deg: int | None = None, seed: int = 0) -> list[CheckResult]:
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    if quad_deg is None:
        quad_deg = k_max + 2
    elif quad_deg < k_max:
        log.warning("quadrature degree %d cannot integrate degree-%d products exactly", quad_deg, k_max)
    rng = np.random.default_rng(seed)
    return [
        check_clifford_associativity(rng),
        check_chi_tau(rng),
        check_harmonic_orthonormality(k_max, quad_deg),
        check_monogenic_orthonormality(k_max, quad_deg),
        check_norm_theorem(k_max, quad_deg),
        check_closed_form_oracle(k_max, rng),
        check_remark_relation(k_max),
        check_kernel_reproduction(k_max, rng),
        check_equator_diagonality(k_max),
        check_gram_psd(k_max, rng),
    ]
