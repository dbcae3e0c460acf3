"""Projected gradient descent on (S^2)^N for the off-diagonal kernel energies.

Both objectives are sums over pairs of a function of the inner product:

* harmonic, ``N = 2k+1``:  ``f(t) = P_k(t)^2``
* monogenic, ``N = k+1``:  ``f(t) = (k+1)^2 C_k^{1/2}(t)^2 + (1 - t^2) C_{k-1}^{3/2}(t)^2``,
  which is ``|K_k(x, y)|^2`` for unit x, y.

Points are moved one at a time along great circles ``cos(t) p + sin(t) w``.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .orthopoly import gegenbauer, gegenbauer_deriv, legendre, jacobi_deriv
from .sphere_quad import geodesic_step

log = logging.getLogger(__name__)

KINDS = ("harmonic", "monogenic")


def ensemble_size(kind: str, k: int) -> int:
    if kind == "harmonic":
        return 2 * k + 1
    if kind == "monogenic":
        return k + 1
    raise ValueError(f"unknown objective kind {kind!r}; expected one of {KINDS}")


@dataclass(frozen=True, eq=False)
class Ensemble:
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"an ensemble is an (N, 3) array, got shape {pts.shape}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("ensemble contains the zero vector")
        pts = pts / norms[:, None]
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def tolist(self) -> list:
        return self.points.tolist()


def _points(eta) -> np.ndarray:
    return eta.points if isinstance(eta, Ensemble) else Ensemble(eta).points


def pair_energy(kind: str, k: int, t):
    """Pair term f(t) of the objective."""
    t = np.asarray(t, dtype=float)
    if kind == "harmonic":
        return legendre(k, t) ** 2
    if kind == "monogenic":
        return (k + 1) ** 2 * gegenbauer(k, 0.5, t) ** 2 + (1.0 - t * t) * gegenbauer(k - 1, 1.5, t) ** 2
    raise ValueError(f"unknown objective kind {kind!r}")


def pair_energy_deriv(kind: str, k: int, t):
    t = np.asarray(t, dtype=float)
    if kind == "harmonic":
        return 2.0 * legendre(k, t) * jacobi_deriv((k, 0, 0), t)
    if kind == "monogenic":
        c = gegenbauer(k, 0.5, t)
        dc = gegenbauer_deriv(k, 0.5, t)
        c3 = gegenbauer(k - 1, 1.5, t)
        dc3 = gegenbauer_deriv(k - 1, 1.5, t)
        return 2.0 * ((k + 1) ** 2 * c * dc - t * c3 * c3 + (1.0 - t * t) * c3 * dc3)
    raise ValueError(f"unknown objective kind {kind!r}")


def objective(kind: str, k: int, eta) -> float:
    pts = _points(eta)
    expected = ensemble_size(kind, k)
    if len(pts) != expected:
        raise ValueError(f"{kind} objective at degree {k} needs {expected} points, got {len(pts)}")
    iu = np.triu_indices(len(pts), 1)
    t = np.clip((pts @ pts.T)[iu], -1.0, 1.0)
    return float(np.sum(pair_energy(kind, k, t)))


def objective_harmonic(k: int, eta) -> float:
    return objective("harmonic", k, eta)


def objective_monogenic(k: int, eta) -> float:
    return objective("monogenic", k, eta)


def _others(pts: np.ndarray, l: int) -> np.ndarray:
    return np.delete(pts, l, axis=0)


def descent_vector(kind: str, k: int, eta, l: int) -> np.ndarray:
    """Unnormalised tangent gradient ``sum_{j != l} f'(t_j) (eta_j - t_j eta_l)`` at point l."""
    pts = _points(eta)
    p = pts[l]
    others = _others(pts, l)
    t = np.clip(others @ p, -1.0, 1.0)
    fp = pair_energy_deriv(kind, k, t)
    return fp @ (others - t[:, None] * p)


def steepest_direction(kind: str, k: int, eta, l: int, grad_tol: float = 1e-12) -> np.ndarray:
    """Unit tangent direction of steepest descent for point l, or the zero vector."""
    g = descent_vector(kind, k, eta, l)
    nrm = float(np.linalg.norm(g))
    if nrm < grad_tol:
        return np.zeros(3)
    return -g / nrm


def partial_energy(kind: str, k: int, pts: np.ndarray, l: int, p: np.ndarray) -> float:
    """Terms of the objective that involve point l, with point l replaced by p."""
    others = _others(pts, l)
    t = np.clip(others @ p, -1.0, 1.0)
    return float(np.sum(pair_energy(kind, k, t)))


def directional_derivative(kind: str, k: int, eta, l: int, w) -> float:
    """Analytic ``d/dt G_l(t)`` at ``t = 0`` along the tangent w."""
    pts = _points(eta)
    others = _others(pts, l)
    t = np.clip(others @ pts[l], -1.0, 1.0)
    return float(pair_energy_deriv(kind, k, t) @ (others @ np.asarray(w, dtype=float)))


@dataclass(frozen=True)
class LineSearch:
    t_max: float = math.pi / 4
    shrink: float = 0.5
    armijo: float = 1e-4
    t_min: float = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "harmonic"
    k: int = 2
    max_iters: int = 2000
    grad_tol: float = 1e-10
    starts: int = 1
    seed: int = 0
    line_search: LineSearch = field(default_factory=LineSearch)
    greedy: bool = False

    def __post_init__(self):
        ensemble_size(self.kind, self.k)
        if self.k < 0:
            raise ValueError(f"degree must be nonnegative, got {self.k}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")
        if self.starts < 1:
            raise ValueError("starts must be at least 1")
        if not 0 < self.line_search.shrink < 1:
            raise ValueError("line-search shrink factor must lie in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class OptimizationResult:
    ensemble: Ensemble
    objective: float
    iterations: int
    trace: list
    converged: bool
    start: int = 0

    def summary(self) -> dict:
        return {
            "start": self.start,
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def to_dict(self) -> dict:
        out = self.summary()
        out["points"] = self.ensemble.tolist()
        out["trace"] = [list(item) for item in self.trace]
        return out


@dataclass(eq=False)
class MultiStartResult:
    best: OptimizationResult
    runs: list


def random_ensemble(n: int, seed: int, start: int = 0) -> np.ndarray:
    """Uniform points on S^2 from normalised Gaussians.

    Each (seed, start) pair keys its own Philox stream, so a restart does not
    depend on how many restarts precede it.
    """
    key = ((int(seed) & 0xFFFFFFFFFFFFFFFF) << 64) | (int(start) & 0xFFFFFFFFFFFFFFFF)
    rng = np.random.Generator(np.random.Philox(key=key))
    pts = rng.standard_normal((n, 3))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _line_search(cfg: OptimizerConfig, pts: np.ndarray, l: int, w: np.ndarray, slope: float):
    ls = cfg.line_search
    base = partial_energy(cfg.kind, cfg.k, pts, l, pts[l])
    t = ls.t_max
    while t >= ls.t_min:
        cand = geodesic_step(pts[l], w, t)
        val = partial_energy(cfg.kind, cfg.k, pts, l, cand)
        if val <= base + ls.armijo * t * slope and val < base:
            return cand, base - val
        t *= ls.shrink
    return None, 0.0


def descend(cfg: OptimizerConfig, init) -> OptimizationResult:
    """Coordinate-wise projected gradient descent from one starting ensemble."""
    pts = np.array(_points(init), dtype=float)
    n = ensemble_size(cfg.kind, cfg.k)
    if len(pts) != n:
        raise ValueError(f"expected {n} starting points, got {len(pts)}")
    current = objective(cfg.kind, cfg.k, pts)
    trace = [(0, current)]
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        before = current
        if cfg.greedy:
            order = []
            for _ in range(n):
                norms = [np.linalg.norm(descent_vector(cfg.kind, cfg.k, pts, l)) for l in range(n)]
                order.append(int(np.argmax(norms)))
                _update_point(cfg, pts, order[-1])
        else:
            for l in range(n):
                _update_point(cfg, pts, l)
        current = objective(cfg.kind, cfg.k, pts)
        # guard the monotone trace against roundoff in the recomputed total
        current = min(current, before)
        trace.append((it, current))
        if before - current < cfg.grad_tol:
            converged = True
            break
    return OptimizationResult(Ensemble(pts), current, it, trace, converged)


def _update_point(cfg: OptimizerConfig, pts: np.ndarray, l: int) -> None:
    g = descent_vector(cfg.kind, cfg.k, pts, l)
    nrm = float(np.linalg.norm(g))
    if nrm < cfg.grad_tol:
        return
    w = -g / nrm
    # re-project: g is tangent only up to roundoff
    w -= np.dot(w, pts[l]) * pts[l]
    w /= np.linalg.norm(w)
    cand, _ = _line_search(cfg, pts, l, w, -nrm)
    if cand is not None:
        pts[l] = cand


def _worker_count() -> int:
    raw = os.environ.get("MONO_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer MONO_THREADS=%r", raw)
        return 1


def optimize(cfg: OptimizerConfig, threads: int | None = None) -> MultiStartResult:
    """Best of ``cfg.starts`` seeded restarts (ties go to the lowest start index)."""
    n = ensemble_size(cfg.kind, cfg.k)

    def run(start: int) -> OptimizationResult:
        res = descend(cfg, random_ensemble(n, cfg.seed, start))
        res.start = start
        log.debug("start %d: objective %.6g after %d sweeps", start, res.objective, res.iterations)
        return res

    workers = threads if threads is not None else _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, range(cfg.starts)))
    else:
        runs = [run(s) for s in range(cfg.starts)]
    best = min(runs, key=lambda r: (r.objective, r.start))
    return MultiStartResult(best, runs)
