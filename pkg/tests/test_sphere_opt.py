from __future__ import annotations

import json

import numpy as np
import pytest

from zonalmono.monogenics import kernel_K
from zonalmono.sphere_opt import (
    Ensemble,
    LineSearch,
    OptimizerConfig,
    descend,
    descent_vector,
    directional_derivative,
    objective,
    objective_harmonic,
    objective_monogenic,
    optimize,
    pair_energy,
    pair_energy_deriv,
    partial_energy,
    random_ensemble,
    steepest_direction,
    _worker_count,
)

from conftest import HARMONIC_K2_POINTS, MONOGENIC_K2_POINTS, random_unit


def _random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q


def test_ensemble_normalises_and_freezes():
    e = Ensemble([[2.0, 0, 0], [0, 0, -3.0]])
    assert np.allclose(np.linalg.norm(e.points, axis=1), 1.0)
    with pytest.raises(ValueError):
        e.points[0, 0] = 5.0
    with pytest.raises(ValueError):
        Ensemble([[0.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        Ensemble([1.0, 2.0, 3.0])


def test_reference_objective_values():
    assert objective_harmonic(2, HARMONIC_K2_POINTS) == pytest.approx(0.3209, abs=5e-4)
    assert objective_monogenic(2, MONOGENIC_K2_POINTS) == pytest.approx(5.3999, abs=5e-3)


def test_objective_edge_cases(rng):
    axes = np.eye(3)
    assert objective_harmonic(1, axes) == pytest.approx(0.0)
    assert objective_monogenic(0, random_unit(rng, 1)) == 0.0
    assert pair_energy("monogenic", 0, 0.3) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        objective_harmonic(2, random_unit(rng, 4))
    with pytest.raises(ValueError):
        objective("spline", 2, random_unit(rng, 5))


def test_monogenic_objective_is_kernel_energy(rng):
    for k in range(0, 6):
        pts = random_unit(rng, k + 1)
        iu = np.triu_indices(k + 1, 1)
        kern = kernel_K(3, k, pts[:, None], pts[None])[iu]
        assert objective_monogenic(k, pts) == pytest.approx(float(np.sum(kern**2)), rel=1e-10, abs=1e-12)


def test_objectives_nonnegative_and_rotation_invariant(rng):
    for kind, n_of in (("harmonic", lambda k: 2 * k + 1), ("monogenic", lambda k: k + 1)):
        for k in (1, 2, 3):
            pts = random_unit(rng, n_of(k))
            base = objective(kind, k, pts)
            assert base >= 0
            for _ in range(100):
                rot = _random_rotation(rng)
                assert objective(kind, k, pts @ rot.T) == pytest.approx(base, abs=1e-10)


@pytest.mark.parametrize("kind", ["harmonic", "monogenic"])
def test_pair_derivative_matches_finite_differences(kind, rng):
    t = rng.uniform(-0.99, 0.99, 50)
    h = 1e-6
    for k in range(0, 7):
        fd = (pair_energy(kind, k, t + h) - pair_energy(kind, k, t - h)) / (2 * h)
        assert np.allclose(pair_energy_deriv(kind, k, t), fd, rtol=1e-6, atol=1e-6)


@pytest.mark.parametrize("kind", ["harmonic", "monogenic"])
def test_steepest_direction(kind, rng):
    h = 1e-6
    for _ in range(30):
        k = int(rng.integers(1, 5))
        n = 2 * k + 1 if kind == "harmonic" else k + 1
        pts = random_unit(rng, n)
        l = int(rng.integers(n))
        w = steepest_direction(kind, k, pts, l)
        if not np.any(w):
            continue
        assert abs(np.dot(w, pts[l])) <= 1e-12
        assert np.linalg.norm(w) == pytest.approx(1.0)
        g = lambda t: partial_energy(kind, k, pts, l, np.cos(t) * pts[l] + np.sin(t) * w)
        fd = (g(h) - g(-h)) / (2 * h)
        analytic = directional_derivative(kind, k, pts, l, w)
        assert analytic < 0
        assert analytic == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_stationary_configuration_gives_zero_direction():
    pts = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0]])
    for l in range(3):
        assert np.all(steepest_direction("harmonic", 1, pts, l) == 0.0)
    assert np.allclose(descent_vector("harmonic", 1, pts, 0), 0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(k=-1)
    with pytest.raises(ValueError):
        OptimizerConfig(kind="other")
    with pytest.raises(ValueError):
        OptimizerConfig(max_iters=0)
    with pytest.raises(ValueError):
        OptimizerConfig(grad_tol=0.0)
    with pytest.raises(ValueError):
        OptimizerConfig(starts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(line_search=LineSearch(shrink=1.0))
    json.dumps(OptimizerConfig().to_dict())


def test_random_ensemble_is_keyed_per_start():
    a = random_ensemble(5, seed=7, start=3)
    b = random_ensemble(5, seed=7, start=3)
    c = random_ensemble(5, seed=7, start=4)
    d = random_ensemble(5, seed=8, start=3)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c) and not np.allclose(a, d)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)


@pytest.mark.parametrize("kind", ["harmonic", "monogenic"])
@pytest.mark.parametrize("greedy", [False, True])
def test_descent_trace_monotone_and_on_sphere(kind, greedy):
    cfg = OptimizerConfig(kind=kind, k=2, greedy=greedy)
    n = 5 if kind == "harmonic" else 3
    res = descend(cfg, random_ensemble(n, 0, 0))
    vals = [v for _, v in res.trace]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < vals[0]
    assert res.objective == pytest.approx(objective(kind, 2, res.ensemble), abs=1e-9)
    assert np.allclose(np.linalg.norm(res.ensemble.points, axis=1), 1.0, atol=1e-12)
    assert res.converged


def test_descend_checks_size():
    with pytest.raises(ValueError):
        descend(OptimizerConfig(k=2), random_ensemble(4, 0))


def test_optimize_deterministic_and_thread_independent():
    cfg = OptimizerConfig(kind="harmonic", k=2, starts=6, seed=3)
    a = optimize(cfg, threads=1)
    b = optimize(cfg, threads=3)
    assert a.best.start == b.best.start
    assert a.best.objective == b.best.objective
    assert np.array_equal(a.best.ensemble.points, b.best.ensemble.points)
    assert [r.objective for r in a.runs] == [r.objective for r in b.runs]
    assert a.best.objective == min(r.objective for r in a.runs)


def test_optimize_reaches_known_minima():
    h = optimize(OptimizerConfig(kind="harmonic", k=2, starts=20, seed=1))
    assert h.best.objective <= 0.33
    m = optimize(OptimizerConfig(kind="monogenic", k=2, starts=10, seed=1))
    assert m.best.objective <= 5.45


def test_result_serialises():
    res = optimize(OptimizerConfig(kind="monogenic", k=1, starts=2)).best
    data = json.loads(json.dumps(res.to_dict()))
    assert set(data) == {"start", "objective", "iterations", "converged", "points", "trace"}


def test_max_iters_limits_work():
    res = descend(OptimizerConfig(kind="harmonic", k=3, max_iters=1), random_ensemble(7, 0))
    assert res.iterations == 1
    assert not res.converged


def test_worker_count(monkeypatch):
    monkeypatch.delenv("MONO_THREADS", raising=False)
    assert _worker_count() == 1
    monkeypatch.setenv("MONO_THREADS", "4")
    assert _worker_count() == 4
    monkeypatch.setenv("MONO_THREADS", "zero")
    assert _worker_count() == 1
