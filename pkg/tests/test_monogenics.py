from __future__ import annotations

import math

import numpy as np
import pytest

from zonalmono.clifford3 import E13, PRODUCT, conj_arr, gp, scalar_arr
from zonalmono.harmonics import eval_H, harmonic_labels, harmonic_to_poly
from zonalmono.monogenics import (
    F_norm_sq,
    F_poly,
    MonogenicBasis,
    dirac,
    equator_diagonal_closed_form,
    equator_gram,
    equator_points,
    eval_F,
    eval_last,
    export_samples,
    extra_relation_check,
    gamma_op,
    gamma_poly,
    kernel_K,
)
from zonalmono.polyfield import PolyField
from zonalmono.sphere_quad import SpherePoint, gram, product_rule, spherical_to_cartesian

from conftest import random_unit

_E13 = E13.to_array()


def _random_angles(rng, n):
    return rng.uniform(0, 2 * np.pi, n), rng.uniform(0.1, np.pi - 0.1, n)


@pytest.mark.parametrize("k", range(1, 7))
def test_dirac_of_harmonics_is_monogenic(k):
    for lab in harmonic_labels(k):
        y = dirac(harmonic_to_poly(k, lab))
        assert y.dirac().is_zero(atol=1e-10)
        assert (y.euler() - (k - 1) * y).is_zero(atol=1e-10)


def test_gamma_of_constant_vanishes(rng):
    th, ph = _random_angles(rng, 10)
    out = gamma_op(lambda t, p: np.ones_like(t), (th, ph))
    assert np.allclose(out, 0.0)


@pytest.mark.parametrize("k", range(1, 5))
def test_gamma_two_ways(k, rng):
    th, ph = _random_angles(rng, 20)
    x = spherical_to_cartesian(th, ph)
    for lab in harmonic_labels(k):
        closed = gamma_op(lambda t, p: eval_H(k, lab, (t, p)), (th, ph))
        poly = gamma_poly(harmonic_to_poly(k, lab))(x)
        assert np.allclose(closed, poly, atol=1e-6 * max(1.0, np.max(np.abs(poly))))


@pytest.mark.parametrize("k", range(0, 6))
def test_laplace_beltrami_eigenvalue(k):
    # Gamma^2 - Gamma = -Delta_T on S^2, and Delta_T H = -k(k+1) H
    for lab in harmonic_labels(k):
        h = harmonic_to_poly(k, lab)
        g = gamma_poly(h)
        assert (gamma_poly(g) - g - k * (k + 1) * h).is_zero(atol=1e-9)


def test_gamma_rejects_poles():
    with pytest.raises(ValueError):
        gamma_op(lambda t, p: np.cos(p), SpherePoint(0.3, 0.0))
    with pytest.raises(ValueError):
        gamma_op(lambda t, p: np.cos(p), SpherePoint(0.3, np.pi - 1e-10))


@pytest.mark.parametrize("d", range(0, 6))
def test_closed_form_matches_exact_dirac(d, rng):
    x = random_unit(rng, 100)
    for n in range(d + 1):
        exact = F_poly(d, n)(x)
        assert np.max(np.abs(eval_F(d, n, x) - exact)) <= 1e-9 * max(1.0, np.max(np.abs(exact)))


@pytest.mark.parametrize("d", range(0, 6))
def test_members_are_monogenic_odd_and_homogeneous(d):
    for n in range(d + 1):
        f = F_poly(d, n)
        assert f.dirac().is_zero(atol=1e-10)
        assert (f.euler() - d * f).is_zero(atol=1e-10)
        for c in f.terms.values():
            assert np.all(c[[0, 4, 5, 6]] == 0.0)


@pytest.mark.parametrize("d", range(0, 8))
def test_orthogonality_and_norms(d):
    q = product_rule(d + 2)
    basis = MonogenicBasis(d)
    raw = np.stack([basis.unnormalized(n, q.points) for n in range(d + 1)])
    g = gram(raw, q)
    off = g.copy()
    off[np.arange(d + 1), np.arange(d + 1)] = 0.0
    assert np.max(np.abs(off)) <= 1e-9 * max(1.0, np.max(np.abs(g)))
    for n in range(d + 1):
        assert g[n, n, 0] == pytest.approx(F_norm_sq(d, n), rel=1e-10)
    g_norm = gram(basis.evaluate(q.points), q)
    target = np.zeros_like(g_norm)
    target[np.arange(d + 1), np.arange(d + 1), 0] = 1.0
    assert np.max(np.abs(g_norm - target)) <= 1e-9


def test_norm_values():
    for k in range(1, 8):
        assert F_norm_sq(k - 1, 0) == k * (2 * k + 1)
        for n in range(1, k):
            assert F_norm_sq(k - 1, n) == 2 * (k - n) * (2 * k + 1)


@pytest.mark.parametrize("k", range(1, 6))
def test_dirac_norm_identity_on_random_harmonics(k, rng):
    q = product_rule(k + 2)
    labels = harmonic_labels(k)
    for _ in range(10):
        coef = rng.standard_normal(len(labels))
        h = PolyField()
        for c, lab in zip(coef, labels):
            h = h + harmonic_to_poly(k, lab).scale(c)
        dh = h.dirac()(q.points)
        lhs = gram(dh[None], q)[0, 0, 0]
        assert lhs == pytest.approx(k * (2 * k + 1) * float(coef @ coef), rel=1e-8)


@pytest.mark.parametrize("k", range(1, 7))
def test_last_member_relations(k):
    rep = extra_relation_check(k)
    assert rep["poly_y2k_minus_y2k1_e12"] == pytest.approx(0.0, abs=1e-12)
    assert rep["closed_y2k"] <= 1e-9 * max(1.0, k * k)
    assert rep["closed_y2k1"] <= 1e-9 * max(1.0, k * k)
    assert rep["last_minus_prev_e13"] <= 1e-9


def test_relation_needs_positive_degree():
    with pytest.raises(ValueError):
        extra_relation_check(0)


def test_degree_zero_basis(rng):
    x = random_unit(rng, 10)
    basis = MonogenicBasis(0)
    f0 = basis(0, x)
    assert np.allclose(f0, f0[0])
    assert np.allclose(basis.last(x), gp(f0, _E13))


def test_last_closed_form_against_poly(rng):
    x = random_unit(rng, 30)
    for k in range(1, 5):
        assert np.allclose(eval_last(k - 1, x), harmonic_to_poly(k, 2 * k).dirac()(x), atol=1e-10)
        assert np.allclose(eval_last(k - 1, x, odd=True), harmonic_to_poly(k, 2 * k + 1).dirac()(x), atol=1e-10)


def test_index_errors():
    with pytest.raises(IndexError):
        eval_F(2, 3, SpherePoint(0.1, 0.5))
    with pytest.raises(IndexError):
        F_poly(2, -1)


def test_kernel_examples(rng):
    x, y = random_unit(rng, 20), random_unit(rng, 20)
    assert np.allclose(kernel_K(3, 0, x, y), scalar_arr(np.ones(20)))
    for k in range(6):
        assert np.allclose(kernel_K(3, k, x, x), scalar_arr(np.full(20, k + 1.0)))
        val = kernel_K(3, k, x, y)
        assert np.all(val[:, [1, 2, 3, 7]] == 0.0)
    with pytest.raises(ValueError):
        kernel_K(2, 1, x, y)
    with pytest.raises(NotImplementedError):
        kernel_K(4, 1, x, y)


@pytest.mark.parametrize("k", range(0, 7))
def test_kernel_is_sum_over_orthonormal_basis(k, rng):
    x, y = random_unit(rng, 40), random_unit(rng, 40)
    basis = MonogenicBasis(k)
    fx, fy = basis.evaluate(x), basis.evaluate(y)
    assert np.allclose(gp(fx, conj_arr(fy)).sum(axis=0), kernel_K(3, k, x, y), atol=1e-10)
    trace = gp(fx, conj_arr(fx)).sum(axis=0)
    assert np.allclose(trace, scalar_arr(np.full(40, k + 1.0)), atol=1e-10)


@pytest.mark.parametrize("k", range(0, 6))
def test_kernel_reproduces_basis(k, rng):
    q = product_rule(k + 2)
    x = random_unit(rng, 20)
    basis = MonogenicBasis(k)
    kern = kernel_K(3, k, x[:, None, :], q.points[None, :, :])
    for n in range(k + 1):
        f = basis(n, q.points)
        got = np.einsum("j,ijr->ir", q.weights / (4 * np.pi), gp(kern, f[None]))
        assert np.max(np.abs(got - basis(n, x))) <= 1e-7


def test_equator_points():
    th, ph = equator_points(3)
    assert np.allclose(th, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert np.all(ph == np.pi / 2)


@pytest.mark.parametrize("k", range(0, 9))
def test_equator_diagonal_positive_and_closed_form(k):
    g = equator_gram(k)
    diag = g[np.arange(k + 1), np.arange(k + 1), 0]
    assert np.all(diag > 0)
    assert np.allclose(diag, equator_diagonal_closed_form(k), atol=1e-12)


@pytest.mark.parametrize("k", [0, 2, 4, 6, 8])
def test_equator_gram_diagonal_for_even_degree(k):
    g = equator_gram(k)
    off = g.copy()
    off[np.arange(k + 1), np.arange(k + 1)] = 0.0
    assert np.max(np.abs(off)) <= 1e-9


@pytest.mark.parametrize("k", [1, 3, 5, 7])
def test_equator_gram_aliases_for_odd_degree(k):
    # with k+1 nodes the pairs n + l = k share the surviving frequency k+1
    g = equator_gram(k)
    for n in range(k + 1):
        assert np.max(np.abs(g[n, k - n])) > 1e-3 or n == k - n


def test_equator_gram_brute_force_degree_one():
    basis = MonogenicBasis(1)
    pts = [SpherePoint(0.0, np.pi / 2), SpherePoint(np.pi, np.pi / 2)]
    vals = np.array([[basis(n, p.cartesian) for p in pts] for n in range(2)])
    brute = np.einsum("anp,bnq,pqr->abr", conj_arr(vals), vals, PRODUCT)
    assert np.allclose(brute, equator_gram(1))


@pytest.mark.parametrize("k", range(1, 9))
def test_equator_sum_diagonal_for_odd_or_doubled_node_counts(k):
    odd = k + 1 if k % 2 == 0 else k + 2
    for m in (odd, 2 * k + 2, 2 * k + 3):
        th = 2 * np.pi * np.arange(m) / m
        vals = MonogenicBasis(k).evaluate((th, np.full(m, np.pi / 2)))
        g = np.einsum("anp,bnq,pqr->abr", conj_arr(vals), vals, PRODUCT)
        off = g.copy()
        off[np.arange(k + 1), np.arange(k + 1)] = 0.0
        assert np.max(np.abs(off)) <= 1e-9


def test_sample_export():
    out = export_samples(2, 1, [0.1, 0.2], [1.0, 2.0])
    assert out["k"] == 2 and out["n"] == 1
    assert len(out["samples"]) == 2
    s = out["samples"][0]
    assert set(s) == {"theta", "phi", "value"}
    assert set(s["value"]) == {"s", "e1", "e2", "e3", "e12", "e13", "e23", "e123"}


def test_normalisation_constant_at_degree_k():
    for k in range(0, 6):
        assert MonogenicBasis(k).norms[0] == pytest.approx(math.sqrt((k + 1) * (2 * k + 3)))
