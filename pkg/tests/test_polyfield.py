from __future__ import annotations

import numpy as np
import pytest

from zonalmono.clifford3 import E1, E2, E3, E12, gp, vector_arr
from zonalmono.polyfield import PolyField

from conftest import random_unit

X1, X2, X3 = (PolyField.variable(j) for j in range(3))


def test_variables_and_evaluation(rng):
    x = rng.standard_normal((5, 3))
    f = X1 * X2 + 3.0 * X3
    assert np.allclose(f(x)[:, 0], x[:, 0] * x[:, 1] + 3 * x[:, 2])
    assert f.degrees() == {1, 2}
    assert not f.is_homogeneous()


def test_partial_and_laplacian():
    f = X1 * X1 * X2 - X3 * X3 * X3
    assert (f.partial(0) - (2.0 * X1 * X2)).is_zero()
    lap = f.laplacian()
    assert (lap - (2.0 * X2 - 6.0 * X3)).is_zero()


def test_dirac_examples(rng):
    assert (X1.dirac() - PolyField.constant(E1.to_array())).is_zero()
    r2 = X1 * X1 + X2 * X2 + X3 * X3
    got = (-1.0 * r2).dirac()
    x = rng.standard_normal((10, 3))
    assert np.allclose(got(x), -2.0 * vector_arr(x))


def test_dirac_squared_is_minus_laplacian(rng):
    f = X1 * X2 * X3 + X1 * X1 * X1 - 2.0 * X2 * X2
    assert (f.dirac().dirac() + f.laplacian()).is_zero(atol=1e-14)


def test_euler_operator():
    f = X1 * X2 * X3 + X3 * X3 * X3
    assert (f.euler() - 3.0 * f).is_zero()


def test_left_and_right_multiplication(rng):
    f = X1 + X2 * X3
    x = rng.standard_normal((4, 3))
    e12 = E12.to_array()
    assert np.allclose(f.lmul(e12)(x), gp(e12, f(x)))
    assert np.allclose(f.rmul(e12)(x), gp(f(x), e12))


def test_noncommutative_product(rng):
    f = PolyField.constant(E1.to_array()) * X1
    g = PolyField.constant(E2.to_array()) * X2
    x = random_unit(rng, 6)
    assert np.allclose((f * g)(x), gp(f(x), g(x)))
    assert not np.allclose((f * g)(x), (g * f)(x))


def test_max_abs_coeff_and_zero():
    assert PolyField().is_zero()
    f = 2.5 * X1 - 4.0 * X2
    assert f.max_abs_coeff() == pytest.approx(4.0)
    assert (f - f).is_zero()


def test_constant_vector_field():
    c = PolyField.constant(E3.to_array())
    assert c.degrees() == {0}
    assert c.dirac().is_zero()
