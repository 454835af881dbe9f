import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scaledquat.errors import HTError, NonInvertible
from scaledquat.hypercomplex import AdjointKind, HElem, basis
from scaledquat.jets import Jet, derivative_partials, finite_difference_partials, monomials

from strategies import SCALES, close, rand_elem, scales


def test_monomial_counts():
    assert [len(monomials(k)) for k in range(4)] == [1, 5, 15, 35]
    assert monomials(1)[0] == (0, 0, 0, 0)


def test_variables_have_unit_gradient():
    x = Jet.variables((0.1, 0.2, 0.3, 0.4), 2.0, 2)
    for l, xl in enumerate(x):
        for m in range(4):
            e = tuple(int(i == m) for i in range(4))
            assert xl.derivative(e).to_helem() == HElem.real(2.0, float(l == m))


def test_product_rule_on_polynomial():
    t = -1.0
    _, i, j, _ = basis(t)
    x0, x1, x2, x3 = Jet.variables((0.5, -0.3, 0.2, 0.7), t, 2)
    f = (x0 * i + x1) * (x2 * j + x3 * x3)
    # d/dx0 d/dx2 of (x0 i)(x2 j) is i j
    assert close(f.derivative((1, 0, 1, 0)).to_helem(), i * j, 1e-15)
    # d^2/dx3^2 of (x0 i + x1) x3^2 is 2 (x0 i + x1)
    assert close(f.derivative((0, 0, 0, 2)).to_helem(), (i * 0.5 - 0.3) * 2.0, 1e-15)


@pytest.mark.parametrize("t", SCALES)
def test_inverse_jet_matches_inverse(t):
    _, i, j, k = basis(t)
    x = Jet.variables((0.3, 0.8, 0.1, -0.2), t, 2)
    v = x[1] * i + x[2] * j + x[3] * k
    inv = v.inverse()
    one = Jet.constant(HElem.real(t), 2)
    prod = v * inv - one
    assert float(np.max(np.abs(prod.a))) < 1e-13 and float(np.max(np.abs(prod.b))) < 1e-13


def test_inverse_of_zero_divisor_fails():
    one, _, j, _ = basis(1.0)
    with pytest.raises(NonInvertible):
        Jet.constant(one + j, 1).inverse()


def test_partial_lowers_order():
    x = Jet.variables((1.0, 2.0, 3.0, 4.0), 0.5, 2)
    f = x[0] * x[0] * x[1]
    df = f.partial(0)
    assert df.order == 1
    assert df.value().to_helem() == HElem.real(0.5, 2 * 1.0 * 2.0)
    with pytest.raises(HTError):
        Jet.constant(HElem.real(1.0), 0).partial(0)


def test_batched_variables():
    pts = (np.zeros(3), np.arange(3.0), np.ones(3), np.ones(3))
    x = Jet.variables(pts, 2.0, 1)
    assert x[1].batch_shape == (3,)
    assert np.allclose((x[1] * x[1]).op_norm(), np.arange(3.0) ** 2)


@settings(max_examples=25, deadline=None)
@given(scales, st.integers(0, 2**32 - 1))
def test_jets_agree_with_finite_differences(t, seed):
    rng = np.random.default_rng(seed)
    c = [rand_elem(rng, t) for _ in range(6)]
    m = int(rng.integers(0, 4))

    def f(x):
        lin = c[0] + x[0] * c[1] + x[1] * c[2] + x[2] * c[3] + x[3] * c[4]
        return lin * lin * (c[5] + x[m] * x[(m + 1) % 4])

    point = rng.uniform(-1, 1, size=4)
    exact = derivative_partials(f, point, t, 2)
    approx = finite_difference_partials(f, point, t)
    scale = max(1.0, max(v.norm() for v in exact.values()))
    assert max((exact[e] - approx[e]).norm() for e in approx) <= 1e-6 * scale


def test_adjoint_and_det_of_jets():
    t = 2.0
    _, i, j, _ = basis(t)
    x = Jet.variables((0.2, 0.4, -0.1, 0.3), t, 1)
    q = x[0] * i + x[1] * j
    value = q.value().to_helem()
    assert q.adjoint(AdjointKind.CIRCLED).value().to_helem() == value.adjoint(AdjointKind.CIRCLED)
    assert q.det().value().to_helem() == HElem.real(t, value.det())
