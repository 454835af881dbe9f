import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scaledquat.certify import random_realization
from scaledquat.errors import (
    DimensionMismatch,
    NonInvertibleConstantTerm,
    NonInvertibleD,
    NotContractive,
)
from scaledquat.fueter import mu, mu_blaschke, sample_admissible
from scaledquat.htmatrix import HMatrix, distance
from scaledquat.hypercomplex import AdjointKind, HElem, basis
from scaledquat.rational import (
    MuRealization,
    Realization,
    circled_quotient,
    eval_resolvent_real,
    mu_realization_eval,
    mu_series_coeffs,
    realization_left_eval,
    rinverse,
    rmul,
    rsum,
    taylor_coeff,
    to_series,
)
from scaledquat.series import (
    PowerSeries,
    backward_shift,
    eval_real,
    eval_series,
    is_real_series,
    series_distance,
    star_inverse,
    star_mul,
)

from strategies import SCALES, close, rand_elem, scales

CIRC = AdjointKind.CIRCLED
S = HMatrix.scalar


def scalar_realization(t, a, b, c, d):
    return Realization(S(a), S(b), S(c), S(d))


# --- coefficients ---------------------------------------------------------


def test_first_coefficients():
    r = random_realization(np.random.default_rng(0), -1.0, n=2)
    assert distance(taylor_coeff(r, 0), r.D) == 0.0
    assert distance(taylor_coeff(r, 1), r.C @ r.B) == 0.0


def test_nilpotent_state_truncates():
    t = 2.0
    rng = np.random.default_rng(1)
    n = 3
    entries = [rand_elem(rng, t) if v > u else HElem(t) for u in range(n) for v in range(n)]
    a = HMatrix.from_entries(t, n, n, entries)
    r = Realization(a, HMatrix.from_entries(t, n, 1, [rand_elem(rng, t) for _ in range(n)]),
                    HMatrix.from_entries(t, 1, n, [rand_elem(rng, t) for _ in range(n)]), S(HElem.real(t)))
    for k in range(n + 1, n + 4):
        assert taylor_coeff(r, k).max_entry_norm() == 0.0


def test_constant_realization():
    t = 0.5
    d = HElem(t, 1 + 1j, 0.5)
    s = to_series(Realization.constant(d), 8)
    assert series_distance(s, PowerSeries.constant(d, 8)) == 0.0


@pytest.mark.parametrize("t", SCALES)
def test_scalar_geometric_realization(t):
    a = HElem(t, 0.3 + 0.1j, 0.2)
    one = HElem.real(t)
    s = to_series(scalar_realization(t, a, one, one, HElem(t)), 10)
    want = [HElem(t)] + [a ** (k - 1) for k in range(1, 10)]
    assert series_distance(s, PowerSeries.from_coeffs(want, 10)) < 1e-15


@settings(max_examples=20, deadline=None)
@given(scales, st.integers(0, 2**32 - 1))
def test_real_evaluation_matches_resolvent(t, seed):
    r = random_realization(np.random.default_rng(seed), t, p=2, m=2)
    s = to_series(r, 128)
    for x in (-0.9, -0.3, 0.1, 0.5, 0.9):
        assert distance(eval_real(s, x), eval_resolvent_real(r, x)) <= 1e-10


@pytest.mark.parametrize("t", SCALES)
def test_left_evaluation_matches_series(t):
    rng = np.random.default_rng(2)
    r = random_realization(rng, t, n=2)
    q = rand_elem(rng, t, 0.9)
    want = eval_series(to_series(r, 400), q)
    assert close(realization_left_eval(r, q).to_elem(), want, 1e-13)


def test_left_evaluation_guard():
    t = 1.0
    r = scalar_realization(t, HElem.real(t, 0.9), HElem.real(t), HElem.real(t), HElem(t))
    with pytest.raises(NotContractive):
        realization_left_eval(r, HElem.real(t, 1.2))


def test_shape_checks():
    t = 1.0
    with pytest.raises(DimensionMismatch):
        Realization(HMatrix.zeros(t, 2, 2), HMatrix.zeros(t, 1, 1), HMatrix.zeros(t, 1, 2), HMatrix.zeros(t, 1, 1))
    r1 = random_realization(np.random.default_rng(0), t, p=2, m=2)
    r2 = random_realization(np.random.default_rng(1), t)
    with pytest.raises(DimensionMismatch):
        rsum(r1, r2)
    with pytest.raises(DimensionMismatch):
        rmul(r2, r1)


def test_json_round_trip():
    r = random_realization(np.random.default_rng(3), -2.0, n=2)
    back = Realization.from_json(r.to_json())
    assert series_distance(to_series(back, 8), to_series(r, 8)) == 0.0


# --- sums, products, inverses ---------------------------------------------


@pytest.mark.parametrize("t", SCALES)
def test_unit_and_zero_realizations(t):
    r = random_realization(np.random.default_rng(4), t, n=2)
    one = Realization.constant(HElem.real(t))
    zero = Realization.constant(HElem(t))
    s = to_series(r, 16)
    assert series_distance(to_series(rmul(r, one), 16), s) == 0.0
    assert series_distance(to_series(rsum(r, zero), 16), s) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([-1.0, 1.0, 0.5]), st.integers(0, 2**32 - 1))
def test_products_and_sums_match_series(t, seed):
    rng = np.random.default_rng(seed)
    r1, r2 = random_realization(rng, t, p=2, m=2), random_realization(rng, t, p=2, m=2)
    s1, s2 = to_series(r1, 16), to_series(r2, 16)
    assert series_distance(to_series(rmul(r1, r2), 16), star_mul(s1, s2)) <= 1e-11
    assert series_distance(to_series(rsum(r1, r2), 16), s1 + s2) <= 1e-11


def test_constant_inverse():
    t = 2.0
    d = HElem(t, 2 + 1j, 0.5)
    inv = rinverse(Realization.constant(d))
    assert close(inv.D.to_elem(), d.inverse(), 1e-15)


@pytest.mark.parametrize("t", SCALES)
def test_inverse_of_one_minus_qa(t):
    a = HElem(t, 0.2 - 0.3j, 0.25)
    one = HElem.real(t)
    r = scalar_realization(t, HElem(t), -a, one, one)
    s = to_series(rinverse(r), 12)
    assert series_distance(s, PowerSeries.from_coeffs([a ** n for n in range(12)], 12)) < 1e-15


def test_non_invertible_feedthrough():
    one, _, j, _ = basis(1.0)
    with pytest.raises(NonInvertibleD):
        rinverse(Realization.constant(one + j))


@pytest.mark.parametrize("t", SCALES)
def test_inverse_round_trips(t):
    rng = np.random.default_rng(5)
    for _ in range(5):
        r = random_realization(rng, t, p=2, m=2)
        ri = rinverse(r)
        s, si = to_series(r, 16), to_series(ri, 16)
        size = max(1.0, float(np.max(si.coeff_norms())))
        eye = PowerSeries.constant(HMatrix.identity(t, 2), 16)
        assert series_distance(star_mul(s, si), eye) <= 1e-10 * size
        assert series_distance(star_mul(si, s), eye) <= 1e-10 * size
        assert series_distance(to_series(rinverse(ri), 16), s) <= 1e-9 * size


@pytest.mark.parametrize("t", SCALES)
def test_backward_shift_stays_in_the_realization(t):
    r = random_realization(np.random.default_rng(6), t, n=3)
    shifted = Realization(r.A, r.B, r.C @ r.A, r.C @ r.B)
    assert series_distance(backward_shift(to_series(r, 20)), to_series(shifted, 19)) < 1e-14


# --- polynomial quotients -------------------------------------------------


def test_quotient_of_one():
    num, den = circled_quotient(PowerSeries.one(-1.0, 8))
    assert series_distance(num, PowerSeries.one(-1.0, 8)) == 0.0
    assert series_distance(den, PowerSeries.one(-1.0, 8)) == 0.0


@pytest.mark.parametrize("t", SCALES)
def test_quotient_of_linear_factor(t):
    alpha = HElem(t, 0.3 + 0.4j, -0.2 + 0.1j)
    one = HElem.real(t)
    p = PowerSeries.from_coeffs([one, -alpha], 32)
    num, den = circled_quotient(p)
    ac = alpha.adjoint(CIRC)
    assert series_distance(num, PowerSeries.from_coeffs([one, -ac], 32)) == 0.0
    want = PowerSeries.from_coeffs([one, HElem.real(t, -2 * alpha.re()), alpha * ac], 32)
    assert series_distance(den, want) < 1e-15
    assert series_distance(star_mul(num, star_inverse(den)), star_inverse(p)) < 1e-12


@settings(max_examples=30)
@given(scales, st.integers(0, 2**32 - 1))
def test_quotient_denominator_is_real_and_central(t, seed):
    rng = np.random.default_rng(seed)
    p = PowerSeries.from_coeffs([HElem.real(t) + rand_elem(rng, t, 0.3), rand_elem(rng, t, 0.5),
                                 rand_elem(rng, t, 0.4)], 24)
    num, den = circled_quotient(p)
    assert is_real_series(den, 1e-12 * max(1.0, float(np.max(den.coeff_norms()))))
    g = PowerSeries.from_coeffs([rand_elem(rng, t) for _ in range(24)], 24)
    assert series_distance(star_mul(den, g), star_mul(g, den)) < 1e-12


def test_quotient_refuses_zero_divisor():
    one, _, j, _ = basis(1.0)
    with pytest.raises(NonInvertibleConstantTerm):
        circled_quotient(PowerSeries.constant(one + j, 4))


# --- three letters --------------------------------------------------------


def test_mu_realization_constant():
    t = 2.0
    d = HMatrix.scalar(HElem(t, 0.5, 0.2j))
    z = HMatrix.zeros(t, 1, 1)
    r = MuRealization((z, z, z), (z, z, z), z, d)
    assert distance(mu_realization_eval(r, (0.1, 0.5, 0.2, 0.3), trunc=5), d) == 0.0


@pytest.mark.parametrize("t", SCALES)
def test_mu_realization_single_letter(t):
    one, z = HMatrix.identity(t, 1), HMatrix.zeros(t, 1, 1)
    r = MuRealization((z, z, z), (one, z, z), one, z)
    x = (0.2, 0.6, 0.1, -0.2)
    assert close(mu_realization_eval(r, x, trunc=5).to_elem(), mu(1, x, t), 1e-15)


@pytest.mark.parametrize("t", [-1.0, 2.0])
def test_mu_realization_matches_blaschke_series(t):
    rng = np.random.default_rng(12)
    a = next(p for p in sample_admissible(rng, t, 50, box=0.35)
             if sum(mu(l, p, t).norm() for l in (1, 2, 3)) < 0.9)
    coeffs, data = mu_blaschke(a, t, degree=25)
    x = (0.05, 0.1, 0.04, -0.03)
    direct = None
    for (a1, a2, a3), f in coeffs.items():
        term = (mu(1, x, t) ** a1 * mu(2, x, t) ** a2 * mu(3, x, t) ** a3) * f
        direct = term if direct is None else direct + term
    assert distance(mu_realization_eval(data.realization, x, trunc=25), direct) < 1e-14


def test_mu_series_words():
    t = -1.0
    rng = np.random.default_rng(13)
    a = [HMatrix.scalar(rand_elem(rng, t, 0.3)) for _ in range(3)]
    b = [HMatrix.scalar(rand_elem(rng, t)) for _ in range(3)]
    c, d = HMatrix.identity(t, 1), HMatrix.zeros(t, 1, 1)
    coeffs = mu_series_coeffs(MuRealization(tuple(a), tuple(b), c, d), 2)
    # degree (1, 1, 0) collects both words A1 B2 and A2 B1
    assert distance(coeffs[(1, 1, 0)], a[0] @ b[1] + a[1] @ b[0]) < 1e-15


def test_mu_realization_guard():
    t = 1.0
    one = HMatrix.identity(t, 1)
    r = MuRealization((one, one, one), (one, one, one), one, one)
    with pytest.raises(NotContractive):
        mu_realization_eval(r, (0.5, 0.9, 0.1, 0.1))
