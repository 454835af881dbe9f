import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scaledquat.errors import ConditionViolated, DegreeCap, DomainViolation, HTError, OnNullCone
from scaledquat.fueter import (
    DEGREE_CAP,
    FueterOp,
    Point4,
    apply_operator,
    arveson_kernel,
    arveson_tail_certificate,
    arveson_terms,
    fueter_taylor_roundtrip,
    jet_operator,
    kernel_check_mu,
    mu,
    mu_blaschke,
    mu_blaschke_certificates,
    mu_pow,
    multi_indices,
    norm_inequality_check,
    norm_inequality_gaps,
    qn_certificate,
    qn_expand,
    sample_admissible,
    taylor_function,
    vec_inverse,
    vec_part,
    zeta,
    zeta_pow,
)
from scaledquat.hypercomplex import AdjointKind, HElem, basis
from scaledquat.jets import Jet

from strategies import SCALES, close, rand_elem, scales

ALL_OPS = list(FueterOp)


def rng_points(t, n, seed=0, **kw):
    return sample_admissible(np.random.default_rng(seed), t, n, **kw)


# --- variables ------------------------------------------------------------


@pytest.mark.parametrize("t", SCALES)
def test_vec_part_of_i(t):
    _, i, _, _ = basis(t)
    assert vec_part((0, 1, 0, 0), t) == i
    assert vec_inverse((0, 1, 0, 0), t) == -i


def test_vec_inverse_of_quaternion_j():
    _, _, j, _ = basis(-1.0)
    assert vec_part((0, 0, 1, 0), -1.0) == j
    assert vec_inverse((0, 0, 1, 0), -1.0) == -j


def test_null_cone_rejected():
    with pytest.raises(OnNullCone):
        vec_inverse((0, 1, 1, 0), 1.0)
    with pytest.raises(OnNullCone):
        apply_operator(lambda x: x[0] * HElem.real(1.0), FueterOp.G_T, (0.3, 1, 1, 0), 1.0)


def test_point_validation():
    with pytest.raises(HTError):
        Point4.of((1.0, 2.0, 3.0))
    with pytest.raises(HTError):
        Point4.of((1.0, 2.0, math.nan, 0.0))


@pytest.mark.parametrize("t", SCALES)
def test_mu_restricts_to_monomials(t):
    x = (0.0, 0.7, -0.4, 0.3)
    assert close(mu_pow((2, 1, 0), x, t), HElem.real(t, 0.7 ** 2 * -0.4), 1e-15)
    assert mu_pow((0, 0, 0), x, t) == HElem.real(t)


@settings(max_examples=30)
@given(scales, st.integers(0, 2**32 - 1))
def test_mu_variables_commute(t, seed):
    x = rng_points(t, 1, seed)[0]
    for u in (1, 2, 3):
        for v in (1, 2, 3):
            p, q = mu(u, x, t), mu(v, x, t)
            assert close(p * q, q * p, 1e-12)


def test_mu_index_checked():
    with pytest.raises(HTError):
        mu(4, (0.1, 0.2, 0.3, 0.4), 1.0)


def test_zeta_examples():
    x = (0.3, 0.1, 0.5, -0.2)
    _, _, j, _ = basis(1.0)
    assert zeta(2, x, 1.0) == j * 0.3 + 0.5
    _, _, jq, _ = basis(-1.0)
    assert zeta(2, x, -1.0) == 0.5 - jq * 0.3
    for t in SCALES:
        assert all(zeta(l, (0, 0, 0, 0), t).is_zero() for l in (1, 2, 3))


@pytest.mark.parametrize("t", SCALES)
def test_zeta_powers_restrict_to_scaled_monomials(t):
    x = (0.0, 0.5, -0.3, 0.8)
    want = 0.5 ** 2 * -0.3 * 0.8 / 2.0
    assert close(zeta_pow((2, 1, 1), x, t), HElem.real(t, want), 1e-15)


# --- operators ------------------------------------------------------------


@pytest.mark.parametrize("op", ALL_OPS)
@pytest.mark.parametrize("t", [-1.0, 2.0])
def test_operators_kill_constants(op, t):
    c = HElem(t, 0.3 + 1j, -0.2j)
    assert apply_operator(lambda x: c, op, (0.2, 0.5, 0.1, 0.3), t).norm() == 0.0


@pytest.mark.parametrize("t", SCALES)
def test_zeta_variables_are_regular(t):
    pts = tuple(rng_points(t, 50).T)
    for l in (1, 2, 3):
        for op in (FueterOp.NABLA, FueterOp.RIGHT_NABLA, FueterOp.LAPLACE):
            res = apply_operator(lambda x, l=l: zeta(l, x, t), op, pts, t)
            assert float(np.max(res.op_norm())) <= 1e-14


@pytest.mark.parametrize("t", [-2.0, -1.0, 1.0, 2.0])
def test_zeta_powers_are_regular_and_harmonic(t):
    pts = tuple(rng_points(t, 50, seed=1).T)
    for d in range(1, 5):
        for n in multi_indices(d):
            f = lambda x, n=n: zeta_pow(n, x, t)  # noqa: E731
            for op in (FueterOp.NABLA, FueterOp.RIGHT_NABLA, FueterOp.LAPLACE):
                assert float(np.max(apply_operator(f, op, pts, t).op_norm())) <= 1e-8


@pytest.mark.parametrize("t", SCALES)
def test_factorization_of_the_laplacian(t):
    rng = np.random.default_rng(2)
    c = [rand_elem(rng, t) for _ in range(8)]

    def f(x):
        lin = c[0] + x[0] * c[1] + x[1] * c[2] + x[2] * c[3] + x[3] * c[4]
        return lin * (c[5] + x[2] * c[6]) * (c[7] + x[1] * x[3])

    pts = tuple(rng_points(t, 20, seed=3).T)
    jet = f(Jet.variables(pts, t, 2))
    for first, second in ((FueterOp.NABLA, FueterOp.NABLA_C), (FueterOp.RIGHT_NABLA, FueterOp.RIGHT_NABLA_C)):
        composed = jet_operator(jet_operator(jet, first, pts), second, pts)
        lap = jet_operator(jet, FueterOp.LAPLACE, pts)
        assert float(np.max((composed - lap).op_norm() / np.maximum(1.0, lap.op_norm()))) <= 1e-9


def test_apply_operator_on_single_point_returns_element():
    t = -1.0
    out = apply_operator(lambda x: x[1] * x[1] * HElem.real(t), FueterOp.LAPLACE, (0.1, 0.2, 0.3, 0.4), t)
    assert out == HElem.real(t, 2.0)


# --- kernel of V_t --------------------------------------------------------


def test_kernel_examples():
    pts = rng_points(-1.0, 100)
    assert kernel_check_mu((0, 0, 0), pts, -1.0) == 0.0
    assert kernel_check_mu((1, 0, 0), pts, -1.0) < 1e-10
    assert kernel_check_mu((2, 1, 1), rng_points(1.5, 100), 1.5) < 1e-8


@pytest.mark.parametrize("t", SCALES)
def test_mu_powers_in_kernel(t):
    pts = rng_points(t, 100, seed=4)
    worst = max(kernel_check_mu(a, pts, t) for d in range(5) for a in multi_indices(d))
    assert worst <= 1e-8


@pytest.mark.parametrize("t", SCALES)
def test_powers_of_q_in_kernel(t):
    pts = rng_points(t, 60, seed=5)

    for n in range(1, 7):
        def f(x, n=n):
            q = x[0] * HElem.real(t) + vec_part(x, t)
            out = q
            for _ in range(n - 1):
                out = out * q
            return out

        res = apply_operator(f, FueterOp.V_T, tuple(pts.T), t).op_norm()
        assert float(np.max(res / np.maximum(1.0, np.sum(pts ** 2, axis=1) ** (n / 2)))) <= 1e-8


def test_g_operator_is_vec_times_v():
    t = 2.0
    x = (0.3, 0.9, 0.2, -0.1)
    f = lambda y: mu(1, y, t) * mu(2, y, t) + y[0] * y[3] * HElem(t, 1j, 0.5)  # noqa: E731
    v = apply_operator(f, FueterOp.V_T, x, t)
    g = apply_operator(f, FueterOp.G_T, x, t)
    assert close(g, vec_part(x, t) * v, 1e-13)


# --- powers of q ----------------------------------------------------------


@pytest.mark.parametrize("t", SCALES)
def test_qn_examples(t):
    _, i, j, k = basis(t)
    assert qn_expand(1, t) == {(1, 0, 0): i, (0, 1, 0): j, (0, 0, 1): k}
    c2 = qn_expand(2, t)
    assert c2[(1, 1, 0)].norm() < 1e-15
    assert c2[(2, 0, 0)] == HElem.real(t, -1.0)


@pytest.mark.parametrize("t", SCALES)
def test_qn_certificate(t):
    pts = rng_points(t, 50, seed=6)
    assert max(qn_certificate(n, t, pts) for n in range(1, 7)) <= 1e-8


def test_degree_cap():
    with pytest.raises(DegreeCap):
        qn_expand(DEGREE_CAP + 1, 1.0)


# --- Fueter-Taylor --------------------------------------------------------


def test_single_term_round_trip():
    t = 2.0
    rt = fueter_taylor_roundtrip({(1, 0, 0): HElem.real(t)}, t)
    assert rt.regularity == 0.0 and rt.recovery == 0.0


@pytest.mark.parametrize("t, degree, tol", [(-1.0, 2, 1e-9), (2.0, 3, 1e-8), (0.5, 3, 1e-8)])
def test_random_round_trip(t, degree, tol):
    rng = np.random.default_rng(7)
    coeffs = {n: rand_elem(rng, t) for n in multi_indices(degree, exact=False)}
    rt = fueter_taylor_roundtrip(coeffs, t, rng=rng)
    assert rt.regularity <= tol and rt.recovery <= tol
    f = taylor_function(coeffs, t)
    lap = apply_operator(f, FueterOp.LAPLACE, tuple(rng_points(t, 20).T), t)
    assert float(np.max(lap.op_norm())) <= tol


# --- norm inequality ------------------------------------------------------


@pytest.mark.parametrize("t", SCALES)
def test_norm_equality_on_hyperplane(t):
    x = (0.0, 0.4, -0.3, 0.2)
    assert all(abs(g) < 1e-15 for g in norm_inequality_gaps(x, t))


def test_norm_inequality_quaternions():
    rng = np.random.default_rng(8)
    for x in sample_admissible(rng, -1.0, 100):
        assert norm_inequality_check(x, -1.0)
        assert min(norm_inequality_gaps(x, -1.0)) > 0


def test_norm_inequality_fails_for_positive_scale():
    # a finding: the inequality is not universal once t > 0
    assert not norm_inequality_check((0.6, 0.8, 0.2, 0.5), 2.0)
    assert not norm_inequality_check((0.7, 0.2, -0.6, 0.4), 0.5)


# --- Arveson kernel -------------------------------------------------------


@pytest.mark.parametrize("t", SCALES)
def test_arveson_kernel_examples(t):
    x, y = rng_points(t, 2, seed=9, box=0.5)
    assert arveson_kernel(x, y, t, trunc_degree=0) == HElem.real(t)
    kxx = arveson_kernel(x, x, t, trunc_degree=20)
    assert close(kxx.adjoint(AdjointKind.CIRCLED), kxx, 1e-13)
    tail = arveson_tail_certificate(x, y, t, max_degree=30)
    assert tail.within_bound and tail.monotone_tail
    assert tail.deltas[-1] < tail.deltas[10] or tail.deltas[10] == 0.0


def test_arveson_terms_degree_zero():
    t = 1.0
    terms = arveson_terms((0.1, 0.5, 0.1, 0.1), (0.2, 0.4, 0.1, 0.0), t, max_degree=3)
    assert len(terms) == 4 and terms[0] == HElem.real(t)


def test_arveson_domain_checked():
    with pytest.raises(DomainViolation):
        arveson_kernel((0.1, 0.5, 0.1, 0.1), (0.2, 0.4, 0.1, 0.0), 1.0, r=10.0)


# --- mu Blaschke factor ---------------------------------------------------


def test_mu_blaschke_on_hyperplane():
    t = -1.0
    a = (0.0, 0.2, 0.1, -0.15)
    _, data = mu_blaschke(a, t)
    row = [data.m[0, l] for l in range(3)]
    assert all(close(m, HElem.real(t, v), 1e-15) for m, v in zip(row, a[1:]))
    assert all(close(d, -m, 0.0) for d, m in zip([data.realization.D[0, l] for l in range(3)], row))


@pytest.mark.parametrize("t", SCALES)
def test_mu_blaschke_certificates(t):
    rng = np.random.default_rng(10)
    done = 0
    while done < 5:
        a = sample_admissible(rng, t, 1, box=0.35)[0]
        if sum(mu(l, a, t).norm() for l in (1, 2, 3)) >= 0.9:
            continue
        cert = mu_blaschke_certificates(a, t, degree=4)
        assert cert["identity"] <= 1e-10 and cert["unitary"] <= 1e-10 and cert["series"] <= 1e-10
        done += 1


def test_mu_blaschke_condition():
    with pytest.raises(ConditionViolated):
        mu_blaschke((0.1, 0.9, 0.5, 0.5), -1.0)
