"""Certification suites: one per acceptance criterion, run per scale ``t``.

Each suite returns entries ``{"name", "tolerance", "observed", "pass"}``
where ``pass`` means ``observed <= tolerance``.  Randomness comes from a
generator seeded by ``(seed, suite index, t)`` so reports are reproducible.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import fueter as fu
from . import hardy as hd
from . import rational as ra
from .hypercomplex import (
    AdjointKind,
    HElem,
    NormKind,
    basis,
    bracket_pair,
    circ_pair,
    hmul,
    norm_op_arrays,
    signature_basis_gram,
)
from .htmatrix import HMatrix, gram_points, minvert, mnorm_op
from .jets import derivative_partials, finite_difference_partials
from .series import (
    PowerSeries,
    conj_series,
    eval_real,
    eval_series,
    geo_closed_form,
    geo_partial_sum,
    series_distance,
    star_inverse,
    star_inverse_neumann,
    star_mul,
)

__all__ = [
    "DEFAULT_SCALES",
    "SUITES",
    "Config",
    "Report",
    "entry",
    "run_suite",
    "run_suites",
    "expected_cayley",
    "sample_ball",
    "sample_theta_points",
    "random_realization",
]

DEFAULT_SCALES = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)
THETA_CONDITION_CAP = 1e3


@dataclass(frozen=True)
class Config:
    samples: int | None = None
    trunc: int | None = None
    tol_scale: float = 1.0


def entry(name: str, observed: float, tolerance: float, cfg: Config = Config()) -> dict:
    tol = tolerance * cfg.tol_scale
    observed = float(observed)
    return {"name": name, "tolerance": tol, "observed": observed, "pass": bool(observed <= tol)}


@dataclass
class Report:
    suite: str
    t: float
    entries: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def to_json(self) -> dict:
        return {"suite": self.suite, "t": self.t, "pass": self.passed,
                "wall_time": self.wall_time, "entries": self.entries}


# ---------------------------------------------------------------------------
# sampling helpers


def _rand_arrays(rng, n):
    x = rng.normal(size=(4, n))
    return x[0] + 1j * x[1], x[2] + 1j * x[3]


def _rand_elem(rng, t, radius=None) -> HElem:
    q = HElem.from_coords(t, *rng.normal(size=4))
    return q if radius is None else q * (radius / q.norm())


def sample_ball(rng, t, lo: float, hi: float) -> HElem:
    """Random direction with operator norm uniform in ``[lo, hi]``."""
    return _rand_elem(rng, t, rng.uniform(lo, hi))


def sample_theta_points(rng, t, n: int, cap: float = THETA_CONDITION_CAP, max_tries: int = 10_000):
    """``n`` points of norm in ``[0.5, 0.8]`` whose circled Gram matrix has condition ``<= cap``."""
    for _ in range(max_tries):
        pts = [sample_ball(rng, t, 0.5, 0.8) for _ in range(n)]
        g = gram_points(pts)
        try:
            cond = mnorm_op(g) * mnorm_op(minvert(g))
        except ArithmeticError:
            continue
        if cond <= cap:
            return pts
    raise RuntimeError(f"no point set with Gram condition <= {cap:g} in {max_tries} draws")


def _rel(diff_a, diff_b, t, scale):
    return float(np.max(norm_op_arrays(diff_a, diff_b, t) / np.maximum(1.0, scale)))


def expected_cayley(t: float) -> dict[tuple[str, str], tuple[float, str]]:
    """Unit products written out by hand: ``(u, v) -> (coefficient, unit)``."""
    return {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (t, "1"), ("j", "k"): (-t, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (t, "i"), ("k", "k"): (t, "1"),
    }


# ---------------------------------------------------------------------------
# 1. ring


def suite_ring(t, rng, cfg: Config):
    units = dict(zip("1ijk", basis(t)))
    cay = max((units[u] * units[v] - units[w] * float(c)).norm()
              for (u, v), (c, w) in expected_cayley(t).items())
    n = cfg.samples or 1000
    (pa, pb), (qa, qb), (ra_, rb) = (_rand_arrays(rng, n) for _ in range(3))
    l1 = hmul(*hmul(pa, pb, qa, qb, t), ra_, rb, t)
    l2 = hmul(pa, pb, *hmul(qa, qb, ra_, rb, t), t)
    scale = norm_op_arrays(pa, pb, t) * norm_op_arrays(qa, qb, t) * norm_op_arrays(ra_, rb, t)
    one = units["1"]
    ident = max((one * units[u] - units[u]).norm() + (units[u] * one - units[u]).norm() for u in units)
    return [
        entry("cayley_table", cay, 1e-15, cfg),
        entry("associativity", _rel(l1[0] - l2[0], l1[1] - l2[1], t, scale), 1e-12, cfg),
        entry("unit_element", ident, 0.0, cfg),
    ]


# ---------------------------------------------------------------------------
# 2. adjoints


def suite_adjoint(t, rng, cfg: Config):
    n = cfg.samples or 1000
    (pa, pb), (qa, qb) = _rand_arrays(rng, n), _rand_arrays(rng, n)
    scale = norm_op_arrays(pa, pb, t) * norm_op_arrays(qa, qb, t)
    q2 = norm_op_arrays(qa, qb, t) ** 2
    out = []
    for name, adj in (("circled", circ_pair), ("bracket", bracket_pair)):
        lhs = adj(*hmul(pa, pb, qa, qb, t))
        rhs = hmul(*adj(qa, qb), *adj(pa, pb), t)
        out.append(entry(f"{name}_contravariant", _rel(lhs[0] - rhs[0], lhs[1] - rhs[1], t, scale), 1e-12, cfg))
        back = adj(*adj(qa, qb))
        out.append(entry(f"{name}_involutive", _rel(back[0] - qa, back[1] - qb, t, q2), 1e-12, cfg))
    cb = bracket_pair(*circ_pair(qa, qb))
    bc = circ_pair(*bracket_pair(qa, qb))
    out.append(entry("adjoints_commute", _rel(cb[0] - bc[0], cb[1] - bc[1], t, q2), 1e-12, cfg))
    det = np.abs(qa) ** 2 - t * np.abs(qb) ** 2
    r1 = hmul(qa, qb, *circ_pair(qa, qb), t)
    r2 = hmul(*circ_pair(qa, qb), qa, qb, t)
    out.append(entry("q_qcirc_is_det", max(_rel(r1[0] - det, r1[1], t, q2), _rel(r2[0] - det, r2[1], t, q2)), 1e-12, cfg))
    s1 = hmul(qa, qb, *bracket_pair(qa, qb), t)
    s2 = hmul(*bracket_pair(qa, qb), qa, qb, t)
    e1 = (qa ** 2 + t * qb ** 2, 2 * np.real(qa * np.conj(qb)))
    e2 = (qa ** 2 + t * np.conj(qb) ** 2, 2 * np.real(qa * qb))
    out.append(entry("bracket_products", max(_rel(s1[0] - e1[0], s1[1] - e1[1], t, q2),
                                             _rel(s2[0] - e2[0], s2[1] - e2[1], t, q2)), 1e-12, cfg))
    # [*] adjoint in matrix form: J q^H J with J the swap matrix
    emb = np.empty((n, 2, 2), dtype=complex)
    emb[:, 0, 0], emb[:, 0, 1], emb[:, 1, 0], emb[:, 1, 1] = qa, t * qb, np.conj(qb), np.conj(qa)
    swap = np.array([[0, 1], [1, 0]])
    jqj = swap @ np.conj(np.swapaxes(emb, 1, 2)) @ swap
    ba, bb = bracket_pair(qa, qb)
    target = np.empty_like(emb)
    target[:, 0, 0], target[:, 0, 1], target[:, 1, 0], target[:, 1, 1] = ba, t * bb, np.conj(bb), np.conj(ba)
    gap = np.max(np.abs(jqj - target).reshape(n, -1), axis=1)
    out.append(entry("bracket_matrix_form", float(np.max(gap / np.maximum(1.0, q2))), 1e-12, cfg))
    return out


# ---------------------------------------------------------------------------
# 3. norm


def suite_norm(t, rng, cfg: Config):
    n = cfg.samples or 1000
    qa, qb = _rand_arrays(rng, n)
    emb = np.empty((n, 2, 2), dtype=complex)
    emb[:, 0, 0], emb[:, 0, 1], emb[:, 1, 0], emb[:, 1, 1] = qa, t * qb, np.conj(qb), np.conj(qa)
    eig = np.linalg.eigvalsh(emb @ np.conj(np.swapaxes(emb, 1, 2)))
    direct = np.sqrt(eig[:, -1])
    closed = np.array([HElem(t, a, b).norm(NormKind.OP) for a, b in zip(qa, qb)])
    out = [entry("closed_form_vs_eigensolve", float(np.max(np.abs(closed - direct) / np.maximum(1.0, direct))), 1e-10, cfg)]
    if t == -1.0:
        expected = np.sqrt(np.abs(qa) ** 2 + np.abs(qb) ** 2)
        out.append(entry("quaternion_norm", float(np.max(np.abs(closed - expected))), 1e-10, cfg))
    if t == 1.0:
        expected = np.abs(qa) + np.abs(qb)
        out.append(entry("split_norm", float(np.max(np.abs(closed - expected))), 1e-10, cfg))
    return out


# ---------------------------------------------------------------------------
# 4. signatures


def suite_signature(t, rng, cfg: Config):
    _, circ = signature_basis_gram(t, AdjointKind.CIRCLED, 1e-10)
    _, brac = signature_basis_gram(t, AdjointKind.BRACKET, 1e-10)
    want_circ = (4, 0) if t < 0 else (2, 2)
    return [
        entry("circled_signature_mismatch", float(circ != want_circ), 0.0, cfg),
        entry("bracket_signature_mismatch", float(brac != (2, 2)), 0.0, cfg),
    ]


# ---------------------------------------------------------------------------
# 5. star algebra


def _random_series(rng, t, trunc, decay=0.5, lead=None) -> PowerSeries:
    coeffs = [_rand_elem(rng, t) * (decay ** n) for n in range(trunc)]
    if lead is not None:
        coeffs[0] = lead
    return PowerSeries.from_coeffs(coeffs, trunc)


def suite_star(t, rng, cfg: Config):
    trunc = cfg.trunc or 64
    geo = 0.0
    for _ in range(20):
        q = sample_ball(rng, t, 0.1, 0.9)
        p = sample_ball(rng, t, 0.1, 0.85 / q.norm() if q.norm() > 0.85 else 0.9)
        geo = max(geo, (geo_closed_form(q, p) - geo_partial_sum(q, p, 200)).norm())
    real = 0.0
    for _ in range(10):
        f = _random_series(rng, t, trunc)
        ff = star_mul(f, conj_series(f, AdjointKind.CIRCLED))
        scale = float(np.sum(f.coeff_norms() ** 2))
        real = max(real, float(max(np.max(np.abs(ff.b)), np.max(np.abs(ff.a.imag)))) / max(1.0, scale))
    multi = 0.0
    for _ in range(10):
        f = _random_series(rng, t, 6)
        g = _random_series(rng, t, 6)
        q = sample_ball(rng, t, 0.1, 0.6)
        fq = eval_series(f, q)
        if fq.norm() < 1e-3 or abs(fq.det()) < 1e-3 * fq.norm() ** 2:
            continue
        lhs = eval_series(star_mul(f.with_trunc(12), g.with_trunc(12)), q)
        rhs = fq * eval_series(g, fq.inverse() * q * fq)
        multi = max(multi, (lhs - rhs).norm() / max(1.0, lhs.norm()))
    inv = neu = 0.0
    for _ in range(5):
        # 1 + h with sum ||h_n|| <= 0.5 keeps the inverse coefficients bounded
        f = PowerSeries.from_coeffs([HElem.real(t) + _rand_elem(rng, t, 0.2)]
                                    + [_rand_elem(rng, t, 0.3 * 0.5 ** n) for n in range(1, trunc)], trunc)
        g = star_inverse(f)
        one = PowerSeries.one(t, trunc)
        inv = max(inv, series_distance(star_mul(f, g), one), series_distance(star_mul(g, f), one))
        neu = max(neu, series_distance(g, star_inverse_neumann(f)))
    return [
        entry("geometric_closed_form", geo, 1e-10, cfg),
        entry("f_star_fcirc_real", real, 1e-12, cfg),
        entry("evaluation_of_product", multi, 1e-10, cfg),
        entry("star_inverse_roundtrip", inv, 1e-11, cfg),
        entry("star_inverse_vs_neumann", neu, 1e-11, cfg),
    ]


# ---------------------------------------------------------------------------
# 6. circled Blaschke factor


def suite_blaschke(t, rng, cfg: Config):
    n = cfg.samples or 20
    trunc = cfg.trunc or 256
    exp = pair = iso = div = coef = 0.0
    for _ in range(n):
        alpha = sample_ball(rng, t, 0.0, 0.85)
        b = hd.blaschke_circled(alpha, trunc)
        exp = max(exp, series_distance(b.with_trunc(64), hd.blaschke_circled_direct(alpha, 64)))
        prod = star_mul(b.with_trunc(64), hd.blaschke_circled(alpha.adjoint(AdjointKind.CIRCLED), 64))
        pair = max(pair, series_distance(prod, hd.blaschke_pair_closed_form(alpha, 64)))
        iso = max(iso, hd.isometry_gram(b, AdjointKind.CIRCLED, 8))
        g0 = _random_series(rng, t, 4)
        f = star_mul(b.with_trunc(128), g0.with_trunc(128))
        g = hd.solve_one_point(f, alpha, AdjointKind.CIRCLED)
        ff, gg = hd.hardy_inner(f, f).traced, hd.hardy_inner(g, g).traced
        div = max(div, abs(ff - gg) / max(1.0, abs(ff)))
        coef = max(coef, series_distance(g.with_trunc(4), g0))
    return [
        entry("expansion_vs_star_division", exp, 1e-11, cfg),
        entry("pair_closed_form", pair, 1e-11, cfg),
        entry("isometry_gram", iso, 1e-9, cfg),
        entry("division_form_preserved", div, 1e-9, cfg),
        entry("division_recovers_factor", coef, 1e-9, cfg),
    ]


# ---------------------------------------------------------------------------
# 7. interpolation


def suite_interp(t, rng, cfg: Config):
    reps = cfg.samples or 3
    worst = dict(point=0.0, stein=0.0, inverse=0.0, ortho=0.0, cond=0.0)
    sets = [[HElem.real(t, 0.2), HElem.from_coords(t, 0, 0.1, 0, 0)]]
    for n in range(1, 5):
        sets += [sample_theta_points(rng, t, n) for _ in range(reps)]
    for pts in sets:
        r, _ = hd.theta_interpolate(pts, 8)
        c = hd.theta_certificates(pts, r)
        worst["point"] = max(worst["point"], c.point_residual)
        worst["stein"] = max(worst["stein"], c.stein_gram, c.stein_cross, c.stein_unit)
        worst["inverse"] = max(worst["inverse"], c.stein_inverse)
        worst["ortho"] = max(worst["ortho"], c.orthonormality)
        worst["cond"] = max(worst["cond"], c.gram_condition)
    return [
        entry("theta_vanishes_at_points", worst["point"], 1e-9, cfg),
        entry("colligation_identities", worst["stein"], 1e-10, cfg),
        entry("inverse_stein", worst["inverse"], 1e-10, cfg),
        entry("coefficient_orthonormality", worst["ortho"], 1e-10, cfg),
        entry("gram_condition_sampled", worst["cond"], THETA_CONDITION_CAP, Config()),
    ]


# ---------------------------------------------------------------------------
# 8. bracket factor


def suite_bracket(t, rng, cfg: Config):
    n = cfg.samples or 20
    trunc = cfg.trunc or 256
    keys = ("stein", "gamma_series", "self_adjoint", "l_inverse", "k_squared", "unitary_left", "unitary_right")
    worst = dict.fromkeys(keys, 0.0)
    iso = div = 0.0
    for _ in range(n):
        alpha = sample_ball(rng, t, 0.0, 0.65)
        s, data, _ = hd.bracket_blaschke(alpha, trunc)
        for k, v in hd.bracket_certificates(data).items():
            worst[k] = max(worst[k], v)
        iso = max(iso, hd.isometry_gram(s, AdjointKind.BRACKET, 8))
        g0 = _random_series(rng, t, 4)
        f = star_mul(s.with_trunc(128), g0.with_trunc(128))
        g = hd.solve_one_point(f, alpha, AdjointKind.BRACKET)
        ff = hd.hardy_inner(f, f, AdjointKind.BRACKET).traced
        gg = hd.hardy_inner(g, g, AdjointKind.BRACKET).traced
        div = max(div, abs(ff - gg) / max(1.0, abs(ff)))
    return [
        entry("gamma_stein", worst["stein"], 1e-12, cfg),
        entry("gamma_vs_series", worst["gamma_series"], 1e-12, cfg),
        entry("self_adjoint_constants", worst["self_adjoint"], 1e-12, cfg),
        entry("l_inverse_identity", worst["l_inverse"], 1e-10, cfg),
        entry("k_squared", worst["k_squared"], 1e-11, cfg),
        entry("isometry_gram", iso, 1e-9, cfg),
        entry("unitarity_weighted_left", worst["unitary_left"], 1e-10, cfg),
        entry("unitarity_weighted_right", worst["unitary_right"], 1e-10, cfg),
        entry("division_form_preserved", div, 1e-9, cfg),
    ]


# ---------------------------------------------------------------------------
# 9. Fueter operators


def _random_poly_map(rng, t):
    """``(c0 + sum x_l c_l)(d0 + sum x_l d_l)(e0 + x_m x_n e)`` with random coefficients."""
    c = [_rand_elem(rng, t) for _ in range(5)]
    d = [_rand_elem(rng, t) for _ in range(5)]
    e0, e = _rand_elem(rng, t), _rand_elem(rng, t)
    m, k = rng.integers(0, 4, size=2)

    def f(x):
        left = c[0] + x[0] * c[1] + x[1] * c[2] + x[2] * c[3] + x[3] * c[4]
        mid = d[0] + x[0] * d[1] + x[1] * d[2] + x[2] * d[3] + x[3] * d[4]
        return left * mid * (e0 + (x[m] * x[k]) * e)

    return f


def suite_fueter(t, rng, cfg: Config):
    n = cfg.samples or 100
    jets = 0.0
    for _ in range(5):
        f = _random_poly_map(rng, t)
        x = rng.uniform(-1, 1, size=4)
        exact = derivative_partials(f, x, t, 2)
        approx = finite_difference_partials(f, x, t)
        scale = max(1.0, max(v.norm() for v in exact.values()))
        jets = max(jets, max((exact[e] - approx[e]).norm() for e in approx) / scale)
    pts = fu.sample_admissible(rng, t, n)
    kern = max(fu.kernel_check_mu(a, pts, t) for d in range(5) for a in fu.multi_indices(d))
    few = tuple(pts[:50].T)
    zreg = zharm = 0.0
    for d in range(1, 5):
        for nn in fu.multi_indices(d):
            def z(x, nn=nn):
                return fu.zeta_pow(nn, x, t)
            zreg = max(zreg, *(float(np.max(fu.apply_operator(z, op, few, t).op_norm()))
                               for op in (fu.FueterOp.NABLA, fu.FueterOp.RIGHT_NABLA)))
            zharm = max(zharm, float(np.max(fu.apply_operator(z, fu.FueterOp.LAPLACE, few, t).op_norm())))
    poly = _random_poly_map(rng, t)
    x = tuple(pts[:20].T)
    from .jets import Jet

    jet = poly(Jet.variables(x, t, 2))
    composed = fu.jet_operator(fu.jet_operator(jet, fu.FueterOp.NABLA, x), fu.FueterOp.NABLA_C, x)
    lap = fu.jet_operator(jet, fu.FueterOp.LAPLACE, x)
    box = float(np.max((composed - lap).op_norm() / np.maximum(1.0, lap.op_norm())))
    coeffs = {nn: _rand_elem(rng, t) for nn in fu.multi_indices(3, exact=False)}
    rt = fu.fueter_taylor_roundtrip(coeffs, t, samples=pts[:20])
    taylor_harm = float(np.max(fu.apply_operator(fu.taylor_function(coeffs, t), fu.FueterOp.LAPLACE, x, t).op_norm()))
    qn = max(fu.qn_certificate(k, t, pts) for k in range(1, 7))

    def qpow(k):
        def f(x):
            q = x[0] * HElem.real(t) + fu.vec_part(x, t)
            out = q
            for _ in range(k - 1):
                out = out * q
            return out
        return f

    vq = 0.0
    for k in range(1, 7):
        res = fu.apply_operator(qpow(k), fu.FueterOp.V_T, tuple(pts.T), t).op_norm()
        vq = max(vq, float(np.max(res / np.maximum(1.0, np.sum(pts ** 2, axis=1) ** (k / 2)))))
    return [
        entry("jets_vs_finite_differences", jets, 1e-6, cfg),
        entry("mu_in_kernel_of_V", kern, 1e-8, cfg),
        entry("zeta_regular_both_sides", zreg, 1e-8, cfg),
        entry("zeta_harmonic", zharm, 1e-8, cfg),
        entry("nabla_c_nabla_is_laplacian", box, 1e-9, cfg),
        entry("taylor_regular", rt.regularity, 1e-8, cfg),
        entry("taylor_recovery", rt.recovery, 1e-8, cfg),
        entry("taylor_harmonic", taylor_harm, 1e-8, cfg),
        entry("qn_expansion", qn, 1e-8, cfg),
        entry("qn_in_kernel_of_V", vq, 1e-8, cfg),
    ]


# ---------------------------------------------------------------------------
# 10. mu-Blaschke factor and Arveson kernel


def _sample_blaschke_point(rng, t, max_tries: int = 10_000):
    for _ in range(max_tries):
        a = fu.sample_admissible(rng, t, 1, box=0.35)[0]
        if sum(fu.mu(l, a, t).norm() for l in (1, 2, 3)) < 0.9:
            return a
    raise RuntimeError("no admissible Blaschke point found")


def suite_mu_blaschke(t, rng, cfg: Config):
    n = cfg.samples or 20
    worst = dict(identity=0.0, unitary=0.0, series=0.0)
    for _ in range(n):
        a = _sample_blaschke_point(rng, t)
        for k, v in fu.mu_blaschke_certificates(a, t, AdjointKind.CIRCLED, degree=4).items():
            worst[k] = max(worst[k], v)
    bound_fail = mono_fail = 0
    sym = 0.0
    pts = fu.sample_admissible(rng, t, 6, box=0.5)
    for x, y in zip(pts[::2], pts[1::2]):
        tail = fu.arveson_tail_certificate(x, y, t, max_degree=24)
        bound_fail += not tail.within_bound
        mono_fail += not tail.monotone_tail
        kxx = fu.arveson_kernel(x, x, t, trunc_degree=24)
        sym = max(sym, (kxx.adjoint(AdjointKind.CIRCLED) - kxx).norm() / max(1.0, kxx.norm()))
    return [
        entry("blaschke_identity", worst["identity"], 1e-10, cfg),
        entry("realization_unitary", worst["unitary"], 1e-10, cfg),
        entry("realization_vs_direct_series", worst["series"], 1e-10, cfg),
        entry("arveson_increments_over_bound", float(bound_fail), 0.0, cfg),
        entry("arveson_bound_not_monotone", float(mono_fail), 0.0, cfg),
        entry("arveson_kernel_symmetric", sym, 1e-12, cfg),
    ]


# ---------------------------------------------------------------------------
# 11. rational functions


def _rand_hmatrix(rng, t, rows, cols, scale=1.0) -> HMatrix:
    return HMatrix.from_entries(t, rows, cols, [_rand_elem(rng, t) * scale for _ in range(rows * cols)])


def random_realization(rng, t, n: int | None = None, p: int = 1, m: int = 1, radius: float = 0.5) -> ra.Realization:
    """Random realization with ``||A||_op = radius`` and a well-conditioned ``D``."""
    n = int(rng.integers(1, 4)) if n is None else n
    a = _rand_hmatrix(rng, t, n, n)
    a = a * (radius / mnorm_op(a))
    d = HMatrix.identity(t, p) + _rand_hmatrix(rng, t, p, m, 0.1) if p == m else _rand_hmatrix(rng, t, p, m)
    return ra.Realization(a, _rand_hmatrix(rng, t, n, m, 0.3), _rand_hmatrix(rng, t, p, n, 0.3), d)


def suite_rational(t, rng, cfg: Config):
    reps = cfg.samples or 10
    cab = conv = sums = inv = twice = realev = 0.0
    order = 16
    for _ in range(reps):
        r1, r2 = random_realization(rng, t, p=2, m=2), random_realization(rng, t, p=2, m=2)
        s1, s2 = ra.to_series(r1, order), ra.to_series(r2, order)
        cab = max(cab, max((ra.taylor_coeff(r1, k) - s1.coeff(k)).max_entry_norm() for k in range(order)))
        conv = max(conv, series_distance(ra.to_series(ra.rmul(r1, r2), order), star_mul(s1, s2)))
        sums = max(sums, series_distance(ra.to_series(ra.rsum(r1, r2), order), s1 + s2))
        ri = ra.rinverse(r1)
        si = ra.to_series(ri, order)
        # A - B D^-1 C may be expansive; rounding then scales with the inverse coefficients
        size = max(1.0, float(np.max(si.coeff_norms())))
        eye = PowerSeries.constant(HMatrix.identity(t, 2), order)
        inv = max(inv, series_distance(star_mul(s1, si), eye) / size)
        twice = max(twice, series_distance(ra.to_series(ra.rinverse(ri), order), s1) / size)
        long = ra.to_series(r1, 128)
        for x in (-0.9, -0.3, 0.1, 0.5, 0.9):
            realev = max(realev, (eval_real(long, x) - ra.eval_resolvent_real(r1, x)).max_entry_norm())
    real = quot = 0.0
    for _ in range(reps):
        p = PowerSeries.from_coeffs([HElem.real(t) + _rand_elem(rng, t, 0.2), _rand_elem(rng, t, 0.4),
                                     _rand_elem(rng, t, 0.3)], 32)
        num, den = ra.circled_quotient(p)
        scale = max(1.0, float(np.max(den.coeff_norms())))
        real = max(real, float(max(np.max(np.abs(den.b)), np.max(np.abs(den.a.imag)))) / scale)
        quot = max(quot, series_distance(star_mul(num, star_inverse(den)), star_inverse(p)))
    return [
        entry("taylor_coefficients_cab", cab, 1e-11, cfg),
        entry("cascade_product_convolution", conv, 1e-11, cfg),
        entry("sum_coefficients", sums, 1e-11, cfg),
        entry("inverse_roundtrip", inv, 1e-10, cfg),
        entry("double_inverse", twice, 1e-9, cfg),
        entry("real_point_resolvent", realev, 1e-10, cfg),
        entry("quotient_denominator_real", real, 1e-12, cfg),
        entry("quotient_reconstructs_inverse", quot, 1e-10, cfg),
    ]


SUITES: dict[str, Callable] = {
    "ring": suite_ring,
    "adjoint": suite_adjoint,
    "norm": suite_norm,
    "signature": suite_signature,
    "star": suite_star,
    "blaschke": suite_blaschke,
    "interp": suite_interp,
    "bracket": suite_bracket,
    "fueter": suite_fueter,
    "mu_blaschke": suite_mu_blaschke,
    "rational": suite_rational,
}


def _rng_for(seed: int, suite: str, t: float) -> np.random.Generator:
    index = list(SUITES).index(suite)
    t_key = int(round((t + 1000.0) * 1e6))
    return np.random.default_rng(np.random.SeedSequence([int(seed), index, t_key]))


def run_suite(name: str, t: float, seed: int = 0, cfg: Config = Config()) -> Report:
    start = time.perf_counter()
    entries = SUITES[name](float(t), _rng_for(seed, name, float(t)), cfg)
    return Report(name, float(t), entries, time.perf_counter() - start)


def _run_args(args) -> Report:
    return run_suite(*args)


def run_suites(names=None, scales=DEFAULT_SCALES, seed: int = 0, cfg: Config = Config(),
               jobs: int = 1) -> list[Report]:
    """Every requested suite at every scale, optionally on a process pool."""
    names = list(SUITES) if names is None else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suites: {unknown}")
    work = [(n, float(t), seed, cfg) for n in names for t in scales]
    if jobs <= 1:
        return [_run_args(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_args, work))
