"""Krein forms on H_t-valued power series, Blaschke factors and interpolation.

Two forms act on left series ``f = sum q^n f_n``: ``[f, g] = sum g_n^k f_n``
with ``k`` the circled or the bracket adjoint.  Multiplication by a
Blaschke factor is an isometry for the matching form, and dividing a
series by the factor at one of its zeros is done by coefficient recursions
that never invert the zero itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    GramNotInvertible,
    HTError,
    NonInvertible,
    NotAZero,
    NotContractivePerturbation,
    NotInUnitBall,
    SmallnessViolated,
)
from .hypercomplex import AdjointKind, HElem, NormKind, check_same_scale, hmul
from .htmatrix import HMatrix, block, madjoint, minvert, mnorm_op, stein_residual, stein_solve
from .rational import Realization, realization_left_eval, to_series
from .series import DEFAULT_TRUNC, PowerSeries, _stack_mul, conj_series, eval_series, star_inverse, star_mul

__all__ = [
    "InnerValue",
    "HardyForm",
    "hardy_inner",
    "kernel_series",
    "binomial_series",
    "power_selfadjoint",
    "sqrt_selfadjoint",
    "blaschke_circled",
    "blaschke_circled_direct",
    "blaschke_pair_closed_form",
    "solve_one_point",
    "BracketBlaschkeData",
    "gamma_solve",
    "gamma_series",
    "bracket_data",
    "bracket_blaschke",
    "bracket_blaschke_direct",
    "bracket_certificates",
    "rejected_factor",
    "ThetaCertificates",
    "theta_interpolate",
    "theta_certificates",
    "bracket_gram",
    "isometry_gram",
]


# ---------------------------------------------------------------------------
# forms


class InnerValue(NamedTuple):
    value: HElem | HMatrix
    traced: float


def hardy_inner(f: PowerSeries, g: PowerSeries, kind: AdjointKind = AdjointKind.CIRCLED) -> InnerValue:
    """``[f, g] = sum_n g_n^k f_n`` over the common truncation, and its trace."""
    t = check_same_scale(f.t, g.t)
    n = min(f.trunc, g.trunc)
    adj = conj_series(g, kind)
    if adj.shape[1] != f.shape[0]:
        raise HTError(f"forms need matching shapes, got {f.shape} and {g.shape}")
    pa, pb = _stack_mul(adj.a[:n], adj.b[:n], f.a[:n], f.b[:n], t)
    a, b = pa.sum(axis=0), pb.sum(axis=0)
    traced = float(2.0 * np.trace(a).real)
    if a.shape == (1, 1):
        return InnerValue(HElem(t, a[0, 0], b[0, 0]), traced)
    return InnerValue(HMatrix(t, a, b), traced)


@dataclass(frozen=True)
class HardyForm:
    """One of the two Krein forms, usable as ``form(f, g)``."""

    kind: AdjointKind = AdjointKind.CIRCLED

    def __post_init__(self):
        if self.kind not in (AdjointKind.CIRCLED, AdjointKind.BRACKET):
            raise HTError(f"forms need CIRCLED or BRACKET, got {self.kind!r}")

    def __call__(self, f: PowerSeries, g: PowerSeries) -> InnerValue:
        return hardy_inner(f, g, self.kind)


def kernel_series(p: HElem, kind: AdjointKind = AdjointKind.CIRCLED, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """``K(., p) = sum_n q^n (p^k)^n`` so that ``[f, K(., p) b] = b^k f(p)``."""
    pk = p.adjoint(kind)
    coeffs, power = [], HElem.real(p.t)
    for _ in range(trunc):
        coeffs.append(power)
        power = power * pk
    return PowerSeries.from_coeffs(coeffs, trunc)


# ---------------------------------------------------------------------------
# square roots


def _norm_of(x) -> float:
    return x.norm(NormKind.OP) if isinstance(x, HElem) else mnorm_op(x)


def _one_like(x):
    return HElem.real(x.t) if isinstance(x, HElem) else HMatrix.identity(x.t, x.rows)


def _size_of(x) -> float:
    return x.norm(NormKind.OP) if isinstance(x, HElem) else x.fro()


def binomial_series(eps, exponent: float = 0.5, tol: float = 1e-16, max_terms: int = 100_000):
    """``(1 + eps)^exponent`` as ``sum_n binom(exponent, n) eps^n``.

    Stops when a term drops below ``tol``.  Requires ``||eps||_op < 1``.
    """
    rate = _norm_of(eps)
    if rate >= 1.0:
        raise NotContractivePerturbation(f"||eps||_op = {rate:.6g} >= 1")
    total = _one_like(eps)
    power = total
    coef = 1.0
    for n in range(1, max_terms):
        coef *= (exponent - n + 1) / n
        power = power @ eps if isinstance(eps, HMatrix) else power * eps
        term = power * coef
        total = total + term
        if _size_of(term) < tol or coef == 0.0:
            return total
    raise NotContractivePerturbation(f"binomial series did not settle in {max_terms} terms")


def power_selfadjoint(s, kind: AdjointKind, exponent: float, tol: float = 1e-16):
    """``s^exponent`` for ``s = 1 + eps`` with ``eps`` k-self-adjoint and ``||eps|| < 1``."""
    adj = s.adjoint(kind) if isinstance(s, HElem) else madjoint(s, kind)
    if _size_of(adj - s) > 1e-9 * max(1.0, _size_of(s)):
        raise HTError("argument is not self-adjoint for the chosen adjoint")
    return binomial_series(s - _one_like(s), exponent, tol)


def sqrt_selfadjoint(s, kind: AdjointKind = AdjointKind.BRACKET, tol: float = 1e-16):
    """Self-adjoint square root of ``s = 1 + eps`` by the binomial series."""
    return power_selfadjoint(s, kind, 0.5, tol)


# ---------------------------------------------------------------------------
# circled Blaschke factor


def _check_ball(alpha: HElem) -> None:
    if alpha.norm(NormKind.OP) >= 1.0:
        raise NotInUnitBall(f"||alpha||_op = {alpha.norm():.6g} >= 1")


def blaschke_circled(alpha: HElem, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """``b_alpha = (q - alpha) * (1 - q alpha^c)^{-*}``.

    Coefficients ``-alpha`` then ``(1 - det alpha) (alpha^c)^{n-1}``.
    """
    _check_ball(alpha)
    ac = alpha.adjoint(AdjointKind.CIRCLED)
    lead = 1.0 - alpha.det()
    coeffs, power = [-alpha], HElem.real(alpha.t)
    for _ in range(1, trunc):
        coeffs.append(power * lead)
        power = power * ac
    return PowerSeries.from_coeffs(coeffs, trunc)


def blaschke_circled_direct(alpha: HElem, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """The same factor through an explicit star inverse (reference form)."""
    _check_ball(alpha)
    one = HElem.real(alpha.t)
    num = PowerSeries.from_coeffs([-alpha, one], trunc)
    den = PowerSeries.from_coeffs([one, -alpha.adjoint(AdjointKind.CIRCLED)], trunc)
    return star_mul(num, star_inverse(den))


def blaschke_pair_closed_form(alpha: HElem, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """``(q^2 - 2q re(alpha) + det alpha) * (q^2 det alpha - 2q re(alpha) + 1)^{-*}``.

    Equals ``b_alpha * b_{alpha^c}``; every coefficient is real.
    """
    t, d, r = alpha.t, alpha.det(), alpha.re()
    num = PowerSeries.from_coeffs([HElem.real(t, d), HElem.real(t, -2 * r), HElem.real(t)], trunc)
    den = PowerSeries.from_coeffs([HElem.real(t), HElem.real(t, -2 * r), HElem.real(t, d)], trunc)
    return star_mul(num, star_inverse(den))


# ---------------------------------------------------------------------------
# bracket Blaschke factor


@dataclass(frozen=True)
class BracketBlaschkeData:
    """Constants of the bracket factor at ``alpha``.

    ``Gamma - alpha Gamma alpha^[*] = 1``, ``L = Gamma - Gamma alpha^[*] Gamma^{-1} alpha Gamma``
    and ``K = L^{1/2}``.
    """

    alpha: HElem
    Gamma: HElem
    GammaInv: HElem
    L: HElem
    K: HElem


def gamma_solve(alpha: HElem) -> HElem:
    """Exact solution of ``Gamma - alpha Gamma alpha^[*] = 1`` as a 4x4 real system."""
    t = alpha.t
    ab = alpha.adjoint(AdjointKind.BRACKET)
    cols = []
    for e in np.eye(4):
        g = HElem.from_coords(t, *e)
        cols.append((g - alpha * g * ab).coords)
    m = np.array(cols).T
    try:
        if np.linalg.cond(m) > 1e12:
            raise np.linalg.LinAlgError("ill conditioned")
        x = np.linalg.solve(m, np.array([1.0, 0.0, 0.0, 0.0]))
    except np.linalg.LinAlgError as exc:
        raise NonInvertible(f"Stein map is singular at {alpha!r}") from exc
    return HElem.from_coords(t, *x)


def gamma_series(alpha: HElem, rtol: float = 1e-17, max_terms: int = 100_000) -> HElem:
    """``sum_n alpha^n (alpha^[*])^n`` (independent oracle for :func:`gamma_solve`)."""
    ab = alpha.adjoint(AdjointKind.BRACKET)
    total = HElem.real(alpha.t)
    left, right = total, total
    for _ in range(max_terms):
        left, right = left * alpha, right * ab
        term = left * right
        total = total + term
        if term.norm() <= rtol * total.norm():
            return total
    raise NotContractivePerturbation("Gamma series did not settle")


def bracket_data(alpha: HElem) -> BracketBlaschkeData:
    """Check the smallness condition and assemble ``Gamma``, ``L`` and ``K``."""
    na = alpha.norm(NormKind.OP)
    if na >= 1.0 or na * na / (1.0 - na * na) >= 1.0:
        raise SmallnessViolated(f"||alpha||_op = {na:.6g} fails ||a||^2 / (1 - ||a||^2) < 1")
    gamma = gamma_solve(alpha)
    gamma_inv = gamma.inverse()
    ab = alpha.adjoint(AdjointKind.BRACKET)
    ell = gamma - gamma * ab * gamma_inv * alpha * gamma
    ell.inverse()
    k = sqrt_selfadjoint(ell, AdjointKind.BRACKET)
    return BracketBlaschkeData(alpha, gamma, gamma_inv, ell, k)


def _bracket_realization(data: BracketBlaschkeData) -> Realization:
    s = HMatrix.scalar
    return Realization(
        s(data.alpha.adjoint(AdjointKind.BRACKET)),
        s(data.GammaInv * data.K),
        s(HElem.real(data.alpha.t)),
        s(-(data.alpha * data.K)),
    )


def bracket_blaschke(alpha: HElem, trunc: int = DEFAULT_TRUNC) -> tuple[PowerSeries, BracketBlaschkeData, Realization]:
    """Bracket factor with coefficients ``-alpha K`` then ``(alpha^[*])^{n-1} Gamma^{-1} K``."""
    data = bracket_data(alpha)
    ab = alpha.adjoint(AdjointKind.BRACKET)
    tail = data.GammaInv * data.K
    coeffs, power = [-(alpha * data.K)], HElem.real(alpha.t)
    for _ in range(1, trunc):
        coeffs.append(power * tail)
        power = power * ab
    return PowerSeries.from_coeffs(coeffs, trunc), data, _bracket_realization(data)


def bracket_blaschke_direct(alpha: HElem, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """``(q - alpha) * (1 - q Gamma alpha^[*] Gamma^{-1})^{-*} K`` (reference form)."""
    data = bracket_data(alpha)
    one = HElem.real(alpha.t)
    p = data.Gamma * alpha.adjoint(AdjointKind.BRACKET) * data.GammaInv
    num = PowerSeries.from_coeffs([-alpha, one], trunc)
    den = PowerSeries.from_coeffs([one, -p], trunc)
    return star_mul(num, star_inverse(den)) * data.K


def bracket_certificates(data: BracketBlaschkeData) -> dict[str, float]:
    """Residuals of the defining identities and the two weighted unitarity relations."""
    t = data.alpha.t
    one = HElem.real(t)
    alpha, ab = data.alpha, data.alpha.adjoint(AdjointKind.BRACKET)

    def adj_gap(x: HElem) -> float:
        return (x.adjoint(AdjointKind.BRACKET) - x).norm()

    r = _bracket_realization(data)
    x = block([[r.A, r.B], [r.C, r.D]])
    xs = madjoint(x, AdjointKind.BRACKET)
    z = HMatrix.zeros(t, 1, 1)
    w = block([[HMatrix.scalar(data.Gamma), z], [z, HMatrix.scalar(one)]])
    winv = block([[HMatrix.scalar(data.GammaInv), z], [z, HMatrix.scalar(one)]])
    return {
        "stein": (data.Gamma - alpha * data.Gamma * ab - one).norm(),
        "gamma_series": (data.Gamma - gamma_series(alpha)).norm(),
        "self_adjoint": max(adj_gap(data.Gamma), adj_gap(data.L), adj_gap(data.K)),
        "l_inverse": (data.L.inverse() - (ab * alpha + data.GammaInv)).norm(),
        "k_squared": (data.K * data.K - data.L).norm(),
        "unitary_left": (xs @ w @ x - w).max_entry_norm(),
        "unitary_right": (x @ winv @ xs - winv).max_entry_norm(),
    }


def rejected_factor(alpha: HElem, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """``(1 - alpha alpha^[*])^{-1/2} * (q - alpha) * (1 - q alpha^[*])^{-*} (1 - alpha^[*] alpha)^{1/2}``.

    The left constant does not commute with ``alpha``, so this candidate
    generally does not vanish at ``alpha``.  Kept for negative tests.
    """
    _check_ball(alpha)
    one = HElem.real(alpha.t)
    ab = alpha.adjoint(AdjointKind.BRACKET)
    left = power_selfadjoint(one - alpha * ab, AdjointKind.BRACKET, -0.5)
    right = power_selfadjoint(one - ab * alpha, AdjointKind.BRACKET, 0.5)
    num = PowerSeries.from_coeffs([-alpha, one], trunc)
    den = PowerSeries.from_coeffs([one, -ab], trunc)
    return left * star_mul(num, star_inverse(den)) * right


# ---------------------------------------------------------------------------
# division at a zero


def solve_one_point(f: PowerSeries, alpha: HElem, kind: AdjointKind = AdjointKind.CIRCLED,
                    tol: float = 1e-9) -> PowerSeries:
    """Return ``g`` with ``f = b * g`` where ``b`` is the kind-matched factor at ``alpha``.

    With ``h_n = sum_k alpha^k f_{n+1+k}`` one has ``f - f(alpha) = (q - alpha) * h``,
    and ``g`` is ``(1 - q P) * h`` with ``P = alpha^c`` (circled) or
    ``K^{-1} (1 - q Gamma alpha^[*] Gamma^{-1}) * h`` (bracket).  The
    recursions only multiply by ``alpha``, so ``alpha`` need not be invertible.
    """
    t = check_same_scale(f.t, alpha.t)
    if not f.is_scalar:
        raise HTError("division is implemented for scalar series")
    _check_ball(alpha)
    if kind is AdjointKind.CIRCLED:
        p, kinv = alpha.adjoint(AdjointKind.CIRCLED), None
    elif kind is AdjointKind.BRACKET:
        data = bracket_data(alpha)
        p = data.Gamma * alpha.adjoint(AdjointKind.BRACKET) * data.GammaInv
        kinv = data.K.inverse()
    else:
        raise HTError(f"division needs CIRCLED or BRACKET, got {kind!r}")

    scale = max(1.0, float(np.max(f.coeff_norms())))
    residual = eval_series(f, alpha).norm()
    if residual > tol * scale:
        raise NotAZero(f"|f(alpha)| = {residual:.3g} exceeds {tol:g} * {scale:.3g}")

    n = f.trunc
    fa, fb = f.a[:, 0, 0], f.b[:, 0, 0]
    ha = np.zeros(n, dtype=complex)
    hb = np.zeros(n, dtype=complex)
    for m in range(n - 2, -1, -1):
        xa, xb = hmul(alpha.a, alpha.b, ha[m + 1], hb[m + 1], t)
        ha[m], hb[m] = fa[m + 1] + xa, fb[m + 1] + xb
    pa, pb = hmul(p.a, p.b, ha[:-1], hb[:-1], t)
    ga, gb = ha.copy(), hb.copy()
    ga[1:] -= pa
    gb[1:] -= pb
    if kinv is not None:
        ga, gb = hmul(kinv.a, kinv.b, ga, gb, t)
    return PowerSeries(t, ga, gb)


# ---------------------------------------------------------------------------
# interpolation at several points


def theta_interpolate(points: Sequence[HElem], trunc: int = DEFAULT_TRUNC) -> tuple[Realization, PowerSeries]:
    """Realization and series of ``Theta`` vanishing at every point.

    ``A = diag(alpha_j^c)``, ``C`` a row of ones, ``G`` the circled Gram
    matrix, ``B = (I - A) G^{-1} (I - A^c)^{-1} C^c`` and
    ``D = 1 - C G^{-1} (I - A^c)^{-1} C^c``.
    """
    points = list(points)
    if not points:
        raise HTError("need at least one interpolation point")
    t = check_same_scale(*(p.t for p in points))
    for p in points:
        _check_ball(p)
    n = len(points)
    a = HMatrix.diag([p.adjoint(AdjointKind.CIRCLED) for p in points])
    c = HMatrix.ones(t, 1, n)
    g = stein_solve(a, c, AdjointKind.CIRCLED)
    try:
        ginv = minvert(g)
    except NonInvertible as exc:
        raise GramNotInvertible(str(exc)) from exc
    eye = HMatrix.identity(t, n)
    ac = madjoint(a, AdjointKind.CIRCLED)
    cc = madjoint(c, AdjointKind.CIRCLED)
    right = ginv @ minvert(eye - ac) @ cc
    r = Realization(a, (eye - a) @ right, c, HMatrix.identity(t, 1) - c @ right)
    return r, to_series(r, trunc)


class ThetaCertificates(NamedTuple):
    point_residual: float
    stein_gram: float
    stein_cross: float
    stein_unit: float
    stein_inverse: float
    orthonormality: float
    gram_condition: float

    def worst(self) -> float:
        """Largest residual (the condition number is context, not a residual)."""
        return max(self[:-1])


def _orthonormality(r: Realization, rtol: float = 1e-17, max_trunc: int = 20_000) -> float:
    rate = mnorm_op(r.A)
    trunc = max_trunc if rate >= 1.0 else int(min(max_trunc, math.ceil(math.log(rtol) / math.log(max(rate, 1e-300))) + 2))
    trunc = max(trunc, 2)
    theta = to_series(r, 2 * trunc)
    adj = conj_series(theta, AdjointKind.CIRCLED)
    worst = 0.0
    for k in range(trunc):
        pa, pb = _stack_mul(adj.a[:2 * trunc - k], adj.b[:2 * trunc - k], theta.a[k:], theta.b[k:], r.t)
        sa, sb = pa.sum(axis=0)[0, 0], pb.sum(axis=0)[0, 0]
        if k == 0:
            sa -= 1.0
        worst = max(worst, HElem(r.t, sa, sb).norm())
    return worst


def theta_certificates(points: Sequence[HElem], r: Realization) -> ThetaCertificates:
    """Residuals certifying the interpolant.

    Vanishing at every point (left evaluation summed to convergence), the
    three weighted isometry relations of the colligation, the inverse Stein
    equation, and coefficient orthonormality ``sum_n theta_n^c theta_{n+k} = delta_k``.
    """
    points = list(points)
    t = r.t
    g = stein_solve(r.A, r.C, AdjointKind.CIRCLED)
    adj = lambda m: madjoint(m, AdjointKind.CIRCLED)  # noqa: E731
    one = HMatrix.identity(t, 1)
    ginv = minvert(g)
    return ThetaCertificates(
        point_residual=max(realization_left_eval(r, p).max_entry_norm() for p in points),
        stein_gram=stein_residual(g, r.A, r.C, AdjointKind.CIRCLED),
        stein_cross=(adj(r.B) @ g @ r.A + adj(r.D) @ r.C).max_entry_norm(),
        stein_unit=(adj(r.B) @ g @ r.B + adj(r.D) @ r.D - one).max_entry_norm(),
        stein_inverse=(ginv - r.A @ ginv @ adj(r.A) - r.B @ adj(r.B)).max_entry_norm(),
        orthonormality=_orthonormality(r),
        gram_condition=mnorm_op(g) * mnorm_op(ginv),
    )


def bracket_gram(points: Sequence[HElem]) -> HMatrix:
    """Experimental bracket Gram matrix ``sum_n a_u^n (a_v^[*])^n``.

    Only the matrix is provided; no interpolant is built from it.
    """
    points = list(points)
    t = check_same_scale(*(p.t for p in points))
    for p in points:
        _check_ball(p)
    a = HMatrix.diag([p.adjoint(AdjointKind.BRACKET) for p in points])
    return stein_solve(a, HMatrix.ones(t, 1, len(points)), AdjointKind.BRACKET)


def isometry_gram(multiplier: PowerSeries, kind: AdjointKind = AdjointKind.CIRCLED,
                  n_monomials: int = 8, trunc: int | None = None) -> float:
    """``max_{u,v} |[m * q^u, m * q^v] - delta_uv|`` over the first monomials."""
    f = multiplier if trunc is None else multiplier.with_trunc(trunc)
    if f.trunc <= 2 * n_monomials:
        raise HTError(f"truncation {f.trunc} too short for {n_monomials} monomials")
    n = f.trunc
    adj = conj_series(f, kind)
    worst = 0.0
    for u in range(n_monomials):
        for v in range(n_monomials):
            # [q^u f, q^v f] = sum_m (f_{m-v})^k f_{m-u}
            lo = max(u, v)
            pa, pb = _stack_mul(adj.a[lo - v:n - v], adj.b[lo - v:n - v], f.a[lo - u:n - u], f.b[lo - u:n - u], f.t)
            sa, sb = pa.sum(axis=0), pb.sum(axis=0)
            if u == v:
                sa = sa - np.eye(sa.shape[0])
            worst = max(worst, HMatrix(f.t, sa, sb).max_entry_norm())
    return worst
