"""Fueter-type variables on R^4 with values in H_t, and the operators that annihilate them.

A point ``x = (x0, x1, x2, x3)`` stands for ``x0 + x1 i + x2 j_t + x3 k_t``.
Every coordinate function here accepts either floats or :class:`~scaledquat.jets.Jet`
coordinates, so differential operators are assembled from exact jet
derivatives rather than finite differences.

* ``mu_l = x_l (1 + x0 vec^{-1})`` lie in the kernel of
  ``V_t = d0 - vec^{-1} (x1 d1 + x2 d2 + x3 d3)``.
* ``zeta_1 = x1 - x0 i`` and ``zeta_{2,3} = x_{2,3} + (sign t / sqrt|t|) x0 (j_t, k_t)``
  lie in the kernel of ``nabla = d0 + i d1 - (sign t / sqrt|t|)(j_t d2 + k_t d3)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ConditionViolated, DegreeCap, DomainViolation, HTError, OnNullCone
from .hardy import power_selfadjoint, sqrt_selfadjoint
from .hypercomplex import AdjointKind, HElem, NormKind, basis, symmetrized_power, validate_scale
from .htmatrix import HMatrix, block, madjoint
from .jets import Jet
from .rational import MuRealization, mu_series_coeffs

__all__ = [
    "Point4",
    "DEGREE_CAP",
    "vec_part",
    "vec_det",
    "vec_inverse",
    "mu",
    "mu_pow",
    "zeta",
    "zeta_pow",
    "FueterOp",
    "jet_operator",
    "apply_operator",
    "sample_admissible",
    "kernel_check_mu",
    "multi_indices",
    "qn_expand",
    "qn_certificate",
    "taylor_function",
    "fueter_taylor_roundtrip",
    "norm_inequality_gaps",
    "norm_inequality_check",
    "arveson_bound",
    "arveson_terms",
    "arveson_kernel",
    "arveson_tail_certificate",
    "mu_blaschke",
    "mu_blaschke_direct",
    "mu_blaschke_certificates",
]

DEGREE_CAP = 12


class Point4(NamedTuple):
    x0: float
    x1: float
    x2: float
    x3: float

    @classmethod
    def of(cls, x: Sequence[float]) -> "Point4":
        vals = [float(v) for v in x]
        if len(vals) != 4 or not all(math.isfinite(v) for v in vals):
            raise HTError(f"a point needs four finite coordinates, got {x!r}")
        return cls(*vals)


def _ratio(t: float) -> float:
    """``sign(t) / sqrt|t|``."""
    return math.copysign(1.0, t) / math.sqrt(abs(t))


def _is_jet(x) -> bool:
    return any(isinstance(c, Jet) for c in x)


def _coords(x):
    return tuple(x) if _is_jet(x) else Point4.of(x)


def vec_part(x, t):
    """``x1 i + x2 j_t + x3 k_t``."""
    t = validate_scale(t)
    _, i, j, k = basis(t)
    x = _coords(x)
    return x[1] * i + x[2] * j + x[3] * k


def vec_det(x, t):
    """``x1^2 - t (x2^2 + x3^2)``, the determinant of the vector part."""
    x = _coords(x)
    return x[1] * x[1] - validate_scale(t) * (x[2] * x[2] + x[3] * x[3])


def _det_value(d) -> np.ndarray:
    return d.a[0].real if isinstance(d, Jet) else np.asarray(d, dtype=float)


def vec_inverse(x, t, tol: float = 1e-12):
    """``vec^circled / det(vec)``; raises :class:`OnNullCone` when ``|det| <= tol``."""
    t = validate_scale(t)
    v = vec_part(x, t)
    d = vec_det(x, t)
    if np.any(np.abs(_det_value(d)) <= tol):
        raise OnNullCone(f"|x1^2 - t(x2^2 + x3^2)| <= {tol:g}")
    if isinstance(v, Jet):
        return v.inverse()
    return v.adjoint(AdjointKind.CIRCLED) / float(d)


def _w(x, t, tol):
    """``1 + x0 vec^{-1}``."""
    x = _coords(x)
    return 1.0 + x[0] * vec_inverse(x, t, tol)


def mu(l: int, x, t, tol: float = 1e-12):
    """``mu_l(x) = x_l (1 + x0 vec^{-1})`` for ``l`` in 1..3."""
    if l not in (1, 2, 3):
        raise HTError(f"mu index must be 1, 2 or 3, got {l}")
    x = _coords(x)
    return x[l] * _w(x, t, tol)


def _one(x, t):
    """The unit as an element, or as a constant jet shaped like jet coordinates."""
    one = HElem.real(t)
    jet = next((c for c in x if isinstance(c, Jet)), None)
    return one if jet is None else Jet.constant(one, jet.order, jet.batch_shape)


def _int_power(z, n: int, one):
    out = one
    for _ in range(n):
        out = out * z
    return out


def mu_pow(alpha: Sequence[int], x, t, tol: float = 1e-12):
    """``mu^alpha = x^alpha (1 + x0 vec^{-1})^{|alpha|}`` (the mu commute)."""
    t = validate_scale(t)
    alpha = tuple(int(a) for a in alpha)
    x = _coords(x)
    w = _w(x, t, tol)
    scalar = 1.0
    for l, a in zip((1, 2, 3), alpha):
        for _ in range(a):
            scalar = scalar * x[l]
    return scalar * _int_power(w, sum(alpha), _one(x, t))


def zeta(l: int, x, t):
    """Fueter variable ``zeta_l``; entire in ``x``."""
    t = validate_scale(t)
    _, i, j, k = basis(t)
    x = _coords(x)
    c = _ratio(t)
    if l == 1:
        return x[1] - x[0] * i
    if l == 2:
        return x[2] + (c * x[0]) * j
    if l == 3:
        return x[3] + (c * x[0]) * k
    raise HTError(f"zeta index must be 1, 2 or 3, got {l}")


def zeta_pow(n: Sequence[int], x, t):
    """``zeta^n = (1 / n!) * symmetrized product`` with ``n_l`` copies of ``zeta_l``.

    At ``x0 = 0`` this reduces to ``x^n / n!``.
    """
    t = validate_scale(t)
    n = tuple(int(v) for v in n)
    x = _coords(x)
    factors = [zeta(l, x, t) for l in (1, 2, 3)]
    sym = symmetrized_power(factors, n, _one(x, t))
    return sym / float(math.prod(math.factorial(v) for v in n))


# ---------------------------------------------------------------------------
# differential operators


class FueterOp(enum.Enum):
    V_T = "V_t"
    G_T = "G_t"
    NABLA = "nabla"
    NABLA_C = "nabla_c"
    LAPLACE = "laplace"
    RIGHT_NABLA = "right_nabla"
    RIGHT_NABLA_C = "right_nabla_c"


def _nabla(f: Jet, sign: float, right: bool) -> Jet:
    """``d0 + sign (i d1 - c (j d2 + k d3))`` with units on the chosen side."""
    t = f.t
    _, i, j, k = basis(t)
    c = _ratio(t)
    d = [f.partial(l) for l in range(4)]
    units = (i, j * (-c), k * (-c))
    out = d[0]
    for u, dl in zip(units, d[1:]):
        out = out + sign * (dl * u if right else u * dl)
    return out


def jet_operator(f: Jet, op: FueterOp, point) -> Jet:
    """Apply ``op`` to the jet ``f`` taken at ``point``.

    First-order operators lower the order by one and the Laplacian by two,
    so compositions such as ``nabla_c(nabla f)`` can be chained.
    """
    t = f.t
    if op is FueterOp.LAPLACE:
        s = math.copysign(1.0, t)
        second = [f.partial(l).partial(l) for l in range(4)]
        return second[0] + second[1] - s * second[2] - s * second[3]
    if op is FueterOp.NABLA:
        return _nabla(f, 1.0, right=False)
    if op is FueterOp.NABLA_C:
        return _nabla(f, -1.0, right=False)
    if op is FueterOp.RIGHT_NABLA:
        return _nabla(f, 1.0, right=True)
    if op is FueterOp.RIGHT_NABLA_C:
        return _nabla(f, -1.0, right=True)
    if op in (FueterOp.V_T, FueterOp.G_T):
        x = Jet.variables(point, t, f.order - 1)
        euler = x[1] * f.partial(1) + x[2] * f.partial(2) + x[3] * f.partial(3)
        inv = vec_inverse(x, t)  # also rejects the null cone for G_t
        if op is FueterOp.V_T:
            return f.partial(0) - inv * euler
        return vec_part(x, t) * f.partial(0) - euler
    raise HTError(f"unknown operator {op!r}")


def _as_jet(value, t, order: int, batch_shape) -> Jet:
    if isinstance(value, Jet):
        return value
    if isinstance(value, HElem):
        return Jet.constant(value, order, batch_shape)
    return Jet.constant(HElem.real(t, float(value)), order, batch_shape)


def apply_operator(f: Callable, op: FueterOp, x, t):
    """``op f`` at ``x`` from exact jets of ``f``.

    ``f`` maps a tuple of four coordinates (floats or jets) to an element.
    ``x`` may hold arrays of coordinates, in which case an order-0 jet
    holding the batch of results is returned instead of an element.
    """
    t = validate_scale(t)
    order = 2 if op is FueterOp.LAPLACE else 1
    point = tuple(np.asarray(c, dtype=float) for c in x)
    variables = Jet.variables(point, t, order)
    jet = _as_jet(f(variables), t, order, variables[0].batch_shape)
    out = jet_operator(jet, op, point)
    return out.to_helem() if out.batch_shape == () else out


# ---------------------------------------------------------------------------
# sampling and kernel checks


def sample_admissible(rng: np.random.Generator, t, n: int, margin: float = 0.1,
                      box: float = 1.0) -> np.ndarray:
    """``n`` points of ``[-box, box]^4`` with ``|det vec| >= margin (x1^2 + |t|(x2^2 + x3^2))``."""
    t = validate_scale(t)
    out = np.empty((0, 4))
    while len(out) < n:
        cand = rng.uniform(-box, box, size=(4 * n, 4))
        scale = cand[:, 1] ** 2 + abs(t) * (cand[:, 2] ** 2 + cand[:, 3] ** 2)
        det = cand[:, 1] ** 2 - t * (cand[:, 2] ** 2 + cand[:, 3] ** 2)
        keep = (np.abs(det) >= margin * scale) & (scale > 1e-6)
        out = np.concatenate([out, cand[keep]])
    return out[:n]


def _batch(samples) -> tuple[np.ndarray, ...]:
    arr = np.atleast_2d(np.asarray(samples, dtype=float))
    if arr.shape[-1] != 4:
        raise HTError("samples must have four coordinates each")
    return tuple(arr[:, l] for l in range(4))


def kernel_check_mu(alpha: Sequence[int], samples, t) -> float:
    """Largest ``||V_t mu^alpha|| / max(1, ||mu^alpha||)`` over the samples."""
    t = validate_scale(t)
    point = _batch(samples)
    res = apply_operator(lambda x: mu_pow(alpha, x, t), FueterOp.V_T, point, t)
    vals = mu_pow(alpha, Jet.variables(point, t, 0), t)
    return float(np.max(res.op_norm() / np.maximum(1.0, vals.op_norm())))


def multi_indices(degree: int, exact: bool = True) -> list[tuple[int, int, int]]:
    """Multi-indices in three letters of total degree ``degree`` (or up to it)."""
    degs = [degree] if exact else range(degree + 1)
    return [(a, b, d - a - b) for d in degs for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


def qn_expand(n: int, t) -> dict[tuple[int, int, int], HElem]:
    """``c_alpha = (n! / alpha!) * symmetrized product of (i, j_t, k_t)`` over ``|alpha| = n``.

    With these, ``q^n = sum_alpha mu^alpha c_alpha``.
    """
    t = validate_scale(t)
    if n < 1:
        raise HTError("degree must be positive")
    if n > DEGREE_CAP:
        raise DegreeCap(f"degree {n} exceeds the cap {DEGREE_CAP}")
    _, i, j, k = basis(t)
    out = {}
    for alpha in multi_indices(n):
        weight = math.factorial(n) / math.prod(math.factorial(a) for a in alpha)
        out[alpha] = symmetrized_power([i, j, k], alpha) * weight
    return out


def qn_certificate(n: int, t, samples) -> float:
    """Largest ``||q^n - sum mu^alpha c_alpha|| / max(1, ||q||^n)`` over the samples."""
    t = validate_scale(t)
    coeffs = qn_expand(n, t)
    point = _batch(samples)
    x = Jet.variables(point, t, 0)
    one = HElem.real(t)
    q = x[0] * one + vec_part(x, t)
    lhs = _int_power(q, n, Jet.constant(one, 0, x[0].batch_shape))
    rhs = None
    for alpha, c in coeffs.items():
        term = mu_pow(alpha, x, t) * c
        rhs = term if rhs is None else rhs + term
    return float(np.max((lhs - rhs).op_norm() / np.maximum(1.0, q.op_norm() ** n)))


# ---------------------------------------------------------------------------
# Fueter-Taylor expansions


def taylor_function(coeffs: Mapping[tuple[int, int, int], HElem], t) -> Callable:
    """``f = sum_n zeta^n f_n`` (the key ``(0, 0, 0)`` is the constant term)."""
    t = validate_scale(t)
    items = [(tuple(int(v) for v in n), c) for n, c in coeffs.items()]

    def f(x):
        total = None
        for n, c in items:
            term = zeta_pow(n, x, t) * c
            total = term if total is None else total + term
        return HElem(t) if total is None else total

    return f


class RoundTrip(NamedTuple):
    regularity: float
    recovery: float


def fueter_taylor_roundtrip(coeffs: Mapping[tuple[int, int, int], HElem], t,
                            samples=None, rng: np.random.Generator | None = None) -> RoundTrip:
    """Build ``f = sum zeta^n f_n`` and certify it.

    ``regularity`` is the largest ``||nabla f||`` at the samples and
    ``recovery`` the largest ``||f_n - d^n f(0)||`` with ``d^n`` taken in
    ``x1, x2, x3``.  Since ``zeta^n`` restricts to ``x^n / n!`` at
    ``x0 = 0``, the plain partial derivative recovers ``f_n``.
    """
    t = validate_scale(t)
    f = taylor_function(coeffs, t)
    if samples is None:
        samples = (rng or np.random.default_rng(0)).uniform(-1, 1, size=(20, 4))
    reg = apply_operator(f, FueterOp.NABLA, _batch(samples), t)
    regularity = float(np.max(reg.op_norm()))
    degree = max((sum(n) for n in coeffs), default=0)
    jet = f(Jet.variables((0.0, 0.0, 0.0, 0.0), t, max(degree, 1)))
    jet = _as_jet(jet, t, max(degree, 1), ())
    recovery = 0.0
    for n in multi_indices(degree, exact=False):
        want = coeffs.get(n, HElem(t))
        got = jet.derivative((0,) + n).to_helem()
        recovery = max(recovery, (got - want).norm())
    return RoundTrip(regularity, recovery)


# ---------------------------------------------------------------------------
# norm inequality


def norm_inequality_gaps(x, t) -> tuple[float, float, float]:
    """``||zeta_u(x)||_E - ||mu_u(x)||_E`` for ``u = 1, 2, 3`` (scaled Euclidean norm)."""
    t = validate_scale(t)
    return tuple(zeta(u, x, t).norm(NormKind.EUCLID) - mu(u, x, t).norm(NormKind.EUCLID) for u in (1, 2, 3))


def norm_inequality_check(x, t, tol: float = 1e-12) -> bool:
    """Whether ``||mu_u(x)||_E <= ||zeta_u(x)||_E`` for every ``u`` (up to ``tol``)."""
    return all(g >= -tol for g in norm_inequality_gaps(x, t))


# ---------------------------------------------------------------------------
# Arveson-type kernel


def arveson_bound(r: float, rho: float, t) -> float:
    """``M`` with ``||mu^alpha(x)|| <= M^|alpha|`` on ``|det vec| > r``, ``|x_u| < rho``.

    ``||vec||_op <= rho (1 + 2 max(1, |t|))``, which gives
    ``M = rho (1 + rho^2 (1 + 2 max(1, |t|)) / r)``.
    """
    t = validate_scale(t)
    return rho * (1.0 + rho * rho * (1.0 + 2.0 * max(1.0, abs(t))) / r)


def _domain(x, t, r, rho) -> tuple[float, float]:
    p = Point4.of(x)
    d = abs(float(vec_det(p, t)))
    if d == 0.0:
        raise OnNullCone("vector part is not invertible")
    r = d / 2.0 if r is None else float(r)
    rho = 1.01 * max(abs(v) for v in p) if rho is None else float(rho)
    if not (d > r and max(abs(v) for v in p) < rho):
        raise DomainViolation(f"{p} is outside |det vec| > {r:g}, |x_u| < {rho:g}")
    return r, rho


def arveson_terms(x, y, t, kind: AdjointKind = AdjointKind.CIRCLED, max_degree: int = 20) -> list[HElem]:
    """Degree-``d`` parts ``sum_{|alpha| = d} mu^alpha(x) (mu^alpha(y))^k / alpha!``."""
    t = validate_scale(t)
    mx = [mu(l, x, t) for l in (1, 2, 3)]
    my = [mu(l, y, t).adjoint(kind) for l in (1, 2, 3)]
    one = HElem.real(t)
    px = [[one] for _ in range(3)]
    py = [[one] for _ in range(3)]
    for l in range(3):
        for _ in range(max_degree):
            px[l].append(px[l][-1] * mx[l])
            py[l].append(py[l][-1] * my[l])
    out = []
    for d in range(max_degree + 1):
        total = HElem(t)
        for a1, a2, a3 in multi_indices(d):
            left = px[0][a1] * px[1][a2] * px[2][a3]
            right = py[2][a3] * py[1][a2] * py[0][a1]  # (u v)^k = v^k u^k
            weight = math.factorial(a1) * math.factorial(a2) * math.factorial(a3)
            total = total + left * right / float(weight)
        out.append(total)
    return out


def arveson_kernel(x, y, t, kind: AdjointKind = AdjointKind.CIRCLED, trunc_degree: int = 20,
                   r: float | None = None, rho: float | None = None) -> HElem:
    """``sum_{|alpha| <= D} mu^alpha(x) (mu^alpha(y))^k / alpha!``.

    ``r`` and ``rho`` describe the domain ``|det vec| > r``, ``|x_u| < rho``;
    points outside raise :class:`DomainViolation`.
    """
    _domain(x, t, r, rho)
    _domain(y, t, r, rho)
    terms = arveson_terms(x, y, t, kind, trunc_degree)
    total = terms[0]
    for term in terms[1:]:
        total = total + term
    return total


class ArvesonTail(NamedTuple):
    deltas: tuple[float, ...]
    bounds: tuple[float, ...]
    within_bound: bool
    monotone_tail: bool


def arveson_tail_certificate(x, y, t, kind: AdjointKind = AdjointKind.CIRCLED, max_degree: int = 30,
                             r: float | None = None, rho: float | None = None) -> ArvesonTail:
    """Compare each degree-``d`` increment with ``(3 Mx My)^d / d!``.

    ``within_bound`` asks that every increment respects its bound and
    ``monotone_tail`` that the bounds (hence the increments' envelope)
    decrease from ``d >= 3 Mx My`` on.
    """
    rx, rhox = _domain(x, t, r, rho)
    ry, rhoy = _domain(y, t, r, rho)
    m = 3.0 * arveson_bound(rx, rhox, t) * arveson_bound(ry, rhoy, t)
    terms = arveson_terms(x, y, t, kind, max_degree)
    deltas = tuple(term.norm() for term in terms)
    bounds = tuple(m ** d / math.factorial(d) for d in range(max_degree + 1))
    within = all(dl <= b * (1 + 1e-9) + 1e-300 for dl, b in zip(deltas, bounds))
    start = math.ceil(m)
    tail = bounds[start:]
    monotone = all(b1 <= b0 for b0, b1 in zip(tail, tail[1:]))
    return ArvesonTail(deltas, bounds, within, monotone)


# ---------------------------------------------------------------------------
# mu-variable Blaschke factor


def _mu_row(a, t, kind) -> HMatrix:
    mus = [mu(l, a, t) for l in (1, 2, 3)]
    total = sum(m.norm(NormKind.OP) for m in mus)
    if total >= 1.0:
        raise ConditionViolated(f"sum ||mu_l(a)|| = {total:.6g} >= 1")
    return HMatrix.from_elems([mus])


@dataclass(frozen=True)
class MuBlaschke:
    """Blaschke data at ``a``: the row ``m = mu(a)`` and the two square roots."""

    t: float
    kind: AdjointKind
    m: HMatrix
    left_root: HMatrix  # (1 - m m^k)^{1/2}, 1 x 1
    right_root: HMatrix  # (I - m^k m)^{1/2}, 3 x 3
    realization: MuRealization


def mu_blaschke(a, t, kind: AdjointKind = AdjointKind.CIRCLED, degree: int = 6):
    """Coefficients up to ``degree`` and the realization of the factor at ``a``.

    ``A_k = mu_k(a)^k``, ``B_k`` the rows of ``(I - m^k m)^{1/2}``,
    ``C = (1 - m m^k)^{1/2}`` and ``D = -m``.  Returns ``(coeffs, data)``
    where ``data.realization`` is the :class:`MuRealization`.
    """
    t = validate_scale(t)
    m = _mu_row(a, t, kind)
    mk = madjoint(m, kind)
    left = sqrt_selfadjoint(HMatrix.identity(t, 1) - m @ mk, kind)
    right = sqrt_selfadjoint(HMatrix.identity(t, 3) - mk @ m, kind)
    real = MuRealization(
        A=tuple(mk[l:l + 1, :] for l in range(3)),
        B=tuple(right[l:l + 1, :] for l in range(3)),
        C=left,
        D=-m,
    )
    data = MuBlaschke(t, kind, m, left, right, real)
    return mu_series_coeffs(real, degree), data


def mu_blaschke_direct(data: MuBlaschke, degree: int) -> dict[tuple[int, int, int], HMatrix]:
    """``C * (1 - sum mu_k m_k^k)^{-*} * (mu - m) (I - m^k m)^{-1/2}`` expanded directly.

    Words ``W_beta = sum_k m_k^k W_{beta - e_k}`` collect the geometric factor.
    """
    t, kind = data.t, data.kind
    mk = madjoint(data.m, kind)
    ck = [mk[l:l + 1, :] for l in range(3)]
    inv_right = _inverse_root(HMatrix.identity(t, 3) - mk @ data.m, kind)
    words = {(0, 0, 0): HMatrix.identity(t, 1)}
    unit_rows = [HMatrix.from_elems([[HElem.real(t, float(l == c)) for c in range(3)]]) for l in range(3)]
    out = {}
    for beta in multi_indices(degree, exact=False):
        if sum(beta):
            acc = HMatrix.zeros(t, 1, 1)
            for k in range(3):
                if beta[k]:
                    acc = acc + ck[k] @ words[beta[:k] + (beta[k] - 1,) + beta[k + 1:]]
            words[beta] = acc
        row = -(words[beta] @ data.m)
        for k in range(3):
            if beta[k]:
                row = row + words[beta[:k] + (beta[k] - 1,) + beta[k + 1:]] @ unit_rows[k]
        out[beta] = data.left_root @ row @ inv_right
    return out


def _inverse_root(s: HMatrix, kind: AdjointKind) -> HMatrix:
    return power_selfadjoint(s, kind, -0.5)


def mu_blaschke_certificates(a, t, kind: AdjointKind = AdjointKind.CIRCLED, degree: int = 6) -> dict[str, float]:
    """Residuals of the defining identity, the colligation unitarity and the series match."""
    t = validate_scale(t)
    coeffs, data = mu_blaschke(a, t, kind, degree)
    mk = madjoint(data.m, kind)
    inv_right = _inverse_root(HMatrix.identity(t, 3) - mk @ data.m, kind)
    identity = (data.left_root @ data.m @ inv_right - data.m).max_entry_norm()
    r = data.realization
    col_a = block([[r.A[0]], [r.A[1]], [r.A[2]]])
    col_b = block([[r.B[0]], [r.B[1]], [r.B[2]]])
    u = block([[col_a, col_b], [r.C, r.D]])
    uk = madjoint(u, kind)
    eye = HMatrix.identity(t, 4)
    unitary = max((u @ uk - eye).max_entry_norm(), (uk @ u - eye).max_entry_norm())
    direct = mu_blaschke_direct(data, degree)
    series = max((coeffs[b] - direct[b]).max_entry_norm() for b in coeffs)
    return {"identity": identity, "unitary": unitary, "series": series}
