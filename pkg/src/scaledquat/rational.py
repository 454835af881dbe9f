"""State-space realizations over H_t.

A realization ``(A, B, C, D)`` stands for the star-rational function
``D + q C (I - q A)^{-*} B`` whose Taylor coefficients are ``f_0 = D`` and
``f_k = C A^{k-1} B``.  Sums, cascade products and inverses are computed
on the realizations themselves, and checked against series arithmetic.

The three-letter variant replaces ``q`` by the commuting variables
``mu_1, mu_2, mu_3`` (see :mod:`scaledquat.fueter`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, NonInvertible, NonInvertibleConstantTerm, NonInvertibleD, NotContractive
from .hypercomplex import AdjointKind, HElem, NormKind, check_same_scale
from .htmatrix import HMatrix, block, minvert, mnorm_op
from .series import DEFAULT_TRUNC, PowerSeries, conj_series, star_mul

__all__ = [
    "Realization",
    "taylor_coeff",
    "to_series",
    "eval_resolvent_real",
    "realization_left_eval",
    "rsum",
    "rmul",
    "rinverse",
    "circled_quotient",
    "MuRealization",
    "mu_series_coeffs",
    "mu_realization_eval",
]


@dataclass(frozen=True)
class Realization:
    """``(A, B, C, D)`` with ``A`` n x n, ``B`` n x m, ``C`` p x n, ``D`` p x m."""

    A: HMatrix
    B: HMatrix
    C: HMatrix
    D: HMatrix

    def __post_init__(self):
        check_same_scale(self.A.t, self.B.t, self.C.t, self.D.t)
        n = self.A.rows
        if (self.A.cols != n or self.B.rows != n or self.C.cols != n
                or self.C.rows != self.D.rows or self.B.cols != self.D.cols):
            raise DimensionMismatch(
                f"A{self.A.shape} B{self.B.shape} C{self.C.shape} D{self.D.shape} do not fit")

    @property
    def t(self) -> float:
        return self.A.t

    @property
    def state_dim(self) -> int:
        return self.A.rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.D.shape

    @classmethod
    def constant(cls, d: HMatrix | HElem) -> "Realization":
        d = HMatrix.scalar(d) if isinstance(d, HElem) else d
        p, m = d.shape
        return cls(HMatrix.zeros(d.t, 1, 1), HMatrix.zeros(d.t, 1, m), HMatrix.zeros(d.t, p, 1), d)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "state_dim": self.state_dim,
            "outputs": self.shape[0],
            "inputs": self.shape[1],
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "C": self.C.to_json(),
            "D": self.D.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "Realization":
        return cls(*(HMatrix.from_json(data[k]) for k in "ABCD"))


def taylor_coeff(r: Realization, k: int) -> HMatrix:
    if k < 0:
        raise ValueError("coefficient index must be non-negative")
    if k == 0:
        return r.D
    return r.C @ r.A.power(k - 1) @ r.B


def to_series(r: Realization, trunc: int = DEFAULT_TRUNC) -> PowerSeries:
    """Taylor coefficients ``D, CB, CAB, ...`` as a matrix-valued series."""
    coeffs = [r.D]
    x = r.B
    for _ in range(1, trunc):
        coeffs.append(r.C @ x)
        x = r.A @ x
    return PowerSeries.from_coeffs(coeffs, trunc)


def eval_resolvent_real(r: Realization, x: float) -> HMatrix:
    """``D + x C (I - x A)^{-1} B`` at a real point."""
    eye = HMatrix.identity(r.t, r.state_dim)
    return r.D + (r.C @ minvert(eye - r.A * float(x)) @ r.B) * float(x)


def realization_left_eval(r: Realization, q: HElem, rtol: float = 1e-17, max_terms: int = 100_000) -> HMatrix:
    """Left evaluation ``sum_k q^k f_k`` summed until the terms are negligible.

    Needs ``||q|| ||A|| < 1``.  Unlike a fixed truncation the result has no
    visible tail.
    """
    check_same_scale(r.t, q.t)
    if q.norm() * mnorm_op(r.A) >= 1.0:
        raise NotContractive("left evaluation needs ||q|| ||A|| < 1")
    total = r.D
    qk = q
    row = r.C
    for _ in range(max_terms):
        term = qk * (row @ r.B)
        total = total + term
        if term.fro() <= rtol * max(1.0, total.fro()):
            return total
        qk = q * qk
        row = row @ r.A
    raise NotContractive(f"left evaluation did not settle in {max_terms} terms")


def rsum(r1: Realization, r2: Realization) -> Realization:
    """Realization of ``f1 + f2`` (block diagonal state)."""
    if r1.shape != r2.shape:
        raise DimensionMismatch(f"cannot add {r1.shape} and {r2.shape}")
    t = check_same_scale(r1.t, r2.t)
    z12 = HMatrix.zeros(t, r1.state_dim, r2.state_dim)
    z21 = HMatrix.zeros(t, r2.state_dim, r1.state_dim)
    return Realization(
        block([[r1.A, z12], [z21, r2.A]]),
        block([[r1.B], [r2.B]]),
        block([[r1.C, r2.C]]),
        r1.D + r2.D,
    )


def rmul(r1: Realization, r2: Realization) -> Realization:
    """Cascade realization of the star product ``f1 * f2``."""
    if r1.shape[1] != r2.shape[0]:
        raise DimensionMismatch(f"cannot multiply {r1.shape} by {r2.shape}")
    t = check_same_scale(r1.t, r2.t)
    z21 = HMatrix.zeros(t, r2.state_dim, r1.state_dim)
    return Realization(
        block([[r1.A, r1.B @ r2.C], [z21, r2.A]]),
        block([[r1.B @ r2.D], [r2.B]]),
        block([[r1.C, r1.D @ r2.C]]),
        r1.D @ r2.D,
    )


def rinverse(r: Realization, tol: float | None = None) -> Realization:
    """Realization of the star inverse: ``(A - B D^{-1} C, B D^{-1}, -D^{-1} C, D^{-1})``."""
    if r.shape[0] != r.shape[1]:
        raise DimensionMismatch(f"cannot invert a {r.shape} valued function")
    try:
        dinv = minvert(r.D, tol)
    except NonInvertible as exc:
        raise NonInvertibleD(str(exc)) from exc
    return Realization(r.A - r.B @ dinv @ r.C, r.B @ dinv, -(dinv @ r.C), dinv)


def circled_quotient(p: PowerSeries, tol: float | None = None) -> tuple[PowerSeries, PowerSeries]:
    """Split ``P^{-*}`` as ``P^circled * (P * P^circled)^{-*}``.

    Returns ``(numerator, denominator)`` with ``numerator = P^circled`` and
    the denominator ``P * P^circled`` whose coefficients are real.
    """
    c0 = p.coeff(0)
    try:
        if isinstance(c0, HElem):
            c0.inverse(tol)
        else:
            minvert(c0, tol)
    except NonInvertible as exc:
        raise NonInvertibleConstantTerm(str(exc)) from exc
    num = conj_series(p, AdjointKind.CIRCLED)
    return num, star_mul(p, num)


# ---------------------------------------------------------------------------
# three commuting letters


@dataclass(frozen=True)
class MuRealization:
    """``D + C (I - sum_k mu_k A_k)^{-*} (sum_k mu_k B_k)`` with three letters."""

    A: tuple[HMatrix, HMatrix, HMatrix]
    B: tuple[HMatrix, HMatrix, HMatrix]
    C: HMatrix
    D: HMatrix

    def __post_init__(self):
        if len(self.A) != 3 or len(self.B) != 3:
            raise DimensionMismatch("three letters need three A and three B blocks")
        check_same_scale(self.C.t, self.D.t, *(m.t for m in self.A), *(m.t for m in self.B))
        n = self.C.cols
        for a, b in zip(self.A, self.B):
            if a.shape != (n, n) or b.shape != (n, self.D.cols):
                raise DimensionMismatch("letter blocks do not fit the state dimension")
        if self.C.rows != self.D.rows:
            raise DimensionMismatch("C and D need the same number of rows")

    @property
    def t(self) -> float:
        return self.C.t


def _multi_indices(degree: int):
    for d in range(degree + 1):
        for a1 in range(d, -1, -1):
            for a2 in range(d - a1, -1, -1):
                yield (a1, a2, d - a1 - a2)


def mu_series_coeffs(r: MuRealization, degree: int) -> dict[tuple[int, int, int], HMatrix]:
    """Coefficients ``f_alpha`` with ``f_0 = D`` and ``f_alpha = C Y_alpha``.

    ``Y_{e_k} = B_k`` and ``Y_beta = sum_k A_k Y_{beta - e_k}`` collect every
    word of letters with the multiplicities ``beta``.
    """
    ys: dict[tuple[int, int, int], HMatrix] = {}
    out = {(0, 0, 0): r.D}
    for beta in _multi_indices(degree):
        if sum(beta) == 0:
            continue
        if sum(beta) == 1:
            ys[beta] = r.B[beta.index(1)]
        else:
            acc = None
            for k in range(3):
                if beta[k]:
                    prev = beta[:k] + (beta[k] - 1,) + beta[k + 1:]
                    if sum(prev) == 0:
                        continue
                    term = r.A[k] @ ys[prev]
                    acc = term if acc is None else acc + term
            ys[beta] = acc
        out[beta] = r.C @ ys[beta]
    return out


def mu_realization_eval(r: MuRealization, x: Sequence[float], t=None, trunc: int = 40) -> HMatrix:
    """Left evaluation ``sum_{|alpha| <= trunc} mu^alpha(x) f_alpha``.

    The guard ``sum_k ||mu_k(x)|| ||A_k|| < 1`` makes the series converge.
    """
    from .fueter import mu  # local import: fueter builds on this module

    t = r.t if t is None else check_same_scale(float(t), r.t)
    mus = [mu(l, x, t) for l in (1, 2, 3)]
    rate = sum(m.norm(NormKind.OP) * mnorm_op(a) for m, a in zip(mus, r.A))
    if rate >= 1.0:
        raise NotContractive(f"sum ||mu_k|| ||A_k|| = {rate:.3g} >= 1")
    powers = []
    for m in mus:
        row = [HElem.real(t)]
        for _ in range(trunc):
            row.append(row[-1] * m)
        powers.append(row)
    total = None
    for (a1, a2, a3), f in mu_series_coeffs(r, trunc).items():
        term = (powers[0][a1] * powers[1][a2] * powers[2][a3]) * f
        total = term if total is None else total + term
    return total
