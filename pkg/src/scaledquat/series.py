"""Truncated left power series ``sum_n q^n f_n`` in one H_t variable.

Coefficients are stored as two complex arrays of shape ``(N, p, m)``; a
scalar series has ``p = m = 1``.  ``N`` is the truncation order: the
coefficients of ``q^0 .. q^(N-1)`` are known and nothing beyond.  Binary
operations keep the smaller order so the tail is never invented.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, HTError, NonInvertible, NonInvertibleConstantTerm
from .hypercomplex import (
    AdjointKind,
    HElem,
    NormKind,
    _is_real_scalar,
    check_same_scale,
    det,
    hmul,
    inverse,
    re,
    validate_scale,
)
from .htmatrix import HMatrix, minvert

__all__ = [
    "DEFAULT_TRUNC",
    "PowerSeries",
    "star_mul",
    "star_inverse",
    "star_inverse_neumann",
    "eval_series",
    "conj_series",
    "backward_shift",
    "eval_real",
    "geo_closed_form",
    "geo_partial_sum",
    "geo_tail_bound",
    "is_real_series",
    "real_restriction_bound",
    "hardy_kernel",
    "series_distance",
]

DEFAULT_TRUNC = 64


def _stack_mul(a1, b1, a2, b2, t):
    """Matrix products of stacked coefficient arrays ``(..., p, r) @ (..., r, m)``."""
    return a1 @ a2 + t * (b1 @ b2.conj()), a1 @ b2 + b1 @ a2.conj()


class PowerSeries:
    """Immutable truncated series with H_t (or H_t matrix) coefficients."""

    __slots__ = ("t", "a", "b")

    def __init__(self, t, a, b):
        t = validate_scale(t)
        a = np.array(a, dtype=complex)
        b = np.array(b, dtype=complex)
        if a.ndim == 1:
            a, b = a[:, None, None], b[:, None, None]
        if a.ndim != 3 or a.shape != b.shape or a.shape[0] == 0:
            raise DimensionMismatch(f"coefficient arrays must be (N, p, m), got {a.shape}, {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise HTError("series coefficients must be finite")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("PowerSeries is immutable")

    # constructors ----------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, trunc: int | None = None) -> "PowerSeries":
        """Build from a list of :class:`HElem` or :class:`HMatrix`, padding with zeros."""
        coeffs = list(coeffs)
        if not coeffs:
            raise HTError("need at least one coefficient")
        t = check_same_scale(*(c.t for c in coeffs))
        trunc = len(coeffs) if trunc is None else int(trunc)
        if trunc < 1:
            raise HTError("truncation order must be positive")
        mats = [HMatrix.scalar(c) if isinstance(c, HElem) else c for c in coeffs[:trunc]]
        shape = mats[0].shape
        if any(m.shape != shape for m in mats):
            raise DimensionMismatch("coefficients must share one shape")
        a = np.zeros((trunc,) + shape, dtype=complex)
        b = np.zeros_like(a)
        for n, m in enumerate(mats):
            a[n], b[n] = m.a, m.b
        return cls(t, a, b)

    @classmethod
    def constant(cls, c, trunc: int = DEFAULT_TRUNC) -> "PowerSeries":
        return cls.from_coeffs([c], trunc)

    @classmethod
    def one(cls, t, trunc: int = DEFAULT_TRUNC) -> "PowerSeries":
        return cls.constant(HElem.real(t), trunc)

    @classmethod
    def monomial(cls, t, n: int, c: HElem | None = None, trunc: int = DEFAULT_TRUNC) -> "PowerSeries":
        """``q^n c`` (``c`` defaults to 1)."""
        c = HElem.real(t) if c is None else c
        zero = HElem(t)
        return cls.from_coeffs([zero] * n + [c], trunc)

    # views -----------------------------------------------------------------

    @property
    def trunc(self) -> int:
        return self.a.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape[1:]

    @property
    def is_scalar(self) -> bool:
        return self.shape == (1, 1)

    def coeff(self, n: int):
        """Coefficient of ``q^n``; zero past the truncation order."""
        if n >= self.trunc:
            a = np.zeros(self.shape, dtype=complex)
            b = a
        else:
            a, b = self.a[n], self.b[n]
        if self.is_scalar:
            return HElem(self.t, a[0, 0], b[0, 0])
        return HMatrix(self.t, a, b)

    def coeffs(self) -> list:
        return [self.coeff(n) for n in range(self.trunc)]

    def with_trunc(self, trunc: int) -> "PowerSeries":
        trunc = int(trunc)
        if trunc <= self.trunc:
            return PowerSeries(self.t, self.a[:trunc], self.b[:trunc])
        pad = np.zeros((trunc - self.trunc,) + self.shape, dtype=complex)
        return PowerSeries(self.t, np.concatenate([self.a, pad]), np.concatenate([self.b, pad]))

    def coeff_norms(self) -> np.ndarray:
        """Operator norm of each coefficient (largest entry norm for matrices)."""
        out = np.empty(self.trunc)
        for n in range(self.trunc):
            c = self.coeff(n)
            out[n] = c.norm(NormKind.OP) if isinstance(c, HElem) else c.max_entry_norm()
        return out

    def to_json(self) -> dict:
        return {"t": self.t, "trunc": self.trunc, "coeffs": [c.to_json() for c in self.coeffs()]}

    @classmethod
    def from_json(cls, data) -> "PowerSeries":
        try:
            raw = data["coeffs"]
            coeffs = [HMatrix.from_json(c) if "rows" in c else HElem.from_json(c) for c in raw]
            series = cls.from_coeffs(coeffs, int(data.get("trunc", len(coeffs))))
        except (KeyError, TypeError) as exc:
            raise HTError(f"malformed series payload: {data!r}") from exc
        check_same_scale(validate_scale(data["t"]), series.t)
        return series

    def __repr__(self) -> str:
        return f"PowerSeries(t={self.t:g}, trunc={self.trunc}, shape={self.shape})"

    # arithmetic ------------------------------------------------------------

    def _align(self, other: "PowerSeries") -> int:
        check_same_scale(self.t, other.t)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return min(self.trunc, other.trunc)

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = self._align(other)
        return PowerSeries(self.t, self.a[:n] + other.a[:n], self.b[:n] + other.b[:n])

    def __sub__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = self._align(other)
        return PowerSeries(self.t, self.a[:n] - other.a[:n], self.b[:n] - other.b[:n])

    def __neg__(self):
        return PowerSeries(self.t, -self.a, -self.b)

    def __mul__(self, other):
        """``f * g`` is the star product; ``f * c`` multiplies every coefficient on the right."""
        if isinstance(other, PowerSeries):
            return star_mul(self, other)
        if isinstance(other, (HElem, HMatrix)):
            check_same_scale(self.t, other.t)
            ca, cb = (np.array([[other.a]]), np.array([[other.b]])) if isinstance(other, HElem) else (other.a, other.b)
            if self.shape[1] != ca.shape[0]:
                raise DimensionMismatch(f"{self.shape} times {ca.shape}")
            return PowerSeries(self.t, *_stack_mul(self.a, self.b, ca, cb, self.t))
        if _is_real_scalar(other):
            return PowerSeries(self.t, self.a * float(other), self.b * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (HElem, HMatrix)):
            check_same_scale(self.t, other.t)
            ca, cb = (np.array([[other.a]]), np.array([[other.b]])) if isinstance(other, HElem) else (other.a, other.b)
            if ca.shape[1] != self.shape[0]:
                raise DimensionMismatch(f"{ca.shape} times {self.shape}")
            return PowerSeries(self.t, *_stack_mul(ca, cb, self.a, self.b, self.t))
        if _is_real_scalar(other):
            return PowerSeries(self.t, self.a * float(other), self.b * float(other))
        return NotImplemented

    def __call__(self, q: HElem):
        return eval_series(self, q)

    def adjoint(self, kind: AdjointKind = AdjointKind.CIRCLED) -> "PowerSeries":
        return conj_series(self, kind)


def star_mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product ``(f * g)_n = sum_{k<=n} f_{n-k} g_k`` (order kept)."""
    check_same_scale(f.t, g.t)
    if f.shape[1] != g.shape[0]:
        raise DimensionMismatch(f"cannot star-multiply {f.shape} by {g.shape}")
    n, t = min(f.trunc, g.trunc), f.t
    if f.is_scalar and g.is_scalar:
        fa, fb = f.a[:n, 0, 0], f.b[:n, 0, 0]
        ga, gb = g.a[:n, 0, 0], g.b[:n, 0, 0]
        a = np.convolve(fa, ga)[:n] + t * np.convolve(fb, gb.conj())[:n]
        b = np.convolve(fa, gb)[:n] + np.convolve(fb, ga.conj())[:n]
        return PowerSeries(t, a, b)
    p, m = f.shape[0], g.shape[1]
    a = np.zeros((n, p, m), dtype=complex)
    b = np.zeros_like(a)
    for k in range(n):
        pa, pb = _stack_mul(f.a[k::-1], f.b[k::-1], g.a[:k + 1], g.b[:k + 1], t)
        a[k], b[k] = pa.sum(axis=0), pb.sum(axis=0)
    return PowerSeries(t, a, b)


def _invert_constant(c, tol):
    try:
        if isinstance(c, HElem):
            return HMatrix.scalar(inverse(c, tol))
        return minvert(c, tol)
    except NonInvertible as exc:
        raise NonInvertibleConstantTerm(str(exc)) from exc


def star_inverse(f: PowerSeries, tol: float | None = None) -> PowerSeries:
    """Two-sided star inverse by the triangular recursion on coefficients.

    ``g_0 = f_0^{-1}`` and ``g_n = -f_0^{-1} sum_{k<n} f_{n-k} g_k``.  Any
    invertible constant term is allowed, not only the unit.
    """
    if f.shape[0] != f.shape[1]:
        raise DimensionMismatch("only square-valued series can be inverted")
    inv0 = _invert_constant(f.coeff(0), tol)
    n, t = f.trunc, f.t
    a = np.zeros_like(f.a)
    b = np.zeros_like(f.b)
    a[0], b[0] = inv0.a, inv0.b
    for k in range(1, n):
        pa, pb = _stack_mul(f.a[k:0:-1], f.b[k:0:-1], a[:k], b[:k], t)
        sa, sb = pa.sum(axis=0), pb.sum(axis=0)
        ra, rb = _stack_mul(inv0.a, inv0.b, sa, sb, t)
        a[k], b[k] = -ra, -rb
    return PowerSeries(t, a, b)


def star_inverse_neumann(f: PowerSeries, tol: float | None = None) -> PowerSeries:
    """Reference inverse ``f_0^{-1} sum_n g^{*n}`` where ``f = (1 - g) f_0``.

    Cubic cost; kept as an independent cross-check of :func:`star_inverse`.
    """
    inv0 = _invert_constant(f.coeff(0), tol)
    h = f * inv0
    eye = PowerSeries.constant(HMatrix.identity(f.t, f.shape[0]) if not f.is_scalar else HElem.real(f.t), f.trunc)
    g = eye - h
    total, power = eye, eye
    for _ in range(1, f.trunc):
        power = star_mul(power, g)
        total = total + power
    return (inv0.to_elem() if f.is_scalar else inv0) * total


def eval_series(f: PowerSeries, q: HElem):
    """Left evaluation ``sum_n q^n f_n`` by Horner's rule ``f_0 + q (f_1 + q (...))``."""
    check_same_scale(f.t, q.t)
    acc_a, acc_b = f.a[-1], f.b[-1]
    for n in range(f.trunc - 2, -1, -1):
        la, lb = hmul(q.a, q.b, acc_a, acc_b, f.t)
        acc_a, acc_b = f.a[n] + la, f.b[n] + lb
    if f.is_scalar:
        return HElem(f.t, acc_a[0, 0], acc_b[0, 0])
    return HMatrix(f.t, acc_a, acc_b)


def eval_real(f: PowerSeries, x: float):
    """Evaluation at the real point ``x * 1``."""
    return eval_series(f, HElem.real(f.t, x))


def conj_series(f: PowerSeries, kind: AdjointKind = AdjointKind.CIRCLED) -> PowerSeries:
    """Coefficientwise adjoint (transposing matrix coefficients)."""
    at, bt = np.swapaxes(f.a, 1, 2), np.swapaxes(f.b, 1, 2)
    if kind is AdjointKind.CIRCLED:
        return PowerSeries(f.t, at.conj(), -bt)
    if kind is AdjointKind.BRACKET:
        return PowerSeries(f.t, at, bt.conj())
    raise HTError(f"series adjoint needs CIRCLED or BRACKET, got {kind!r}")


def backward_shift(f: PowerSeries) -> PowerSeries:
    """``R_0 f = sum_n q^n f_{n+1}``; the order drops by one (kept >= 1)."""
    if f.trunc == 1:
        z = np.zeros_like(f.a)
        return PowerSeries(f.t, z, z)
    return PowerSeries(f.t, f.a[1:], f.b[1:])


def series_distance(f: PowerSeries, g: PowerSeries) -> float:
    """Largest coefficient norm of ``f - g`` over the common order."""
    return float(np.max((f - g).coeff_norms()))


def geo_closed_form(q: HElem, p: HElem) -> HElem:
    """``sum_n q^n p^n = (1 - q^c p) (det(q) p^2 - 2 re(q) p + 1)^{-1}``."""
    check_same_scale(q.t, p.t)
    if q.norm() * p.norm() >= 1.0:
        raise HTError("closed form requires ||q|| ||p|| < 1")
    one = HElem.real(q.t)
    quad = det(q) * (p * p) - 2.0 * re(q) * p + one
    return (one - q.adjoint(AdjointKind.CIRCLED) * p) * inverse(quad)


def geo_partial_sum(q: HElem, p: HElem, terms: int) -> HElem:
    """``sum_{n < terms} q^n p^n`` computed term by term."""
    check_same_scale(q.t, p.t)
    total = HElem(q.t)
    qn, pn = HElem.real(q.t), HElem.real(q.t)
    for _ in range(terms):
        total = total + qn * pn
        qn, pn = qn * q, pn * p
    return total


def geo_tail_bound(q: HElem, p: HElem, terms: int) -> float:
    r = q.norm() * p.norm()
    return r ** terms / (1.0 - r)


def hardy_kernel(q: HElem, p: HElem, trunc: int = DEFAULT_TRUNC) -> HElem:
    """``K(q, p) = sum_{n < trunc} q^n (p^c)^n``."""
    if q.norm() * p.norm() >= 1.0:
        raise HTError("kernel sum requires ||q|| ||p|| < 1")
    return geo_partial_sum(q, p.adjoint(AdjointKind.CIRCLED), trunc)


def real_restriction_bound(f: PowerSeries, x: float) -> float:
    """Crude bound ``sum |x|^n ||f_n||`` used to size relative tolerances."""
    norms = f.coeff_norms()
    return float(np.sum(norms * np.abs(x) ** np.arange(f.trunc)))


def is_real_series(f: PowerSeries, tol: float) -> bool:
    """Whether every coefficient has vanishing ``b`` part and real ``a`` part."""
    return bool(np.all(np.abs(f.b) <= tol) and np.all(np.abs(f.a.imag) <= tol))

