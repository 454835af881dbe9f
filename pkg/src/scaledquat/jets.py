"""Truncated multivariate Taylor jets with H_t values.

A jet of order ``K`` at a point ``x`` of R^4 stores the Taylor
coefficients ``c_beta`` of ``f(x + h) = sum_{|beta| <= K} c_beta h^beta``.
Ring operations follow the Leibniz rule exactly, so derivatives come out
correct up to rounding.  Coefficient arrays carry optional trailing batch
axes; an order-0 jet is just a batch of H_t values.
"""

from __future__ import annotations

import functools
import math
from itertools import product as _cartesian
from typing import Sequence

import numpy as np

from .errors import HTError, NonInvertible
from .hypercomplex import AdjointKind, HElem, _is_real_scalar, check_same_scale, hmul, norm_op_arrays, validate_scale

__all__ = ["Jet", "monomials", "derivative_partials", "finite_difference_partials"]

NVARS = 4


@functools.lru_cache(maxsize=None)
def monomials(order: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples in four variables of total degree ``<= order``, graded."""
    exps = [e for e in _cartesian(range(order + 1), repeat=NVARS) if sum(e) <= order]
    exps.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return tuple(exps)


@functools.lru_cache(maxsize=None)
def _tables(order: int):
    exps = monomials(order)
    index = {e: n for n, e in enumerate(exps)}
    i1, i2, io = [], [], []
    for n1, e1 in enumerate(exps):
        for n2, e2 in enumerate(exps):
            e = tuple(x + y for x, y in zip(e1, e2))
            if sum(e) <= order:
                i1.append(n1)
                i2.append(n2)
                io.append(index[e])
    return index, np.array(i1), np.array(i2), np.array(io)


@functools.lru_cache(maxsize=None)
def _partial_table(order: int, var: int):
    """For ``d/dx_var``: source indices in the order-``order`` table and their factors."""
    index, _, _, _ = _tables(order)
    src, fac = [], []
    for e in monomials(order - 1):
        up = e[:var] + (e[var] + 1,) + e[var + 1:]
        src.append(index[up])
        fac.append(float(up[var]))
    return np.array(src), np.array(fac)


class Jet:
    """Order-``K`` jet with H_t-valued coefficients (arrays ``(M, *batch)``)."""

    __slots__ = ("t", "order", "a", "b")

    def __init__(self, t, order: int, a, b):
        self.t = validate_scale(t)
        self.order = int(order)
        self.a = np.asarray(a, dtype=complex)
        self.b = np.asarray(b, dtype=complex)
        if self.a.shape != self.b.shape or self.a.shape[0] != len(monomials(self.order)):
            raise HTError(f"jet arrays {self.a.shape} do not match order {order}")

    # constructors ----------------------------------------------------------

    @classmethod
    def constant(cls, q: HElem, order: int, batch_shape=()) -> "Jet":
        size = len(monomials(order))
        a = np.zeros((size,) + tuple(batch_shape), dtype=complex)
        b = np.zeros_like(a)
        a[0], b[0] = q.a, q.b
        return cls(q.t, order, a, b)

    @classmethod
    def variables(cls, point: Sequence, t, order: int) -> tuple["Jet", ...]:
        """The four real coordinate functions expanded around ``point``.

        ``point`` entries may be floats or equally shaped arrays (a batch).
        """
        coords = [np.asarray(p, dtype=float) for p in point]
        if len(coords) != NVARS:
            raise HTError("a point needs four coordinates")
        batch = np.broadcast_shapes(*(c.shape for c in coords))
        index, _, _, _ = _tables(order)
        out = []
        for l, c in enumerate(coords):
            a = np.zeros((len(index),) + batch, dtype=complex)
            a[0] = c
            if order >= 1:
                e = tuple(1 if m == l else 0 for m in range(NVARS))
                a[index[e]] = 1.0
            out.append(cls(t, order, a, np.zeros_like(a)))
        return tuple(out)

    # views -----------------------------------------------------------------

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.a.shape[1:]

    def coeff(self, exponent: Sequence[int]) -> "Jet":
        """Taylor coefficient as an order-0 jet (a batch of values)."""
        index, _, _, _ = _tables(self.order)
        e = tuple(int(x) for x in exponent)
        if sum(e) > self.order:
            raise HTError(f"exponent {e} exceeds jet order {self.order}")
        n = index[e]
        return Jet(self.t, 0, self.a[n:n + 1], self.b[n:n + 1])

    def derivative(self, exponent: Sequence[int]) -> "Jet":
        """Partial derivative ``d^beta f`` at the expansion point."""
        scale = math.prod(math.factorial(int(x)) for x in exponent)
        return self.coeff(exponent) * float(scale)

    def partial(self, var: int) -> "Jet":
        """Jet of ``d f / d x_var``, one order lower."""
        if self.order == 0:
            raise HTError("an order-0 jet has no derivatives")
        src, fac = _partial_table(self.order, int(var))
        fac = fac.reshape((-1,) + (1,) * len(self.batch_shape))
        return Jet(self.t, self.order - 1, self.a[src] * fac, self.b[src] * fac)

    def truncate(self, order: int) -> "Jet":
        """Drop every coefficient above ``order``."""
        if order > self.order:
            raise HTError("cannot raise the order of a jet")
        size = len(monomials(order))
        return Jet(self.t, order, self.a[:size], self.b[:size])

    def value(self) -> "Jet":
        return self.coeff((0,) * NVARS)

    def to_helem(self) -> HElem:
        if self.batch_shape != ():
            raise HTError("batched jet has no single value")
        return HElem(self.t, self.a[0], self.b[0])

    def op_norm(self) -> np.ndarray:
        """Operator norm of the value, elementwise over the batch."""
        return norm_op_arrays(self.a[0], self.b[0], self.t)

    def __repr__(self) -> str:
        return f"Jet(t={self.t:g}, order={self.order}, batch={self.batch_shape})"

    # arithmetic ------------------------------------------------------------

    def _lift(self, other) -> "Jet | None":
        if isinstance(other, Jet):
            check_same_scale(self.t, other.t)
            if other.order != self.order:
                raise HTError("jets of different orders")
            return other
        if isinstance(other, HElem):
            check_same_scale(self.t, other.t)
            return Jet.constant(other, self.order, self.batch_shape)
        if _is_real_scalar(other):
            return Jet.constant(HElem.real(self.t, float(other)), self.order, self.batch_shape)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(self.t, self.order, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(self.t, self.order, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(self.t, self.order, o.a - self.a, o.b - self.b)

    def __neg__(self):
        return Jet(self.t, self.order, -self.a, -self.b)

    def _product(self, left: "Jet", right: "Jet") -> "Jet":
        _, i1, i2, io = _tables(self.order)
        pa, pb = hmul(left.a[i1], left.b[i1], right.a[i2], right.b[i2], self.t)
        a = np.zeros(np.broadcast_shapes(left.a.shape, right.a.shape), dtype=complex)
        b = np.zeros_like(a)
        np.add.at(a, io, pa)
        np.add.at(b, io, pb)
        return Jet(self.t, self.order, a, b)

    def __mul__(self, other):
        if _is_real_scalar(other):
            return Jet(self.t, self.order, self.a * float(other), self.b * float(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._product(self, o)

    def __rmul__(self, other):
        if _is_real_scalar(other):
            return Jet(self.t, self.order, self.a * float(other), self.b * float(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._product(o, self)

    def __truediv__(self, other):
        if _is_real_scalar(other):
            return Jet(self.t, self.order, self.a / float(other), self.b / float(other))
        return NotImplemented

    def adjoint(self, kind: AdjointKind = AdjointKind.CIRCLED) -> "Jet":
        if kind is AdjointKind.CIRCLED:
            return Jet(self.t, self.order, self.a.conj(), -self.b)
        if kind is AdjointKind.BRACKET:
            return Jet(self.t, self.order, self.a, self.b.conj())
        raise HTError(f"jet adjoint needs CIRCLED or BRACKET, got {kind!r}")

    def det(self) -> "Jet":
        """The real jet ``q q^circled``."""
        d = self * self.adjoint(AdjointKind.CIRCLED)
        return Jet(self.t, self.order, d.a.real.astype(complex), np.zeros_like(d.b))

    def inverse(self, tol: float = 0.0) -> "Jet":
        """``q^{-1} = q^circled / det(q)`` with the real reciprocal expanded as a finite geometric sum."""
        d = self.det()
        d0 = d.a[0].real
        if np.any(np.abs(d0) <= tol):
            raise NonInvertible("jet value has vanishing determinant")
        eps_a = d.a / d0
        eps_a[0] -= 1.0
        eps = Jet(self.t, self.order, eps_a, d.b)
        recip = Jet.constant(HElem.real(self.t), self.order, self.batch_shape)
        power = recip
        for _ in range(self.order):
            power = power * (-eps)
            recip = recip + power
        recip = Jet(self.t, self.order, recip.a / d0, recip.b)
        return self.adjoint(AdjointKind.CIRCLED) * recip


def derivative_partials(f, point: Sequence[float], t, order: int = 2) -> dict[tuple[int, ...], HElem]:
    """All partial derivatives of ``f`` up to ``order`` at an unbatched point."""
    jet = f(Jet.variables(point, t, order))
    if isinstance(jet, HElem):
        jet = Jet.constant(jet, order)
    return {e: jet.derivative(e).to_helem() for e in monomials(order)}


def finite_difference_partials(f, point: Sequence[float], t, h: float = 1e-5,
                               h2: float = 1e-4) -> dict[tuple[int, ...], HElem]:
    """Central differences for first and second partials (the jet validator).

    First partials use step ``h``.  Second partials use the larger step
    ``h2``: their rounding error grows like ``eps / h2**2``, which at
    ``1e-5`` would already be near ``1e-5`` relative.
    """
    x = np.asarray(point, dtype=float)

    def at(shift):
        val = f(tuple(float(v) for v in x + shift))
        return val if isinstance(val, HElem) else HElem.real(t, float(val))

    out: dict[tuple[int, ...], HElem] = {}
    eye = np.eye(NVARS)
    f0 = at(np.zeros(NVARS))
    out[(0,) * NVARS] = f0
    for l in range(NVARS):
        e = tuple(int(v) for v in eye[l])
        out[e] = (at(h * eye[l]) - at(-h * eye[l])) / (2 * h)
        fp, fm = at(h2 * eye[l]), at(-h2 * eye[l])
        out[tuple(2 * v for v in e)] = (fp - 2.0 * f0 + fm) / (h2 * h2)
        for m in range(l + 1, NVARS):
            pp = at(h2 * (eye[l] + eye[m]))
            pm = at(h2 * (eye[l] - eye[m]))
            mp = at(h2 * (-eye[l] + eye[m]))
            mm = at(-h2 * (eye[l] + eye[m]))
            out[tuple(int(v) for v in eye[l] + eye[m])] = (pp - pm - mp + mm) / (4 * h2 * h2)
    return out
