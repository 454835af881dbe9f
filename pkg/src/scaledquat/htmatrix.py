"""Rectangular matrices over H_t.

A matrix keeps two complex arrays ``a`` and ``b`` of equal shape; entry
``(u, v)`` is the element ``(a[u, v], b[u, v])``.  The complex embedding
``[[a, t*b], [conj(b), conj(a)]]`` (blocks of the full arrays) is a ring
homomorphism, which is what the operator norm is measured on.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    HTError,
    NoInvertiblePivot,
    NonInvertible,
    NotContractive,
)
from .hypercomplex import (
    AdjointKind,
    HElem,
    NormKind,
    _is_real_scalar,
    check_same_scale,
    hmul,
    inverse,
    validate_scale,
)

__all__ = [
    "HMatrix",
    "madjoint",
    "minvert",
    "mnorm_op",
    "stein_solve",
    "stein_residual",
    "gram_points",
    "block",
    "distance",
]


class HMatrix:
    """Immutable ``rows x cols`` matrix with entries in H_t."""

    __slots__ = ("t", "a", "b")

    def __init__(self, t, a, b):
        t = validate_scale(t)
        a = np.array(a, dtype=complex, ndmin=2)
        b = np.array(b, dtype=complex, ndmin=2)
        if a.ndim != 2 or a.shape != b.shape or 0 in a.shape:
            raise DimensionMismatch(f"bad component shapes {a.shape} and {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise HTError("matrix entries must be finite")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("HMatrix is immutable")

    # constructors ----------------------------------------------------------

    @classmethod
    def from_elems(cls, rows: Sequence[Sequence[HElem]]) -> "HMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged or empty entry table")
        t = check_same_scale(*(e.t for r in rows for e in r))
        return cls(t, [[e.a for e in r] for r in rows], [[e.b for e in r] for r in rows])

    @classmethod
    def from_entries(cls, t, rows: int, cols: int, entries: Sequence[HElem]) -> "HMatrix":
        entries = list(entries)
        if rows * cols != len(entries) or rows <= 0 or cols <= 0:
            raise DimensionMismatch(f"{rows}x{cols} needs {rows * cols} entries, got {len(entries)}")
        check_same_scale(validate_scale(t), *(e.t for e in entries))
        return cls.from_elems([entries[r * cols:(r + 1) * cols] for r in range(rows)])

    @classmethod
    def scalar(cls, q: HElem) -> "HMatrix":
        return cls(q.t, [[q.a]], [[q.b]])

    @classmethod
    def identity(cls, t, n: int) -> "HMatrix":
        return cls(t, np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex))

    @classmethod
    def zeros(cls, t, rows: int, cols: int) -> "HMatrix":
        z = np.zeros((rows, cols), dtype=complex)
        return cls(t, z, z)

    @classmethod
    def ones(cls, t, rows: int, cols: int) -> "HMatrix":
        return cls(t, np.ones((rows, cols), dtype=complex), np.zeros((rows, cols), dtype=complex))

    @classmethod
    def diag(cls, elems: Sequence[HElem]) -> "HMatrix":
        elems = list(elems)
        t = check_same_scale(*(e.t for e in elems))
        return cls(t, np.diag([e.a for e in elems]), np.diag([e.b for e in elems]))

    # views -----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __getitem__(self, idx):
        u, v = idx
        if isinstance(u, slice) or isinstance(v, slice):
            return HMatrix(self.t, np.atleast_2d(self.a[u, v]), np.atleast_2d(self.b[u, v]))
        return HElem(self.t, self.a[u, v], self.b[u, v])

    def entries(self) -> list[HElem]:
        return [HElem(self.t, a, b) for a, b in zip(self.a.ravel(), self.b.ravel())]

    def to_elem(self) -> HElem:
        if self.shape != (1, 1):
            raise DimensionMismatch(f"expected 1x1, got {self.shape}")
        return self[0, 0]

    def embedding(self) -> np.ndarray:
        return np.block([[self.a, self.t * self.b], [self.b.conj(), self.a.conj()]])

    def fro(self) -> float:
        """Frobenius norm of the complex embedding (cheap size measure)."""
        return float(np.linalg.norm(self.embedding()))

    def max_entry_norm(self) -> float:
        return max(e.norm(NormKind.OP) for e in self.entries())

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [e.to_json() for e in self.entries()],
        }

    @classmethod
    def from_json(cls, data) -> "HMatrix":
        try:
            entries = [HElem.from_json(e) for e in data["entries"]]
            return cls.from_entries(data["t"], int(data["rows"]), int(data["cols"]), entries)
        except (KeyError, TypeError) as exc:
            raise HTError(f"malformed matrix payload: {data!r}") from exc

    def __repr__(self) -> str:
        return f"HMatrix(t={self.t:g}, shape={self.shape})"

    # arithmetic ------------------------------------------------------------

    def _check(self, other: "HMatrix", same_shape=True) -> None:
        check_same_scale(self.t, other.t)
        if same_shape and self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, HMatrix):
            return NotImplemented
        self._check(other)
        return HMatrix(self.t, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        if not isinstance(other, HMatrix):
            return NotImplemented
        self._check(other)
        return HMatrix(self.t, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return HMatrix(self.t, -self.a, -self.b)

    def __matmul__(self, other):
        if not isinstance(other, HMatrix):
            return NotImplemented
        self._check(other, same_shape=False)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        a = self.a @ other.a + self.t * (self.b @ other.b.conj())
        b = self.a @ other.b + self.b @ other.a.conj()
        return HMatrix(self.t, a, b)

    def __mul__(self, other):
        if isinstance(other, HElem):
            check_same_scale(self.t, other.t)
            return HMatrix(self.t, *hmul(self.a, self.b, other.a, other.b, self.t))
        if _is_real_scalar(other):
            return HMatrix(self.t, self.a * float(other), self.b * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, HElem):
            check_same_scale(self.t, other.t)
            return HMatrix(self.t, *hmul(other.a, other.b, self.a, self.b, self.t))
        if _is_real_scalar(other):
            return HMatrix(self.t, self.a * float(other), self.b * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if _is_real_scalar(other):
            return HMatrix(self.t, self.a / float(other), self.b / float(other))
        return NotImplemented

    def adjoint(self, kind: AdjointKind = AdjointKind.CIRCLED) -> "HMatrix":
        return madjoint(self, kind)

    def power(self, n: int) -> "HMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        out, base = HMatrix.identity(self.t, self.rows), self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def allclose(self, other: "HMatrix", atol: float) -> bool:
        return distance(self, other) <= atol


def distance(m1: HMatrix, m2: HMatrix) -> float:
    """Largest entrywise operator-norm difference."""
    return (m1 - m2).max_entry_norm()


def block(rows: Sequence[Sequence[HMatrix]]) -> HMatrix:
    t = check_same_scale(*(m.t for r in rows for m in r))
    a = np.block([[m.a for m in r] for r in rows])
    b = np.block([[m.b for m in r] for r in rows])
    return HMatrix(t, a, b)


def madjoint(m: HMatrix, kind: AdjointKind = AdjointKind.CIRCLED) -> HMatrix:
    """Transpose combined with the entrywise adjoint."""
    if kind is AdjointKind.CIRCLED:
        return HMatrix(m.t, m.a.conj().T, -m.b.T)
    if kind is AdjointKind.BRACKET:
        return HMatrix(m.t, m.a.T, m.b.conj().T)
    raise HTError(f"matrix adjoint needs CIRCLED or BRACKET, got {kind!r}")


def mnorm_op(m: HMatrix, rtol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Spectral norm of the complex embedding by power iteration on ``E^H E``."""
    e = m.embedding()
    gram = e.conj().T @ e
    v = gram @ np.ones(gram.shape[0], dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        # the all-ones direction may be annihilated; restart from a fixed sweep
        v = gram @ np.exp(1j * np.arange(gram.shape[0]))
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return 0.0
    v = v / nv
    lam = 0.0
    for _ in range(max_iter):
        w = gram @ v
        lam = float(np.real(np.vdot(v, w)))
        if np.linalg.norm(w - lam * v) <= rtol * max(lam, np.finfo(float).tiny):
            break
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
    return math.sqrt(max(lam, 0.0))


def _split_invert(m: HMatrix, tol, leading_first: bool) -> HMatrix:
    n = m.rows
    if n == 1:
        return HMatrix.scalar(inverse(m[0, 0], tol))
    k = (n + 1) // 2
    a11, a12 = m[:k, :k], m[:k, k:]
    a21, a22 = m[k:, :k], m[k:, k:]
    attempts = ("leading", "trailing") if leading_first else ("trailing", "leading")
    for which in attempts:
        try:
            if which == "leading":
                x = _split_invert(a11, tol, True)
                s = _split_invert(a22 - a21 @ x @ a12, tol, True)
                xb = x @ a12
                cx = a21 @ x
                return block([[x + xb @ s @ cx, -(xb @ s)], [-(s @ cx), s]])
            y = _split_invert(a22, tol, True)
            s = _split_invert(a11 - a12 @ y @ a21, tol, True)
            by = a12 @ y
            yc = y @ a21
            return block([[s, -(s @ by)], [-(yc @ s), y + yc @ s @ by]])
        except NonInvertible:
            continue
    raise NonInvertible("no invertible pivot block")


def minvert(m: HMatrix, tol: float | None = None, rtol: float = 1e-9) -> HMatrix:
    """Inverse by recursive 2x2 block Schur complements.

    Splits at ``ceil(N/2)``, tries the leading pivot block first and falls
    back to the trailing one.  The result must satisfy both
    ``M X = I`` and ``X M = I`` to ``rtol * ||M|| * ||X||``; otherwise the
    other pivot order is tried before giving up.
    """
    if m.rows != m.cols:
        raise DimensionMismatch(f"cannot invert a {m.shape} matrix")
    eye = HMatrix.identity(m.t, m.rows)
    norm_m = mnorm_op(m)
    for leading_first in (True, False):
        try:
            x = _split_invert(m, tol, leading_first)
        except NonInvertible:
            continue
        bound = rtol * max(1.0, norm_m * mnorm_op(x))
        # Frobenius norms bound the spectral residuals from above
        if (m @ x - eye).fro() <= bound and (x @ m - eye).fro() <= bound:
            return x
    raise NoInvertiblePivot(f"no block pivot inverts this {m.shape} matrix")


def stein_solve(a: HMatrix, c: HMatrix, kind: AdjointKind = AdjointKind.CIRCLED,
                rtol: float = 1e-15, max_terms: int = 200_000) -> HMatrix:
    """Solve ``G - A^k G A = C^k C`` by summing ``sum_n (A^k)^n C^k C A^n``."""
    if a.rows != a.cols or c.cols != a.rows:
        raise DimensionMismatch(f"A {a.shape} and C {c.shape} are incompatible")
    check_same_scale(a.t, c.t)
    # power iteration can land a hair below 1 for an isometry
    if mnorm_op(a) >= 1.0 - 1e-12:
        raise NotContractive("||A||_op >= 1; the Stein series diverges")
    ak = madjoint(a, kind)
    term = madjoint(c, kind) @ c
    g = term
    for _ in range(max_terms):
        term = ak @ term @ a
        g = g + term
        if term.fro() < rtol * g.fro():
            return g
    raise NotContractive(f"Stein series did not settle after {max_terms} terms")


def stein_residual(g: HMatrix, a: HMatrix, c: HMatrix, kind: AdjointKind = AdjointKind.CIRCLED) -> float:
    """``max_entry || G - A^k G A - C^k C ||_op``."""
    r = g - madjoint(a, kind) @ g @ a - madjoint(c, kind) @ c
    return r.max_entry_norm()


def gram_points(points: Iterable[HElem], kind: AdjointKind = AdjointKind.CIRCLED) -> HMatrix:
    """``G[u, v] = sum_n a_u^n (a_v^k)^n`` for points in the open unit ball."""
    points = list(points)
    t = check_same_scale(*(p.t for p in points))
    for p in points:
        if p.norm(NormKind.OP) >= 1.0:
            raise NotContractive(f"{p!r} is not in the open unit ball")
    a = HMatrix.diag([p.adjoint(kind) for p in points])
    c = HMatrix.ones(t, 1, len(points))
    return stein_solve(a, c, kind)
