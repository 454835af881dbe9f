"""The four-dimensional real algebra H_t of scaled hypercomplex numbers.

An element is stored as a complex pair ``(a, b)`` standing for the 2x2
complex matrix ``[[a, t*b], [conj(b), conj(a)]]``.  With
``a = x0 + x1*i`` and ``b = x2 + x3*i`` the element reads
``x0 + x1*i + x2*j_t + x3*k_t`` where ``i**2 = -1`` and
``j_t**2 = k_t**2 = t``.  ``t = -1`` gives the quaternions and ``t = 1``
the split quaternions.

The array level helpers :func:`hmul`, :func:`circ_pair` and
:func:`bracket_pair` work on numpy arrays of ``a`` and ``b`` parts and are
reused by matrices, power series and jets.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .errors import HTError, NonInvertible, ScaleMismatch

__all__ = [
    "AdjointKind",
    "NormKind",
    "HElem",
    "validate_scale",
    "check_same_scale",
    "hmul",
    "circ_pair",
    "bracket_pair",
    "norm_op_arrays",
    "mul",
    "adjoint",
    "det",
    "re",
    "inverse",
    "norm",
    "form",
    "signature_operator",
    "signature_basis_gram",
    "symmetrized_power",
    "symmetrized_product",
    "sphere_contains",
    "basis",
    "cayley_table",
    "embedding",
    "unit_products",
]


class AdjointKind(enum.Enum):
    CIRCLED = "circled"
    BRACKET = "bracket"
    REGULAR = "regular"


class NormKind(enum.Enum):
    HS = "hs"
    OP = "op"
    EUCLID = "euclid"


def validate_scale(t) -> float:
    """Return ``t`` as a float, refusing zero and non-finite values."""
    t = float(t)
    if not math.isfinite(t) or t == 0.0:
        raise HTError(f"scale must be finite and non-zero, got {t!r}")
    return t


def check_same_scale(*ts: float) -> float:
    """Scales must agree bit for bit; there is no coercion between rings."""
    first = ts[0]
    for other in ts[1:]:
        if other != first:
            raise ScaleMismatch(f"scale {first!r} differs from {other!r}")
    return first


# ---------------------------------------------------------------------------
# array level primitives


def hmul(a1, b1, a2, b2, t):
    """Product of pairs ``(a1, b1) * (a2, b2)``; broadcasts over arrays."""
    return a1 * a2 + t * b1 * np.conjugate(b2), a1 * b2 + b1 * np.conjugate(a2)


def circ_pair(a, b):
    return np.conjugate(a), -b


def bracket_pair(a, b):
    return a, np.conjugate(b)


def norm_op_arrays(a, b, t):
    """Operator norm of ``(a, b)`` elementwise over arrays."""
    aa, bb = np.abs(a) ** 2, np.abs(b) ** 2
    root = np.sqrt(bb * bb * (1.0 - t * t) ** 2 + 4.0 * aa * bb * (1.0 + t) ** 2)
    return np.sqrt(np.maximum(0.0, (bb * (1.0 + t * t) + 2.0 * aa + root) / 2.0))


def _is_real_scalar(x) -> bool:
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# the element type


@dataclass(frozen=True)
class HElem:
    """One element of H_t.

    Instances are immutable.  ``+``, ``-`` and ``*`` work between elements
    of the same scale; ``*`` and ``/`` also accept real scalars.  Mixing
    scales raises :class:`ScaleMismatch`.
    """

    t: float
    a: complex = 0j
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "t", validate_scale(self.t))
        a, b = complex(self.a), complex(self.b)
        if not all(map(math.isfinite, (a.real, a.imag, b.real, b.imag))):
            raise HTError("components must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    # constructors -----------------------------------------------------------

    @classmethod
    def from_coords(cls, t, x0=0.0, x1=0.0, x2=0.0, x3=0.0) -> "HElem":
        return cls(t, complex(x0, x1), complex(x2, x3))

    @classmethod
    def real(cls, t, x=1.0) -> "HElem":
        return cls(t, complex(x), 0j)

    @classmethod
    def from_matrix(cls, t, m) -> "HElem":
        """Inverse of :meth:`to_matrix`; only the first row and column are read."""
        m = np.asarray(m, dtype=complex)
        return cls(t, m[0, 0], m[1, 0].conjugate())

    # views -----------------------------------------------------------------

    @property
    def coords(self) -> tuple[float, float, float, float]:
        return (self.a.real, self.a.imag, self.b.real, self.b.imag)

    def to_matrix(self) -> np.ndarray:
        a, b, t = self.a, self.b, self.t
        return np.array([[a, t * b], [b.conjugate(), a.conjugate()]])

    def to_json(self) -> dict:
        return {"t": self.t, "a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}

    @classmethod
    def from_json(cls, data) -> "HElem":
        try:
            a, b = data["a"], data["b"]
            return cls(data["t"], complex(float(a[0]), float(a[1])), complex(float(b[0]), float(b[1])))
        except (KeyError, IndexError, TypeError) as exc:
            raise HTError(f"malformed element payload: {data!r}") from exc

    def __repr__(self) -> str:
        x0, x1, x2, x3 = self.coords
        return f"HElem(t={self.t:g}: {x0:+.6g} {x1:+.6g}i {x2:+.6g}j {x3:+.6g}k)"

    # arithmetic ----------------------------------------------------------

    def _same(self, other: "HElem") -> None:
        check_same_scale(self.t, other.t)

    def __add__(self, other):
        if isinstance(other, HElem):
            self._same(other)
            return HElem(self.t, self.a + other.a, self.b + other.b)
        if _is_real_scalar(other):
            return HElem(self.t, self.a + float(other), self.b)
        return NotImplemented

    def __radd__(self, other):
        if _is_real_scalar(other):
            return HElem(self.t, self.a + float(other), self.b)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, HElem):
            self._same(other)
            return HElem(self.t, self.a - other.a, self.b - other.b)
        if _is_real_scalar(other):
            return HElem(self.t, self.a - float(other), self.b)
        return NotImplemented

    def __rsub__(self, other):
        if _is_real_scalar(other):
            return HElem(self.t, float(other) - self.a, -self.b)
        return NotImplemented

    def __neg__(self):
        return HElem(self.t, -self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, HElem):
            self._same(other)
            a, b = hmul(self.a, self.b, other.a, other.b, self.t)
            return HElem(self.t, a, b)
        if _is_real_scalar(other):
            return HElem(self.t, self.a * float(other), self.b * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if _is_real_scalar(other):
            return HElem(self.t, self.a * float(other), self.b * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if _is_real_scalar(other):
            return HElem(self.t, self.a / float(other), self.b / float(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, numbers.Integral) or n < 0:
            return NotImplemented
        out, base = HElem.real(self.t), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # algebra -------------------------------------------------------------

    def adjoint(self, kind: AdjointKind = AdjointKind.CIRCLED):
        return adjoint(self, kind)

    def det(self) -> float:
        return det(self)

    def re(self) -> float:
        return self.a.real

    def trace(self) -> float:
        """Trace of the 2x2 embedding."""
        return 2.0 * self.a.real

    def inverse(self, tol: float | None = None) -> "HElem":
        return inverse(self, tol)

    def norm(self, kind: NormKind = NormKind.OP) -> float:
        return norm(self, kind)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0


# ---------------------------------------------------------------------------
# functional API


def mul(p: HElem, q: HElem) -> HElem:
    return p * q


def adjoint(q: HElem, kind: AdjointKind = AdjointKind.CIRCLED):
    """``CIRCLED -> (conj a, -b)``, ``BRACKET -> (a, conj b)``.

    ``REGULAR`` returns the conjugate transpose of the 2x2 embedding as a
    raw complex matrix, because it leaves H_t unless ``|t| = 1``.
    """
    if kind is AdjointKind.CIRCLED:
        return HElem(q.t, q.a.conjugate(), -q.b)
    if kind is AdjointKind.BRACKET:
        return HElem(q.t, q.a, q.b.conjugate())
    if kind is AdjointKind.REGULAR:
        return q.to_matrix().conj().T
    raise HTError(f"unknown adjoint kind {kind!r}")


def det(q: HElem) -> float:
    return abs(q.a) ** 2 - q.t * abs(q.b) ** 2


def re(q: HElem) -> float:
    return q.a.real


def inverse(q: HElem, tol: float | None = None) -> HElem:
    """``q^{-1} = q^circled / det(q)``.

    The default threshold ``1e-12 * max(1, ||q||_op^2)`` follows the
    quadratic growth of the determinant.
    """
    d = det(q)
    if tol is None:
        tol = 1e-12 * max(1.0, norm(q, NormKind.OP) ** 2)
    if abs(d) <= tol:
        raise NonInvertible(f"|det| = {abs(d):.3e} <= {tol:.3e} for {q!r}")
    return HElem(q.t, q.a.conjugate() / d, -q.b / d)


def norm(q: HElem, kind: NormKind = NormKind.OP) -> float:
    aa, bb, t = abs(q.a) ** 2, abs(q.b) ** 2, q.t
    if kind is NormKind.OP:
        # largest eigenvalue of the embedding times its conjugate transpose
        root = math.sqrt(bb * bb * (1.0 - t * t) ** 2 + 4.0 * aa * bb * (1.0 + t) ** 2)
        return math.sqrt(max(0.0, (bb * (1.0 + t * t) + 2.0 * aa + root) / 2.0))
    if kind is NormKind.HS:
        return math.sqrt(2.0 * aa + (1.0 + t * t) * bb)
    if kind is NormKind.EUCLID:
        return math.sqrt(aa + abs(t) * bb)
    raise HTError(f"unknown norm kind {kind!r}")


def form(p: HElem, q: HElem, kind) -> float:
    """Real symmetric bilinear forms on H_t.

    ``CIRCLED`` gives ``Tr(q^circled p)``, ``BRACKET`` gives ``Tr(q^[*] p)``
    and ``NormKind.EUCLID`` gives the scaled Euclidean inner product
    ``x0*y0 + x1*y1 + |t|*(x2*y2 + x3*y3)``.
    """
    check_same_scale(p.t, q.t)
    if kind is AdjointKind.CIRCLED or kind is AdjointKind.BRACKET:
        return (adjoint(q, kind) * p).trace()
    if kind is NormKind.EUCLID:
        x, y = p.coords, q.coords
        return x[0] * y[0] + x[1] * y[1] + abs(p.t) * (x[2] * y[2] + x[3] * y[3])
    raise HTError(f"form kind must be CIRCLED, BRACKET or EUCLID, got {kind!r}")


def signature_operator(t: float, kind: AdjointKind) -> np.ndarray:
    """Diagonal ``J`` with ``form(q, q, kind) == 2 * form_E(q, J q)``."""
    s = math.copysign(1.0, validate_scale(t))
    if kind is AdjointKind.CIRCLED:
        return np.diag([1.0, 1.0, -s, -s])
    if kind is AdjointKind.BRACKET:
        return np.diag([1.0, -1.0, s, -s])
    raise HTError(f"no signature operator for {kind!r}")


def basis(t) -> tuple[HElem, HElem, HElem, HElem]:
    """The units ``1, i, j_t, k_t``."""
    t = validate_scale(t)
    return (HElem(t, 1.0), HElem(t, 1j), HElem(t, 0j, 1.0), HElem(t, 0j, 1j))


def cayley_table(t) -> list[list[HElem]]:
    """``table[u][v] = e_u * e_v`` over the units ``1, i, j_t, k_t``."""
    units = basis(t)
    return [[u * v for v in units] for u in units]


def signature_basis_gram(t, kind, cutoff: float = 1e-10) -> tuple[np.ndarray, tuple[int, int]]:
    """Gram matrix of ``form`` over the units and its inertia ``(n_plus, n_minus)``.

    Eigenvalues with absolute value at most ``cutoff`` count as neither sign.
    """
    units = basis(t)
    gram = np.array([[form(u, v, kind) for v in units] for u in units])
    eig = np.linalg.eigvalsh(gram)
    return gram, (int(np.sum(eig > cutoff)), int(np.sum(eig < -cutoff)))


def symmetrized_power(factors: Sequence, counts: Sequence[int], one=None):
    """Average of all orderings of the multiset with ``counts[l]`` copies of ``factors[l]``.

    Distinct words are accumulated by dynamic programming on the first
    letter, so the cost is polynomial in the counts.  Works for any ring
    element supporting ``+``, ``*`` and division by a real number.
    """
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(factors) or any(c < 0 for c in counts):
        raise HTError("counts must be non-negative and match factors")
    total = sum(counts)
    if total == 0:
        if one is None:
            raise HTError("empty product needs an explicit unit")
        return one
    memo: dict[tuple[int, ...], object] = {}

    def words(c):
        if c in memo:
            return memo[c]
        acc = None
        for l, cl in enumerate(c):
            if cl == 0:
                continue
            rest = c[:l] + (cl - 1,) + c[l + 1:]
            term = factors[l] if sum(rest) == 0 else factors[l] * words(rest)
            acc = term if acc is None else acc + term
        memo[c] = acc
        return acc

    n_words = math.factorial(total)
    for c in counts:
        n_words //= math.factorial(c)
    return words(counts) / n_words


def symmetrized_product(hs: Iterable[HElem]) -> HElem:
    """``(1/N!) * sum over permutations`` of the ordered products of ``hs``."""
    hs = list(hs)
    if not hs:
        raise HTError("symmetrized product of an empty sequence")
    check_same_scale(*(h.t for h in hs))
    distinct: dict[HElem, int] = {}
    for h in hs:
        distinct[h] = distinct.get(h, 0) + 1
    return symmetrized_power(list(distinct), list(distinct.values()))


def sphere_contains(center: HElem, candidate: HElem, tol: float = 1e-12) -> bool:
    """True when both elements share real part and determinant within ``tol``."""
    check_same_scale(center.t, candidate.t)
    return abs(re(center) - re(candidate)) <= tol and abs(det(center) - det(candidate)) <= tol


def embedding(q: HElem) -> np.ndarray:
    return q.to_matrix()


def unit_products(t) -> dict[tuple[str, str], HElem]:
    """Products of named units, keyed like ``("j", "k")``."""
    names = ("1", "i", "j", "k")
    units = dict(zip(names, basis(t)))
    return {(u, v): units[u] * units[v] for u, v in _cartesian(names, names)}
