"""Exact arithmetic in F_p and F_{p^k}.

Elements of a field with ``q = p**k`` elements are polynomials in ``t`` of
degree below ``k`` with coefficients in Z_p, reduced modulo a fixed monic
irreducible polynomial.  Every element also has an integer *code*: its
coefficient vector read as a base-p number with the constant term least
significant.  Codes fix the canonical element ordering used by all
enumerations downstream.

The additive character used everywhere is psi(x) = exp(2 pi i Tr(x) / p),
where Tr is the absolute trace F_q -> F_p.  Only the integer ``Tr(x)`` is
computed here; complex evaluation is left to the reporting layer.

Two arithmetic paths exist on purpose.  :class:`Felt` works on coefficient
tuples with plain Python integers and is used for scalar work and as an
oracle.  :class:`FieldCtx` also exposes dense numpy operation tables
(``add_table``, ``mul_table`` and friends) built by vectorised polynomial
multiplication; the bulk enumerators index into those.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import CtxMismatch, NotPrime, SizeExceeded

MAX_DEGREE = 8
MAX_ORDER = 2**20
# Dense q x q tables are only built for fields at most this large.
MAX_TABLE_ORDER = 2**10


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (small inputs only)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


# -- polynomial helpers over Z_p (coefficient lists, constant term first) -----


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * mi) % p
        _trim(a)
    return a


def _divides(f: tuple[int, ...], g: tuple[int, ...], p: int) -> bool:
    return not _poly_mod(list(g), f, p)


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..deg/2 divides ``poly``."""
    k = len(poly) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _divides(tuple(low) + (1,), poly, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``k`` over Z_p.

    Coefficient vectors are compared from the constant term upward.
    """
    if k == 1:
        return (0, 1)
    # product() varies the last position fastest, so c_0 is most significant.
    for c in itertools.product(range(p), repeat=k):
        poly = tuple(c) + (1,)
        if c[0] == 0:
            continue  # divisible by t
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@lru_cache(maxsize=None)
def field_new(p: int, k: int = 1) -> "FieldCtx":
    """Construct F_{p^k} with the canonical (smallest irreducible) modulus.

    Construction is memoised, so equal ``(p, k)`` give the identical object.
    """
    p, k = int(p), int(k)
    if not is_prime(p):
        raise NotPrime(p)
    if not 1 <= k <= MAX_DEGREE:
        raise SizeExceeded(f"extension degree {k} outside [1, {MAX_DEGREE}]")
    if p**k > MAX_ORDER:
        raise SizeExceeded(f"field order {p}^{k} exceeds {MAX_ORDER}")
    return FieldCtx(p, k, smallest_irreducible(p, k))


@dataclass(frozen=True)
class FieldCtx:
    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    # -- element construction -------------------------------------------------

    def __call__(self, value) -> "Felt":
        """Element from a code (int), a coefficient sequence, or a Felt."""
        if isinstance(value, Felt):
            if value.ctx != self:
                raise CtxMismatch("element belongs to another field")
            return value
        if isinstance(value, (int, np.integer)):
            return self.from_code(int(value))
        return Felt(self, tuple(int(c) % self.p for c in value) + (0,) * (self.k - len(value)))

    def from_code(self, code: int) -> "Felt":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside [0, {self.q})")
        coeffs = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            coeffs.append(r)
        return Felt(self, tuple(coeffs))

    def embed(self, a: int) -> "Felt":
        """Scalar embedding of Z_p."""
        return Felt(self, (a % self.p,) + (0,) * (self.k - 1))

    @property
    def zero(self) -> "Felt":
        return self.embed(0)

    @property
    def one(self) -> "Felt":
        return self.embed(1)

    @property
    def gen(self) -> "Felt":
        """The class of t (equals 0 in a prime field, whose modulus is t)."""
        if self.k == 1:
            return self.zero
        return Felt(self, (0, 1) + (0,) * (self.k - 2))

    def elements(self):
        """All elements in canonical (code) order."""
        return (self.from_code(c) for c in range(self.q))

    # -- dense tables -----------------------------------------------------------

    def _require_tables(self) -> None:
        if self.q > MAX_TABLE_ORDER:
            raise SizeExceeded(f"operation tables need q <= {MAX_TABLE_ORDER}, got {self.q}")

    @cached_property
    def coeff_table(self) -> np.ndarray:
        """(q, k) array: coefficient vector of each code."""
        codes = np.arange(self.q, dtype=np.int64)
        return np.stack([(codes // self.p**i) % self.p for i in range(self.k)], axis=1)

    def _encode(self, coeffs: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.k, dtype=np.int64)
        return (coeffs * weights).sum(axis=-1)

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        c = self.coeff_table
        return self._encode((c[:, None, :] + c[None, :, :]) % self.p).astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._encode((-self.coeff_table) % self.p).astype(np.int32)

    @cached_property
    def sub_table(self) -> np.ndarray:
        self._require_tables()
        return self.add_table[:, self.neg_table]

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        p, k, c = self.p, self.k, self.coeff_table
        prod = np.zeros((self.q, self.q, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[:, :, i + j] += np.outer(c[:, i], c[:, j])
        prod %= p
        for d in range(2 * k - 2, k - 1, -1):
            lead = prod[:, :, d].copy()
            for i in range(k):
                prod[:, :, d - k + i] = (prod[:, :, d - k + i] - lead * self.modulus[i]) % p
            prod[:, :, d] = 0
        return self._encode(prod[:, :, :k]).astype(np.int32)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """Multiplicative inverse per code; entry 0 is set to 0 (undefined)."""
        hit = self.mul_table == 1
        inv = np.argmax(hit, axis=1).astype(np.int32)
        inv[0] = 0
        return inv

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Tr(x) in [0, p) per code, via linearity over the basis 1, t, ..., t^{k-1}."""
        basis = np.array([self(tuple(int(i == j) for j in range(self.k))).trace() for i in range(self.k)])
        return ((self.coeff_table * basis).sum(axis=1) % self.p).astype(np.int64)

    @cached_property
    def trace_mul_table(self) -> np.ndarray:
        """Tr(a*b) for all code pairs; the building block of psi(U.X)."""
        return self.trace_table[self.mul_table]


@dataclass(frozen=True)
class Felt:
    """Element of a :class:`FieldCtx`, stored as its reduced coefficient tuple."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return sum(c * self.ctx.p**i for i, c in enumerate(self.coeffs))

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        if self.ctx.k == 1:
            return f"Felt({self.coeffs[0]} mod {self.ctx.p})"
        terms = [f"{c}*t^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"Felt({' + '.join(terms) or '0'})"

    def _coerce(self, other) -> "Felt":
        if isinstance(other, Felt):
            if other.ctx != self.ctx:
                raise CtxMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ctx.embed(int(other))
        return NotImplemented

    def _make(self, c: list[int]) -> "Felt":
        c = list(c) + [0] * (self.ctx.k - len(c))
        return Felt(self.ctx, tuple(c))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return self._make([(a + b) % p for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "Felt":
        p = self.ctx.p
        return self._make([(-a) % p for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if ctx.k == 1:
            return self._make([self.coeffs[0] * other.coeffs[0] % ctx.p])
        prod = [0] * (2 * ctx.k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return self._make(_poly_mod(prod, ctx.modulus, ctx.p))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Felt":
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def inv(self) -> "Felt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def trace(self) -> int:
        """Absolute trace Tr(x) = x + x^p + ... + x^{p^{k-1}}, returned as a residue mod p."""
        total, y = self.ctx.zero, self
        for _ in range(self.ctx.k):
            total = total + y
            y = y ** self.ctx.p
        assert all(c == 0 for c in total.coeffs[1:]), "trace left the prime field"
        return total.coeffs[0]
