"""Square matrices over a finite field, and closed-form group orders.

:class:`MatF` is the scalar, one-matrix-at-a-time type.  Its arithmetic runs
through :class:`~matsumset.field.Felt` and is deliberately independent of the
table-driven batch code in :mod:`matsumset.enumeration`, so each can serve as
an oracle for the other.

The canonical index of a matrix reads its row-major entry codes as base-q
digits, first entry most significant.  Index 0 is the zero matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .errors import ConfigInvalid, CtxMismatch, Singular
from .field import FieldCtx, Felt


def check_dimension(n: int, scalar_diagnostic: bool = False) -> None:
    """Experiments need n >= 2; n = 1 is only allowed as a scalar diagnostic."""
    if n >= 2 or (n == 1 and scalar_diagnostic):
        return
    raise ConfigInvalid(f"dimension n={n} not allowed (n >= 2 required unless scalar_diagnostic)")


@dataclass(frozen=True)
class MatF:
    ctx: FieldCtx
    n: int
    entries: tuple[int, ...]  # row-major element codes

    def __post_init__(self):
        if len(self.entries) != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} entries, got {len(self.entries)}")
        q = self.ctx.q
        if any(not 0 <= e < q for e in self.entries):
            raise ValueError("entry code out of range")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows) -> "MatF":
        """Rows of ints (element codes) or :class:`Felt` values."""
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return cls(ctx, n, tuple(ctx(x).code for r in rows for x in r))

    @classmethod
    def _from_felts(cls, ctx: FieldCtx, n: int, felts) -> "MatF":
        return cls(ctx, n, tuple(f.code for f in felts))

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "MatF":
        return cls(ctx, n, (0,) * (n * n))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "MatF":
        return cls(ctx, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def unit(cls, ctx: FieldCtx, n: int, i: int, j: int) -> "MatF":
        """E_ij: one in position (i, j), zero elsewhere."""
        e = [0] * (n * n)
        e[i * n + j] = 1
        return cls(ctx, n, tuple(e))

    @classmethod
    def from_index(cls, ctx: FieldCtx, n: int, index: int) -> "MatF":
        q, digits = ctx.q, []
        for _ in range(n * n):
            index, d = divmod(index, q)
            digits.append(d)
        if index:
            raise ValueError("index out of range")
        return cls(ctx, n, tuple(reversed(digits)))

    @property
    def index(self) -> int:
        idx = 0
        for e in self.entries:
            idx = idx * self.ctx.q + e
        return idx

    # -- element access -------------------------------------------------------

    def __getitem__(self, ij) -> Felt:
        i, j = ij
        return self.ctx.from_code(self.entries[i * self.n + j])

    def rows(self) -> list[list[Felt]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def tolist(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __repr__(self) -> str:
        return f"MatF(q={self.ctx.q}, {self.tolist()})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ctx": self.ctx.describe(),
            "entries": [list(self.ctx.from_code(e).coeffs) for e in self.entries],
        }

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: dict) -> "MatF":
        return cls(ctx, int(data["n"]), tuple(ctx(c).code for c in data["entries"]))

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "MatF") -> None:
        if not isinstance(other, MatF):
            raise TypeError(f"expected MatF, got {type(other).__name__}")
        if other.ctx != self.ctx or other.n != self.n:
            raise CtxMismatch("matrices differ in field or dimension")

    def _felts(self) -> list[Felt]:
        return [self.ctx.from_code(e) for e in self.entries]

    def __add__(self, other: "MatF") -> "MatF":
        self._check(other)
        return MatF._from_felts(self.ctx, self.n, (a + b for a, b in zip(self._felts(), other._felts())))

    def __sub__(self, other: "MatF") -> "MatF":
        self._check(other)
        return MatF._from_felts(self.ctx, self.n, (a - b for a, b in zip(self._felts(), other._felts())))

    def __neg__(self) -> "MatF":
        return MatF._from_felts(self.ctx, self.n, (-a for a in self._felts()))

    def scale(self, lam) -> "MatF":
        lam = self.ctx(lam)
        return MatF._from_felts(self.ctx, self.n, (lam * a for a in self._felts()))

    def __matmul__(self, other: "MatF") -> "MatF":
        self._check(other)
        a, b, n = self.rows(), other.rows(), self.n
        out = []
        for i in range(n):
            for j in range(n):
                acc = self.ctx.zero
                for t in range(n):
                    acc = acc + a[i][t] * b[t][j]
                out.append(acc)
        return MatF._from_felts(self.ctx, n, out)

    def dot(self, other: "MatF") -> Felt:
        """Scalar product sum_ij u_ij x_ij."""
        self._check(other)
        acc = self.ctx.zero
        for a, b in zip(self._felts(), other._felts()):
            acc = acc + a * b
        return acc

    def _eliminate(self):
        """Row echelon form by Gaussian elimination; returns (rank, det)."""
        ctx, n = self.ctx, self.n
        a = self.rows()
        det = ctx.one
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if a[i][c]), None)
            if piv is None:
                det = ctx.zero
                continue
            if piv != r:
                a[r], a[piv] = a[piv], a[r]
                det = -det
            det = det * a[r][c]
            inv = a[r][c].inv()
            for i in range(r + 1, n):
                if a[i][c]:
                    f = a[i][c] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            r += 1
        return r, (det if r == n else ctx.zero)

    def det(self) -> Felt:
        return self._eliminate()[1]

    def rank(self) -> int:
        return self._eliminate()[0]

    def det_cofactor(self) -> Felt:
        """Leibniz expansion; an independent oracle for :meth:`det` (small n only)."""
        n, ctx = self.n, self.ctx
        a = self.rows()
        total = ctx.zero
        for perm in itertools.permutations(range(n)):
            inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            term = ctx.one
            for i in range(n):
                term = term * a[i][perm[i]]
            total = total - term if inversions % 2 else total + term
        return total

    def inverse(self) -> "MatF":
        """Gauss-Jordan inverse; raises :class:`Singular` when det = 0."""
        ctx, n = self.ctx, self.n
        a = [row + [ctx.one if i == j else ctx.zero for j in range(n)] for i, row in enumerate(self.rows())]
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                raise Singular("matrix is singular")
            a[c], a[piv] = a[piv], a[c]
            inv = a[c][c].inv()
            a[c] = [x * inv for x in a[c]]
            for i in range(n):
                if i != c and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return MatF._from_felts(ctx, n, (a[i][n + j] for i in range(n) for j in range(n)))

    def is_invertible(self) -> bool:
        return not self.det().is_zero()


# -- closed-form orders -----------------------------------------------------------


def gl_order(n: int, q: int) -> int:
    """#GL_n(F_q) = q^{(n^2-n)/2} * prod_{j=1..n} (q^j - 1)."""
    return q ** ((n * n - n) // 2) * prod(q**j - 1 for j in range(1, n + 1))


def sl_order(n: int, q: int) -> int:
    return gl_order(n, q) // (q - 1)


def z_order(n: int, q: int) -> int:
    """Number of singular n x n matrices."""
    return q ** (n * n) - gl_order(n, q)


def rank_count(n: int, r: int, q: int) -> int:
    """Closed-form number of n x n matrices of rank r over F_q.

    prod_{i<r} (q^n - q^i)^2 / (q^r - q^i), the Gaussian-binomial count.
    """
    if not 0 <= r <= n:
        return 0
    num = prod((q**n - q**i) ** 2 for i in range(r))
    den = prod(q**r - q**i for i in range(r))
    return num // den
