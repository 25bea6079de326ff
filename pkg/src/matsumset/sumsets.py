"""Singular, unimodular and sum-product counts for sets of matrices.

N(A, B) and T(A, B) count ordered pairs (A, B) whose sum is singular,
respectively has determinant one; R(A, B, C, D; H) counts quadruples with
(A + B)(C + D) = H.  All counts are with multiplicity (tuples, not distinct
sums), which is what the main terms #A#B/q and #A#B#C#D/q^{n^2} describe.

Sets are stored as sorted arrays of canonical matrix indices (see
:mod:`matsumset.enumeration`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

import numpy as np

from .enumeration import (
    CHUNK,
    DEFAULT_CAP,
    Space,
    batch_matmul,
    check_cap,
    codes_of,
    decode,
    det_table,
    encode,
    gl_with_inverses,
    space_size,
)
from .errors import ConfigInvalid, CtxMismatch, SingularH
from .field import FieldCtx, field_new
from .matrix import MatF, check_dimension, gl_order, sl_order, z_order
from .parallel import pmap, split_range

PAIR_CAP = 2**26
NAIVE_QUAD_CAP = 2**16


@dataclass(frozen=True, eq=False)
class MatrixSet:
    """A finite set of n x n matrices over ``ctx``, stored as sorted unique indices."""

    n: int
    ctx: FieldCtx
    indices: np.ndarray
    provenance: dict = field(default_factory=lambda: {"kind": "EXPLICIT"})

    def __post_init__(self):
        idx = np.unique(np.asarray(self.indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= space_size(self.n, self.ctx)):
            raise ValueError("matrix index out of range")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatrixSet) and self.n == other.n and self.ctx == other.ctx
                and np.array_equal(self.indices, other.indices))

    def __contains__(self, m: MatF) -> bool:
        i = np.searchsorted(self.indices, m.index)
        return bool(i < self.indices.size and self.indices[i] == m.index)

    @property
    def members(self) -> list[MatF]:
        return [MatF.from_index(self.ctx, self.n, int(i)) for i in self.indices]

    def codes(self) -> np.ndarray:
        return decode(self.indices, self.n, self.ctx)

    # -- constructors --------------------------------------------------------

    @classmethod
    def explicit(cls, mats, n: int | None = None, ctx: FieldCtx | None = None) -> "MatrixSet":
        mats = list(mats)
        if not mats and (n is None or ctx is None):
            raise ConfigInvalid("an empty explicit set needs n and ctx")
        n = mats[0].n if mats else n
        ctx = mats[0].ctx if mats else ctx
        if any(m.n != n or m.ctx != ctx for m in mats):
            raise CtxMismatch("set members differ in n or field")
        return cls(n, ctx, np.array([m.index for m in mats], dtype=np.int64), {"kind": "EXPLICIT"})

    @classmethod
    def full(cls, n: int, ctx: FieldCtx) -> "MatrixSet":
        total = space_size(n, ctx)
        check_cap(total, DEFAULT_CAP, "FULL set")
        return cls(n, ctx, np.arange(total, dtype=np.int64), {"kind": "FULL"})

    @classmethod
    def random(cls, n: int, ctx: FieldCtx, seed: int, size: int) -> "MatrixSet":
        """``size`` distinct matrices drawn uniformly with PCG64 seeded by ``seed``.

        Draws come in batches of ``size`` indices from
        ``numpy.random.default_rng(seed).integers(0, q**(n*n))``; each index is
        accepted if not seen before, in draw order, until ``size`` are held.
        """
        total = space_size(n, ctx)
        if not 0 <= size <= total:
            raise ConfigInvalid(f"random set size {size} outside [0, {total}]")
        rng = np.random.default_rng(seed)
        seen: dict[int, None] = {}
        while len(seen) < size:
            for i in rng.integers(0, total, size=size, dtype=np.int64).tolist():
                if i not in seen:
                    seen[i] = None
                    if len(seen) == size:
                        break
        return cls(n, ctx, np.fromiter(seen, dtype=np.int64, count=size),
                   {"kind": "RANDOM", "seed": seed, "size": size})

    @classmethod
    def product_of_entries(cls, n: int, ctx: FieldCtx, entries) -> "MatrixSet":
        """All matrices whose entries (as field element codes) lie in ``entries``."""
        vals = sorted({int(e) % ctx.q for e in entries})
        check_cap(len(vals) ** (n * n), DEFAULT_CAP, "product-of-entries set")
        grid = np.array(list(itertools.product(vals, repeat=n * n)), dtype=np.int32).reshape(-1, n, n)
        return cls(n, ctx, encode(grid, ctx), {"kind": "PRODUCT_OF_ENTRIES", "entries": vals})

    @classmethod
    def from_codes(cls, codes: np.ndarray, ctx: FieldCtx, provenance: dict | None = None) -> "MatrixSet":
        return cls(codes.shape[-1], ctx, encode(codes, ctx), provenance or {"kind": "EXPLICIT"})

    def translate(self, g: MatF) -> "MatrixSet":
        """{A + G : A in set}."""
        if g.n != self.n or g.ctx != self.ctx:
            raise CtxMismatch("translation matrix does not match the set")
        gc = np.array(g.entries, dtype=np.int32).reshape(self.n, self.n)
        return MatrixSet.from_codes(self.ctx.add_table[self.codes(), gc[None]], self.ctx)

    def to_json(self) -> dict:
        out = {"n": self.n, "field": self.ctx.describe(), "size": len(self), "provenance": dict(self.provenance)}
        if self.provenance.get("kind") == "EXPLICIT":
            out["indices"] = [str(i) for i in self.indices.tolist()]
        return out


def _check_pair(a: MatrixSet, b: MatrixSet) -> None:
    if a.n != b.n or a.ctx != b.ctx:
        raise CtxMismatch("sets differ in n or field")
    check_dimension(a.n)


def _pair_sums(a_codes: np.ndarray, b_codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """Canonical indices of A + B for all pairs, A-major order."""
    s = ctx.add_table[a_codes[:, None], b_codes[None, :]]
    return encode(s.reshape(-1, *a_codes.shape[1:]), ctx)


def _a_step(nb: int) -> int:
    return max(1, (2**20) // max(1, nb))


def _sum_hist_part(a_codes, b_codes, ctx, total, bounds) -> np.ndarray:
    lo, hi = bounds
    hist = np.zeros(total, dtype=np.int64)
    step = _a_step(b_codes.shape[0])
    for s in range(lo, hi, step):
        hist += np.bincount(_pair_sums(a_codes[s:min(hi, s + step)], b_codes, ctx), minlength=total)
    return hist


def sum_multiplicities(a: MatrixSet, b: MatrixSet, cap: int | None = PAIR_CAP, workers: int = 1) -> np.ndarray:
    """Table over M_n(F_q): entry X is #{(A, B) : A + B = X}."""
    _check_pair(a, b)
    check_cap(len(a) * len(b), cap, "pair scan")
    total = space_size(a.n, a.ctx)
    check_cap(total, DEFAULT_CAP, "sum-multiplicity table")
    ac, bc = a.codes(), b.codes()
    parts = pmap(partial(_sum_hist_part, ac, bc, a.ctx, total), split_range(0, len(a), workers), workers)
    return sum(parts[1:], parts[0]) if parts else np.zeros(total, dtype=np.int64)


def _indicator_part(a_codes, b_codes, ctx, indicator, bounds) -> int:
    lo, hi = bounds
    count = 0
    step = _a_step(b_codes.shape[0])
    for s in range(lo, hi, step):
        count += int(indicator[_pair_sums(a_codes[s:min(hi, s + step)], b_codes, ctx)].sum())
    return count


def _count(space: Space, a: MatrixSet, b: MatrixSet, method: str, distinct: bool, cap, workers) -> int:
    _check_pair(a, b)
    check_cap(len(a) * len(b), cap, "pair scan")
    det = det_table(a.n, a.ctx)
    indicator = (det == 0) if space is Space.SINGULAR else (det == 1)
    if distinct:
        return int(((sum_multiplicities(a, b, cap, workers) > 0) & indicator).sum())
    if method == "table":
        return int(sum_multiplicities(a, b, cap, workers)[indicator].sum())
    if method == "pairs":
        parts = pmap(partial(_indicator_part, a.codes(), b.codes(), a.ctx, indicator),
                     split_range(0, len(a), workers), workers)
        return sum(parts)
    raise ConfigInvalid(f"unknown counting method {method!r}")


def count_singular_sums(a: MatrixSet, b: MatrixSet, method: str = "table", distinct: bool = False,
                        cap: int | None = PAIR_CAP, workers: int = 1) -> int:
    """N(A, B): ordered pairs with det(A + B) = 0.

    ``method="table"`` builds the sum-multiplicity table first; ``"pairs"``
    looks every pair up in a precomputed singularity indicator.  With
    ``distinct=True`` the number of distinct singular sums is returned instead.
    """
    return _count(Space.SINGULAR, a, b, method, distinct, cap, workers)


def count_sl_sums(a: MatrixSet, b: MatrixSet, method: str = "table", distinct: bool = False,
                  cap: int | None = PAIR_CAP, workers: int = 1) -> int:
    """T(A, B): ordered pairs with det(A + B) = 1."""
    return _count(Space.SL, a, b, method, distinct, cap, workers)


def _x_inverse_h_indices(h: MatF, cap) -> tuple[np.ndarray, np.ndarray]:
    # (A + B)(C + D) = H with A + B = X forces C + D = X^{-1} H (left factor inverted)
    n, ctx = h.n, h.ctx
    gl, inv = gl_with_inverses(n, ctx, cap)
    hc = np.array(h.entries, dtype=np.int32).reshape(n, n)
    y = np.concatenate([batch_matmul(inv[s:s + CHUNK], hc[None], ctx) for s in range(0, inv.shape[0], CHUNK)])
    return encode(gl, ctx), encode(y, ctx)


def count_sumproduct(a: MatrixSet, b: MatrixSet, c: MatrixSet, d: MatrixSet, h: MatF,
                     method: str = "table", cap: int | None = PAIR_CAP, workers: int = 1) -> int:
    """R(A, B, C, D; H): quadruples with (A + B)(C + D) = H.

    The table method sums, over invertible X, the number of pairs with
    A + B = X times the number of pairs with C + D = X^{-1} H.  The naive
    method multiplies every pair of pair-sums and is kept as an oracle.
    """
    for s in (b, c, d):
        _check_pair(a, s)
    if h.n != a.n or h.ctx != a.ctx:
        raise CtxMismatch("H does not match the sets")
    if not h.is_invertible():
        raise SingularH("H must be invertible")
    check_cap(len(a) * len(b) + len(c) * len(d), cap, "pair scan")
    if method == "naive":
        check_cap(len(a) * len(b) * len(c) * len(d), NAIVE_QUAD_CAP, "naive quadruple loop")
        return _sumproduct_naive(a, b, c, d, h)
    if method != "table":
        raise ConfigInvalid(f"unknown counting method {method!r}")
    m1 = sum_multiplicities(a, b, cap, workers)
    m2 = sum_multiplicities(c, d, cap, workers)
    x_idx, y_idx = _x_inverse_h_indices(h, DEFAULT_CAP)
    assert len(a) * len(b) * len(c) * len(d) < 2**63
    return int(np.dot(m1[x_idx], m2[y_idx]))


def _sumproduct_naive(a, b, c, d, h) -> int:
    ctx, n = a.ctx, a.n
    add = ctx.add_table
    left = add[a.codes()[:, None], b.codes()[None, :]].reshape(-1, n, n)
    right = add[c.codes()[:, None], d.codes()[None, :]].reshape(-1, n, n)
    target = np.array(h.entries, dtype=np.int32).reshape(n, n)
    count = 0
    for x in left:
        prods = batch_matmul(x[None], right, ctx)
        count += int((prods == target).all(axis=(1, 2)).sum())
    return count


# -- gap reports ---------------------------------------------------------------


ENVELOPE_EXPONENT = {
    "N": lambda n: Fraction(2 * n * n - 5, 2),
    "T": lambda n: Fraction(n * n - 2),
    "R": lambda n: Fraction(2 * n * n - 1, 2),
}


def fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fmt_float(x: float) -> float:
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class GapReport:
    kind: str
    n: int
    q: int
    observed: int
    main_term: Fraction
    envelope_exponent: Fraction
    sizes: tuple[int, ...]
    sets: tuple[dict, ...] = ()

    @property
    def gap(self) -> Fraction:
        return abs(self.observed - self.main_term)

    @property
    def envelope(self) -> float:
        """Error bound with implied constant 1: q^exponent * sqrt(product of set sizes)."""
        return self.q ** float(self.envelope_exponent) * math.sqrt(math.prod(self.sizes))

    @property
    def ratio(self) -> float:
        env = self.envelope
        return float(self.gap) / env if env else 0.0

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "q": self.q,
            "observed": str(self.observed),
            "main_term": fmt_rational(self.main_term),
            "gap": fmt_rational(self.gap),
            "envelope_exponent": str(self.envelope_exponent),
            "envelope": fmt_float(self.envelope),
            "ratio": fmt_float(self.ratio),
            "sizes": [str(s) for s in self.sizes],
            "sets": list(self.sets),
        }


def gap_report(kind: str, *sets: MatrixSet, h: MatF | None = None, workers: int = 1) -> GapReport:
    """Observed count against its main term and envelope (implied constant 1)."""
    kind = kind.upper()
    if kind in ("N", "T"):
        if len(sets) != 2:
            raise ConfigInvalid(f"{kind} needs two sets")
        a, b = sets
        n, q = a.n, a.ctx.q
        if kind == "N":
            observed = count_singular_sums(a, b, workers=workers)
            order = z_order(n, q)
        else:
            observed = count_sl_sums(a, b, workers=workers)
            order = sl_order(n, q)
        main = Fraction(order * len(a) * len(b), q ** (n * n))
    elif kind == "R":
        if len(sets) != 4 or h is None:
            raise ConfigInvalid("R needs four sets and H")
        n, q = sets[0].n, sets[0].ctx.q
        observed = count_sumproduct(*sets, h, workers=workers)
        main = Fraction(math.prod(len(s) for s in sets), q ** (n * n))
    else:
        raise ConfigInvalid(f"unknown gap kind {kind!r}")
    return GapReport(kind, n, q, observed, main, ENVELOPE_EXPONENT[kind](n),
                     tuple(len(s) for s in sets), tuple(s.to_json() for s in sets))


# -- asymptotic tables ---------------------------------------------------------


@dataclass(frozen=True)
class DensityRule:
    """How the sets of each table row are chosen.

    ``"full"`` uses A = B = M_n(F_q).  ``"random"`` draws two seeded random
    sets of size ceil(q**exponent) each (capped at q^{n^2}).
    """

    kind: str = "full"
    exponent: float = 0.0
    seed: int = 0

    def sets(self, n: int, ctx: FieldCtx) -> tuple[MatrixSet, MatrixSet]:
        if self.kind == "full":
            full = MatrixSet.full(n, ctx)
            return full, full
        if self.kind == "random":
            size = min(space_size(n, ctx), math.ceil(ctx.q ** self.exponent))
            return (MatrixSet.random(n, ctx, self.seed, size), MatrixSet.random(n, ctx, self.seed + 1, size))
        raise ConfigInvalid(f"unknown density rule {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "exponent": self.exponent, "seed": self.seed}


def asymptotic_table(kind: str, n: int, qs, rule: DensityRule = DensityRule(), workers: int = 1) -> list[dict]:
    """One row per q with ratio q * observed / (#A #B), which tends to 1."""
    kind = kind.upper()
    if kind not in ("N", "T"):
        raise ConfigInvalid("asymptotic tables exist for N and T only")
    rows = []
    for q in qs:
        ctx = field_for_order(q)
        a, b = rule.sets(n, ctx)
        counter = count_singular_sums if kind == "N" else count_sl_sums
        observed = counter(a, b, workers=workers)
        ratio = Fraction(q * observed, len(a) * len(b))
        rows.append({"q": q, "size_a": len(a), "size_b": len(b), "observed": str(observed),
                     "ratio": fmt_rational(ratio), "ratio_float": fmt_float(float(ratio))})
    return rows


def field_for_order(q: int) -> FieldCtx:
    """The canonical field with q elements (q must be a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return field_new(p, k)
    raise ConfigInvalid(f"{q} is not a prime power")
