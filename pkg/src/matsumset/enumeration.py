"""Batched, table-driven matrix algebra and deterministic enumeration.

Matrices are handled here as integer arrays of element codes with shape
``(batch, n, n)``; all field arithmetic goes through the dense tables of
:class:`~matsumset.field.FieldCtx`.  The canonical index of a matrix is its
row-major codes read as base-q digits (first entry most significant), so index
0 is the zero matrix and ``[0, q**(n*n))`` enumerates M_n(F_q) in canonical
order.  Any split of that range into consecutive ``[lo, hi)`` pieces can be
processed independently and concatenated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache, partial

import numpy as np

from .errors import CapExceeded, Singular
from .field import FieldCtx
from .matrix import MatF, check_dimension, gl_order, rank_count
from .parallel import pmap, split_range

DEFAULT_CAP = 2**24
CHUNK = 2**16


class Space(str, enum.Enum):
    ALL = "ALL"
    GL = "GL"
    SL = "SL"
    SINGULAR = "SINGULAR"


def check_cap(required: int, cap: int | None = DEFAULT_CAP, what: str = "scan") -> None:
    if cap is not None and required > cap:
        raise CapExceeded(required, cap, what)


def space_size(n: int, ctx: FieldCtx) -> int:
    return ctx.q ** (n * n)


# -- index <-> codes ----------------------------------------------------------


def decode(indices, n: int, ctx: FieldCtx) -> np.ndarray:
    """Canonical indices -> (batch, n, n) code arrays."""
    idx = np.asarray(indices, dtype=np.int64)
    q = ctx.q
    out = np.empty((idx.shape[0], n * n), dtype=np.int32)
    rest = idx.copy()
    for pos in range(n * n - 1, -1, -1):
        out[:, pos] = rest % q
        rest //= q
    return out.reshape(-1, n, n)


def encode(codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """(batch, n, n) or (batch, n*n) code arrays -> canonical indices."""
    flat = codes.reshape(codes.shape[0], -1).astype(np.int64)
    idx = np.zeros(flat.shape[0], dtype=np.int64)
    for pos in range(flat.shape[1]):
        idx = idx * ctx.q + flat[:, pos]
    return idx


def codes_of(mats, ctx: FieldCtx) -> np.ndarray:
    """Stack MatF values into a code array."""
    mats = list(mats)
    if not mats:
        raise ValueError("no matrices given")
    n = mats[0].n
    return np.array([m.entries for m in mats], dtype=np.int32).reshape(-1, n, n)


def to_matf(codes: np.ndarray, ctx: FieldCtx) -> MatF:
    n = codes.shape[-1]
    return MatF(ctx, n, tuple(int(c) for c in codes.reshape(-1)))


# -- batched arithmetic -------------------------------------------------------


def batch_add(a: np.ndarray, b: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    return ctx.add_table[a, b]


def batch_matmul(a: np.ndarray, b: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """Elementwise-batched matrix product with numpy broadcasting on the batch axis."""
    mul, add = ctx.mul_table, ctx.add_table
    n = a.shape[-1]
    out = mul[a[..., :, 0][..., :, None], b[..., 0, :][..., None, :]]
    for t in range(1, n):
        out = add[out, mul[a[..., :, t][..., :, None], b[..., t, :][..., None, :]]]
    return out


def batch_echelon(codes: np.ndarray, ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian elimination on every matrix of the batch.

    Returns ``(rank, det)`` arrays; ``det`` holds element codes and is 0 for
    rank-deficient matrices.  Each matrix keeps its own pivot-row pointer, so
    rank-deficient members do not disturb the others.
    """
    a = np.array(codes, dtype=np.int32, copy=True)
    batch, n = a.shape[0], a.shape[1]
    mul, sub, inv, neg = ctx.mul_table, ctx.sub_table, ctx.inv_table, ctx.neg_table
    rp = np.zeros(batch, dtype=np.int64)
    det = np.ones(batch, dtype=np.int32)
    rows = np.arange(n)
    for c in range(n):
        cand = (a[:, :, c] != 0) & (rows[None, :] >= rp[:, None])
        b = np.nonzero(cand.any(axis=1))[0]
        if b.size == 0:
            continue
        piv = cand[b].argmax(axis=1)
        r = rp[b]
        top = a[b, r].copy()
        a[b, r] = a[b, piv]
        a[b, piv] = top
        swapped = b[piv != r]
        det[swapped] = neg[det[swapped]]
        prow = a[b, r]
        pv = prow[:, c]
        det[b] = mul[det[b], pv]
        pinv = inv[pv]
        for i in range(1, n):
            sel = r < i
            if not sel.any():
                continue
            bi = b[sel]
            f = mul[a[bi, i, c], pinv[sel]]
            a[bi, i] = sub[a[bi, i], mul[f[:, None], prow[sel]]]
        rp[b] += 1
    det[rp < n] = 0
    return rp, det


def batch_det(codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    return batch_echelon(codes, ctx)[1]


def batch_rank(codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    return batch_echelon(codes, ctx)[0]


def batch_inverse(codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """Gauss-Jordan inverse of every matrix; raises :class:`Singular` if any is singular."""
    batch, n = codes.shape[0], codes.shape[1]
    mul, sub, inv = ctx.mul_table, ctx.sub_table, ctx.inv_table
    a = np.zeros((batch, n, 2 * n), dtype=np.int32)
    a[:, :, :n] = codes
    a[:, np.arange(n), n + np.arange(n)] = 1
    ar = np.arange(batch)
    for c in range(n):
        cand = a[:, c:, c] != 0
        if not cand.any(axis=1).all():
            raise Singular("batch contains a singular matrix")
        piv = c + cand.argmax(axis=1)
        top = a[:, c].copy()
        a[:, c] = a[ar, piv]
        a[ar, piv] = top
        pinv = inv[a[:, c, c]]
        a[:, c] = mul[a[:, c], pinv[:, None]]
        for i in range(n):
            if i != c:
                f = a[:, i, c]
                a[:, i] = sub[a[:, i], mul[f[:, None], a[:, c]]]
    return a[:, :, n:]


def batch_trace_dot(u: np.ndarray, x: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """Tr(U.X) mod p for every (U, X) pair: shape (len(u), len(x)).

    Uses additivity of the trace: Tr(sum u_ij x_ij) = sum Tr(u_ij x_ij).
    """
    tm = ctx.trace_mul_table
    uf = u.reshape(u.shape[0], -1)
    xf = x.reshape(x.shape[0], -1)
    acc = np.zeros((uf.shape[0], xf.shape[0]), dtype=np.int64)
    for pos in range(uf.shape[1]):
        acc += tm[uf[:, pos][:, None], xf[:, pos][None, :]]
    return acc % ctx.p


# -- enumeration ---------------------------------------------------------------


def _member_mask(space: Space, codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    if space is Space.ALL:
        return np.ones(codes.shape[0], dtype=bool)
    det = batch_det(codes, ctx)
    if space is Space.GL:
        return det != 0
    if space is Space.SL:
        return det == 1
    return det == 0


def _indices_in_range(space: Space, n: int, ctx: FieldCtx, bounds: tuple[int, int]) -> np.ndarray:
    lo, hi = bounds
    parts = []
    for start in range(lo, hi, CHUNK):
        idx = np.arange(start, min(hi, start + CHUNK), dtype=np.int64)
        parts.append(idx[_member_mask(space, decode(idx, n, ctx), ctx)])
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def enumerate_indices(
    space: Space | str,
    n: int,
    ctx: FieldCtx,
    lo: int = 0,
    hi: int | None = None,
    cap: int | None = DEFAULT_CAP,
    workers: int = 1,
    scalar_diagnostic: bool = False,
) -> np.ndarray:
    """Canonical indices of the members of ``space`` within ``[lo, hi)``, ascending."""
    space = Space(space)
    check_dimension(n, scalar_diagnostic)
    total = space_size(n, ctx)
    hi = total if hi is None else min(hi, total)
    lo = max(0, lo)
    check_cap(max(0, hi - lo), cap, f"enumerating {space.value}")
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    pieces = pmap(partial(_indices_in_range, space, n, ctx), split_range(lo, hi, workers), workers)
    return np.concatenate(pieces)


def enumerate_matrices(space: Space | str, n: int, ctx: FieldCtx, lo: int = 0, hi: int | None = None,
                       cap: int | None = DEFAULT_CAP, scalar_diagnostic: bool = False):
    """Stream of :class:`MatF` members of ``space`` in canonical order."""
    space = Space(space)
    check_dimension(n, scalar_diagnostic)
    total = space_size(n, ctx)
    hi = total if hi is None else min(hi, total)
    check_cap(max(0, hi - lo), cap, f"enumerating {space.value}")
    for start in range(lo, hi, CHUNK):
        block = _indices_in_range(space, n, ctx, (start, min(hi, start + CHUNK)))
        for idx in block.tolist():
            yield MatF.from_index(ctx, n, idx)


@lru_cache(maxsize=16)
def space_indices(space: Space, n: int, ctx: FieldCtx, cap: int | None = DEFAULT_CAP) -> np.ndarray:
    """Memoised full index list of a space (read-only)."""
    out = enumerate_indices(space, n, ctx, cap=cap)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def det_table(n: int, ctx: FieldCtx, cap: int | None = DEFAULT_CAP) -> np.ndarray:
    """Determinant code of every matrix in M_n(F_q), indexed canonically."""
    total = space_size(n, ctx)
    check_cap(total, cap, "determinant table")
    out = np.empty(total, dtype=np.int32)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        out[start:start + idx.size] = batch_det(decode(idx, n, ctx), ctx)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def gl_with_inverses(n: int, ctx: FieldCtx, cap: int | None = DEFAULT_CAP) -> tuple[np.ndarray, np.ndarray]:
    """(codes of GL_n in canonical order, codes of their inverses)."""
    gl = decode(space_indices(Space.GL, n, ctx, cap), n, ctx)
    inv = np.concatenate([batch_inverse(gl[s:s + CHUNK], ctx) for s in range(0, gl.shape[0], CHUNK)]) \
        if gl.shape[0] else gl.copy()
    gl.setflags(write=False)
    inv.setflags(write=False)
    return gl, inv


# -- rank strata ---------------------------------------------------------------


@dataclass(frozen=True)
class RankProfile:
    n: int
    q: int
    counts: tuple[int, ...]

    @property
    def formula(self) -> tuple[int, ...]:
        """Closed-form Gaussian-binomial count per rank, for cross-checking."""
        return tuple(rank_count(self.n, r, self.q) for r in range(self.n + 1))

    def stratum_at_most(self, r: int) -> int:
        return sum(self.counts[: r + 1])

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "counts": [str(c) for c in self.counts]}


def _rank_hist(n: int, ctx: FieldCtx, bounds: tuple[int, int]) -> np.ndarray:
    lo, hi = bounds
    hist = np.zeros(n + 1, dtype=np.int64)
    for start in range(lo, hi, CHUNK):
        idx = np.arange(start, min(hi, start + CHUNK), dtype=np.int64)
        hist += np.bincount(batch_rank(decode(idx, n, ctx), ctx), minlength=n + 1)
    return hist


def rank_profile(n: int, ctx: FieldCtx, cap: int | None = DEFAULT_CAP, workers: int = 1) -> RankProfile:
    """Exact number of matrices of each rank, by exhaustive enumeration."""
    check_dimension(n)
    total = space_size(n, ctx)
    check_cap(total, cap, "rank profile")
    hists = pmap(partial(_rank_hist, n, ctx), split_range(0, total, workers), workers)
    counts = sum(hists, np.zeros(n + 1, dtype=np.int64))
    prof = RankProfile(n, ctx.q, tuple(int(c) for c in counts))
    assert prof.counts[n] == gl_order(n, ctx.q)
    return prof
