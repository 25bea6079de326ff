"""Exact character sums over determinantal sets and matrix Kloosterman sums.

Every sum is a sum of psi(x) = e(Tr(x)/p) over a finite domain, so it is
stored exactly as a :class:`CharAccum`: the number of terms whose trace
argument equals each residue a mod p.  Complex values are produced only on
request, from the exact counts.
"""

from __future__ import annotations

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
    batch_trace_dot,
    check_cap,
    decode,
    gl_with_inverses,
    space_indices,
    space_size,
    to_matf,
)
from .errors import CtxMismatch, ConfigInvalid, SingularH
from .field import FieldCtx
from .matrix import MatF, check_dimension, gl_order, sl_order, z_order
from .parallel import pmap, split_range

# max (rows x domain) block evaluated at once
BLOCK = 2**22
EXHAUSTIVE_TUPLE_CAP = 2**22


def _roots(p: int) -> np.ndarray:
    a = np.arange(p)
    return np.exp(2j * np.pi * a / p)


@dataclass(frozen=True)
class CharAccum:
    """Exact value of a sum of p-th roots of unity: ``counts[a]`` terms equal e(a/p)."""

    p: int
    counts: tuple[int, ...]

    @classmethod
    def from_args(cls, args: np.ndarray, p: int) -> "CharAccum":
        return cls(p, tuple(int(c) for c in np.bincount(np.asarray(args).ravel(), minlength=p)))

    @classmethod
    def empty(cls, p: int) -> "CharAccum":
        return cls(p, (0,) * p)

    def __add__(self, other: "CharAccum") -> "CharAccum":
        if other.p != self.p:
            raise CtxMismatch("accumulators over different characteristics")
        return CharAccum(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def conjugate(self) -> "CharAccum":
        """Accumulator of the complex conjugate: counts reindexed by a -> -a."""
        return CharAccum(self.p, tuple(self.counts[(-a) % self.p] for a in range(self.p)))

    def shift(self, b: int) -> "CharAccum":
        """Accumulator of e(b/p) times this sum."""
        p = self.p
        return CharAccum(p, tuple(self.counts[(a - b) % p] for a in range(p)))

    def value(self) -> complex:
        re = math.fsum(c * math.cos(2 * math.pi * a / self.p) for a, c in enumerate(self.counts) if c)
        im = math.fsum(c * math.sin(2 * math.pi * a / self.p) for a, c in enumerate(self.counts) if c)
        return complex(re, im)

    def modulus(self) -> float:
        return abs(self.value())

    def error_bound(self) -> float:
        """Bound on floating error of :meth:`value`: p * total * machine epsilon."""
        return self.p * self.total * np.finfo(float).eps

    def to_json(self) -> dict:
        v, tol = self.value(), self.error_bound()
        # components below the rounding bound are reported as exact zeros
        parts = [0.0 if abs(x) <= tol else float(f"{x:.12g}") for x in (v.real, v.imag)]
        return {"p": self.p, "counts": [str(c) for c in self.counts], "value": parts}


def _check_u(u: MatF, n: int, ctx: FieldCtx) -> None:
    if u.ctx != ctx or u.n != n:
        raise CtxMismatch("matrix does not match (n, ctx)")


def _accumulate(u_flat: np.ndarray, domain: np.ndarray, n: int, ctx: FieldCtx, bounds) -> np.ndarray:
    """Counts per trace argument of psi(U.X) over ``domain[lo:hi]``."""
    lo, hi = bounds
    p, tm = ctx.p, ctx.trace_mul_table
    counts = np.zeros(p, dtype=np.int64)
    for s in range(lo, hi, CHUNK):
        x = decode(domain[s:min(hi, s + CHUNK)], n, ctx).reshape(-1, n * n)
        args = np.zeros(x.shape[0], dtype=np.int64)
        for pos in range(n * n):
            args += tm[u_flat[pos], x[:, pos]]
        counts += np.bincount(args % p, minlength=p)
    return counts


def _sum_over(space: Space, u: MatF, cap, workers: int) -> CharAccum:
    n, ctx = u.n, u.ctx
    check_dimension(n)
    check_cap(space_size(n, ctx), cap, f"character sum over {space.value}")
    domain = space_indices(space, n, ctx, cap)
    u_flat = np.array(u.entries, dtype=np.int64)
    parts = pmap(partial(_accumulate, u_flat, domain, n, ctx), split_range(0, domain.size, workers), workers)
    counts = sum(parts, np.zeros(ctx.p, dtype=np.int64))
    return CharAccum(ctx.p, tuple(int(c) for c in counts))


def sum_singular(u: MatF, cap: int | None = DEFAULT_CAP, workers: int = 1) -> CharAccum:
    """S(Z_n(F_q), U): psi(U.X) summed over all singular X."""
    acc = _sum_over(Space.SINGULAR, u, cap, workers)
    assert acc.total == z_order(u.n, u.ctx.q)
    return acc


def sum_sl(u: MatF, cap: int | None = DEFAULT_CAP, workers: int = 1) -> CharAccum:
    """S(SL_n(F_q), U): psi(U.X) summed over all X with det X = 1."""
    acc = _sum_over(Space.SL, u, cap, workers)
    assert acc.total == sl_order(u.n, u.ctx.q)
    return acc


def _kloosterman_block(u: np.ndarray, v: np.ndarray, h: np.ndarray, n: int, ctx: FieldCtx,
                       bounds) -> np.ndarray:
    lo, hi = bounds
    gl, inv = gl_with_inverses(n, ctx)
    p = ctx.p
    counts = np.zeros(p, dtype=np.int64)
    for s in range(lo, hi, CHUNK):
        x = gl[s:min(hi, s + CHUNK)]
        y = batch_matmul(h[None], inv[s:min(hi, s + CHUNK)], ctx)
        args = batch_trace_dot(u[None], x, ctx)[0] + batch_trace_dot(v[None], y, ctx)[0]
        counts += np.bincount(args % p, minlength=p)
    return counts


def kloosterman(u: MatF, v: MatF, h: MatF, cap: int | None = DEFAULT_CAP, workers: int = 1) -> CharAccum:
    """K(GL_n, U, V, H) = sum over invertible X of psi(U.X + V.(H X^{-1}))."""
    n, ctx = u.n, u.ctx
    check_dimension(n)
    for m in (v, h):
        _check_u(m, n, ctx)
    if not h.is_invertible():
        raise SingularH("H must be invertible")
    check_cap(space_size(n, ctx), cap, "Kloosterman sum")
    gl, _ = gl_with_inverses(n, ctx, cap)
    arrs = [np.array(m.entries, dtype=np.int32).reshape(n, n) for m in (u, v, h)]
    parts = pmap(partial(_kloosterman_block, *arrs, n, ctx), split_range(0, gl.shape[0], workers), workers)
    counts = sum(parts, np.zeros(ctx.p, dtype=np.int64))
    acc = CharAccum(ctx.p, tuple(int(c) for c in counts))
    assert acc.total == gl_order(n, ctx.q)
    return acc


# -- many sums at once ---------------------------------------------------------


def _counts_matrix(args: np.ndarray, p: int) -> np.ndarray:
    """Row-wise bincount of a (rows, cols) argument array -> (rows, p)."""
    rows = args.shape[0]
    flat = args + p * np.arange(rows, dtype=np.int64)[:, None]
    return np.bincount(flat.ravel(), minlength=rows * p).reshape(rows, p)


def transform_counts(u_codes: np.ndarray, x_codes: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """For each U row, counts per argument of psi(U.X) over all X rows: shape (len(u), p)."""
    p = ctx.p
    out = np.zeros((u_codes.shape[0], p), dtype=np.int64)
    step = max(1, BLOCK // max(1, x_codes.shape[0]))
    for s in range(0, u_codes.shape[0], step):
        blk = u_codes[s:s + step]
        acc = np.zeros((blk.shape[0], p), dtype=np.int64)
        for t in range(0, x_codes.shape[0], BLOCK):
            acc += _counts_matrix(batch_trace_dot(blk, x_codes[t:t + BLOCK], ctx), p)
        out[s:s + step] = acc
    return out


def moduli(counts: np.ndarray, p: int) -> np.ndarray:
    return np.abs(counts.astype(np.float64) @ _roots(p))


def _rank_key(mods):
    # float noise must not decide the argmax; ties fall to the lowest position
    return np.round(mods, 6)


# -- bound surveys ---------------------------------------------------------------


class SurveyKind:
    SINGULAR = "SINGULAR"
    SL = "SL"
    KLOOSTERMAN = "KLOOSTERMAN"
    ALL = (SINGULAR, SL, KLOOSTERMAN)


ENVELOPE_EXPONENT = {
    # n -> exponent of q in the uniform bound for nonzero parameters
    SurveyKind.SINGULAR: lambda n: Fraction(2 * n * n - 5, 2),
    SurveyKind.SL: lambda n: Fraction(n * n - 2),
    SurveyKind.KLOOSTERMAN: lambda n: Fraction(2 * n * n - 1, 2),
}


@dataclass(frozen=True)
class ScanSpec:
    """How the parameter space of a survey is covered.

    ``mode`` is ``"EXHAUSTIVE"`` or ``"SAMPLED"``; sampled scans draw ``size``
    parameter tuples from numpy's PCG64 generator seeded with ``seed``.  For
    Kloosterman surveys ``h_extra`` random invertible H are added to the
    identity.
    """

    mode: str = "EXHAUSTIVE"
    seed: int = 0
    size: int = 512
    h_extra: int = 0

    def __post_init__(self):
        if self.mode not in ("EXHAUSTIVE", "SAMPLED"):
            raise ConfigInvalid(f"unknown scan mode {self.mode!r}")

    def to_json(self) -> dict:
        out = {"mode": self.mode}
        if self.mode == "SAMPLED":
            out.update(seed=self.seed, size=self.size)
        out["h_extra"] = self.h_extra
        return out


@dataclass(frozen=True)
class BoundReport:
    kind: str
    n: int
    q: int
    ctx: FieldCtx
    envelope_exponent: Fraction
    observed_max: float
    witness: tuple[MatF, ...]
    witness_accum: CharAccum
    scanned: int
    scan: ScanSpec
    extra: dict = field(default_factory=dict)

    @property
    def implied_constant(self) -> float:
        return self.observed_max / self.ctx.q ** float(self.envelope_exponent)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "q": self.q,
            "field": self.ctx.describe(),
            "envelope_exponent": str(self.envelope_exponent),
            "observed_max": float(f"{self.observed_max:.12g}"),
            "implied_constant": float(f"{self.implied_constant:.12g}"),
            "witness": [m.to_json() for m in self.witness],
            "witness_accum": self.witness_accum.to_json(),
            "scanned": str(self.scanned),
            "scan": self.scan.to_json(),
        }


def _survey_block(domain_codes: np.ndarray, u_idx: np.ndarray, n: int, ctx: FieldCtx, bounds):
    """Best (modulus, position, counts) over ``u_idx[lo:hi]``; ties go to the lower position."""
    lo, hi = bounds
    u_codes = decode(u_idx[lo:hi], n, ctx)
    counts = transform_counts(u_codes, domain_codes, ctx)
    j = int(np.argmax(_rank_key(moduli(counts, ctx.p))))
    return float(_rank_key(moduli(counts[j:j + 1], ctx.p))[0]), lo + j, counts[j]


def _kl_survey_block(u_idx, v_idx, h_pos, h_codes, n, ctx, bounds):
    lo, hi = bounds
    gl, inv = gl_with_inverses(n, ctx)
    p = ctx.p
    best = (-1.0, -1, None)
    ys = {}
    for t in range(lo, hi):
        hp = int(h_pos[t])
        if hp not in ys:
            ys[hp] = batch_matmul(h_codes[hp][None], inv, ctx)
        u = decode(u_idx[t:t + 1], n, ctx)
        v = decode(v_idx[t:t + 1], n, ctx)
        args = batch_trace_dot(u, gl, ctx)[0] + batch_trace_dot(v, ys[hp], ctx)[0]
        counts = np.bincount(args % p, minlength=p)
        mod = float(_rank_key(moduli(counts[None], p))[0])
        if mod > best[0]:
            best = (mod, t, counts)
    return best


def _merge_best(parts):
    best = parts[0]
    for part in parts[1:]:
        if part[0] > best[0]:
            best = part
    return best


def default_h_list(n: int, ctx: FieldCtx, scan: ScanSpec, cap=DEFAULT_CAP) -> np.ndarray:
    """Identity plus ``scan.h_extra`` seeded draws from GL_n (canonical order positions)."""
    gl, _ = gl_with_inverses(n, ctx, cap)
    ident = np.eye(n, dtype=np.int32)
    hs = [ident]
    if scan.h_extra:
        rng = np.random.default_rng([scan.seed, 1])
        for pos in rng.integers(0, gl.shape[0], size=scan.h_extra):
            hs.append(np.array(gl[pos]))
    return np.stack(hs)


def bound_survey(kind: str, n: int, ctx: FieldCtx, scan: ScanSpec = ScanSpec(),
                 cap: int | None = DEFAULT_CAP, workers: int = 1) -> BoundReport:
    """Largest |sum| over nonzero parameters and the implied constant of its envelope.

    Exhaustive scans visit every nonzero U (or every (U, V) != (0, 0) for each
    H in the H list); sampled scans draw ``scan.size`` parameters.
    """
    if kind not in SurveyKind.ALL:
        raise ConfigInvalid(f"unknown survey kind {kind!r}")
    check_dimension(n)
    total = space_size(n, ctx)
    check_cap(total, cap, "survey domain")
    rng = np.random.default_rng(scan.seed)

    if kind in (SurveyKind.SINGULAR, SurveyKind.SL):
        if scan.mode == "EXHAUSTIVE":
            check_cap(total - 1, EXHAUSTIVE_TUPLE_CAP, "exhaustive survey")
            u_idx = np.arange(1, total, dtype=np.int64)
        else:
            u_idx = rng.integers(1, total, size=scan.size, dtype=np.int64)
        space = Space.SINGULAR if kind == SurveyKind.SINGULAR else Space.SL
        domain = decode(space_indices(space, n, ctx, cap), n, ctx)
        parts = pmap(partial(_survey_block, domain, u_idx, n, ctx), split_range(0, u_idx.size, workers), workers)
        mod, pos, counts = _merge_best(parts)
        witness = (MatF.from_index(ctx, n, int(u_idx[pos])),)
        scanned = int(u_idx.size)
    else:
        h_codes = default_h_list(n, ctx, scan, cap)
        if scan.mode == "EXHAUSTIVE":
            tuples = (total * total - 1) * h_codes.shape[0]
            check_cap(tuples, EXHAUSTIVE_TUPLE_CAP, "exhaustive Kloosterman survey")
            flat = np.arange(1, total * total, dtype=np.int64)
            h_pos = np.repeat(np.arange(h_codes.shape[0]), flat.size)
            flat = np.tile(flat, h_codes.shape[0])
        else:
            flat = rng.integers(1, total * total, size=scan.size, dtype=np.int64)
            h_pos = rng.integers(0, h_codes.shape[0], size=scan.size)
        u_idx, v_idx = flat // total, flat % total
        parts = pmap(partial(_kl_survey_block, u_idx, v_idx, h_pos, h_codes, n, ctx),
                     split_range(0, flat.size, workers), workers)
        mod, pos, counts = _merge_best(parts)
        witness = (MatF.from_index(ctx, n, int(u_idx[pos])), MatF.from_index(ctx, n, int(v_idx[pos])),
                   to_matf(h_codes[int(h_pos[pos])], ctx))
        scanned = int(flat.size)

    acc = CharAccum(ctx.p, tuple(int(c) for c in counts))
    return BoundReport(kind, n, ctx.q, ctx, ENVELOPE_EXPONENT[kind](n), acc.modulus(), witness, acc,
                       scanned, scan)


def reevaluate(report: BoundReport) -> CharAccum:
    """Recompute the witness sum through the single-sum entry points."""
    if report.kind == SurveyKind.SINGULAR:
        return sum_singular(report.witness[0])
    if report.kind == SurveyKind.SL:
        return sum_sl(report.witness[0])
    return kloosterman(*report.witness)


# -- Parseval ----------------------------------------------------------------------


def set_transform(indices: np.ndarray, n: int, ctx: FieldCtx, cap: int | None = DEFAULT_CAP) -> np.ndarray:
    """Counts per argument of sum_{A in set} psi(U.A), for every U in canonical order."""
    total = space_size(n, ctx)
    check_cap(total, cap, "set transform")
    a_codes = decode(indices, n, ctx)
    out = np.zeros((total, ctx.p), dtype=np.int64)
    for s in range(0, total, CHUNK):
        u = decode(np.arange(s, min(total, s + CHUNK)), n, ctx)
        out[s:s + u.shape[0]] = transform_counts(u, a_codes, ctx)
    return out


def parseval_sum(indices: np.ndarray, n: int, ctx: FieldCtx, cap: int | None = DEFAULT_CAP) -> float:
    """sum over all U of |sum_{A in set} psi(U.A)|^2; equals q^{n^2} * #set."""
    counts = set_transform(indices, n, ctx, cap)
    vals = counts.astype(np.float64) @ _roots(ctx.p)
    return math.fsum((vals.real**2 + vals.imag**2).tolist())
