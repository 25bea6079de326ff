"""Prime divisors of determinants of integer sumset matrices.

Residue-class statistics of integer sets (nu_p, mu_{u,p}, sigma_p), a census
of the residue-class threshold over primes in [Q, 2Q], and the set of primes
dividing the nonzero determinants det(A + B) with A, B running over all
matrices with entries from two integer sets.

Convention for zero determinants: the product of all det(A + B) is zero as
soon as one sum is singular, so only nonzero factors are factored and the
number of singular sums is reported separately as ``zero_det_pairs``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .enumeration import batch_det, check_cap
from .errors import ConfigInvalid, RangeTooLarge
from .field import field_new, is_prime
from .matrix import check_dimension
from .parallel import pmap, split_range

PAIR_CAP = 2**24
MAX_SIEVE = 2**31
MAX_SIEVE_WIDTH = 2**26


@dataclass(frozen=True)
class IntSet:
    N: int
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(sorted(set(int(x) for x in self.members)))
        if not m:
            raise ConfigInvalid("integer set must be nonempty")
        if m[0] < 1 or m[-1] > self.N:
            raise ConfigInvalid(f"members must lie in [1, {self.N}]")
        object.__setattr__(self, "members", m)

    @classmethod
    def of(cls, members, N: int | None = None) -> "IntSet":
        members = list(members)
        return cls(max(members) if N is None else N, tuple(members))

    @classmethod
    def interval(cls, N: int) -> "IntSet":
        return cls(N, tuple(range(1, N + 1)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def to_json(self) -> dict:
        return {"N": self.N, "members": list(self.members)}


def _members(t) -> list[int]:
    return list(t.members) if isinstance(t, IntSet) else sorted(set(int(x) for x in t))


def class_multiplicities(t, p: int) -> np.ndarray:
    """mu_{u,p}(T) for u = 0..p-1."""
    if p < 2:
        raise ConfigInvalid("modulus must be at least 2")
    return np.bincount(np.array(_members(t), dtype=np.int64) % p, minlength=p)


def nu_p(t, p: int) -> int:
    """Number of residue classes mod p hit by T."""
    if p < 2:
        raise ConfigInvalid("modulus must be at least 2")
    return len({x % p for x in _members(t)})


def sigma_p(t, p: int) -> int:
    """Sum over residue classes of the squared class multiplicity."""
    mu = class_multiplicities(t, p)
    return int((mu * mu).sum())


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i::i] = False
    return np.nonzero(flags)[0]


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] by a segmented sieve."""
    if not 2 <= lo <= hi <= MAX_SIEVE:
        raise RangeTooLarge(f"need 2 <= lo <= hi <= {MAX_SIEVE}, got [{lo}, {hi}]")
    if hi - lo + 1 > MAX_SIEVE_WIDTH:
        raise RangeTooLarge(f"sieve width {hi - lo + 1} exceeds {MAX_SIEVE_WIDTH}")
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in _simple_sieve(math.isqrt(hi)).tolist():
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo::p] = False
    return [lo + i for i in np.nonzero(flags)[0].tolist()]


@dataclass(frozen=True)
class ResClassCensus:
    N: int
    Q: int
    rows: tuple[tuple[int, int, float, bool], ...]  # (p, nu_p, threshold, passed)

    @property
    def prime_count(self) -> int:
        return len(self.rows)

    @property
    def pass_count(self) -> int:
        return sum(1 for r in self.rows if r[3])

    @property
    def pass_fraction(self) -> float:
        return self.pass_count / self.prime_count if self.rows else 0.0

    @property
    def target_count(self) -> float:
        """0.6 Q / log Q, the number of passing primes the asymptotic statement asks for."""
        return 0.6 * self.Q / math.log(self.Q)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "Q": self.Q,
            "log": "natural",
            "rows": [{"p": p, "nu_p": nu, "threshold": float(f"{th:.12g}"), "pass": ok}
                     for p, nu, th, ok in self.rows],
            "prime_count": self.prime_count,
            "pass_count": self.pass_count,
            "pass_fraction": float(f"{self.pass_fraction:.12g}"),
            "target_count": float(f"{self.target_count:.12g}"),
            "meets_target": self.pass_count >= self.target_count,
        }


def resclass_census(t: IntSet, Q: int) -> ResClassCensus:
    """Compare nu_p(T) with p / (20 log N log p) for every prime p in [Q, 2Q]."""
    if Q < 2:
        raise ConfigInvalid("Q must be at least 2")
    log_n = math.log(t.N)
    rows = []
    for p in primes_in(Q, 2 * Q):
        nu = nu_p(t, p)
        threshold = p / (20 * log_n * math.log(p)) if log_n > 0 else math.inf
        rows.append((p, nu, threshold, nu >= threshold))
    return ResClassCensus(t.N, Q, tuple(rows))


# -- determinants of integer sumsets ---------------------------------------------


def integer_matrices(entries, n: int) -> np.ndarray:
    """All n x n integer matrices with entries from ``entries``, canonical product order."""
    vals = sorted(set(int(x) for x in entries))
    return np.array(list(itertools.product(vals, repeat=n * n)), dtype=np.int64).reshape(-1, n, n)


def _perm_sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def det_bound(n: int, N: int) -> int:
    """|det(A + B)| <= n! (2N)^n for entries in [1, N]."""
    return math.factorial(n) * (2 * N) ** n


def batch_int_det(m: np.ndarray) -> np.ndarray:
    """Exact integer determinants by the Leibniz expansion.

    ``m`` must hold values small enough that every product fits in int64, or
    have ``dtype=object`` for arbitrary precision.
    """
    n = m.shape[-1]
    out = np.zeros(m.shape[0], dtype=m.dtype)
    for perm in itertools.permutations(range(n)):
        term = m[:, 0, perm[0]].copy()
        for i in range(1, n):
            term = term * m[:, i, perm[i]]
        out = out + term if _perm_sign(perm) > 0 else out - term
    return out


def _dtype_for(n: int, N: int):
    return np.int64 if det_bound(n, N) * math.factorial(n) < 2**62 else object


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of |m| by trial division."""
    m = abs(int(m))
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class OmegaReport:
    n: int
    R: IntSet
    S: IntSet
    primes: tuple[int, ...]
    zero_det_pairs: int
    total_pairs: int

    @property
    def omega(self) -> int:
        return len(self.primes)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "R": self.R.to_json(),
            "S": self.S.to_json(),
            "primes": list(self.primes),
            "omega": self.omega,
            "zero_det_pairs": str(self.zero_det_pairs),
            "total_pairs": str(self.total_pairs),
        }


def _omega_part(a, b, dtype, bounds):
    lo, hi = bounds
    values: set[int] = set()
    zeros = 0
    step = max(1, 2**18 // max(1, b.shape[0]))
    for s in range(lo, hi, step):
        sums = (a[s:min(hi, s + step), None] + b[None]).reshape(-1, *a.shape[1:]).astype(dtype)
        dets = batch_int_det(sums)
        nz = dets != 0
        zeros += int((~nz).sum())
        values.update(abs(int(v)) for v in np.unique(dets[nz]).tolist())
    return values, zeros


def omega_W(r: IntSet, s: IntSet, n: int, cap: int | None = PAIR_CAP, workers: int = 1) -> OmegaReport:
    """Distinct primes dividing some nonzero det(A + B), A in M_n(R), B in M_n(S)."""
    check_dimension(n)
    total = len(r) ** (n * n) * len(s) ** (n * n)
    check_cap(total, cap, "integer pair scan")
    a, b = integer_matrices(r, n), integer_matrices(s, n)
    dtype = _dtype_for(n, max(r.N, s.N))
    parts = pmap(partial(_omega_part, a, b, dtype), split_range(0, a.shape[0], workers), workers)
    values = set().union(*(v for v, _ in parts))
    zeros = sum(z for _, z in parts)
    primes = sorted(set().union(*(prime_factors(v) for v in values))) if values else []
    return OmegaReport(n, r, s, tuple(primes), zeros, total)


def _reduce(mats: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Unique reductions mod p of a batch of integer matrices, and the preimage map."""
    n = mats.shape[-1]
    red, inverse = np.unique((mats % p).reshape(-1, n * n), axis=0, return_inverse=True)
    return red.reshape(-1, n, n), inverse.reshape(-1)


def divides_W_witness(r: IntSet, s: IntSet, n: int, p: int, cap: int | None = PAIR_CAP):
    """A pair (A, B) of integer matrices with p | det(A + B) != 0, or ``None``.

    Works modulo p: the entry sets are reduced to M_n(R mod p), M_n(S mod p)
    (duplicates collapse, preimages are tracked), singular reduced sums are
    located with field arithmetic over F_p, and only those are lifted back to
    the integers to find one with a nonzero determinant.
    """
    check_dimension(n)
    if not is_prime(p):
        raise ConfigInvalid(f"{p} is not prime")
    check_cap(len(r) ** (n * n) * len(s) ** (n * n), cap, "integer pair scan")
    if p > det_bound(n, max(r.N, s.N)):
        return None
    a, b = integer_matrices(r, n), integer_matrices(s, n)
    ra, ia = _reduce(a, p)
    rb, ib = _reduce(b, p)
    singular = _singular_reduced_pairs(ra, rb, p)
    dtype = _dtype_for(n, max(r.N, s.N))
    for i, j in singular:
        lifts_a = a[ia == i]
        lifts_b = b[ib == j]
        sums = (lifts_a[:, None] + lifts_b[None]).reshape(-1, n, n).astype(dtype)
        dets = batch_int_det(sums)
        hit = np.nonzero(dets != 0)[0]
        if hit.size:
            k = int(hit[0])
            return lifts_a[k // lifts_b.shape[0]], lifts_b[k % lifts_b.shape[0]]
    return None


def _singular_reduced_pairs(ra: np.ndarray, rb: np.ndarray, p: int) -> list[tuple[int, int]]:
    """(i, j) with det(ra[i] + rb[j]) = 0 over F_p, in lexicographic order."""
    n = ra.shape[-1]
    out = []
    if p <= 2**10:
        ctx = field_new(p)
        for i in range(ra.shape[0]):
            sums = ((ra[i][None] + rb) % p).astype(np.int32)
            out.extend((i, int(j)) for j in np.nonzero(batch_det(sums, ctx) == 0)[0])
    else:
        # no operation tables this large: det of the reduced sum, then reduce
        for i in range(ra.shape[0]):
            sums = ((ra[i][None] + rb) % p).astype(object)
            dets = batch_int_det(sums)
            out.extend((i, int(j)) for j in range(rb.shape[0]) if dets[j] % p == 0)
    return out


def divides_W(r: IntSet, s: IntSet, n: int, p: int, cap: int | None = PAIR_CAP) -> bool:
    """True iff p divides some nonzero det(A + B)."""
    return divides_W_witness(r, s, n, p, cap) is not None
