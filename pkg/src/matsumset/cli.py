"""Command line front end: one subcommand per experiment family.

Every run is a pure function of its :class:`RunConfig`; the worker count only
changes how the work is partitioned.  Reports go to ``--out`` (written
atomically) or stdout.  Each flag can also be set through an environment
variable ``MATSUMSET_<FLAG>`` (e.g. ``MATSUMSET_WORKERS=8``); explicit flags
win.

Exit statuses: 0 success, 1 compare found differences, 2 invalid
configuration, 3 cap exceeded, 4 I/O failure, 5 schema mismatch, 6 parse
error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from .charsums import ScanSpec, bound_survey, kloosterman, sum_singular, sum_sl
from .enumeration import DEFAULT_CAP, Space, enumerate_indices, rank_profile
from .errors import ConfigInvalid, IoFailure, MatsumsetError, ParseError
from .field import field_new
from .integers import IntSet, omega_W, resclass_census
from .matrix import MatF, gl_order, sl_order, z_order
from .report import compare, make_report, render, write_atomic
from .sumsets import DensityRule, MatrixSet, asymptotic_table, count_singular_sums, count_sl_sums, gap_report

ENV_PREFIX = "MATSUMSET_"
COMMANDS = ("orders", "rankprofile", "charsum", "survey", "sumset", "sumprod", "asymtable", "resclass", "omega")


@dataclass
class RunConfig:
    command: str
    n: int = 2
    p: int = 2
    k: int = 1
    seed: int = 0
    workers: int = 1
    cap: int = DEFAULT_CAP
    out: str | None = None
    format: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigInvalid(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ConfigInvalid(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise ConfigInvalid("workers must be positive")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        return cls(**data)

    @property
    def ctx(self):
        return field_new(self.p, self.k)


# -- argument parsing --------------------------------------------------------------


def parse_matrix(spec: str, n: int, ctx) -> MatF:
    """``zero``, ``identity``, ``Eij`` (1-based unit matrix) or rows ``"a,b;c,d"`` of element codes."""
    s = spec.strip()
    if s == "zero":
        return MatF.zero(ctx, n)
    if s == "identity":
        return MatF.identity(ctx, n)
    try:
        if s[:1] in "eE" and len(s) == 3 and s[1:].isdigit():
            return MatF.unit(ctx, n, int(s[1]) - 1, int(s[2]) - 1)
        rows = [[int(x) for x in r.split(",")] for r in s.split(";")]
        m = MatF.from_rows(ctx, rows)
    except (ValueError, IndexError) as exc:
        raise ConfigInvalid(f"bad matrix spec {spec!r}: {exc}") from exc
    if m.n != n:
        raise ConfigInvalid(f"matrix spec {spec!r} is not {n} x {n}")
    return m


def parse_set(spec: str, n: int, ctx) -> MatrixSet:
    """``full``, ``zero``, ``identity``, ``random:SEED:SIZE``, ``entries:a,b,...`` or ``file:PATH``."""
    s = spec.strip()
    kind, _, rest = s.partition(":")
    try:
        if s == "full":
            return MatrixSet.full(n, ctx)
        if s in ("zero", "identity"):
            return MatrixSet.explicit([parse_matrix(s, n, ctx)])
        if kind == "random":
            seed, size = rest.split(":")
            return MatrixSet.random(n, ctx, int(seed), int(size))
        if kind == "entries":
            return MatrixSet.product_of_entries(n, ctx, [int(x) for x in rest.split(",")])
        if kind == "file":
            return _load_set_file(rest, n, ctx)
    except ValueError as exc:
        raise ConfigInvalid(f"bad set spec {spec!r}: {exc}") from exc
    raise ConfigInvalid(f"bad set spec {spec!r}")


def _load_set_file(path: str, n: int, ctx) -> MatrixSet:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    mats = data["matrices"] if isinstance(data, dict) else data
    return MatrixSet.explicit([MatF.from_rows(ctx, m) for m in mats], n, ctx)


def parse_intset(spec: str, N: int | None = None) -> IntSet:
    """Comma list of integers and ranges, e.g. ``"1,2,5-9"``."""
    vals: list[int] = []
    try:
        for part in spec.split(","):
            lo, dash, hi = part.strip().partition("-")
            vals.extend(range(int(lo), int(hi) + 1) if dash else [int(lo)])
    except ValueError as exc:
        raise ConfigInvalid(f"bad integer set {spec!r}") from exc
    return IntSet.of(vals, N)


# -- handlers -----------------------------------------------------------------------


def _orders(cfg: RunConfig) -> dict:
    n, q = cfg.n, cfg.ctx.q
    out = {"n": n, "q": q, "field": cfg.ctx.describe(), "gl": str(gl_order(n, q)), "sl": str(sl_order(n, q)),
           "z": str(z_order(n, q)), "total": str(q ** (n * n))}
    if cfg.options.get("verify"):
        counts = {s.value.lower(): len(enumerate_indices(s, n, cfg.ctx, cap=cfg.cap, workers=cfg.workers))
                  for s in (Space.GL, Space.SL, Space.SINGULAR)}
        out["enumerated"] = {"gl": str(counts["gl"]), "sl": str(counts["sl"]), "z": str(counts["singular"])}
        out["match"] = out["enumerated"] == {"gl": out["gl"], "sl": out["sl"], "z": out["z"]}
    return out


def _rankprofile(cfg: RunConfig) -> dict:
    prof = rank_profile(cfg.n, cfg.ctx, cap=cfg.cap, workers=cfg.workers)
    out = prof.to_json()
    out["formula"] = [str(c) for c in prof.formula]
    out["match"] = prof.counts == prof.formula
    q, n = prof.q, prof.n
    if n >= 2:
        sing = prof.stratum_at_most(n - 2)
        out["rank_le_n_minus_2"] = str(sing)
        out["log_q_rank_le_n_minus_2"] = float(f"{math.log(sing, q):.12g}")
    out["log_q_singular"] = float(f"{math.log(z_order(n, q), q):.12g}")
    return out


def _charsum(cfg: RunConfig) -> dict:
    o, ctx, n = cfg.options, cfg.ctx, cfg.n
    kind = o.get("kind", "singular").lower()
    u = parse_matrix(o.get("U", "zero"), n, ctx)
    out = {"kind": kind, "U": u.to_json()}
    if kind == "singular":
        acc = sum_singular(u, cap=cfg.cap, workers=cfg.workers)
    elif kind == "sl":
        acc = sum_sl(u, cap=cfg.cap, workers=cfg.workers)
    elif kind == "kloosterman":
        v = parse_matrix(o.get("V", "zero"), n, ctx)
        h = parse_matrix(o.get("H", "identity"), n, ctx)
        acc = kloosterman(u, v, h, cap=cfg.cap, workers=cfg.workers)
        out.update(V=v.to_json(), H=h.to_json())
    else:
        raise ConfigInvalid(f"unknown character sum {kind!r}")
    out["domain_size"] = str(acc.total)
    out["accum"] = acc.to_json()
    out["modulus"] = float(f"{acc.modulus():.12g}")
    return out


def _survey(cfg: RunConfig) -> dict:
    o = cfg.options
    scan = ScanSpec(o.get("mode", "EXHAUSTIVE").upper(), cfg.seed, int(o.get("size", 512)), int(o.get("h_extra", 0)))
    rep = bound_survey(o.get("kind", "SINGULAR").upper(), cfg.n, cfg.ctx, scan, cap=cfg.cap, workers=cfg.workers)
    return rep.to_json()


def _sumset(cfg: RunConfig) -> dict:
    o, ctx, n = cfg.options, cfg.ctx, cfg.n
    a, b = parse_set(o.get("A", "full"), n, ctx), parse_set(o.get("B", "full"), n, ctx)
    rep = gap_report(o.get("kind", "N"), a, b, workers=cfg.workers).to_json()
    if o.get("distinct"):
        counter = count_singular_sums if rep["kind"] == "N" else count_sl_sums
        rep["distinct_sums"] = str(counter(a, b, distinct=True, workers=cfg.workers))
    return rep


def _sumprod(cfg: RunConfig) -> dict:
    o, ctx, n = cfg.options, cfg.ctx, cfg.n
    sets = [parse_set(o.get(name, "full"), n, ctx) for name in "ABCD"]
    h = parse_matrix(o.get("H", "identity"), n, ctx)
    rep = gap_report("R", *sets, h=h, workers=cfg.workers).to_json()
    rep["H"] = h.to_json()
    return rep


def _asymtable(cfg: RunConfig) -> dict:
    o = cfg.options
    qs = [int(x) for x in str(o.get("qs", "2,3,4,5")).split(",")]
    rule = DensityRule(o.get("rule", "full"), float(o.get("exponent", 0.0)), cfg.seed)
    return {"kind": o.get("kind", "N").upper(), "n": cfg.n, "rule": rule.to_json(),
            "rows": asymptotic_table(o.get("kind", "N"), cfg.n, qs, rule, workers=cfg.workers)}


def _resclass(cfg: RunConfig) -> dict:
    o = cfg.options
    t = parse_intset(o.get("T", "1-100"), o.get("N"))
    return resclass_census(t, int(o.get("Q", 10))).to_json()


def _omega(cfg: RunConfig) -> dict:
    o = cfg.options
    r, s = parse_intset(o.get("R", "1,2")), parse_intset(o.get("S", "1"))
    return omega_W(r, s, cfg.n, cap=cfg.cap, workers=cfg.workers).to_json()


HANDLERS = {
    "orders": _orders,
    "rankprofile": _rankprofile,
    "charsum": _charsum,
    "survey": _survey,
    "sumset": _sumset,
    "sumprod": _sumprod,
    "asymtable": _asymtable,
    "resclass": _resclass,
    "omega": _omega,
}


def run(config: RunConfig | dict) -> dict:
    """Execute a configuration and return the report (without writing it)."""
    cfg = config if isinstance(config, RunConfig) else RunConfig.from_json(config)
    start = time.perf_counter()
    payload = HANDLERS[cfg.command](cfg)
    return make_report(cfg.command, cfg.to_json(), payload, time.perf_counter() - start)


def emit(report: dict, cfg: RunConfig) -> None:
    text = render(report, cfg.format)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


# -- argparse ---------------------------------------------------------------------


def _env(name: str, default):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    return type(default)(raw) if default is not None else raw


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=_env("n", 2))
    common.add_argument("--p", type=int, default=_env("p", 2))
    common.add_argument("--k", type=int, default=_env("k", 1))
    common.add_argument("--seed", type=int, default=_env("seed", 0))
    common.add_argument("--workers", type=int, default=_env("workers", 1))
    common.add_argument("--cap", type=int, default=_env("cap", DEFAULT_CAP))
    common.add_argument("--out", default=_env("out", None))
    common.add_argument("--format", choices=("json", "csv"), default=_env("format", "json"))

    parser = argparse.ArgumentParser(prog="matsumset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orders", parents=[common], help="closed-form #GL, #SL, #Z")
    p.add_argument("--verify", action="store_true", help="also count by enumeration")
    sub.add_parser("rankprofile", parents=[common], help="matrix counts per rank")

    p = sub.add_parser("charsum", parents=[common], help="one exact character sum")
    p.add_argument("--kind", choices=("singular", "sl", "kloosterman"), default="singular")
    p.add_argument("--U", default="zero")
    p.add_argument("--V", default="zero")
    p.add_argument("--H", default="identity")

    p = sub.add_parser("survey", parents=[common], help="maximal |sum| over nonzero parameters")
    p.add_argument("--kind", choices=("SINGULAR", "SL", "KLOOSTERMAN"), type=str.upper, default="SINGULAR")
    p.add_argument("--mode", choices=("EXHAUSTIVE", "SAMPLED"), type=str.upper, default="EXHAUSTIVE")
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--h-extra", type=int, default=0)

    p = sub.add_parser("sumset", parents=[common], help="N or T gap report")
    p.add_argument("--kind", choices=("N", "T"), type=str.upper, default="N")
    p.add_argument("--A", default="full")
    p.add_argument("--B", default="full")
    p.add_argument("--distinct", action="store_true", help="also count distinct sums")

    p = sub.add_parser("sumprod", parents=[common], help="R gap report")
    for name in "ABCD":
        p.add_argument(f"--{name}", default="full")
    p.add_argument("--H", default="identity")

    p = sub.add_parser("asymtable", parents=[common], help="q * count / (#A #B) per q")
    p.add_argument("--kind", choices=("N", "T"), type=str.upper, default="N")
    p.add_argument("--qs", default="2,3,4,5")
    p.add_argument("--rule", choices=("full", "random"), default="full")
    p.add_argument("--exponent", type=float, default=0.0)

    p = sub.add_parser("resclass", parents=[common], help="residue-class census over primes in [Q, 2Q]")
    p.add_argument("--T", default="1-100")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--Q", type=int, default=10)

    p = sub.add_parser("omega", parents=[common], help="primes dividing nonzero det(A + B)")
    p.add_argument("--R", default="1,2")
    p.add_argument("--S", default="1")

    p = sub.add_parser("compare", help="diff a report against a golden report")
    p.add_argument("report")
    p.add_argument("golden")
    return parser


_COMMON = ("command", "n", "p", "k", "seed", "workers", "cap", "out", "format")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    raw = vars(ns)
    options = {k: v for k, v in raw.items() if k not in _COMMON and v is not None and v is not False}
    return RunConfig(**{k: raw[k] for k in _COMMON}, options=options)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "compare":
            diffs = compare(ns.report, ns.golden)
            for line in diffs:
                print(line)
            return 1 if diffs else 0
        cfg = config_from_args(ns)
        emit(run(cfg), cfg)
        return 0
    except MatsumsetError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
