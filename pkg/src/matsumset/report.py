"""Report envelope, serialisation and golden-file comparison.

A report is a JSON object::

    {"schema_version": 1, "library_version": ..., "command": ...,
     "config": {...}, "payload": {...}, "wall_time": seconds}

Exact quantities inside payloads are strings (integers as decimal strings,
rationals as ``"num/den"``) because counts can exceed 2**53.  JSON numbers
that are floats are approximate and compared with a relative tolerance.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

from .errors import IoFailure, ParseError, SchemaMismatch

SCHEMA_VERSION = 1
FLOAT_RTOL = 1e-9
# fields that legitimately differ between runs
VOLATILE = frozenset({"wall_time"})


def make_report(command: str, config: dict, payload: dict, wall_time: float) -> dict:
    from . import __version__

    return {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "command": command,
        "config": config,
        "payload": payload,
        "wall_time": round(wall_time, 6),
    }


def payload_bytes(report: dict) -> bytes:
    """Canonical byte form of the payload, used for determinism checks."""
    return json.dumps(report["payload"], sort_keys=True, separators=(",", ":")).encode()


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key in obj:
            yield from _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def to_csv(report: dict) -> str:
    """Flattened ``field,value`` view of the whole report."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for key, value in _flatten(report):
        w.writerow([key, json.dumps(value) if not isinstance(value, str) else value])
    return buf.getvalue()


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "csv":
        return to_csv(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write-then-rename so that a failed run never leaves a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    except OSError as exc:
        raise IoFailure(f"cannot write to {directory}: {exc}") from exc
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_report(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict) or "schema_version" not in data:
        raise ParseError(f"{path}: not a report")
    return data


def diff(got, want, path: str = "") -> list[str]:
    """Field-by-field differences; floats within relative 1e-9, everything else exact."""
    if isinstance(want, dict) and isinstance(got, dict):
        out = []
        for key in sorted(set(got) | set(want)):
            if key in VOLATILE:
                continue
            sub = f"{path}.{key}" if path else key
            if key not in got:
                out.append(f"{sub}: missing")
            elif key not in want:
                out.append(f"{sub}: unexpected")
            else:
                out.extend(diff(got[key], want[key], sub))
        return out
    if isinstance(want, list) and isinstance(got, list):
        if len(got) != len(want):
            return [f"{path}: length {len(got)} != {len(want)}"]
        out = []
        for i, (g, w) in enumerate(zip(got, want)):
            out.extend(diff(g, w, f"{path}[{i}]"))
        return out
    if isinstance(want, float) or isinstance(got, float):
        if isinstance(got, bool) or isinstance(want, bool) or not isinstance(got, (int, float)) \
                or not isinstance(want, (int, float)):
            return [f"{path}: {got!r} != {want!r}"]
        if math.isclose(got, want, rel_tol=FLOAT_RTOL, abs_tol=0.0) or got == want:
            return []
        return [f"{path}: {got!r} != {want!r}"]
    if type(got) is not type(want) or got != want:
        return [f"{path}: {got!r} != {want!r}"]
    return []


def compare(report_path: str, golden_path: str) -> list[str]:
    got, want = load_report(report_path), load_report(golden_path)
    if got["schema_version"] != want["schema_version"]:
        raise SchemaMismatch(f"schema_version {got['schema_version']} != {want['schema_version']}")
    return diff(got, want)
