"""File formats: instances, chains, result tables.

Exact rationals are serialized as strings ("3/4", "2"); floats never enter the
JSON formats.  JSON output is canonical (sorted keys, two-space indent,
trailing newline) so identical inputs produce byte-identical files.  The CSV
result schema is method,phi,size,coverage,seed with rows ordered by
(method, phi, seed) and decimals printed to 12 significant digits.
"""

from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .chain import NestedChain
from .experiments import ResultRow
from .hypergraph import Hyperedge, InputError, WeightedHypergraph

__all__ = [
    "canonical_json",
    "load_instance",
    "save_instance",
    "load_chain",
    "save_chain",
    "result_csv",
    "write_result_csv",
]

CSV_HEADER = ("method", "phi", "size", "coverage", "seed")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _frac(value: object, where: str) -> Fraction:
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, int):
            return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad rational {value!r}: {exc}") from None
    raise InputError(f"{where}: rationals must be strings or ints, got {value!r}")


def load_instance(path: str | Path) -> tuple[WeightedHypergraph, list[str] | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance {path}: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise InputError(f"instance {path}: needs 'n' and 'edges' fields")
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        raise InputError(f"instance {path}: 'n' must be a non-negative int")
    labels = doc.get("vertices")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise InputError(f"instance {path}: 'vertices' must list {n} labels")
    edges = []
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, dict) or "v" not in e or "w" not in e:
            raise InputError(f"instance {path}: edge {i} needs 'v' and 'w'")
        edges.append((e["v"], _frac(e["w"], f"instance {path}: edge {i}")))
    try:
        h = WeightedHypergraph.build(n, edges)
    except InputError as exc:
        raise InputError(f"instance {path}: {exc}") from None
    return h, labels


def save_instance(path: str | Path, h: WeightedHypergraph, labels: Sequence[str] | None = None) -> None:
    doc: dict = {
        "n": h.n,
        "edges": [{"v": sorted(e.vertices), "w": str(e.weight)} for e in h.edges],
    }
    if labels is not None:
        doc["vertices"] = list(labels)
    Path(path).write_text(canonical_json(doc))


def save_chain(path: str | Path, chain: NestedChain) -> None:
    stats = [
        {"size": len(s), "induced": str(e), "residual": str(chain.total - e)}
        for s, e in zip(chain.sets, chain.induced)
    ]
    doc = {
        "sets": [sorted(s) for s in chain.sets],
        "breakpoints": [str(b) for b in chain.breakpoints],
        "stats": stats,
    }
    Path(path).write_text(canonical_json(doc))


def load_chain(path: str | Path) -> NestedChain:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read chain {path}: {exc}") from None
    for key in ("sets", "breakpoints", "stats"):
        if key not in doc:
            raise InputError(f"chain {path}: missing '{key}'")
    sets = tuple(frozenset(s) for s in doc["sets"])
    breakpoints = tuple(_frac(b, f"chain {path}") for b in doc["breakpoints"])
    induced = tuple(_frac(st["induced"], f"chain {path}") for st in doc["stats"])
    residual_top = _frac(doc["stats"][-1]["residual"], f"chain {path}")
    chain = NestedChain(sets, breakpoints, induced, induced[-1] + residual_top)
    try:
        chain.validate()
    except Exception as exc:
        raise InputError(f"chain {path}: {exc}") from None
    return chain


def result_csv(rows: Sequence[ResultRow]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in sorted(rows, key=lambda r: (r.method, r.phi, r.seed)):
        writer.writerow(
            [r.method, "%.12g" % float(r.phi), r.size, "%.12g" % float(r.coverage), r.seed]
        )
    return buf.getvalue()


def write_result_csv(path: str | Path, rows: Sequence[ResultRow]) -> None:
    Path(path).write_text(result_csv(rows))
