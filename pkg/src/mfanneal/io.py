"""G-set graph parsing and result serialization.

G-set files are whitespace-separated text: a header ``n m`` followed by m
edge lines ``u v w`` with 1-indexed vertices and real weights. Vertices are
converted to 0-indexed exactly once, here at the parse boundary. Numeric
output uses ``repr`` formatting ('.' decimal separator, full precision), so
every value survives a write/read round trip bit-exactly.
"""

from __future__ import annotations

import io as _stdio
import json
from dataclasses import dataclass, field

import numpy as np

from .ensemble import TrialBatchResult

RESULT_SCHEMA = "mfanneal.result/v1"


class GsetFormatError(ValueError):
    """Malformed G-set input; carries the 1-based line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_gset(source):
    """Parse G-set text (string or file-like) into a WeightedGraph.

    Rejects malformed headers, out-of-range or repeated edges, self-loops and
    edge-count mismatches, each with the offending line number.
    """
    from .model import WeightedGraph

    if isinstance(source, str):
        stream = _stdio.StringIO(source)
    else:
        stream = source

    header = None
    edges = []
    seen = set()
    n = m = 0
    for line_no, raw in enumerate(stream, start=1):
        tokens = raw.split()
        if not tokens:
            continue
        if header is None:
            if len(tokens) != 2:
                raise GsetFormatError(line_no, f"expected header 'n m', got {raw.strip()!r}")
            try:
                n, m = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GsetFormatError(line_no, f"non-integer header field in {raw.strip()!r}")
            if n < 1 or m < 0:
                raise GsetFormatError(line_no, f"invalid sizes n={n}, m={m}")
            header = (n, m)
            continue
        if len(tokens) != 3:
            raise GsetFormatError(line_no, f"expected 'u v w', got {raw.strip()!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
            w = float(tokens[2])
        except ValueError:
            raise GsetFormatError(line_no, f"non-numeric edge field in {raw.strip()!r}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise GsetFormatError(line_no, f"vertex index out of range in {raw.strip()!r}")
        if u == v:
            raise GsetFormatError(line_no, f"self-loop on vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GsetFormatError(line_no, f"duplicate edge {u} {v}")
        seen.add(key)
        if len(edges) >= m:
            raise GsetFormatError(line_no, f"more than the declared {m} edges")
        edges.append((u - 1, v - 1, w))
    if header is None:
        raise GsetFormatError(1, "empty input")
    if len(edges) != m:
        raise GsetFormatError(line_no, f"declared {m} edges but found {len(edges)}")
    return WeightedGraph.from_edges(n, edges)


def load_gset(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_gset(fh)


@dataclass
class ResultRecord:
    """Self-describing run record: the config echo makes it replayable."""

    problem: str
    solver: str
    config: dict
    seed: int
    batches: list
    wall_clock_s: float = 0.0
    version: str = "0.1.0"
    notes: dict = field(default_factory=dict)


def _batch_to_dict(batch: TrialBatchResult) -> dict:
    return {
        "amplitude": batch.amplitude,
        "objective": batch.objective,
        "n_trials": batch.n_trials,
        "n_failed": batch.n_failed,
        "mean": batch.mean,
        "best": batch.best,
        "std": batch.std,
        "trials": [
            {
                "index": t.index,
                "value": t.value,
                "spin_digest": t.spin_digest,
                "failed": t.failed,
                "error": t.error,
            }
            for t in batch.per_trial
        ],
        "ecdf": [[float(v), float(f)] for v, f in np.asarray(batch.ecdf)],
        "best_spins": None if batch.best_spins is None
        else [int(s) for s in batch.best_spins],
    }


def write_results_json(record: ResultRecord) -> str:
    doc = {
        "schema": RESULT_SCHEMA,
        "problem": record.problem,
        "solver": record.solver,
        "config": record.config,
        "seed": record.seed,
        "wall_clock_s": record.wall_clock_s,
        "version": record.version,
        "notes": record.notes,
        "batches": [_batch_to_dict(b) for b in record.batches],
    }
    return json.dumps(doc, indent=2) + "\n"


def read_results_json(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != RESULT_SCHEMA:
        raise ValueError(f"unknown result schema {doc.get('schema')!r}")
    return doc


CSV_COLUMNS = [
    "amplitude", "kind", "trial", "value", "spin_digest", "failed",
    "mean", "best", "std", "n_trials", "n_failed",
]


def write_results_csv(record: ResultRecord) -> str:
    """One row per trial plus one summary row per batch, after a header row."""
    lines = [",".join(CSV_COLUMNS)]
    for batch in record.batches:
        amp = repr(float(batch.amplitude))
        for t in batch.per_trial:
            lines.append(",".join([
                amp, "trial", str(t.index), repr(float(t.value)), t.spin_digest,
                "1" if t.failed else "0", "", "", "", "", "",
            ]))
        lines.append(",".join([
            amp, "summary", "", "", "", "",
            repr(float(batch.mean)), repr(float(batch.best)), repr(float(batch.std)),
            str(batch.n_trials), str(batch.n_failed),
        ]))
    return "\n".join(lines) + "\n"


def read_results_csv(text: str) -> list:
    """Parse rows back into dicts; numeric fields regain their exact values."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise ValueError("missing or unexpected CSV header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        row = dict(zip(CSV_COLUMNS, parts))
        for key in ("amplitude", "value", "mean", "best", "std"):
            row[key] = float(row[key]) if row[key] else None
        for key in ("trial", "n_trials", "n_failed"):
            row[key] = int(row[key]) if row[key] else None
        row["failed"] = row["failed"] == "1"
        rows.append(row)
    return rows


def write_ecdf_csv(record: ResultRecord) -> str:
    """Cut-value ECDF points per amplitude: plot-ready (value, fraction) pairs."""
    lines = ["amplitude,value,fraction"]
    for batch in record.batches:
        amp = repr(float(batch.amplitude))
        for v, f in np.asarray(batch.ecdf):
            lines.append(f"{amp},{repr(float(v))},{repr(float(f))}")
    return "\n".join(lines) + "\n"
