"""Per-iteration run records and their CSV/JSON serialization.

CSV layout: metadata lines ``# key=<json value>`` followed by a header row
and one row per iteration, in :data:`COLUMNS` order.  Floats are written
with 17 significant digits so a write/read round trip is exact.  Values
that do not apply to a solver (for example ``bound_istm`` for AIM) are
NaN in memory, empty cells in CSV and ``null`` in JSON.

Triplets ``(x_i, f(x_i), grad f(x_i))`` live next to a CSV trace in
``<stem>.triplets.csv`` and inside the JSON document otherwise.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

__all__ = ["COLUMNS", "RunTrace", "write_trace", "read_trace", "triplets_path"]

COLUMNS = (
    "k", "f_gap", "grad_norm", "dist_sq_to_opt", "L_k", "p_k", "alpha_k",
    "A_k", "delta_k", "oracle_calls_cum", "bound_est1", "bound_est2",
    "bound_istm",
)
_INT_COLUMNS = {"k", "oracle_calls_cum"}

# metadata written last so that everything above it can be compared bytewise
_VOLATILE_META = ("timestamp",)


class RunTrace:
    """Rows of iteration records plus run metadata.

    ``points`` optionally keeps the reported iterate of each row,
    ``triplets`` the oracle queries as ``(x, f, g)`` with the true gradient,
    and ``restarts`` per-restart summaries for RISTM.
    """

    def __init__(self, meta=None):
        self.meta = dict(meta or {})
        self.rows = []
        self.points = []
        self.triplets = []
        self.restarts = []
        self.final_point = None
        self.final_state = None

    def append(self, **fields):
        unknown = set(fields) - set(COLUMNS)
        if unknown:
            raise KeyError(f"unknown trace fields: {sorted(unknown)}")
        row = {c: fields.get(c, math.nan) for c in COLUMNS}
        row["k"] = int(row["k"])
        calls = row["oracle_calls_cum"]
        row["oracle_calls_cum"] = 0 if isinstance(calls, float) and math.isnan(calls) else int(calls)
        self.rows.append(row)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        return np.array([r[name] for r in self.rows], dtype=float)

    @property
    def final(self):
        return self.rows[-1]

    def add_triplet(self, x, f, g):
        self.triplets.append((np.array(x, dtype=float), float(f), np.array(g, dtype=float)))

    def extend(self, other, k_offset=0, calls_offset=0):
        """Append ``other``'s rows, shifting ``k`` and call counts."""
        for r in other.rows:
            r = dict(r)
            r["k"] += k_offset
            r["oracle_calls_cum"] += calls_offset
            self.rows.append(r)
        self.points.extend(other.points)
        self.triplets.extend(other.triplets)

    def check_invariants(self):
        ks = [r["k"] for r in self.rows]
        calls = [r["oracle_calls_cum"] for r in self.rows]
        if ks and (ks[0] != 0 or any(b <= a for a, b in zip(ks, ks[1:]))):
            raise ValueError("k must start at 0 and increase strictly")
        if any(b < a for a, b in zip(calls, calls[1:])):
            raise ValueError("oracle_calls_cum must be nondecreasing")
        for r in self.rows:
            for c in COLUMNS:
                if math.isinf(r[c]):
                    raise ValueError(f"non-finite value in column {c} at k={r['k']}")


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    return format(v, ".17g")


def _parse(v, integer=False):
    if v == "":
        return math.nan
    return int(v) if integer else float(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return None if math.isnan(v) else v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _unjson(v):
    return math.nan if v is None else v


def _ordered_meta(meta):
    keys = [k for k in meta if k not in _VOLATILE_META]
    keys += [k for k in _VOLATILE_META if k in meta]
    return keys


def triplets_path(path):
    path = Path(path)
    return path.with_name(path.stem + ".triplets.csv")


def write_trace(trace, path, fmt=None):
    """Write ``trace`` to ``path`` as ``csv`` or ``json`` (default: by suffix)."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    if fmt == "json":
        doc = {
            "meta": {k: _jsonable(trace.meta[k]) for k in _ordered_meta(trace.meta)},
            "columns": list(COLUMNS),
            "rows": [[_jsonable(r[c]) for c in COLUMNS] for r in trace.rows],
            "restarts": _jsonable(trace.restarts),
            "triplets": [
                {"x": _jsonable(x), "f": _jsonable(f), "g": _jsonable(g)}
                for x, f, g in trace.triplets
            ],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n")
        return path
    if fmt != "csv":
        raise ValueError(f"unknown trace format {fmt!r}")
    meta = dict(trace.meta)
    if trace.restarts:
        meta["restarts"] = trace.restarts
    with path.open("w", newline="") as fh:
        for k in _ordered_meta(meta):
            fh.write(f"# {k}={json.dumps(_jsonable(meta[k]))}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in trace.rows:
            w.writerow([_fmt(r[c]) for c in COLUMNS])
    tp = triplets_path(path)
    if trace.triplets:
        n = trace.triplets[0][0].size
        with tp.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["f"] + [f"x{i}" for i in range(n)] + [f"g{i}" for i in range(n)])
            for x, f, g in trace.triplets:
                w.writerow([_fmt(f)] + [_fmt(v) for v in x] + [_fmt(v) for v in g])
    return path


def read_trace(path):
    """Inverse of :func:`write_trace`."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        tr = RunTrace(doc.get("meta", {}))
        cols = doc["columns"]
        for row in doc["rows"]:
            tr.rows.append({c: (_unjson(v) if c not in _INT_COLUMNS else int(v))
                            for c, v in zip(cols, row)})
        tr.restarts = doc.get("restarts", [])
        for t in doc.get("triplets", []):
            tr.add_triplet(t["x"], t["f"], t["g"])
        return tr
    meta = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, val = lines[i][1:].strip().partition("=")
        meta[key] = json.loads(val)
        i += 1
    tr = RunTrace(meta)
    tr.restarts = meta.pop("restarts", [])
    reader = csv.reader(lines[i:])
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"{path}: unexpected trace header {header}")
    for row in reader:
        tr.rows.append({c: _parse(v, c in _INT_COLUMNS) for c, v in zip(header, row)})
    tp = triplets_path(path)
    if tp.exists():
        with tp.open() as fh:
            reader = csv.reader(fh)
            header = next(reader)
            n = (len(header) - 1) // 2
            for row in reader:
                vals = [float(v) for v in row]
                tr.add_triplet(vals[1:1 + n], vals[0], vals[1 + n:])
    return tr
