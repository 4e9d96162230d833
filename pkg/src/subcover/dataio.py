"""Dataset ingestion (edge lists, tag assignments) and results CSV handling."""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .oracles import CoverageOracle, GraphCutOracle


class ParseError(ValueError):
    """A dataset file line could not be interpreted."""


CSV_COLUMNS = (
    "run_id", "dataset", "algorithm", "eps", "tau", "alpha", "delta",
    "seed", "f_value", "size", "queries", "wall_ms", "status",
)


def _data_lines(path):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def parse_edge_list(path):
    """Read a whitespace-separated `u v [w]` edge list into a cut oracle.

    Comment lines start with '#'.  Edges are undirected; duplicates have
    their weights summed (default weight 1) and self-loops are dropped.
    Node ids are remapped onto 0..n-1 in sorted order; the original ids are
    kept on the oracle as ``original_ids``.
    """
    raw_edges = []
    nodes = set()
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"{path}:{lineno}: expected 'u v [w]', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"{path}:{lineno}: malformed edge {line!r}") from None
        nodes.add(u)
        nodes.add(v)
        if u != v:
            raw_edges.append((u, v, w))
    original = sorted(nodes)
    index = {node: i for i, node in enumerate(original)}
    edges = [(index[u], index[v], w) for u, v, w in raw_edges]
    oracle = GraphCutOracle(len(original), edges, name="edge-list")
    oracle.original_ids = tuple(original)
    return oracle


def parse_tag_assignments(path):
    """Read `elem_id tag_id tag_id ...` lines into a coverage oracle.

    Elements and tags are both remapped densely (sorted order); empty tag
    lists are allowed.  Repeated element ids are an error.  The original ids
    are kept as ``original_ids`` / ``original_tags``.
    """
    per_element = {}
    tags_seen = set()
    for lineno, line in _data_lines(path):
        parts = line.split()
        try:
            ids = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: malformed assignment {line!r}") from None
        elem, tags = ids[0], ids[1:]
        if elem in per_element:
            raise ParseError(f"{path}:{lineno}: duplicate element id {elem}")
        per_element[elem] = tags
        tags_seen.update(tags)
    original_elems = sorted(per_element)
    original_tags = sorted(tags_seen)
    tag_index = {t: i for i, t in enumerate(original_tags)}
    tag_sets = [
        sorted(tag_index[t] for t in set(per_element[e])) for e in original_elems
    ]
    oracle = CoverageOracle(tag_sets, total_tags=len(original_tags), name="tag-file")
    oracle.original_ids = tuple(original_elems)
    oracle.original_tags = tuple(original_tags)
    return oracle


@dataclass(frozen=True)
class ResultRow:
    run_id: int
    dataset: str
    algorithm: str
    eps: float
    tau: float
    alpha: float
    delta: float
    seed: int
    f_value: float
    size: int
    queries: int
    wall_ms: float
    status: str


def _fmt(value):
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def write_results_csv(rows, path):
    """Write result rows with the fixed header; floats use 6 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in CSV_COLUMNS])


def read_results_csv(path):
    """Read back rows written by write_results_csv."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ParseError(f"{path}: unexpected results header {reader.fieldnames}")
        for record in reader:
            rows.append(ResultRow(
                run_id=int(record["run_id"]),
                dataset=record["dataset"],
                algorithm=record["algorithm"],
                eps=float(record["eps"]),
                tau=float(record["tau"]),
                alpha=float(record["alpha"]),
                delta=float(record["delta"]),
                seed=int(record["seed"]),
                f_value=float(record["f_value"]),
                size=int(record["size"]),
                queries=int(record["queries"]),
                wall_ms=float(record["wall_ms"]),
                status=record["status"],
            ))
    return rows
