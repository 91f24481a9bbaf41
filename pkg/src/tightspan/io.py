"""Reading spaces and subgroups, writing complexes and reports.

All rationals are written as lowest-terms ``"p/q"`` strings, integers
unadorned, so that output files diff bit-exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from fractions import Fraction
from pathlib import Path

from .cells import HullComplex, cell_coordinates, edge_length
from .errors import InvalidMetric
from .graphs import Graph, graph_metric
from .metric import FinMetric, Violation, to_rational, validate_metric


def fmt_rational(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# input


def _labels(value, what):
    if isinstance(value, int):
        return value, None
    if isinstance(value, list):
        return len(value), [str(s) for s in value]
    raise InvalidMetric([Violation("BadLabels", (what,))])


def metric_from_json(data: dict) -> FinMetric:
    """``{"points": n or [labels], "distances": [[...]]}``; entries int or "p/q"."""
    rows = data["distances"]
    labels = None
    if "points" in data:
        n, labels = _labels(data["points"], "points")
        if n != len(rows):
            raise InvalidMetric([Violation("NonSquare", (n, len(rows)))])
    try:
        rows = [[to_rational(v) for v in r] for r in rows]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidMetric([Violation("NotRational", (str(exc),))]) from exc
    return validate_metric(rows, labels)


def graph_from_json(data: dict) -> Graph:
    """``{"vertices": n or [labels], "edges": [[i, j], ...]}``.

    Edges may name vertices by index or by label.
    """
    n, labels = _labels(data["vertices"], "vertices")
    pos = {lab: i for i, lab in enumerate(labels)} if labels else {}
    edges = []
    for e in data["edges"]:
        a, b = (pos[v] if isinstance(v, str) and v in pos else int(v) for v in e)
        edges.append((a, b))
    try:
        return Graph.from_edges(n, edges, labels)
    except ValueError as exc:
        raise InvalidMetric([Violation("BadEdge", (str(exc),))]) from exc


def load_space(path) -> FinMetric:
    """A metric or a graph file, told apart by its keys."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise InvalidMetric([Violation("BadFile", ("expected a JSON object",))])
    if "distances" in data:
        return metric_from_json(data)
    if "edges" in data:
        return graph_metric(graph_from_json(data))
    raise InvalidMetric([Violation("BadFile", ("need 'distances' or 'edges'",))])


def metric_to_json(M: FinMetric) -> dict:
    return {
        "points": list(M.labels) if M.labels else M.n,
        "distances": [[fmt_rational(v) for v in row] for row in M.d],
    }


def load_subgroup(path) -> list:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data["elements"]
    return [tuple(int(v) for v in g) for g in data]


# --------------------------------------------------------------------------
# complex export


def function_to_json(f):
    return [fmt_rational(v) for v in f]


def complex_to_json(cx: HullComplex) -> dict:
    classes = cx.isometry_class or [None] * len(cx.cells)
    return {
        "points": [cx.metric.label(x) for x in range(cx.metric.n)],
        "vertices": [{"id": i, "values": function_to_json(v)} for i, v in enumerate(cx.vertices)],
        "cells": [
            {
                "id": i,
                "dim": c.dim,
                "vertex_ids": list(c.vertex_ids),
                "admissible_pairs": [list(p) for p in sorted(c.admissible_set)],
                "isometry_class": classes[i],
            }
            for i, c in enumerate(cx.cells)
        ],
        "faces": [list(p) for p in sorted(cx.face_relation)],
    }


def complex_from_json(data: dict, M: FinMetric) -> HullComplex:
    """Rebuild a complex written by :func:`complex_to_json`."""
    from .cells import Cell, barycenter

    vertices = [tuple(to_rational(v) for v in item["values"]) for item in data["vertices"]]
    cells = []
    for c in data["cells"]:
        vids = tuple(c["vertex_ids"])
        A = frozenset(tuple(p) for p in c["admissible_pairs"])
        cells.append(Cell(A, vids, c["dim"], barycenter([vertices[v] for v in vids])))
    cx = HullComplex(M, vertices, cells, [tuple(p) for p in data["faces"]],
                     [c["isometry_class"] for c in data["cells"]])
    return cx


def _polygon_order(cx: HullComplex, i: int) -> list:
    coords = cell_coordinates(cx, i)
    cx_, cy = (sum(c[k] for c in coords) / len(coords) for k in (0, 1))
    vids = cx.cells[i].vertex_ids
    ang = [math.atan2(float(c[1] - cy), float(c[0] - cx_)) for c in coords]
    return [v for _, v in sorted(zip(ang, vids))]


def complex_to_off(cx: HullComplex) -> str:
    """nOFF text of the 2-skeleton, coordinates in R^X.

    Polygons are the 2-cells with their vertices in boundary order; edges
    that lie in no 2-cell are written as two-vertex faces.
    """
    two = cx.cells_of_dim(2)
    covered = set()
    faces = []
    for i in two:
        ring = _polygon_order(cx, i)
        faces.append(ring)
        for a, b in zip(ring, ring[1:] + ring[:1]):
            covered.add((min(a, b), max(a, b)))
    for i in cx.cells_of_dim(1):
        e = cx.cells[i].vertex_ids
        if e not in covered:
            faces.append(list(e))
    n_edges = len(cx.cells_of_dim(1))
    out = _io.StringIO()
    out.write(f"nOFF\n{cx.metric.n}\n{len(cx.vertices)} {len(faces)} {n_edges}\n")
    for v in cx.vertices:
        out.write(" ".join(str(fmt_rational(a)) for a in v) + "\n")
    for face in faces:
        out.write(f"{len(face)} " + " ".join(map(str, face)) + "\n")
    return out.getvalue()


def complex_to_csv(cx: HullComplex) -> str:
    """One row per cell: id, dim, class, vertices, and the length of edges."""
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["id", "dim", "isometry_class", "n_vertices", "vertex_ids", "edge_length"])
    classes = cx.isometry_class or [""] * len(cx.cells)
    for i, c in enumerate(cx.cells):
        length = fmt_rational(edge_length(cx, i)) if c.dim == 1 else ""
        w.writerow([i, c.dim, classes[i], len(c.vertex_ids), " ".join(map(str, c.vertex_ids)), length])
    return out.getvalue()
