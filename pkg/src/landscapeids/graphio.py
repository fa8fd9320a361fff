"""Serialization: line-oriented graph text format, MatrixMarket operator
export, and CSV counting curves.

Graph text format
-----------------
    vertices <N> metric <KIND> [stack <M>]
    v <id> <coord> <coord> ...
    e <u> <v>

KIND is one of graph, l1, l2, linf, stacked. Edges satisfy u < v. The
optional `stack <M>` token appears for stacked graphs; their base graph is
reconstructed from layer-0 vertices (ids are base*M + layer). Coordinate
lines are omitted for graphs without an embedding. Floats round-trip
exactly (printed with repr precision).
"""

from __future__ import annotations

import io

import numpy as np
import scipy.io
import scipy.sparse as sp

from .graphs import Graph, GraphError, MetricKind
from .operator import JacobiOperator

_KIND_NAMES = {
    MetricKind.GRAPH_DISTANCE: "graph",
    MetricKind.L1: "l1",
    MetricKind.EUCLIDEAN: "l2",
    MetricKind.L_INFINITY: "linf",
    MetricKind.STACKED_COMPOSITE: "stacked",
}
_NAME_KINDS = {v: k for k, v in _KIND_NAMES.items()}


def _fmt(x: float) -> str:
    return repr(float(x))


def write_graph_text(g: Graph, path) -> None:
    with open(path, "w") as fh:
        header = "vertices %d metric %s" % (g.vertex_count, _KIND_NAMES[g.metric])
        if g.metric is MetricKind.STACKED_COMPOSITE:
            header += " stack %d" % g.stack_info[1]
        fh.write(header + "\n")
        if g.coords is not None:
            for i in range(g.vertex_count):
                fh.write("v %d %s\n" % (i, " ".join(_fmt(c) for c in g.coords[i])))
        for u, w in g.edges():
            fh.write("e %d %d\n" % (u, w))


def read_graph_text(path) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) < 4 or header[0] != "vertices" or header[2] != "metric":
            raise GraphError("malformed graph header")
        n = int(header[1])
        kind = _NAME_KINDS.get(header[3])
        if kind is None:
            raise GraphError("unknown metric kind %r" % header[3])
        layers = int(header[5]) if len(header) >= 6 and header[4] == "stack" else None
        coords = {}
        edges = []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                coords[int(parts[1])] = [float(c) for c in parts[2:]]
            elif parts[0] == "e":
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise GraphError("unexpected line %r" % line.strip())
    coord_arr = None
    if coords:
        width = len(next(iter(coords.values())))
        coord_arr = np.zeros((n, width))
        for i, c in coords.items():
            coord_arr[i] = c
    if kind is MetricKind.STACKED_COMPOSITE:
        return _rebuild_stacked(n, edges, coord_arr, layers)
    return Graph(n, edges, coords=coord_arr, metric=kind)


def _rebuild_stacked(n, edges, coords, layers):
    from .zoo import StackSpec, build_stacked

    if layers is None or n % layers:
        raise GraphError("stacked graph header must carry a valid layer count")
    base_edges = sorted({(u // layers, w // layers)
                         for u, w in edges if u % layers == 0 and w % layers == 0 and u // layers != w // layers})
    base_coords = None
    if coords is not None:
        base_coords = coords[::layers, :-1]
        if base_coords.shape[1] == 0:
            base_coords = None
    base = Graph(n // layers, base_edges, coords=base_coords, metric=MetricKind.GRAPH_DISTANCE)
    rebuilt = build_stacked(StackSpec(base, layers))
    if rebuilt.edge_count != len(set((min(u, w), max(u, w)) for u, w in edges)):
        raise GraphError("stacked graph file is not a plain stack of its layer-0 subgraph")
    return rebuilt


def write_operator_matrix_market(op: JacobiOperator, path) -> None:
    """Coordinate-format export of the symmetric operator for cross-checks."""
    scipy.io.mmwrite(str(path), sp.coo_matrix(op.matrix()), field="real", symmetry="symmetric")


def write_curves_csv(path, rows) -> None:
    """rows: iterable of (energy, value, kind, realization)."""
    with open(path, "w") as fh:
        fh.write("E,value,kind,realization\n")
        for e, value, kind, realization in rows:
            fh.write("%s,%s,%s,%d\n" % (_fmt(e), _fmt(value), kind, realization))


def curve_rows(curve, realization) -> list:
    return [(float(e), float(v), curve.kind, int(realization))
            for e, v in zip(curve.energies, curve.values)]


def read_curves_csv(path):
    """Returns {(kind, realization): ([energies], [values])}."""
    out = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "E,value,kind,realization":
            raise ValueError("unexpected curves header %r" % header)
        for line in fh:
            e, v, kind, realization = line.strip().split(",")
            key = (kind, int(realization))
            out.setdefault(key, ([], []))
            out[key][0].append(float(e))
            out[key][1].append(float(v))
    return out
