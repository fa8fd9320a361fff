"""Graph representation, metrics, balls, boundaries, and ball coverings.

Graphs are finite, undirected, connected, and immutable after construction.
Adjacency is stored in compressed (CSR-like) form. A graph carries an
optional coordinate embedding and a metric selector that determines how
balls are measured: shortest-path hops, a coordinate norm, or the composite
metric of stacked graphs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class MetricKind(enum.Enum):
    GRAPH_DISTANCE = "graph"
    EUCLIDEAN = "l2"
    L_INFINITY = "linf"
    L1 = "l1"
    STACKED_COMPOSITE = "stacked"


_NORM_ORD = {MetricKind.EUCLIDEAN: 2, MetricKind.L_INFINITY: np.inf, MetricKind.L1: 1}

# Relative padding applied when testing "distance <= r" on float coordinates,
# so that exact ties (closed balls) survive rounding.
_TIE_EPS = 1e-9


class GraphError(ValueError):
    pass


class Graph:
    """Immutable undirected graph with per-vertex degrees and a metric.

    Parameters
    ----------
    edges : (m, 2) int array of undirected edges (any order, duplicates merged)
    vertex_count : number of vertices; vertices are 0..vertex_count-1
    coords : optional (n, k) float array of vertex coordinates
    metric : how balls/distances are measured
    complete_mask : optional bool array; True where the vertex's full ambient
        neighborhood is present in this finite graph. Generators that truncate
        an infinite graph mark the truncated rim False. Defaults to all True.
    """

    def __init__(self, vertex_count, edges, coords=None, metric=MetricKind.GRAPH_DISTANCE,
                 complete_mask=None, _stack=None):
        if vertex_count <= 0:
            raise GraphError("graph must have at least one vertex")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= vertex_count):
            raise GraphError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise GraphError("self-loops are not allowed")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        canon = np.unique(np.stack([lo, hi], axis=1), axis=0) if edges.size else edges
        self.vertex_count = int(vertex_count)
        self._edges = canon

        both = np.concatenate([canon, canon[:, ::-1]]) if canon.size else canon
        order = np.lexsort((both[:, 1], both[:, 0])) if both.size else np.array([], dtype=np.int64)
        both = both[order]
        self._indptr = np.zeros(vertex_count + 1, dtype=np.int64)
        if both.size:
            np.add.at(self._indptr, both[:, 0] + 1, 1)
        np.cumsum(self._indptr, out=self._indptr)
        self._indices = both[:, 1].copy() if both.size else np.array([], dtype=np.int64)

        self.degrees = np.diff(self._indptr)
        self.max_degree = int(self.degrees.max()) if vertex_count else 0

        if coords is not None:
            coords = np.asarray(coords, dtype=np.float64)
            if coords.shape[0] != vertex_count:
                raise GraphError("coords row count must equal vertex_count")
        self.coords = coords
        self.metric = metric
        if metric in _NORM_ORD and coords is None:
            raise GraphError("coordinate metric requires coords")
        if complete_mask is None:
            complete_mask = np.ones(vertex_count, dtype=bool)
        self.complete_mask = np.asarray(complete_mask, dtype=bool)
        # (base_graph, layer_count) for stacked graphs; vertex ids are base*M + layer
        self._stack = _stack
        if metric is MetricKind.STACKED_COMPOSITE and _stack is None:
            raise GraphError("stacked metric requires stack structure")

        self._check_connected()

    def _check_connected(self):
        seen = np.zeros(self.vertex_count, dtype=bool)
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(int(y))
        if count != self.vertex_count:
            raise GraphError("graph is not connected (%d of %d reachable)" % (count, self.vertex_count))

    def neighbors(self, x):
        return self._indices[self._indptr[x]:self._indptr[x + 1]]

    def edges(self):
        """Canonical (m, 2) edge array with u < v, lexicographically sorted."""
        return self._edges

    @property
    def edge_count(self):
        return self._edges.shape[0]

    def degree(self, x):
        return int(self.degrees[x])

    def bfs_ball(self, x, hops):
        """Vertices within `hops` shortest-path steps of x, sorted by id."""
        if hops < 0:
            return np.array([], dtype=np.int64)
        dist = {int(x): 0}
        frontier = [int(x)]
        for d in range(1, int(hops) + 1):
            nxt = []
            for v in frontier:
                for y in self.neighbors(v):
                    y = int(y)
                    if y not in dist:
                        dist[y] = d
                        nxt.append(y)
            frontier = nxt
            if not frontier:
                break
        return np.array(sorted(dist), dtype=np.int64)

    def metric_ball_members(self, x, r):
        """Members of the closed ball of radius r around x under self.metric."""
        if r < 0:
            raise GraphError("radius must be nonnegative")
        if self.metric is MetricKind.GRAPH_DISTANCE:
            return self.bfs_ball(x, math.floor(r))
        if self.metric is MetricKind.STACKED_COMPOSITE:
            base, m = self._stack
            if r < 0.5:
                return np.array([x], dtype=np.int64)
            bx, layer = divmod(int(x), m)
            base_members = base.metric_ball_members(bx, r)
            return (base_members[:, None] * m + np.arange(m)[None, :]).reshape(-1)
        delta = self.coords - self.coords[x]
        dist = np.linalg.norm(delta, ord=_NORM_ORD[self.metric], axis=1)
        pad = _TIE_EPS * max(1.0, r)
        return np.nonzero(dist <= r + pad)[0].astype(np.int64)

    def radius_key(self, r):
        """Canonical key identifying the ball shape at radius r.

        Two radii with the same key produce identical balls around every
        center, so coverings can be cached per key.
        """
        if self.metric is MetricKind.GRAPH_DISTANCE:
            return math.floor(r)
        if self.metric is MetricKind.STACKED_COMPOSITE:
            # balls change only at r = 1/2 (singleton -> full stack) and at
            # integer base radii thereafter
            return -1 if r < 0.5 else math.floor(r)
        return float(r)

    @property
    def stack_info(self):
        return self._stack


@dataclass(frozen=True)
class Region:
    """A finite vertex subset A of a graph, with a local index bijection."""

    graph: Graph
    vertices: np.ndarray

    def __post_init__(self):
        v = np.unique(np.asarray(self.vertices, dtype=np.int64))
        if v.size == 0:
            raise GraphError("region must be nonempty")
        if v.min() < 0 or v.max() >= self.graph.vertex_count:
            raise GraphError("region vertex out of range")
        object.__setattr__(self, "vertices", v)
        mask = np.zeros(self.graph.vertex_count, dtype=bool)
        mask[v] = True
        g2l = np.full(self.graph.vertex_count, -1, dtype=np.int64)
        g2l[v] = np.arange(v.size)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "global_to_local", g2l)

    def __len__(self):
        return int(self.vertices.size)

    def local_index(self, x):
        i = int(self.global_to_local[x])
        if i < 0:
            raise KeyError("vertex %d not in region" % x)
        return i

    def contains(self, x):
        return bool(self.mask[x])

    @classmethod
    def whole(cls, graph):
        return cls(graph, np.arange(graph.vertex_count))


@dataclass(frozen=True)
class Ball:
    center: int
    radius: float
    members: np.ndarray


@dataclass
class Covering:
    """Ball covering of a graph: centers, common radius, measured overlap."""

    radius: float
    centers: list
    overlap_constant: int
    _member_cache: dict = field(default_factory=dict, repr=False)

    def ball_members(self, graph, i):
        got = self._member_cache.get(i)
        if got is None:
            got = graph.metric_ball_members(self.centers[i], self.radius)
            self._member_cache[i] = got
        return got


def ball(g: Graph, x, r) -> Ball:
    """Closed metric ball around x. Graph-distance radii are floored."""
    if not (0 <= x < g.vertex_count):
        raise GraphError("invalid vertex id %r" % (x,))
    if r < 0:
        raise GraphError("radius must be nonnegative")
    return Ball(center=int(x), radius=float(r), members=g.metric_ball_members(int(x), r))


def exterior_boundary(g: Graph, vertices) -> np.ndarray:
    """Vertices outside S adjacent to some vertex of S."""
    vertices = np.asarray(vertices, dtype=np.int64)
    if vertices.size == 0:
        raise GraphError("vertex set must be nonempty")
    inside = np.zeros(g.vertex_count, dtype=bool)
    inside[vertices] = True
    out = set()
    for x in vertices:
        for y in g.neighbors(int(x)):
            if not inside[y]:
                out.add(int(y))
    return np.array(sorted(out), dtype=np.int64)


def interior_boundary(g: Graph, vertices) -> np.ndarray:
    """Vertices of S adjacent to some vertex outside S."""
    vertices = np.asarray(vertices, dtype=np.int64)
    if vertices.size == 0:
        raise GraphError("vertex set must be nonempty")
    inside = np.zeros(g.vertex_count, dtype=bool)
    inside[vertices] = True
    out = [int(x) for x in vertices if any(not inside[y] for y in g.neighbors(int(x)))]
    return np.array(sorted(out), dtype=np.int64)


def _greedy_centers(g: Graph, candidates, packing_radius):
    """Maximal packing: accept candidates in id order whose distance to every
    previously accepted center exceeds packing_radius."""
    blocked = np.zeros(g.vertex_count, dtype=bool)
    centers = []
    for x in candidates:
        x = int(x)
        if blocked[x]:
            continue
        centers.append(x)
        blocked[g.metric_ball_members(x, packing_radius)] = True
    return centers


def build_covering(g: Graph, radius) -> Covering:
    """Greedy maximal radius/2-packing in vertex-id order; the radius-balls
    then cover the graph with a finite, measured overlap constant."""
    if radius < 0:
        raise GraphError("radius must be nonnegative")
    centers = _greedy_centers(g, range(g.vertex_count), radius / 2.0)
    cov = Covering(radius=float(radius), centers=centers, overlap_constant=0)
    cov.overlap_constant = measure_overlap(g, cov, 1.0)
    return cov


def measure_overlap(g: Graph, cov: Covering, scale=1.0) -> int:
    """Max over vertices of the number of centers within scale*radius."""
    if scale < 1.0:
        raise GraphError("scale must be >= 1")
    counts = np.zeros(g.vertex_count, dtype=np.int64)
    for z in cov.centers:
        counts[g.metric_ball_members(int(z), cov.radius * scale)] += 1
    return int(counts.max())


def covering_is_exhaustive(g: Graph, cov: Covering) -> bool:
    """Brute-force union check: every vertex lies in at least one ball."""
    hit = np.zeros(g.vertex_count, dtype=bool)
    for i in range(len(cov.centers)):
        hit[cov.ball_members(g, i)] = True
    return bool(hit.all())


def translation_covers(g: Graph, radius, kappa):
    """A family of coverings of radius `radius` whose kappa*radius balls
    jointly cover the graph.

    Built by sub-covering each radius/2 ball with kappa*radius/2 balls
    (maximal packing inside the ball) and grouping the j-th representatives,
    repeating sub-centers so every group is complete.
    """
    if not (0 < kappa < 1):
        raise GraphError("kappa must lie in (0, 1)")
    if radius < 1:
        raise GraphError("radius must be >= 1")
    half = build_covering(g, radius / 2.0)
    sub_centers = []
    for z in half.centers:
        inside = g.metric_ball_members(int(z), radius / 2.0)
        subs = _greedy_centers_within(g, inside, kappa * radius / 2.0)
        sub_centers.append(subs)
    width = max(len(s) for s in sub_centers)
    covers = []
    for j in range(width):
        centers = [subs[j % len(subs)] for subs in sub_centers]
        cov = Covering(radius=float(radius), centers=centers, overlap_constant=0)
        cov.overlap_constant = measure_overlap(g, cov, 1.0)
        covers.append(cov)
    return covers


def _greedy_centers_within(g: Graph, candidates, packing_radius):
    """Maximal packing restricted to a candidate set (blocking only inside it)."""
    cand = set(int(c) for c in candidates)
    blocked = set()
    centers = []
    for x in sorted(cand):
        if x in blocked:
            continue
        centers.append(x)
        blocked.update(int(y) for y in g.metric_ball_members(x, packing_radius) if int(y) in cand)
    return centers


def kappa_union_covers(g: Graph, covers, kappa) -> bool:
    """Check that kappa*R balls around all centers of all covers cover g."""
    hit = np.zeros(g.vertex_count, dtype=bool)
    for cov in covers:
        for z in cov.centers:
            hit[g.metric_ball_members(int(z), kappa * cov.radius)] = True
    return bool(hit.all())


@dataclass
class VolumeGrowthProbe:
    rows: list                 # (center, radius, ball size)
    alpha: float               # fitted exponent of |B(x,r)| ~ c r^alpha
    log_prefactor: float
    residual: float            # rms residual of the log-log fit


def volume_growth_probe(g: Graph, samples, radii) -> VolumeGrowthProbe:
    """Tabulate ball sizes and fit |B(x,r)| ~ c r^alpha by log-log regression."""
    radii = [float(r) for r in radii]
    if any(r < 1 for r in radii):
        raise GraphError("radii must be >= 1")
    rows = []
    for x in samples:
        for r in radii:
            rows.append((int(x), r, int(g.metric_ball_members(int(x), r).size)))
    logs_r = np.log([r for _, r, _ in rows])
    logs_v = np.log([max(v, 1) for _, _, v in rows])
    coef, res = np.polynomial.polynomial.polyfit(logs_r, logs_v, 1, full=True)
    fitted = coef[0] + coef[1] * logs_r
    rms = float(np.sqrt(np.mean((fitted - logs_v) ** 2)))
    return VolumeGrowthProbe(rows=rows, alpha=float(coef[1]), log_prefactor=float(coef[0]), residual=rms)
