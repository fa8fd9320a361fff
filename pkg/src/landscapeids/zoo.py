"""Generators for the graph families used throughout: band lattices on Z^d,
the Sierpinski gasket graph, the Penrose rhomb tiling vertex graph, and
stacked graphs (base x layers)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, GraphError, MetricKind, Region

PHI = (1.0 + math.sqrt(5.0)) / 2.0

GASKET_ALPHA = math.log(3.0) / math.log(2.0)
GASKET_BETA = math.log(5.0) / math.log(2.0)


@dataclass(frozen=True)
class BandGraphSpec:
    """Box of lattice points in Z^d with x ~ y iff 0 < ||x-y|| <= W."""

    d: int
    W: int
    extent: int
    norm: str = "l1"  # l1 | l2 | linf

    def __post_init__(self):
        if self.d not in (1, 2):
            raise GraphError("band graph dimension must be 1 or 2")
        if self.W < 1:
            raise GraphError("bandwidth must be >= 1")
        if self.extent < self.W:
            raise GraphError("extent must be at least the bandwidth")
        if self.norm not in ("l1", "l2", "linf"):
            raise GraphError("unknown norm %r" % (self.norm,))


def _norm(vec, kind):
    if kind == "l1":
        return float(np.abs(vec).sum())
    if kind == "linf":
        return float(np.abs(vec).max())
    return float(np.sqrt((np.asarray(vec, dtype=float) ** 2).sum()))


def _band_stencil(d, W, norm):
    offsets = []
    rng = range(-W, W + 1)
    if d == 1:
        pts = [(i,) for i in rng]
    else:
        pts = [(i, j) for i in rng for j in rng]
    for p in pts:
        if any(p) and _norm(np.array(p), norm) <= W + 1e-12:
            offsets.append(p)
    return offsets


def build_band_graph(spec: BandGraphSpec, metric=MetricKind.GRAPH_DISTANCE) -> Graph:
    """Band graph on the box [-extent, extent]^d.

    Vertices on the outer W-rim have truncated neighborhoods and are marked
    incomplete; operators needing ambient degrees must keep their region off
    that rim.
    """
    E = spec.extent
    side = 2 * E + 1
    if spec.d == 1:
        coords = np.arange(-E, E + 1, dtype=np.float64)[:, None]
    else:
        xs, ys = np.meshgrid(np.arange(-E, E + 1), np.arange(-E, E + 1), indexing="ij")
        coords = np.stack([xs.ravel(), ys.ravel()], axis=1).astype(np.float64)
    stencil = _band_stencil(spec.d, spec.W, spec.norm)

    def index(pt):
        if spec.d == 1:
            return pt[0] + E
        return (pt[0] + E) * side + (pt[1] + E)

    edges = []
    for vid in range(coords.shape[0]):
        p = coords[vid].astype(np.int64)
        for off in stencil:
            q = p + np.array(off, dtype=np.int64)
            if np.all(np.abs(q) <= E):
                w = index(q)
                if w > vid:
                    edges.append((vid, w))
    complete = np.all(np.abs(coords) <= E - spec.W, axis=1)
    if metric in (MetricKind.L1, MetricKind.EUCLIDEAN, MetricKind.L_INFINITY):
        g = Graph(coords.shape[0], edges, coords=coords, metric=metric, complete_mask=complete)
    else:
        g = Graph(coords.shape[0], edges, coords=coords, metric=MetricKind.GRAPH_DISTANCE,
                  complete_mask=complete)
    return g


def band_vertex_id(spec: BandGraphSpec, point) -> int:
    """Vertex id of a lattice point in the generated box."""
    E = spec.extent
    pt = tuple(int(c) for c in np.atleast_1d(point))
    if any(abs(c) > E for c in pt):
        raise GraphError("point outside generated box")
    if spec.d == 1:
        return pt[0] + E
    return (pt[0] + E) * (2 * E + 1) + (pt[1] + E)


def box_region(g: Graph, half_low, half_high=None) -> Region:
    """Region of all vertices whose coordinates lie in [half_low, half_high]
    per axis (defaults to the symmetric box [-half_low, half_low])."""
    if g.coords is None:
        raise GraphError("box_region requires coordinates")
    if half_high is None:
        lo, hi = -half_low, half_low
    else:
        lo, hi = half_low, half_high
    keep = np.all((g.coords >= lo - 1e-9) & (g.coords <= hi + 1e-9), axis=1)
    return Region(g, np.nonzero(keep)[0])


def centered_band_region(g: Graph, spec: BandGraphSpec, sites_per_axis: int) -> Region:
    """Centered box region with `sites_per_axis` lattice sites per axis."""
    s = int(sites_per_axis)
    lo = -(s // 2)
    hi = s - s // 2 - 1
    reg = box_region(g, lo, hi)
    if len(reg) != s ** spec.d:
        raise GraphError("region exceeds generated box")
    if not g.complete_mask[reg.vertices].all():
        raise GraphError("region touches the truncated rim; enlarge extent")
    return reg


@dataclass(frozen=True)
class SierpinskiSpec:
    level: int

    def __post_init__(self):
        if self.level < 0:
            raise GraphError("level must be >= 0")


def build_sierpinski(spec: SierpinskiSpec) -> Graph:
    """Sierpinski gasket graph at the given level: the vertices and unit
    edges of all upward unit triangles, (3^(level+1)+3)/2 vertices."""
    # integer representation (a, b) meaning x = a + b/2, y = b*sqrt(3)/2
    tris = [((0, 0), (1, 0), (0, 1))]
    for k in range(spec.level):
        shift = 2 ** k
        out = []
        for t in tris:
            out.append(t)
            out.append(tuple((a + shift, b) for a, b in t))
            out.append(tuple((a, b + shift) for a, b in t))
        tris = out
    verts = sorted({v for t in tris for v in t})
    vid = {v: i for i, v in enumerate(verts)}
    edge_set = set()
    for t in tris:
        for i in range(3):
            u, w = vid[t[i]], vid[t[(i + 1) % 3]]
            edge_set.add((min(u, w), max(u, w)))
    coords = np.array([[a + b / 2.0, b * math.sqrt(3.0) / 2.0] for a, b in verts])
    return Graph(len(verts), sorted(edge_set), coords=coords, metric=MetricKind.GRAPH_DISTANCE)


def sierpinski_vertex_count(level: int) -> int:
    return (3 ** (level + 1) + 3) // 2


@dataclass(frozen=True)
class PenroseSpec:
    generations: int
    clip_radius: float

    def __post_init__(self):
        if self.generations < 1:
            raise GraphError("generations must be >= 1")
        if self.clip_radius <= 0:
            raise GraphError("clip radius must be positive")


def _subdivide_triangles(tris):
    # triangles are (kind, apex, b, c) with complex corners; legs apex-b and
    # apex-c are rhombus sides. kind 0 = acute half (thin rhombus),
    # kind 1 = obtuse half (fat rhombus).
    out = []
    for kind, a, b, c in tris:
        if kind == 0:
            p = a + (b - a) / PHI
            out.append((0, c, p, b))
            out.append((1, p, c, a))
        else:
            q = b + (a - b) / PHI
            r = b + (c - b) / PHI
            out.append((1, r, c, a))
            out.append((1, q, r, b))
            out.append((0, r, q, a))
    return out


def _sun_seed():
    # five fat rhombi around the origin, each split into two obtuse halves
    # along its long diagonal
    tris = []
    for k in range(5):
        theta = 2.0 * math.pi * k / 5.0
        far = PHI * cmath.exp(1j * theta)
        side_plus = cmath.exp(1j * (theta + math.pi / 5.0))
        side_minus = cmath.exp(1j * (theta - math.pi / 5.0))
        tris.append((1, side_plus, 0j, far))
        tris.append((1, side_minus, 0j, far))
    return tris


class _VertexDedup:
    """Deduplicate planar points on a 1e-9 grid, robust to points landing on
    a bin boundary (checks the 3x3 neighborhood of quantised keys)."""

    SCALE = 1e9

    def __init__(self):
        self.key_to_id = {}
        self.points = []

    def intern(self, z: complex) -> int:
        qx = round(z.real * self.SCALE)
        qy = round(z.imag * self.SCALE)
        for dx in (0, -1, 1):
            for dy in (0, -1, 1):
                got = self.key_to_id.get((qx + dx, qy + dy))
                if got is not None:
                    return got
        new_id = len(self.points)
        self.key_to_id[(qx, qy)] = new_id
        self.points.append(z)
        return new_id


def build_penrose(spec: PenroseSpec) -> Graph:
    """Penrose rhomb tiling vertex graph via triangle substitution.

    Starts from the sun patch, subdivides `generations` times, rescales so
    every rhombus side has unit length, clips to `clip_radius`, and keeps
    the largest connected component.
    """
    tris = _sun_seed()
    for _ in range(spec.generations):
        tris = _subdivide_triangles(tris)
    scale = PHI ** spec.generations
    dedup = _VertexDedup()
    edge_set = set()
    for _, a, b, c in tris:
        ia = dedup.intern(a * scale)
        ib = dedup.intern(b * scale)
        ic = dedup.intern(c * scale)
        edge_set.add((min(ia, ib), max(ia, ib)))
        edge_set.add((min(ia, ic), max(ia, ic)))
    points = np.array([[z.real, z.imag] for z in dedup.points])
    keep = np.nonzero(np.hypot(points[:, 0], points[:, 1]) <= spec.clip_radius + 1e-9)[0]
    remap = {int(v): i for i, v in enumerate(keep)}
    edges = [(remap[u], remap[w]) for u, w in edge_set if u in remap and w in remap]
    if keep.size == 0 or not edges:
        raise GraphError("clip radius keeps no usable patch")
    comp = _largest_component(keep.size, edges)
    final_ids = np.nonzero(comp)[0]
    remap2 = {int(v): i for i, v in enumerate(final_ids)}
    final_edges = [(remap2[u], remap2[w]) for u, w in edges if comp[u] and comp[w]]
    coords = points[keep][final_ids]
    return Graph(final_ids.size, final_edges, coords=coords, metric=MetricKind.GRAPH_DISTANCE)


def _largest_component(n, edges):
    adj = [[] for _ in range(n)]
    for u, w in edges:
        adj[u].append(w)
        adj[w].append(u)
    label = np.full(n, -1, dtype=np.int64)
    best_size, best = 0, -1
    current = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        stack = [s]
        label[s] = current
        size = 0
        while stack:
            x = stack.pop()
            size += 1
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = current
                    stack.append(y)
        if size > best_size:
            best_size, best = size, current
        current += 1
    return label == best


def penrose_generations_for_radius(clip_radius: float, margin: float = 2.0) -> int:
    """Smallest inflation depth whose patch safely contains the clip disk."""
    need = clip_radius + margin
    g = 1
    while PHI ** g < need:
        g += 1
    return g


@dataclass(frozen=True)
class StackSpec:
    base: Graph
    layers: int

    def __post_init__(self):
        if self.layers < 2:
            raise GraphError("need at least 2 layers")


def build_stacked(spec: StackSpec) -> Graph:
    """Stack of `layers` copies of the base graph, consecutive copies joined
    at identical sites. Vertex (x, j) has id x*layers + j.

    The composite metric is d((x,j),(y,k)) = d_base(x,y) + 1/2 if x == y and
    j != k; its balls of radius >= 1/2 are base balls times all layers.
    """
    base, m = spec.base, spec.layers
    edges = []
    for u, w in base.edges():
        for j in range(m):
            edges.append((int(u) * m + j, int(w) * m + j))
    for x in range(base.vertex_count):
        for j in range(m - 1):
            edges.append((x * m + j, x * m + j + 1))
    coords = None
    if base.coords is not None:
        layer_col = np.tile(np.arange(m, dtype=np.float64), base.vertex_count)[:, None]
        coords = np.hstack([np.repeat(base.coords, m, axis=0), layer_col])
    complete = np.repeat(base.complete_mask, m)
    return Graph(base.vertex_count * m, edges, coords=coords,
                 metric=MetricKind.STACKED_COMPOSITE, complete_mask=complete,
                 _stack=(base, m))


def stacked_distance(g: Graph, v, w) -> float:
    """Composite metric between two vertices of a stacked graph."""
    if g.stack_info is None:
        raise GraphError("not a stacked graph")
    base, m = g.stack_info
    bx, j = divmod(int(v), m)
    by, k = divmod(int(w), m)
    if bx == by:
        return 0.0 if j == k else 0.5
    # base graphs here always use the shortest-path metric
    dist = _bfs_distance(base, bx, by)
    return float(dist)


def _bfs_distance(g: Graph, s, t):
    if s == t:
        return 0
    seen = {s: 0}
    frontier = [s]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for y in g.neighbors(v):
                y = int(y)
                if y not in seen:
                    if y == t:
                        return d
                    seen[y] = d
                    nxt.append(y)
        frontier = nxt
    raise GraphError("vertices not connected")
