"""Disorder sampling and assembly of the Jacobi operator on a region.

The operator acts on functions over a finite region A as

    (H f)(x) = D(x) f(x) - sum_{y in A, y ~ x} mu_xy f(y),

with D(x) = deg(x) + V_x. Dirichlet boundary conditions keep the ambient
graph degree on the diagonal; Neumann mode uses the degree within A.
Hopping weights mu_xy lie in [0, 1], potentials V_x are nonnegative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graphs import Graph, GraphError, Region


class BoundaryMode(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class Dist:
    """Scalar i.i.d. distribution: constant, uniform[lo, hi], or
    scale * Bernoulli(p)."""

    kind: str
    lo: float = 0.0
    hi: float = 1.0
    p: float = 0.5
    scale: float = 1.0

    @classmethod
    def constant(cls, value):
        return cls("constant", lo=float(value), hi=float(value))

    @classmethod
    def uniform(cls, lo, hi):
        return cls("uniform", lo=float(lo), hi=float(hi))

    @classmethod
    def bernoulli(cls, p, scale=1.0):
        return cls("bernoulli", p=float(p), scale=float(scale))

    def sample(self, rng, size):
        if self.kind == "constant":
            return np.full(size, self.lo)
        if self.kind == "uniform":
            return rng.uniform(self.lo, self.hi, size)
        if self.kind == "bernoulli":
            return self.scale * (rng.random(size) < self.p).astype(np.float64)
        raise OperatorError("unknown distribution kind %r" % (self.kind,))

    def support_range(self):
        if self.kind == "constant":
            return self.lo, self.lo
        if self.kind == "uniform":
            return self.lo, self.hi
        return min(0.0, self.scale), max(0.0, self.scale)


@dataclass(frozen=True)
class DisorderConfig:
    """Edge and vertex disorder distributions plus the master seed."""

    mu: Dist
    v: Dist
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.mu.support_range()
        if lo < -1e-12 or hi > 1.0 + 1e-12:
            raise OperatorError("hopping weights must lie in [0, 1]")
        lo, _ = self.v.support_range()
        if lo < -1e-12:
            raise OperatorError("potential must be nonnegative")


_STREAM_EDGES = 0
_STREAM_VERTICES = 1


def _stream_rng(seed, realization, stream):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(realization), stream))
    return np.random.default_rng(ss)


def sample_disorder(g: Graph, region: Region, cfg: DisorderConfig, realization=0):
    """One i.i.d. draw per undirected graph edge and per vertex.

    Draws are keyed by (seed, realization, stream) and generated in canonical
    edge/vertex order, so realizations are independent of evaluation order
    and safe to generate concurrently. A single draw per undirected edge
    makes mu symmetric by construction.
    """
    mu = cfg.mu.sample(_stream_rng(cfg.seed, realization, _STREAM_EDGES), g.edge_count)
    v = cfg.v.sample(_stream_rng(cfg.seed, realization, _STREAM_VERTICES), g.vertex_count)
    return mu, v


class JacobiOperator:
    """Symmetric operator data over a region, in local (region) indexing."""

    def __init__(self, region, diag, edges_local, edge_mu, bc, v=None):
        self.region = region
        self.diag = np.asarray(diag, dtype=np.float64)
        self.edges_local = np.asarray(edges_local, dtype=np.int64).reshape(-1, 2)
        self.edge_mu = np.asarray(edge_mu, dtype=np.float64)
        self.bc = bc
        self.v = v if v is None else np.asarray(v, dtype=np.float64)
        n = len(region)
        if self.diag.shape != (n,):
            raise OperatorError("diagonal size mismatch")
        # sum of in-region hopping weights at each vertex
        self.mu_row_sum = np.zeros(n)
        np.add.at(self.mu_row_sum, self.edges_local[:, 0], self.edge_mu)
        np.add.at(self.mu_row_sum, self.edges_local[:, 1], self.edge_mu)
        # degree within the region subgraph
        self.subgraph_degree = np.zeros(n, dtype=np.int64)
        np.add.at(self.subgraph_degree, self.edges_local[:, 0], 1)
        np.add.at(self.subgraph_degree, self.edges_local[:, 1], 1)
        self._csr = None

    @property
    def dim(self):
        return int(self.diag.size)

    def matrix(self) -> sp.csr_matrix:
        if self._csr is None:
            n = self.dim
            i = np.concatenate([self.edges_local[:, 0], self.edges_local[:, 1], np.arange(n)])
            j = np.concatenate([self.edges_local[:, 1], self.edges_local[:, 0], np.arange(n)])
            vals = np.concatenate([-self.edge_mu, -self.edge_mu, self.diag])
            self._csr = sp.csr_matrix((vals, (i, j)), shape=(n, n))
        return self._csr

    def dense(self) -> np.ndarray:
        return self.matrix().toarray()

    def matvec(self, f):
        return self.matrix() @ f

    def inf_norm(self) -> float:
        return float(np.abs(self.matrix()).sum(axis=1).max())

    def gershgorin_cap(self) -> float:
        return float(2.0 * self.diag.max())


def assemble(g: Graph, region: Region, mu, v, bc=BoundaryMode.DIRICHLET) -> JacobiOperator:
    """Build the Jacobi operator for the region from sampled disorder.

    mu is aligned with g.edges() (canonical order) and v with vertex ids.
    Dirichlet mode requires every region vertex to carry its full ambient
    neighborhood, otherwise the diagonal degree would be wrong.
    """
    mu = np.asarray(mu, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if mu.shape != (g.edge_count,):
        raise OperatorError("mu must have one value per graph edge")
    if v.shape != (g.vertex_count,):
        raise OperatorError("v must have one value per vertex")
    if np.any(mu < -1e-12) or np.any(mu > 1 + 1e-12):
        raise OperatorError("mu out of [0, 1]")
    if np.any(v < -1e-12):
        raise OperatorError("negative potential")

    if bc is BoundaryMode.DIRICHLET and not g.complete_mask[region.vertices].all():
        raise OperatorError(
            "region contains vertices with truncated ambient neighborhoods; "
            "enlarge the generator extent")

    edges = g.edges()
    inside = region.mask[edges[:, 0]] & region.mask[edges[:, 1]]
    edges_local = region.global_to_local[edges[inside]]
    edge_mu = mu[inside]

    if bc is BoundaryMode.DIRICHLET:
        deg = g.degrees[region.vertices].astype(np.float64)
    else:
        deg = np.zeros(len(region))
        np.add.at(deg, edges_local[:, 0], 1.0)
        np.add.at(deg, edges_local[:, 1], 1.0)
    diag = deg + v[region.vertices]
    return JacobiOperator(region, diag, edges_local, edge_mu, bc, v=v[region.vertices])


def quadratic_form(op: JacobiOperator, f) -> float:
    """<f, H f> evaluated from the hopping/potential decomposition:
    sum over region edges of mu (f(x)-f(y))^2 plus sum of
    (D(x) - mu_x) f(x)^2, with mu_x the in-region hopping sum at x."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (op.dim,):
        raise OperatorError("vector length %d does not match region size %d" % (f.size, op.dim))
    du = f[op.edges_local[:, 0]] - f[op.edges_local[:, 1]]
    kinetic = float(np.dot(op.edge_mu, du * du))
    potential = float(np.dot(op.diag - op.mu_row_sum, f * f))
    return kinetic + potential


def epsilon_cutoff_check(op: JacobiOperator, f, eps):
    """Evaluate both sides of the hopping-truncation inequality with
    mu^eps = max(eps, mu): the truncated kinetic energy is controlled by the
    original kinetic energy plus 4 eps/(1-eps) times the diagonal slack
    (deg_A - mu_A) weighted by f^2. Returns (lhs, rhs)."""
    if not (0 < eps < 1):
        raise OperatorError("eps must lie in (0, 1)")
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (op.dim,):
        raise OperatorError("vector length mismatch")
    du = f[op.edges_local[:, 0]] - f[op.edges_local[:, 1]]
    du2 = du * du
    lhs = float(np.dot(np.maximum(op.edge_mu, eps), du2))
    slack = op.subgraph_degree - op.mu_row_sum
    rhs = float(np.dot(op.edge_mu, du2)) + 4.0 * eps / (1.0 - eps) * float(np.dot(slack, f * f))
    return lhs, rhs


def region_components(op: JacobiOperator):
    """Connected components of the region's induced subgraph (local labels)."""
    n = op.dim
    adj = [[] for _ in range(n)]
    for u, w in op.edges_local:
        adj[u].append(int(w))
        adj[w].append(int(u))
    label = np.full(n, -1, dtype=np.int64)
    current = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        stack = [s]
        label[s] = current
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = current
                    stack.append(y)
        current += 1
    return label
