"""Landscape function u solving H u = 1, the pointwise identity relating
<f, H f> to 1/u, and the ball-counting function driven by min of 1/u."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .curves import CountingCurve
from .graphs import Covering, Graph, Region, build_covering
from .operator import BoundaryMode, JacobiOperator, OperatorError, quadratic_form, region_components


class SolveError(RuntimeError):
    pass


@dataclass
class LandscapeFunction:
    region: Region
    values: np.ndarray          # positive, local indexing
    residual_norm: float        # inf-norm of H u - 1

    def value(self, vertex) -> float:
        return float(self.values[self.region.local_index(vertex)])


def solve_landscape(op: JacobiOperator, tol=1e-10, max_iter_factor=10) -> LandscapeFunction:
    """Solve H u = 1 by conjugate gradients with a direct sparse
    factorization fallback; u must come out strictly positive."""
    if op.bc is BoundaryMode.NEUMANN:
        labels = region_components(op)
        for comp in range(labels.max() + 1):
            sel = labels == comp
            if op.v is None or not np.any(op.v[sel] > 0):
                raise SolveError("operator not invertible: a component has no potential "
                                 "under Neumann boundary conditions")
    n = op.dim
    mat = op.matrix()
    rhs = np.ones(n)
    u, info = spla.cg(mat, rhs, rtol=1e-10, atol=0.0, maxiter=max_iter_factor * n)
    residual = float(np.abs(mat @ u - rhs).max()) if info == 0 else np.inf
    if info != 0 or residual > tol or np.any(u <= 0):
        u = spla.spsolve(mat.tocsc(), rhs)
        residual = float(np.abs(mat @ u - rhs).max())
    if residual > tol:
        raise SolveError("landscape solve did not reach tolerance: residual %.3e" % residual)
    if np.any(u <= 0):
        raise SolveError("landscape function is not strictly positive")
    return LandscapeFunction(region=op.region, values=u, residual_norm=residual)


def uncertainty_identity_residual(op: JacobiOperator, u: LandscapeFunction, f) -> float:
    """Relative gap between <f, H f> and its landscape decomposition

        sum_edges mu u(x) u(y) (f(x)/u(x) - f(y)/u(y))^2 + sum f^2 / u,

    an algebraic identity whenever H u = 1 holds exactly."""
    f = np.asarray(f, dtype=np.float64)
    uv = u.values
    lhs = quadratic_form(op, f)
    i, j = op.edges_local[:, 0], op.edges_local[:, 1]
    ratio = f / uv
    kin = float(np.dot(op.edge_mu * uv[i] * uv[j], (ratio[i] - ratio[j]) ** 2))
    rhs = kin + float(np.dot(f * f, 1.0 / uv))
    return abs(lhs - rhs) / (1.0 + abs(lhs))


@dataclass(frozen=True)
class RadiusPolicy:
    """Covering radius tied to energy: R(E) = E^(-1/beta)."""

    beta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @classmethod
    def inv_sqrt(cls):
        return cls(beta=2.0)

    @classmethod
    def inv_beta(cls, beta):
        return cls(beta=float(beta))

    def radius(self, energy) -> float:
        if energy <= 0:
            raise ValueError("energy must be positive")
        return energy ** (-1.0 / self.beta)


def landscape_counting(u: LandscapeFunction, cov: Covering, region: Region, energy) -> float:
    """Fraction (per |A|) of covering balls meeting A whose minimum of 1/u
    over the intersection is at most the energy."""
    g = region.graph
    count = 0
    for i in range(len(cov.centers)):
        members = cov.ball_members(g, i)
        inside = members[region.mask[members]]
        if inside.size == 0:
            continue
        umax = float(u.values[region.global_to_local[inside]].max())
        if 1.0 / umax <= energy:
            count += 1
    return count / float(len(region))


class CountingEvaluator:
    """Evaluates the landscape counting function at arbitrary energies,
    rebuilding the covering only when the energy-dependent radius actually
    changes the ball shapes. Per-covering ball maxima of u are cached."""

    def __init__(self, u: LandscapeFunction, region: Region, policy: RadiusPolicy):
        self.u = u
        self.region = region
        self.policy = policy
        self._cache = {}

    def _ball_maxima(self, radius):
        g = self.region.graph
        key = g.radius_key(radius)
        got = self._cache.get(key)
        if got is None:
            cov = build_covering(g, radius)
            maxima = []
            for i in range(len(cov.centers)):
                members = cov.ball_members(g, i)
                inside = members[self.region.mask[members]]
                if inside.size:
                    maxima.append(self.u.values[self.region.global_to_local[inside]].max())
            got = (cov, np.array(maxima))
            self._cache[key] = got
        return got

    def value(self, energy) -> float:
        radius = self.policy.radius(energy)
        _, maxima = self._ball_maxima(radius)
        if maxima.size == 0:
            return 0.0
        inv = 1.0 / maxima
        return float(np.count_nonzero(inv <= energy)) / float(len(self.region))

    def covering_at(self, energy) -> Covering:
        return self._ball_maxima(self.policy.radius(energy))[0]


def counting_curve_landscape(u: LandscapeFunction, region: Region, energies,
                             policy: RadiusPolicy) -> CountingCurve:
    """Sample the landscape counting function on an ascending energy grid,
    with the covering radius tracking each energy."""
    energies = np.asarray(energies, dtype=np.float64)
    if np.any(energies <= 0) or np.any(np.diff(energies) <= 0):
        raise ValueError("energies must be positive and ascending")
    ev = CountingEvaluator(u, region, policy)
    values = np.array([ev.value(e) for e in energies])
    return CountingCurve(energies=energies, values=values, kind="landscape")
