"""Eigenvalue counting by matrix inertia, dense reference spectra, and the
Green's-function / Poisson-kernel machinery on metric balls."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .curves import CountingCurve
from .graphs import Ball, Graph, GraphError, exterior_boundary
from .operator import JacobiOperator, OperatorError

DENSE_CAP = 2000


@dataclass(frozen=True)
class InertiaResult:
    energy: float
    n_below: int
    n_at: int
    n_above: int
    shift_used: float = 0.0

    @property
    def n_leq(self) -> int:
        return self.n_below + self.n_at


def _block_eigenvalues(d):
    """Eigenvalues of the (1x1 / 2x2) block diagonal factor of an LDL^T
    factorization, in no particular order."""
    n = d.shape[0]
    out = np.empty(n)
    k = 0
    while k < n:
        if k + 1 < n and d[k + 1, k] != 0.0:
            a, b, c = d[k, k], d[k + 1, k], d[k + 1, k + 1]
            half_tr = 0.5 * (a + c)
            disc = np.hypot(0.5 * (a - c), b)
            out[k] = half_tr - disc
            out[k + 1] = half_tr + disc
            k += 2
        else:
            out[k] = d[k, k]
            k += 1
    return out


def count_leq(op: JacobiOperator, energy, tol=1e-10) -> InertiaResult:
    """Count eigenvalues below / at / above the energy without computing
    them, by reading the inertia off a symmetric indefinite (Bunch-Kaufman)
    factorization of H - E. Pivots smaller than tol * ||H||_inf count as
    "at". If the factorization breaks down the energy is nudged by 1e-12
    and the shift reported."""
    h = op.dense()
    scale = max(op.inf_norm(), 1.0)
    window = tol * scale
    for shift in (0.0, 1e-12 * scale, -1e-12 * scale):
        try:
            _, d, _ = scipy.linalg.ldl(h - (energy + shift) * np.eye(op.dim))
        except np.linalg.LinAlgError:
            continue
        eigs = _block_eigenvalues(d)
        n_at = int(np.count_nonzero(np.abs(eigs) <= window))
        n_below = int(np.count_nonzero(eigs < -window))
        return InertiaResult(energy=float(energy), n_below=n_below, n_at=n_at,
                             n_above=op.dim - n_below - n_at, shift_used=shift)
    raise OperatorError("inertia factorization failed at E=%r even after shifts" % (energy,))


def ids_curve(op: JacobiOperator, energies, tol=1e-10) -> CountingCurve:
    """Integrated density of states: fraction of eigenvalues <= E on an
    ascending grid (right-continuous step counting)."""
    energies = np.asarray(energies, dtype=np.float64)
    values = np.empty(energies.size)
    for k, e in enumerate(energies):
        values[k] = count_leq(op, e, tol=tol).n_leq / op.dim
    return CountingCurve(energies=energies, values=values, kind="ids")


def dense_spectrum(op: JacobiOperator) -> np.ndarray:
    """All eigenvalues, ascending; reference oracle for counting routines."""
    if op.dim > DENSE_CAP:
        raise OperatorError("dense spectra are capped at n=%d" % DENSE_CAP)
    return scipy.linalg.eigvalsh(op.dense())


@dataclass
class BallKernel:
    """Green's function of the Dirichlet Laplacian on a ball, and the
    harmonic-measure (Poisson) weights it induces on the exterior boundary
    of the ball for the fixed center."""

    ball: Ball
    center: int
    green: np.ndarray          # |B| x |B|, symmetric, nonnegative
    boundary: np.ndarray       # exterior boundary vertex ids
    poisson: np.ndarray        # weights on boundary; sums to 1

    def green_at(self, members_index, x, y) -> float:
        return float(self.green[members_index[x], members_index[y]])


def _dirichlet_laplacian(g: Graph, members):
    """Ambient-degree Laplacian restricted to the member set (dense)."""
    if not g.complete_mask[members].all():
        raise GraphError("ball touches the generator extent; enlarge the graph")
    index = {int(v): i for i, v in enumerate(members)}
    n = members.size
    lap = np.zeros((n, n))
    for i, x in enumerate(members):
        lap[i, i] = g.degree(int(x))
        for y in g.neighbors(int(x)):
            j = index.get(int(y))
            if j is not None:
                lap[i, j] -= 1.0
    return lap, index


def ball_green(g: Graph, b: Ball, center=None) -> BallKernel:
    """Invert the Dirichlet Laplacian on the ball and read off the Poisson
    kernel P(center, x) = sum of Green's values over in-ball neighbors of
    each boundary vertex x."""
    center = b.center if center is None else int(center)
    members = b.members
    if center not in members:
        raise GraphError("center must belong to the ball")
    lap, index = _dirichlet_laplacian(g, members)
    green = np.linalg.inv(lap)
    boundary = exterior_boundary(g, members)
    ci = index[center]
    pois = np.empty(boundary.size)
    for k, x in enumerate(boundary):
        acc = 0.0
        for y in g.neighbors(int(x)):
            j = index.get(int(y))
            if j is not None:
                acc += green[ci, j]
        pois[k] = acc
    return BallKernel(ball=b, center=center, green=green, boundary=boundary, poisson=pois)


@dataclass
class KernelBoundsReport:
    """Worst-case slack of the four explicit 1D band-model kernel bounds;
    nonnegative slack everywhere means the bounds hold."""

    W: int
    r: int
    green_lower_slack: float
    green_upper_slack: float
    poisson_lower_slack: float
    poisson_upper_slack: float
    poisson_mass_error: float

    @property
    def min_slack(self) -> float:
        return min(self.green_lower_slack, self.green_upper_slack,
                   self.poisson_lower_slack, self.poisson_upper_slack)


def _band1d_ball_kernel(W, r, extent_factor=2):
    from .zoo import BandGraphSpec, build_band_graph  # local import, avoids cycle

    extent = (r + extent_factor) * W
    g = build_band_graph(BandGraphSpec(d=1, W=W, extent=extent))
    center = extent  # lattice point 0
    members = g.bfs_ball(center, r)
    b = Ball(center=center, radius=float(r), members=members)
    return g, ball_green(g, b), center


def band1d_kernel_bounds(W, r) -> KernelBoundsReport:
    """Evaluate the Green's function and Poisson kernel of the radius-r ball
    in the 1D bandwidth-W graph and compare against the explicit bounds

        (rW + 1 - |x|) / (2 W^3) <= G(0, x) <= (W + rW - |x|) / W^2
        1 / (2 W^3) <= P(0, x) <= 1.
    """
    if W < 1 or r < 1:
        raise GraphError("need W >= 1 and r >= 1")
    g, kern, center = _band1d_ball_kernel(W, r)
    offsets = np.abs(kern.ball.members - center).astype(np.float64)
    grow = kern.green[int(np.searchsorted(kern.ball.members, center))]
    lower = (r * W + 1.0 - offsets) / (2.0 * W ** 3)
    upper = (W + r * W - offsets) / W ** 2
    p_lo = 1.0 / (2.0 * W ** 3)
    return KernelBoundsReport(
        W=W, r=r,
        green_lower_slack=float((grow - lower).min()),
        green_upper_slack=float((upper - grow).min()),
        poisson_lower_slack=float((kern.poisson - p_lo).min()),
        poisson_upper_slack=float((1.0 - kern.poisson).min()),
        poisson_mass_error=float(abs(kern.poisson.sum() - 1.0)),
    )


@dataclass
class HarmonicWeight1D:
    """Layered harmonic weight on a 1D band-model ball: the center carries
    1/|B|, and each boundary layer carries its Poisson kernel scaled by the
    layer size over |B|. Sums to 1 and is bounded below by 1/(|B| W^2)."""

    W: int
    r: int
    vertices: np.ndarray       # lattice offsets from the center, |x| <= rW
    weights: np.ndarray
    total: float
    min_weight: float
    lower_bound: float


def harmonic_weight_1d(W, r) -> HarmonicWeight1D:
    if W < 1 or r < 2:
        raise GraphError("need W >= 1 and r >= 2")
    from .zoo import BandGraphSpec, build_band_graph

    extent = (r + 2) * W
    g = build_band_graph(BandGraphSpec(d=1, W=W, extent=extent))
    center = extent
    ball_size = 2 * r * W + 1
    weights = {0: 1.0 / ball_size}
    for rho in range(r):
        members = g.bfs_ball(center, rho)
        kern = ball_green(g, Ball(center=center, radius=float(rho), members=members))
        layer = kern.boundary
        if layer.size != 2 * W:
            raise GraphError("unexpected layer size %d" % layer.size)
        for x, p in zip(layer, kern.poisson):
            weights[int(x) - center] = (2.0 * W) * p / ball_size
    offsets = np.array(sorted(weights))
    vals = np.array([weights[int(o)] for o in offsets])
    return HarmonicWeight1D(
        W=W, r=r, vertices=offsets, weights=vals,
        total=float(vals.sum()), min_weight=float(vals.min()),
        lower_bound=1.0 / (ball_size * W ** 2),
    )
