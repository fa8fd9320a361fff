import numpy as np
import pytest

from landscapeids.graphs import Region
from landscapeids.operator import BoundaryMode, DisorderConfig, Dist, assemble, sample_disorder
from landscapeids.zoo import BandGraphSpec, band_vertex_id, build_band_graph, centered_band_region


def path_graph(n, margin=2):
    """1D W=1 band graph with an n-site centered region."""
    extent = n // 2 + margin
    spec = BandGraphSpec(d=1, W=1, extent=extent)
    g = build_band_graph(spec)
    region = centered_band_region(g, spec, n)
    return g, region


def band_instance(d, w, sites, mu_dist, v_dist, seed, realization=0, bc=BoundaryMode.DIRICHLET):
    spec = BandGraphSpec(d=d, W=w, extent=(sites // 2 + 2 * w))
    g = build_band_graph(spec)
    region = centered_band_region(g, spec, sites)
    cfg = DisorderConfig(mu=mu_dist, v=v_dist, seed=seed)
    mu, v = sample_disorder(g, region, cfg, realization)
    return g, region, assemble(g, region, mu, v, bc)


DISORDER_MIXES = [
    (Dist.constant(1.0), Dist.constant(0.0), BoundaryMode.DIRICHLET),
    (Dist.uniform(0.0, 1.0), Dist.constant(0.0), BoundaryMode.DIRICHLET),
    (Dist.bernoulli(0.5), Dist.constant(0.0), BoundaryMode.DIRICHLET),
    (Dist.uniform(0.0, 1.0), Dist.uniform(0.0, 2.0), BoundaryMode.DIRICHLET),
    (Dist.bernoulli(0.7), Dist.bernoulli(0.3, scale=4.0), BoundaryMode.DIRICHLET),
    (Dist.uniform(0.2, 0.9), Dist.uniform(0.1, 1.0), BoundaryMode.NEUMANN),
]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
