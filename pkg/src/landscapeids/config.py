"""Experiment configuration: TOML file schema and construction of the
graph/region/disorder objects an experiment runs on."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

try:
    import tomllib  # py311+
except ImportError:  # pragma: no cover
    import tomli as tomllib

import numpy as np

from .graphs import Graph, GraphError, Region
from .landscape import RadiusPolicy
from .operator import BoundaryMode, DisorderConfig, Dist
from .zoo import (GASKET_ALPHA, GASKET_BETA, BandGraphSpec, PenroseSpec, SierpinskiSpec,
                  StackSpec, build_band_graph, build_penrose, build_sierpinski,
                  build_stacked, centered_band_region, penrose_generations_for_radius)


@dataclass
class ExperimentConfig:
    name: str
    graph: dict
    disorder: DisorderConfig
    boundary: BoundaryMode
    e_min: float
    e_max: float
    e_points: int
    policy: RadiusPolicy
    realizations: int
    seed: int
    output: str = "out"
    scale_grid_exponents: tuple = (0, 24)     # C = 2^(k/4), k in this range
    fit_exponent: float = None                # defaults to alpha/2 per family
    overlay_c1: float = None
    overlay_c2: float = None
    paper_scale_graph: dict = field(default_factory=dict)
    raw_text: str = ""

    def __post_init__(self):
        if self.e_min <= 0 or self.e_min >= self.e_max:
            raise ValueError("need 0 < e_min < e_max")
        if self.e_points < 2:
            raise ValueError("need at least 2 energy grid points")
        if self.realizations < 1:
            raise ValueError("need at least 1 realization")

    def energy_grid(self):
        return np.geomspace(self.e_min, self.e_max, self.e_points)

    def config_hash(self) -> str:
        return hashlib.sha256(self.raw_text.encode()).hexdigest()


def _dist_from_table(table, prefix):
    kind = table.get(prefix, "constant")
    if kind == "constant":
        return Dist.constant(table.get(prefix + "_value", 1.0 if prefix == "mu" else 0.0))
    if kind == "uniform":
        return Dist.uniform(table.get(prefix + "_lo", 0.0), table.get(prefix + "_hi", 1.0))
    if kind == "bernoulli":
        return Dist.bernoulli(table.get(prefix + "_p", 0.5), table.get(prefix + "_scale", 1.0))
    raise ValueError("unknown distribution %r" % kind)


def load_config(path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        raw = fh.read()
    data = tomllib.loads(raw.decode())
    exp = data.get("experiment", {})
    graph = data.get("graph")
    if not graph or "family" not in graph:
        raise ValueError("config needs a [graph] table with a family")
    dis = data.get("disorder", {})
    disorder = DisorderConfig(mu=_dist_from_table(dis, "mu"), v=_dist_from_table(dis, "v"),
                              seed=int(exp.get("seed", 0)))
    boundary = BoundaryMode(dis.get("boundary", "dirichlet"))
    energies = data.get("energies", {})
    counting = data.get("counting", {})
    if counting.get("policy", "invsqrt") == "invbeta":
        policy = RadiusPolicy.inv_beta(counting.get("beta", GASKET_BETA))
    else:
        policy = RadiusPolicy.inv_sqrt()
    analysis = data.get("analysis", {})
    return ExperimentConfig(
        name=exp.get("name", "experiment"),
        graph=dict(graph),
        disorder=disorder,
        boundary=boundary,
        e_min=float(energies.get("min", 1e-3)),
        e_max=float(energies.get("max", 5.0)),
        e_points=int(energies.get("points", 28)),
        policy=policy,
        realizations=int(exp.get("realizations", 1)),
        seed=int(exp.get("seed", 0)),
        output=exp.get("output", "out"),
        scale_grid_exponents=(int(analysis.get("scale_min_exp", 0)),
                              int(analysis.get("scale_max_exp", 24))),
        fit_exponent=analysis.get("fit_exponent"),
        overlay_c1=analysis.get("overlay_c1"),
        overlay_c2=analysis.get("overlay_c2"),
        paper_scale_graph=dict(data.get("paper_scale", {})),
        raw_text=raw.decode(),
    )


def build_graph_and_region(graph_table) -> tuple:
    """Materialize the configured graph family and its working region."""
    family = graph_table["family"]
    if family == "band":
        d = int(graph_table.get("d", 1))
        w = int(graph_table.get("W", 1))
        sites = int(graph_table.get("region_sites", 100))
        margin = int(graph_table.get("margin", 2 * w))
        hi = sites - sites // 2 - 1
        extent = max(sites // 2, hi) + margin
        spec = BandGraphSpec(d=d, W=w, extent=extent, norm=graph_table.get("norm", "l1"))
        g = build_band_graph(spec)
        return g, centered_band_region(g, spec, sites)
    if family == "sierpinski":
        g = build_sierpinski(SierpinskiSpec(level=int(graph_table.get("level", 5))))
        return g, Region.whole(g)
    if family == "penrose":
        clip = float(graph_table.get("clip_radius", 15.0))
        gens = graph_table.get("generations")
        gens = int(gens) if gens is not None else penrose_generations_for_radius(clip)
        g = build_penrose(PenroseSpec(generations=gens, clip_radius=clip))
        return g, Region.whole(g)
    if family == "stacked":
        base_table = graph_table.get("base")
        if not base_table:
            raise ValueError("stacked graphs need a [graph.base] table")
        base, _ = build_graph_and_region(base_table)
        g = build_stacked(StackSpec(base, int(graph_table.get("layers", 2))))
        return g, Region.whole(g)
    raise ValueError("unknown graph family %r" % family)


def default_alpha(graph_table) -> float:
    """Volume-growth exponent of the configured family."""
    family = graph_table["family"]
    if family == "band":
        return float(graph_table.get("d", 1))
    if family == "sierpinski":
        return GASKET_ALPHA
    if family == "penrose":
        return 2.0
    if family == "stacked":
        return default_alpha(graph_table["base"])
    raise ValueError("unknown graph family %r" % family)
