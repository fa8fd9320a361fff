import hashlib
import json

import numpy as np
import pytest

from landscapeids.cli import main, run_experiment
from landscapeids.config import build_graph_and_region, default_alpha, load_config
from landscapeids.graphio import read_curves_csv, read_graph_text, write_curves_csv
from landscapeids.landscape import RadiusPolicy
from landscapeids.operator import BoundaryMode

TINY = """
[experiment]
name = "tiny"
seed = 3
realizations = 2

[graph]
family = "band"
d = 1
W = 2
region_sites = 80
margin = 4

[disorder]
mu = "uniform"
mu_lo = 0.0
mu_hi = 1.0
v = "uniform"
v_lo = 0.0
v_hi = 1.0
boundary = "dirichlet"

[energies]
min = 0.02
max = 6.0
points = 10

[counting]
policy = "invsqrt"

[analysis]
fit_exponent = 0.5
overlay_c1 = 2.0
overlay_c2 = 0.9
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY)
    return path


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestConfig:
    def test_load_fields(self, tiny_config):
        cfg = load_config(tiny_config)
        assert cfg.name == "tiny"
        assert cfg.realizations == 2
        assert cfg.boundary is BoundaryMode.DIRICHLET
        assert cfg.policy == RadiusPolicy.inv_sqrt()
        assert cfg.energy_grid().size == 10
        assert cfg.disorder.seed == 3

    def test_bundled_configs_parse(self):
        for name in ("band1d", "band2d", "gasket", "penrose"):
            cfg = load_config("configs/%s.toml" % name)
            g_table = cfg.graph
            assert default_alpha(g_table) > 0
        gasket = load_config("configs/gasket.toml")
        assert gasket.policy.beta == pytest.approx(np.log(5) / np.log(2))
        penrose = load_config("configs/penrose.toml")
        assert penrose.boundary is BoundaryMode.NEUMANN

    def test_paper_scale_override(self):
        cfg = load_config("configs/band1d.toml")
        assert cfg.paper_scale_graph["region_sites"] == 20000


class TestRunExperiment:
    def test_bundle_contents(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        report = run_experiment(load_config(tiny_config), out)
        for name in ("graph.txt", "curves.csv", "report.json", "manifest.json",
                     "plots.gp", "ids_mean.csv", "nu_mean.csv", "nu_scaled.csv"):
            assert (out / name).exists(), name
        data = read_curves_csv(out / "curves.csv")
        assert ("ids", 0) in data and ("ids", 1) in data
        assert ("landscape", 0) in data and ("landscape", 1) in data
        assert ("ensemble_mean", -1) in data and ("ensemble_mean", -2) in data
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config_hash"] == load_config(tiny_config).config_hash()
        assert "stages_seconds" in manifest
        assert report["landscape_law"]["upper_constant"] is not None

    def test_deterministic_csvs(self, tiny_config, tmp_path):
        cfg = load_config(tiny_config)
        run_experiment(cfg, tmp_path / "a")
        run_experiment(load_config(tiny_config), tmp_path / "b")
        for name in ("curves.csv", "ids_mean.csv", "nu_mean.csv", "nu_scaled.csv"):
            assert sha(tmp_path / "a" / name) == sha(tmp_path / "b" / name)

    def test_graph_file_readable(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        run_experiment(load_config(tiny_config), out)
        g = read_graph_text(out / "graph.txt")
        assert g.vertex_count == 89  # 80 sites + 2*margin + 1


class TestCommands:
    def test_gen_sierpinski_level8(self, tmp_path):
        out = tmp_path / "g.txt"
        assert main(["gen", "--spec", "sierpinski", "--level", "8",
                     "--out", str(out)]) == 0
        g = read_graph_text(out)
        assert g.vertex_count == 9843

    def test_run_exit_code(self, tiny_config, tmp_path):
        assert main(["run", "--config", str(tiny_config),
                     "--out", str(tmp_path / "run")]) == 0

    def test_run_ids_and_landscape(self, tiny_config, tmp_path):
        assert main(["run-ids", "--config", str(tiny_config),
                     "--out", str(tmp_path / "i")]) == 0
        assert main(["run-landscape", "--config", str(tiny_config),
                     "--out", str(tmp_path / "l")]) == 0
        assert (tmp_path / "i" / "ids.csv").exists()
        assert (tmp_path / "l" / "landscape.csv").exists()

    def test_compare_equal_curves(self, tmp_path):
        rows = [(float(e), min(1.0, 0.1 * e), "ids", 0) for e in range(1, 9)]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        write_curves_csv(a, rows)
        write_curves_csv(b, [(e, v, "landscape", 0) for e, v, _, _ in rows])
        assert main(["compare", str(a), str(b)]) == 0

    def test_verify_appendix(self):
        assert main(["verify-appendix", "--W", "1..2", "--r", "3,6"]) == 0

    def test_fit_tails(self, tmp_path):
        energies = np.geomspace(0.01, 0.5, 24)
        values = 2.0 * np.exp(-5.0 * energies ** -0.5)
        path = tmp_path / "c.csv"
        write_curves_csv(path, [(float(e), float(v), "ensemble_mean", -1)
                                for e, v in zip(energies, values)])
        assert main(["fit-tails", "--curves", str(path), "--exponent", "0.5",
                     "--window", "0.01", "0.5"]) == 0

    def test_gen_requires_spec_or_config(self):
        with pytest.raises(SystemExit):
            main(["gen", "--out", "x.txt"])
