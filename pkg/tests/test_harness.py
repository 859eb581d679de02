import copy
import json
import xml.etree.ElementTree as ET

import numpy as np
import pandas as pd
import pytest

from bounds import ProblemConstants
from core import ConfigError, RandomSource
from harness import (
    TEMPLATES,
    Cell,
    Overlay,
    aggregate,
    bound_overlay,
    emit_csv,
    emit_svg,
    gen_config,
    load_experiment_config,
    loglog_slope,
    read_csv,
    run_experiment,
    run_monte_carlo,
)
from main import EXIT_CONFIG, EXIT_OK, main
from problems import (
    GeneratorSpec,
    build_markowitz,
    gen_feasibility,
    load_returns_csv,
    synthetic_returns,
)
from schedules import StepsizeSchedule
from solvers import RunTrace, SPPSolver, SolverConfig, TraceRecord

TINY = """\
[experiment]
name = tiny
runs = 3
seed = 5
iterations = 20
stride = 5

[problem]
family = feasibility
n = 3
m = 4
seed = 1

[solver.spp]
algorithm = SPP
mu0 = 1
gamma = 1

[bounds]
overlay = false
"""

GRID = """\
[experiment]
name = grid
runs = 1
iterations = 10
group_by = gamma

[problem]
family = feasibility
n = 3
m = 4

[solver.spp]
algorithm = SPP
mu0 = 0.5, 1
gamma = 0.5, 1

[solver.aspp]
algorithm = A-SPP
mu0 = 0.5, 1
gamma = 0.5, 1

[solver.rspp]
algorithm = RSPP
mu0 = 0.5, 1
gamma = 0.5, 1

[solver.sgd]
algorithm = SGD
mu0 = 0.5, 1
gamma = 0.5, 1

[bounds]
overlay = false
"""


def write(tmp_path, text, name="experiment.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def svg_ids(path):
    return [el.get("id") for el in ET.parse(path).getroot().iter() if el.get("id")]


def fake_trace(values, seed=0):
    trace = RunTrace(algorithm="SPP", seed=seed)
    for k, v in enumerate(values):
        trace.append(TraceRecord(k=k, sqdist=v, feasibility=0.0, objective=2 * v, stepsize=1.0))
    return trace


# -- configuration ------------------------------------------------------------

def test_load_config(tmp_path):
    config = load_experiment_config(write(tmp_path, TINY), output_dir=tmp_path / "out")
    assert config.name == "tiny"
    assert config.runs == 3 and config.iterations == 20 and config.stride == 5
    assert config.problem == GeneratorSpec("feasibility", n=3, m=4, seed=1)
    assert [cell.name for cell in config.cells] == ["spp"]
    assert config.output_dir == tmp_path / "out"
    assert not config.overlay


def test_grid_expansion_and_constant_stepsize(tmp_path):
    text = TINY.replace("mu0 = 1\ngamma = 1", "mu0 = 0.5, 1\ngamma = 0, 1")
    config = load_experiment_config(write(tmp_path, text))
    names = [cell.name for cell in config.cells]
    assert names == ["spp-mu0.5-g0", "spp-mu0.5-g1", "spp-mu1-g0", "spp-mu1-g1"]
    assert config.cells[0].schedule == StepsizeSchedule.constant(0.5)
    assert config.cells[3].schedule == StepsizeSchedule.poly_decay(1.0, 1.0)


@pytest.mark.parametrize(
    "old,new",
    [
        ("stride = 5", "strides = 5"),
        ("[bounds]", "[plots]"),
        ("algorithm = SPP", "algorithm = Newton"),
        ("family = feasibility", "family = svm"),
        ("runs = 3", "runs = three"),
        ("runs = 3", "runs = 0"),
        ("algorithm = SPP\nmu0 = 1\ngamma = 1", "algorithm = RSPP\nmu0 = 1\ngamma = 0"),
        ("[solver.spp]", "[solvers]"),
    ],
)
def test_invalid_configs(tmp_path, old, new):
    with pytest.raises(ConfigError):
        load_experiment_config(write(tmp_path, TINY.replace(old, new)))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_experiment_config(tmp_path / "absent.ini")


def test_output_dir_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("SPP_OUTPUT_DIR", raising=False)
    text = TINY.replace("stride = 5", "stride = 5\noutput_dir = from-file")
    path = write(tmp_path, text)
    assert str(load_experiment_config(path).output_dir) == "from-file"
    monkeypatch.setenv("SPP_OUTPUT_DIR", "from-env")
    assert str(load_experiment_config(path).output_dir) == "from-env"
    assert str(load_experiment_config(path, output_dir="from-arg").output_dir) == "from-arg"


@pytest.mark.parametrize("name", TEMPLATES)
def test_templates_parse(tmp_path, name):
    config = load_experiment_config(write(tmp_path, gen_config(name)))
    assert config.cells


def test_figure_template_grid(tmp_path):
    config = load_experiment_config(write(tmp_path, gen_config("algorithms")))
    assert len(config.cells) == 16
    assert config.group_by == "gamma"
    assert {cell.group("gamma") for cell in config.cells} == {"gamma0.5", "gamma1"}


def test_unknown_template():
    with pytest.raises(ConfigError):
        gen_config("no-such-template")


# -- aggregation and artifacts ------------------------------------------------

def test_aggregate_mean_and_standard_error():
    trace = aggregate([fake_trace([1.0, 3.0]), fake_trace([3.0, 5.0])], "cell", "SPP")
    np.testing.assert_allclose(trace.mean("sqdist"), [2.0, 4.0])
    np.testing.assert_allclose(trace.standard_error("sqdist"), [1.0, 1.0])
    np.testing.assert_allclose(trace.mean("objective"), [4.0, 8.0])
    assert trace.runs == 2


def test_aggregate_single_run_has_zero_error():
    trace = aggregate([fake_trace([1.0, 2.0, 3.0])], "cell", "SPP")
    np.testing.assert_array_equal(trace.standard_error("sqdist"), [0.0, 0.0, 0.0])


def test_aggregate_keeps_records_of_surviving_runs():
    short = fake_trace([1.0])
    short.diverged = True
    trace = aggregate([short, fake_trace([3.0, 5.0])], "cell", "SGD")
    np.testing.assert_array_equal(trace.k, [0, 1])
    np.testing.assert_allclose(trace.mean("sqdist"), [2.0, 5.0])
    assert trace.divergence_count == 1


def test_empty_csv_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv(None, path)
    assert path.read_text() == "k,mean_sqdist,se_sqdist,mean_feas,se_feas,mean_obj,se_obj,stepsize\n"


def test_csv_round_trip(tmp_path):
    values = [0.1, 1.0 / 3.0, 1e-300]
    trace = aggregate([fake_trace(values)], "cell", "SPP")
    path = tmp_path / "cell.csv"
    emit_csv(trace, path)
    assert len(path.read_text().splitlines()) == 4
    frame = read_csv(path)
    pd.testing.assert_frame_equal(frame, trace.frame, check_dtype=False)
    assert frame["mean_sqdist"].tolist() == values


def test_svg_carries_line_ids(tmp_path):
    traces = [aggregate([fake_trace([1.0, 0.5, 0.25])], f"c{i}", f"cell {i}") for i in range(2)]
    overlay = Overlay("bound", np.array([1, 2]), np.array([1.0, 0.6]))
    path = tmp_path / "figure.svg"
    emit_svg(traces, [overlay], path)
    ids = svg_ids(path)
    assert {"trace-0", "trace-1", "overlay-0"} <= set(ids)


def test_svg_needs_a_trace(tmp_path):
    with pytest.raises(ValueError):
        emit_svg([], [], tmp_path / "figure.svg")


def test_loglog_slope():
    k = np.arange(1, 1001)
    assert loglog_slope(k, 5.0 / k) == pytest.approx(-1.0, abs=1e-9)
    assert loglog_slope(k, 2.0 / np.sqrt(k)) == pytest.approx(-0.5, abs=1e-9)
    with pytest.raises(ValueError):
        loglog_slope([1], [1.0])


# -- experiments --------------------------------------------------------------

def test_bound_overlay_applies_to_spp_only(tmp_path):
    text = TINY.replace("gamma = 1", "gamma = 0").replace("overlay = false", "overlay = true")
    config = load_experiment_config(write(tmp_path, text))
    problem = gen_feasibility(config.problem)
    constants = ProblemConstants.from_problem(problem, mu0=1.0, kappa=2.0)
    cell = config.cells[0]
    overlay = bound_overlay(constants, cell, np.array([0, 5, 10]))
    assert overlay is not None
    assert overlay.values[0] >= overlay.values[-1]
    sgd_cell = Cell(cell.name, cell.solver, "SGD", cell.schedule)
    assert bound_overlay(constants, sgd_cell, np.array([0, 5])) is None
    assert bound_overlay(None, cell, np.array([0, 5])) is None


def test_monte_carlo_is_order_preserving():
    problem = gen_feasibility(GeneratorSpec("feasibility", n=3, m=4))
    schedule = StepsizeSchedule.poly_decay(1.0, 1.0)
    configs = [SolverConfig("SPP", schedule, iterations=10, seed=s) for s in range(4)]
    serial = run_monte_carlo(problem, configs, workers=1)
    assert [trace.seed for trace in serial] == [0, 1, 2, 3]


def test_experiment_writes_artifacts(tmp_path):
    config = load_experiment_config(write(tmp_path, TINY), output_dir=tmp_path / "out")
    traces = run_experiment(config, workers=1, debug_runs=True)
    out = tmp_path / "out"
    assert len(traces) == 1
    assert (out / "tiny.svg").exists()
    lines = (out / "spp.csv").read_text().splitlines()
    assert len(lines) == 1 + 5
    assert [int(line.split(",")[0]) for line in lines[1:]] == [0, 5, 10, 15, 20]
    assert sorted(p.name for p in out.glob("spp.run*.csv")) == [
        "spp.run000.csv", "spp.run001.csv", "spp.run002.csv"
    ]
    meta = json.loads((out / "spp.meta.json").read_text())
    assert meta["runs"] == 3
    assert meta["seeds"] == [5, 7]
    assert meta["metric"] == "sqdist"


def test_experiment_reruns_are_byte_identical(tmp_path):
    path = write(tmp_path, TINY)
    run_experiment(load_experiment_config(path, output_dir=tmp_path / "a"), workers=1)
    run_experiment(load_experiment_config(path, output_dir=tmp_path / "b"), workers=1)
    for name in ("spp.csv", "tiny.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_parallel_matches_serial(tmp_path):
    path = write(tmp_path, TINY)
    run_experiment(load_experiment_config(path, output_dir=tmp_path / "serial"), workers=1)
    run_experiment(load_experiment_config(path, output_dir=tmp_path / "pool"), workers=2)
    serial = (tmp_path / "serial" / "spp.csv").read_bytes()
    assert serial == (tmp_path / "pool" / "spp.csv").read_bytes()


def test_grid_experiment_groups_figures(tmp_path):
    config = load_experiment_config(write(tmp_path, GRID), output_dir=tmp_path / "out")
    traces = run_experiment(config, workers=1)
    out = tmp_path / "out"
    assert len(traces) == 16
    assert len(list(out.glob("*.csv"))) == 16
    svgs = sorted(p.name for p in out.glob("*.svg"))
    assert svgs == ["grid-gamma0.5.svg", "grid-gamma1.svg"]
    for name in svgs:
        ids = svg_ids(out / name)
        assert len({i for i in ids if i.startswith("trace-")}) == 8


def test_overlay_is_drawn_for_constant_spp(tmp_path):
    text = (
        TINY.replace("gamma = 1", "gamma = 0")
        .replace("overlay = false", "overlay = true\nsamples = 20")
    )
    config = load_experiment_config(write(tmp_path, text), output_dir=tmp_path / "out")
    run_experiment(config, workers=1)
    assert "overlay-0" in svg_ids(tmp_path / "out" / "tiny.svg")
    meta = json.loads((tmp_path / "out" / "spp.meta.json").read_text())
    assert meta["kappa_hat"] >= 1.0
    assert meta["theta0"] == pytest.approx(0.25)
    assert "bounded sets" in meta["region_caveat"]


# -- command line -------------------------------------------------------------

def test_cli_gen_config(capsys):
    assert main(["gen-config", "algorithms"]) == EXIT_OK
    assert "[solver.spp]" in capsys.readouterr().out


def test_cli_unknown_template():
    assert main(["gen-config", "no-such-template"]) == EXIT_CONFIG


def test_cli_missing_config(tmp_path):
    assert main(["run", str(tmp_path / "absent.ini")]) == EXIT_CONFIG


def test_cli_plan(capsys):
    code = main(["plan", "--eps", "0.1", "--r0", "1", "--kappa", "1", "--mean-sq-lipschitz", "2"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "K = 3898" in out
    assert "RSPP: unavailable" in out


def test_cli_plan_rejects_nonpositive_epsilon():
    assert main(["plan", "--eps", "-1", "--r0", "1", "--kappa", "1",
                 "--mean-sq-lipschitz", "2"]) == EXIT_CONFIG


def test_cli_run_and_estimate(tmp_path, capsys):
    path = write(tmp_path, TINY)
    assert main(["run", str(path), "--workers", "1", "--output-dir", str(tmp_path / "out")]) == EXIT_OK
    assert (tmp_path / "out" / "spp.csv").exists()
    assert main(["estimate-kappa", str(path), "--samples", "20"]) == EXIT_OK
    assert "kappa_hat" in capsys.readouterr().out


# -- portfolio pipeline -------------------------------------------------------

PORTFOLIO = """\
[experiment]
name = portfolio
runs = 30
iterations = {iterations}
stride = {stride}

[problem]
family = markowitz
csv = {csv}

[solver.spp]
algorithm = SPP
mu0 = 1
gamma = 1

[bounds]
overlay = false
"""


def write_returns(tmp_path, periods=1276, assets=25):
    table = synthetic_returns(periods, assets, RandomSource(4))
    frame = pd.DataFrame(table.returns, columns=list(table.assets))
    dates = pd.date_range("2015-01-02", periods=periods, freq="B").strftime("%Y-%m-%d")
    frame.insert(0, "Date", dates)
    path = tmp_path / "returns.csv"
    frame.to_csv(path, index=False)
    return path


class SampledSetSPP(SPPSolver):
    """
    SPP that records the distance of each new iterate to the set it was
    projected onto.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.violations = []

    def step(self, x, k, mu, rng):
        replay = copy.deepcopy(rng)
        x = super().step(x, k, mu, rng)
        _, _, constraint = self.problem.sample(replay)
        self.violations.append(constraint.distance(x))
        return x


def test_portfolio_iterates_satisfy_the_sampled_set(tmp_path):
    problem = build_markowitz(load_returns_csv(write_returns(tmp_path)), rng=RandomSource(0))
    config = SolverConfig("SPP", StepsizeSchedule.poly_decay(1.0, 1.0), iterations=2000,
                          stride=500, record_feasibility=False)
    solver = SampledSetSPP(problem, config)
    solver.run()
    assert len(solver.violations) == 2000
    assert max(solver.violations) <= 1e-12


@pytest.mark.slow
def test_portfolio_pipeline(tmp_path):
    csv = write_returns(tmp_path)
    epoch = int(0.9 * 1276)
    text = PORTFOLIO.format(iterations=5 * epoch, stride=epoch, csv=csv)
    config = load_experiment_config(write(tmp_path, text), output_dir=tmp_path / "out")
    [trace] = run_experiment(config, workers=1)
    out = tmp_path / "out"
    assert (out / "portfolio.svg").exists()
    assert trace.metadata["metric"] == "objective"

    frame = read_csv(out / "spp.csv")
    assert frame["k"].tolist() == [j * epoch for j in range(6)]
    # k = 0 is the infeasible x0 = 0; F_test is compared from the first epoch on
    mean = frame["mean_obj"].to_numpy()[1:]
    se = frame["se_obj"].to_numpy()[1:]
    assert np.all(mean[1:] <= mean[:-1] + 2.0 * np.maximum(se[1:], se[:-1]))
