"""Command-line plumbing: commands, exit codes, reproducible bytes."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest
from click.testing import CliRunner

from chaincover.chain import nested_chain
from chaincover.cli import _adversarial_rows, cli
from chaincover.compress import select
from chaincover.conformal import LabeledPair, calibrate, fixed_context_fit
from chaincover.hypergraph import WeightedHypergraph
from chaincover.io import (
    canonical_json,
    load_chain,
    result_csv,
    save_chain,
    save_instance,
)

SCRIPT = "chaincover"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def instance_file(tmp_path, three_path_instance):
    path = tmp_path / "inst.json"
    save_instance(path, three_path_instance)
    return str(path)


def _run(args, cwd, env=None):
    return subprocess.run(
        [SCRIPT, *args], cwd=cwd, env=env, capture_output=True, text=True
    )


def test_chain_command(runner, tmp_path, instance_file, three_path_instance):
    out = str(tmp_path / "chain.json")
    result = runner.invoke(cli, ["chain", instance_file, out])
    assert result.exit_code == 0
    assert result.output.strip() == f"3 sets, 2 breakpoints -> {out}"
    loaded = load_chain(out)
    direct = nested_chain(three_path_instance)
    assert loaded.sets == direct.sets
    assert loaded.breakpoints == direct.breakpoints


def test_compress_command_on_instance(runner, instance_file):
    result = runner.invoke(cli, ["compress", instance_file, "--tau", "3/5"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report == {
        "vertices": [0, 1, 2, 3],
        "size": 4,
        "residual": "2/5",
        "residual_bound": "4/5",
        "certified": True,
    }


def test_compress_command_on_chain_file(runner, tmp_path, three_path_instance):
    path = tmp_path / "chain.json"
    save_chain(path, nested_chain(three_path_instance))
    result = runner.invoke(cli, ["compress", str(path), "--tau", "3/5"])
    assert result.exit_code == 0
    assert json.loads(result.output)["vertices"] == [0, 1, 2, 3]


def test_compress_command_extremes(runner, instance_file):
    low = runner.invoke(cli, ["compress", instance_file, "--tau", "0"])
    assert json.loads(low.output)["vertices"] == []
    high = runner.invoke(cli, ["compress", instance_file, "--tau", "1"])
    assert json.loads(high.output)["vertices"] == [0, 1, 2, 3, 4, 5, 6]


def test_fixed_command(runner, tmp_path):
    doc = {
        "n": 3,
        "edges": [{"v": [0, 1], "w": "1"}] * 3 + [{"v": [2], "w": "1"}],
    }
    path = tmp_path / "draws.json"
    path.write_text(canonical_json(doc))
    result = runner.invoke(cli, ["fixed", str(path), "--phi", "1/2"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    draws = [frozenset({0, 1})] * 3 + [frozenset({2})]
    fit = fixed_context_fit(draws, Fraction(1, 2), 3)
    assert report["vertices"] == sorted(fit.vertex_set)
    assert report["level_count"] == fit.level_count
    assert report["second_half_coverage"] == str(fit.second_half_coverage)


def test_calibrate_command(runner, tmp_path):
    doc = {
        "n": 3,
        "edges": [{"v": [0], "w": 1}, {"v": [1], "w": 1}, {"v": [2], "w": 1}],
        "pairs": [
            {"a": [0], "b": [0]},
            {"a": [1], "b": [1]},
            {"a": [0], "b": [0]},
            {"a": [2], "b": [2]},
            {"a": [1], "b": [2]},
        ],
        "split": 3,
    }
    path = tmp_path / "pairs.json"
    path.write_text(canonical_json(doc))
    result = runner.invoke(cli, ["calibrate", str(path), "--phi", "1/2", "--delta", "1/4"])
    assert result.exit_code == 0
    report = json.loads(result.output)

    universe = WeightedHypergraph.build(3, [([0], 1), ([1], 1), ([2], 1)])
    items = [
        LabeledPair(frozenset(p["a"]), frozenset(p["b"]), universe)
        for p in doc["pairs"]
    ]
    state = calibrate(items[:3], items[3:], Fraction(1, 2), Fraction(1, 4))
    assert state.d_star == 0
    assert report["d_star"] == state.d_star
    assert report["censored"] == [False, True]  # ({1},{2}) misses at d*=0
    assert report["tau_star"] == str(state.tau_star)
    assert report["etas"] == [str(e.value) for e in state.etas]
    assert report["censored"] == [e.censored for e in state.etas]


def test_calibrate_rejects_short_pairs(runner, tmp_path):
    doc = {"n": 1, "edges": [{"v": [0], "w": 1}], "pairs": [{"a": [0], "b": [0]}]}
    path = tmp_path / "pairs.json"
    path.write_text(canonical_json(doc))
    result = runner.invoke(cli, ["calibrate", str(path), "--phi", "1/2"],
                           standalone_mode=False, catch_exceptions=True)
    assert result.exception is not None


def test_experiment_adversarial_csv(runner, tmp_path):
    out = tmp_path / "adv.csv"
    result = runner.invoke(
        cli,
        ["experiment", "adversarial", "--out", str(out),
         "--path-len", "6", "--parallel", "2", "--eps", "1/4", "--seeds", "0,3"],
    )
    assert result.exit_code == 0
    rows = _adversarial_rows(6, 2, Fraction(1, 4), Fraction(1), [0, 3])
    assert out.read_text() == result_csv(rows)


def test_experiment_grid_csv(runner, tmp_path):
    from chaincover import experiments as xp

    out = tmp_path / "grid.csv"
    result = runner.invoke(
        cli,
        ["experiment", "grid", "--out", str(out),
         "--seeds", "0", "--phi-grid", "1/2,4/5"],
    )
    assert result.exit_code == 0
    data = xp.gen_grid_routes(xp.GridRoutingConfig(), 0)
    rows = xp.run_comparison(
        data.n, data.train, data.test, [Fraction(1, 2), Fraction(4, 5)],
        ("chain", "forward_greedy", "reverse_greedy"), 0,
    )
    assert out.read_text() == result_csv(rows)


# ------------------------------------------------------------ process surface


def test_exit_code_zero_and_identical_reruns(tmp_path, three_path_instance):
    inst = tmp_path / "inst.json"
    save_instance(inst, three_path_instance)
    outs = []
    for name in ("a.json", "b.json"):
        proc = _run(["chain", "inst.json", name], cwd=tmp_path)
        assert proc.returncode == 0, proc.stderr
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_exit_code_one_on_bad_input(tmp_path):
    proc = _run(["chain", "missing.json", "out.json"], cwd=tmp_path)
    assert proc.returncode == 1
    assert "input error" in proc.stderr


def test_exit_code_one_on_bad_tau(tmp_path, three_path_instance):
    inst = tmp_path / "inst.json"
    save_instance(inst, three_path_instance)
    proc = _run(["compress", "inst.json", "--tau", "3/2"], cwd=tmp_path)
    assert proc.returncode == 1


def test_exit_code_two_on_violated_invariant(tmp_path):
    # eps >= 1/2 with kappa=1 lets the empty set certify, so the chain
    # selector keeps 0 vertices instead of the b singletons
    proc = _run(
        ["experiment", "adversarial", "--out", "adv.csv",
         "--path-len", "5", "--parallel", "2", "--eps", "3/5"],
        cwd=tmp_path,
    )
    assert proc.returncode == 2
    assert "invariant violated" in proc.stderr


def test_env_seed_default(tmp_path):
    import os

    env = dict(os.environ, CHAINCOVER_SEED="41")
    proc = _run(
        ["experiment", "adversarial", "--out", "adv.csv",
         "--path-len", "6", "--parallel", "2", "--eps", "1/4"],
        cwd=tmp_path, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    rows = (tmp_path / "adv.csv").read_text().splitlines()
    assert rows[1:] == [r for r in rows[1:] if r.endswith(",41")]
    assert len(rows) == 3

    env["CHAINCOVER_SEED"] = "not-a-number"
    proc = _run(
        ["experiment", "adversarial", "--out", "adv.csv",
         "--path-len", "6", "--parallel", "2", "--eps", "1/4"],
        cwd=tmp_path, env=env,
    )
    assert proc.returncode == 1
