import json

import pytest
from click.testing import CliRunner

from netres.cli import main
from netres.graphio import parse_graph, serialize_graph
from netres.graphs import directed_star, edgeless

STAR4 = "directed\n0 1\n0 2\n0 3\n"
LINE3 = "undirected\n0 1\n1 2\n"


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def star_file(tmp_path):
    path = tmp_path / "star4.txt"
    path.write_text(STAR4)
    return str(path)


@pytest.fixture()
def line_file(tmp_path):
    path = tmp_path / "line3.txt"
    path.write_text(LINE3)
    return str(path)


def run_ok(runner, args, **kw):
    result = runner.invoke(main, args, catch_exceptions=False, **kw)
    assert result.exit_code == 0, result.output
    return result


# --- metrics ------------------------------------------------------------------


def test_metrics_all(runner, star_file):
    out = json.loads(run_ok(runner, ["metrics", "--graph", star_file]).output)
    assert out["nodes"] == 4
    assert out["edges"] == 3
    assert out["metrics"]["max_deg_out"]["value"] == 3.0
    assert out["metrics"]["moment2_out"] == {"value": 2.25, "exact": "9/4"}
    # undirected-only quantities are skipped for a directed graph
    assert "epidemic_ratio" not in out["metrics"]


def test_metrics_kind_subset(runner, line_file):
    out = json.loads(
        run_ok(runner, ["metrics", "--graph", line_file, "--kinds", "epidemicratio,avgdegree"]).output
    )
    assert set(out["metrics"]) == {"epidemic_ratio", "avg_degree"}


def test_metrics_csv(runner, star_file):
    result = run_ok(runner, ["metrics", "--graph", star_file, "--kinds", "max_deg_out", "--format", "csv"])
    assert result.output == "kind,value,exact\nmax_deg_out,3.0,3\n"


def test_metrics_domain_error_payload(runner, star_file):
    result = runner.invoke(main, ["metrics", "--graph", star_file, "--kinds", "epidemic_ratio"])
    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert payload["code"] == "directed_unsupported"
    assert payload["message"]


def test_metrics_parse_error_has_position(runner, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("directed\n0 zero\n")
    result = runner.invoke(main, ["metrics", "--graph", str(bad)])
    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert payload["code"] == "malformed"
    assert payload["line"] == 2


def test_missing_graph_is_usage_error(runner):
    result = runner.invoke(main, ["metrics", "--graph", "/nonexistent.txt"])
    assert result.exit_code == 2


# --- accept ---------------------------------------------------------------------


def test_accept_star_preset(runner, star_file):
    out = json.loads(run_ok(runner, ["accept", "--graph", star_file, "--preset", "prop-6.1-out2"]).output)
    assert out["accepted"] is False
    assert out["q"] == 2.25
    assert out["q_exact"] == "9/4"
    assert out["threshold_exact"] == "56/25"


def test_accept_acceptance_file(runner, star_file, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"q": "max_deg_out", "schedule": {"kind": "constant", "value": 3}}))
    out = json.loads(run_ok(runner, ["accept", "--graph", star_file, "--acceptance", str(spec)]).output)
    assert out["accepted"] is True
    assert out["margin"] == 0.0


def test_accept_needs_exactly_one_spec(runner, star_file, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text("{}")
    both = runner.invoke(
        main,
        ["accept", "--graph", star_file, "--preset", "prop-6.1-out2", "--acceptance", str(spec)],
    )
    assert both.exit_code == 2
    neither = runner.invoke(main, ["accept", "--graph", star_file])
    assert neither.exit_code == 2


def test_accept_unknown_preset(runner, star_file):
    result = runner.invoke(main, ["accept", "--graph", star_file, "--preset", "nope"])
    assert result.exit_code == 2
    assert "unknown preset" in result.output


def test_accept_stress_preset_requires_seed(runner, star_file):
    result = runner.invoke(main, ["accept", "--graph", star_file, "--preset", "stress-sir"])
    assert result.exit_code == 2
    assert "--seed" in result.output


def test_accept_csv(runner, star_file):
    result = run_ok(
        runner, ["accept", "--graph", star_file, "--preset", "prop-6.2-maxoutdeg", "--format", "csv"]
    )
    assert result.output.splitlines()[0] == "accepted,q,threshold,margin"
    assert result.output.splitlines()[1].startswith("False,3.0,1.0,")


# --- apply -----------------------------------------------------------------------


def test_apply_step(runner, star_file):
    result = run_ok(runner, ["apply", "--graph", star_file, "--step", "edge_del 0 3"])
    g = parse_graph(result.output)
    assert g == parse_graph("directed\n0 1\n0 2\nnode 3\n")


def test_apply_noop_warns_on_stderr(runner, star_file):
    result = runner.invoke(
        main, ["apply", "--graph", star_file, "--step", "edge_del 1 2", "--format", "csv"],
        catch_exceptions=False,
    )
    assert result.exit_code == 0
    assert "warning: no-op step" in result.stderr
    assert parse_graph(result.stdout) == directed_star(4)


def test_apply_strategy_file_and_out(runner, star_file, tmp_path):
    strat = tmp_path / "moves.txt"
    strat.write_text("edge_del 0 1\nedge_del 0 2\nedge_del 0 3\n")
    out_path = tmp_path / "result.txt"
    run_ok(
        runner,
        ["apply", "--graph", star_file, "--strategy", str(strat), "--out", str(out_path), "--format", "csv"],
    )
    assert parse_graph(out_path.read_text()) == edgeless(4)


def test_apply_requires_steps(runner, star_file):
    assert runner.invoke(main, ["apply", "--graph", star_file]).exit_code == 2


def test_apply_malformed_step(runner, star_file):
    result = runner.invoke(main, ["apply", "--graph", star_file, "--step", "edge_del 0"])
    assert result.exit_code == 1
    assert json.loads(result.output)["code"] == "malformed_intervention"


# --- reach ------------------------------------------------------------------------


def test_reach_labeled(runner, star_file):
    out = json.loads(
        run_ok(
            runner,
            ["reach", "--graph", star_file, "--iset", "edge_del", "--depth", "1", "--dedup", "labeled"],
        ).output
    )
    assert out["count"] == 4
    assert out["complete"] is True


def test_reach_canonical_collapses_symmetry(runner, star_file):
    out = json.loads(
        run_ok(runner, ["reach", "--graph", star_file, "--iset", "edge_del", "--depth", "1"]).output
    )
    assert out["count"] == 2


def test_reach_budget_flag(runner, star_file):
    out = json.loads(
        run_ok(
            runner,
            [
                "reach", "--graph", star_file, "--iset", "edge_del,edge_add",
                "--depth", "3", "--max-states", "5", "--dedup", "labeled",
            ],
        ).output
    )
    assert out["count"] == 5
    assert out["complete"] is False


def test_reach_label_pool(runner, star_file):
    out = json.loads(
        run_ok(
            runner,
            ["reach", "--graph", star_file, "--iset", "node_add", "--depth", "1",
             "--dedup", "labeled", "--label-pool", "17"],
        ).output
    )
    nodes = {tuple(g["nodes"]) for g in out["graphs"]}
    assert (0, 1, 2, 3, 17) in nodes


# --- cost ------------------------------------------------------------------------


def test_cost_strategy(runner, star_file, tmp_path):
    strat = tmp_path / "moves.txt"
    strat.write_text("edge_del 0 1\nedge_del 0 2\n")
    out = json.loads(run_ok(runner, ["cost", "--graph", star_file, "--strategy", str(strat)]).output)
    assert out["cost"] == 2.0
    assert len(out["steps"]) == 2


def test_cost_transformation(runner, star_file, tmp_path):
    target = tmp_path / "target.txt"
    target.write_text(serialize_graph(edgeless(4)))
    out = json.loads(
        run_ok(
            runner,
            ["cost", "--graph", star_file, "--target", str(target), "--iset", "edge_del"],
        ).output
    )
    assert out["value"] == 3.0
    assert out["status"] == "optimal-within-budget"
    assert len(out["witness"]) == 3


def test_cost_needs_exactly_one_mode(runner, star_file):
    assert runner.invoke(main, ["cost", "--graph", star_file]).exit_code == 2


def test_cost_model_inline_json(runner, star_file, tmp_path):
    strat = tmp_path / "moves.txt"
    strat.write_text("edge_del 0 1\n")
    model = json.dumps({"kind": "monetary", "prices": {"edge_del": 2.5}})
    out = json.loads(
        run_ok(runner, ["cost", "--graph", star_file, "--strategy", str(strat), "--model", model]).output
    )
    assert out["cost"] == 2.5


# --- rho --------------------------------------------------------------------------


def test_rho_named_preset(runner, star_file):
    out = json.loads(
        run_ok(runner, ["rho", "--graph", star_file, "--preset", "prop-6.2-maxoutdeg",
                        "--iset", "edge_del"]).output
    )
    assert out["value"] == 2.0
    assert out["status"] == "optimal-within-budget"
    assert len(out["witness"]) == 2


def test_rho_preset_file(runner, star_file, tmp_path):
    preset = tmp_path / "preset.json"
    preset.write_text(
        json.dumps(
            {
                "acceptance": {"q": "max_deg_out", "schedule": {"kind": "constant", "value": 1}},
                "iset": {"kinds": ["edge_del"]},
                "cost": {"kind": "monetary", "prices": {"edge_del": 0.5}},
            }
        )
    )
    out = json.loads(run_ok(runner, ["rho", "--graph", star_file, "--preset", str(preset)]).output)
    assert out["value"] == 1.0


def test_rho_stress_preset_requires_seed(runner, star_file):
    result = runner.invoke(main, ["rho", "--graph", star_file, "--preset", "stress-sir"])
    assert result.exit_code == 2


# --- stress ------------------------------------------------------------------------


def test_stress_flags_deterministic(runner, line_file):
    args = ["stress", "--graph", line_file, "--tau", "1", "--gamma", "1",
            "--alpha", "0.5", "--samples", "400", "--seed", "7"]
    first = run_ok(runner, args)
    second = run_ok(runner, args)
    assert first.output == second.output
    payload = json.loads(first.output)
    assert payload["engine"] == "epn"
    assert payload["estimate"]["samples"] == 400
    assert sum(c for _, c in payload["final_sizes"]) == 400


def test_stress_seed_env_fallback(runner, line_file):
    args = ["stress", "--graph", line_file, "--tau", "1", "--gamma", "1",
            "--alpha", "0.5", "--samples", "100"]
    missing = runner.invoke(main, args)
    assert missing.exit_code == 2
    via_env = runner.invoke(main, args, env={"NETRES_SEED": "7"}, catch_exceptions=False)
    via_flag = run_ok(runner, args + ["--seed", "7"])
    assert via_env.exit_code == 0
    assert via_env.output == via_flag.output


def test_stress_config_file(runner, line_file, tmp_path):
    cfg = tmp_path / "sir.json"
    cfg.write_text(
        json.dumps(
            {
                "tau": 1.0,
                "gamma": 1.0,
                "alpha": 0.5,
                "lam": 0.1,
                "shock": {"kind": "uniform_single_node"},
                "samples": 200,
            }
        )
    )
    no_seed = runner.invoke(main, ["stress", "--graph", line_file, "--config", str(cfg)])
    assert no_seed.exit_code == 2
    out = json.loads(
        run_ok(runner, ["stress", "--graph", line_file, "--config", str(cfg), "--seed", "3"]).output
    )
    assert out["estimate"]["seed"] == 3
    assert out["estimate"]["samples"] == 200
    assert out["threshold"] == 0.1


def test_stress_workers_agree(runner, line_file):
    base = ["stress", "--graph", line_file, "--tau", "1", "--gamma", "1",
            "--alpha", "0.5", "--samples", "300", "--seed", "11"]
    assert run_ok(runner, base).output == run_ok(runner, base + ["--workers", "4"]).output


def test_stress_gillespie_engine(runner, line_file):
    out = json.loads(
        run_ok(
            runner,
            ["stress", "--graph", line_file, "--tau", "2", "--gamma", "1", "--alpha", "0.5",
             "--samples", "200", "--seed", "5", "--engine", "gillespie"],
        ).output
    )
    assert out["engine"] == "gillespie"


def test_stress_fixed_shock_and_risk_flag(runner, line_file):
    out = json.loads(
        run_ok(
            runner,
            ["stress", "--graph", line_file, "--tau", "50", "--gamma", "0.01", "--alpha", "0.5",
             "--lam", "0.1", "--shock", "fixed:0,1", "--samples", "200", "--seed", "2"],
        ).output
    )
    assert out["systemic_risk"] is True


def test_stress_csv(runner, line_file):
    result = run_ok(
        runner,
        ["stress", "--graph", line_file, "--tau", "1", "--gamma", "1", "--alpha", "0.5",
         "--samples", "50", "--seed", "9", "--format", "csv"],
    )
    lines = result.output.splitlines()
    assert lines[0] == "p_hat,ci_low,ci_high,samples,seed"
    assert "size,count" in lines


def test_stress_unknown_shock(runner, line_file):
    result = runner.invoke(
        main,
        ["stress", "--graph", line_file, "--tau", "1", "--gamma", "1", "--alpha", "0.5",
         "--shock", "zipf:2", "--seed", "1"],
    )
    assert result.exit_code == 2


# --- props -------------------------------------------------------------------------


def test_props_monotonicity_no_counterexample(runner):
    out = json.loads(
        run_ok(
            runner,
            ["props", "--q", "moment2out", "--iset", "edge_del,node_split",
             "--trials", "120", "--sizes", "2..5", "--seed", "1"],
        ).output
    )
    assert out["monotonicity"]["verdict"] == "NoCounterexample"
    assert out["monotonicity"]["counterexample"] is None
    assert out["monotonicity"]["q"] == "moment2_out"


def test_props_monotonicity_counterexample(runner):
    out = json.loads(
        run_ok(
            runner,
            ["props", "--q", "variance_out", "--iset", "node_del",
             "--trials", "400", "--sizes", "3..6", "--seed", "4"],
        ).output
    )
    assert out["monotonicity"]["verdict"] == "Counterexample"
    cx = out["monotonicity"]["counterexample"]
    assert cx["intervention"]["kind"] == "node_del"


def test_props_monotonicity_requires_seed(runner):
    result = runner.invoke(main, ["props", "--q", "moment2out", "--iset", "edge_del"])
    assert result.exit_code == 2


def test_props_preset_checks(runner):
    out = json.loads(
        run_ok(
            runner,
            ["props", "--preset", "prop-6.2-maxoutdeg", "--checks", "p1,p2,p4",
             "--sizes", "2..4", "--up-to", "4", "--seed", "0"],
        ).output
    )
    assert out["p1"]["ok"] is True
    assert out["p2"]["ok"] is True
    assert out["p4"]["ok"] is True
    assert all(s["ok"] for s in out["p2"]["sizes"])


def test_props_without_work_is_usage_error(runner):
    assert runner.invoke(main, ["props"]).exit_code == 2


# --- misc --------------------------------------------------------------------------


def test_version(runner):
    result = run_ok(runner, ["--version"])
    assert "version" in result.output


def test_help_lists_commands(runner):
    result = run_ok(runner, ["--help"])
    for name in ("metrics", "accept", "apply", "reach", "cost", "rho", "stress", "props", "serve"):
        assert name in result.output
