"""Command-line interface.

Every command reads graphs from files (text or JSON, detected by content),
prints machine-readable output (JSON by default, CSV where tabular), and
exits 2 on usage errors, 1 on domain errors with a JSON diagnostic on stdout.
Randomized commands require --seed (or the NETRES_SEED environment variable)
so that reruns are byte-identical.
"""

from __future__ import annotations

import csv as csv_mod
import io
import json
import sys

import click

from . import acceptance as acc
from . import costs as costs_mod
from . import search as search_mod
from . import stress as stress_mod
from .errors import NetresError
from .graphio import graph_to_json, parse_graph, serialize_graph
from .graphs import (
    Graph,
    bidirectional_ring,
    complete_graph,
    directed_line,
    directed_star,
    undirected_line,
    undirected_star,
)
from .interventions import (
    apply_strategy,
    describe_strategy,
    is_effective,
    iset_from_json,
    parse_step,
    parse_strategy,
    reachable_set,
    step_to_json,
)


def _fail(exc: NetresError) -> None:
    click.echo(json.dumps(exc.payload(), sort_keys=True))
    sys.exit(1)


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _echo_csv(rows: list[list], header: list[str]) -> None:
    buf = io.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _graph(path: str) -> Graph:
    return parse_graph(_read(path))


def _need_seed(seed: int | None) -> int:
    if seed is None:
        raise click.UsageError("this command is randomized; pass --seed or set NETRES_SEED")
    return seed


def _acceptance_from_options(preset: str | None, acceptance_file: str | None, seed, samples=None):
    if (preset is None) == (acceptance_file is None):
        raise click.UsageError("pass exactly one of --preset or --acceptance")
    if preset is not None:
        if preset in acc.PRESET_NAMES:
            return acc.named_acceptance(preset, seed=seed, samples=samples)
        raise click.UsageError(f"unknown preset {preset!r}; known: {', '.join(acc.PRESET_NAMES)}")
    return acc.acceptance_from_json(json.loads(_read(acceptance_file)), seed=seed)


seed_option = click.option("--seed", type=int, default=None, envvar="NETRES_SEED", help="RNG seed")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)
workers_option = click.option("--workers", type=int, default=1, show_default=True)


@click.group()
@click.version_option(package_name="netres")
def main() -> None:
    """Decision tools for network resilience."""


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--kinds", default=None, help="comma-separated metric names")
@format_option
def metrics(graph_path: str, kinds: str | None, fmt: str) -> None:
    """Evaluate structural metrics of a graph."""
    try:
        g = _graph(graph_path)
        if kinds is None:
            names = [q.value for q in acc.SimpleQ]
        else:
            names = [s for s in kinds.split(",") if s]
        out: dict[str, dict] = {}
        for name in names:
            q = acc.q_from_json(name)
            if kinds is None:
                try:
                    value = acc.evaluate_q(q, g)
                except NetresError:
                    continue
            else:
                value = acc.evaluate_q(q, g)
            out[q.value] = {"value": float(value), "exact": acc.number_to_json(value)}
        if fmt == "csv":
            rows = [[k, v["value"], v["exact"]] for k, v in sorted(out.items())]
            _echo_csv(rows, ["kind", "value", "exact"])
        else:
            _echo_json({"metrics": out, "nodes": g.n, "edges": len(g.edges)})
    except NetresError as exc:
        _fail(exc)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--preset", default=None, help="named acceptance preset")
@click.option("--acceptance", "acceptance_file", default=None, type=click.Path(exists=True))
@click.option("--samples", type=int, default=None, help="override stress sample count")
@seed_option
@workers_option
@format_option
def accept(graph_path, preset, acceptance_file, samples, seed, workers, fmt) -> None:
    """Decide whether a graph satisfies an acceptance spec."""
    try:
        g = _graph(graph_path)
        spec = _acceptance_from_options(preset, acceptance_file, seed, samples)
        if preset is not None and isinstance(spec.q, acc.StressProbability):
            # acceptance files carry their own seed; named presets never do
            _need_seed(seed)
        verdict = acc.is_acceptable(spec, g, workers=workers)
        payload = acc.verdict_to_json(verdict)
        if fmt == "csv":
            _echo_csv(
                [[payload["accepted"], payload["q"], payload["threshold"], payload["margin"]]],
                ["accepted", "q", "threshold", "margin"],
            )
        else:
            _echo_json(payload)
    except NetresError as exc:
        _fail(exc)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--step", "steps", multiple=True, help="one intervention, e.g. 'edge_del 3 7'")
@click.option("--strategy", "strategy_file", default=None, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
@format_option
def apply(graph_path, steps, strategy_file, out_path, fmt) -> None:
    """Apply interventions to a graph and print the result."""
    try:
        g = _graph(graph_path)
        strategy = [parse_step(s) for s in steps]
        if strategy_file is not None:
            strategy += parse_strategy(_read(strategy_file))
        if not strategy:
            raise click.UsageError("pass --step or --strategy")
        state = g
        for k in strategy:
            if not is_effective(k, state):
                click.echo(f"warning: no-op step: {describe_strategy([k])}", err=True)
            state = apply_strategy([k], state)
        text = serialize_graph(state, "json" if fmt == "json" else "text")
        if out_path is not None:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)
    except NetresError as exc:
        _fail(exc)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--iset", "iset_spec", required=True, help="comma-separated intervention kinds")
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--max-states", type=int, default=10_000, show_default=True)
@click.option("--dedup", type=click.Choice(["canonical", "labeled"]), default="canonical")
@click.option("--label-pool", default="", help="comma-separated labels for node-creating moves")
def reach(graph_path, iset_spec, depth, max_states, dedup, label_pool) -> None:
    """Enumerate graphs reachable within a step budget."""
    try:
        g = _graph(graph_path)
        family = iset_from_json(iset_spec)
        if label_pool:
            family = iset_from_json(
                {"kinds": sorted(family.kinds), "label_pool": [int(x) for x in label_pool.split(",")]}
            )
        result = reachable_set(g, family, depth, max_states, dedup)
        _echo_json(
            {
                "count": len(result.graphs),
                "complete": result.complete,
                "graphs": [graph_to_json(h) for h in result.graphs],
            }
        )
    except NetresError as exc:
        _fail(exc)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_spec", default="unit_count", show_default=True, help="cost model name or JSON file")
@click.option("--strategy", "strategy_file", default=None, type=click.Path(exists=True))
@click.option("--target", "target_path", default=None, type=click.Path(exists=True))
@click.option("--iset", "iset_spec", default=None, help="family for transformation search")
@click.option("--depth", type=int, default=6, show_default=True)
@click.option("--max-states", type=int, default=20_000, show_default=True)
def cost(graph_path, model_spec, strategy_file, target_path, iset_spec, depth, max_states) -> None:
    """Price a concrete strategy, or the cheapest transformation to a target."""
    try:
        g = _graph(graph_path)
        if model_spec.lstrip().startswith("{"):
            model = costs_mod.cost_model_from_json(json.loads(model_spec))
        elif model_spec.endswith(".json"):
            model = costs_mod.cost_model_from_json(json.loads(_read(model_spec)))
        else:
            model = costs_mod.cost_model_from_json(model_spec)
        if (strategy_file is None) == (target_path is None):
            raise click.UsageError("pass exactly one of --strategy or --target")
        if strategy_file is not None:
            strategy = parse_strategy(_read(strategy_file))
            value = costs_mod.strategy_cost(model, strategy, g)
            _echo_json({"cost": value, "steps": [step_to_json(k) for k in strategy]})
        else:
            target = _graph(target_path)
            family = iset_from_json(iset_spec) if iset_spec else None
            result = costs_mod.transformation_cost(model, g, target, family, depth, max_states)
            _echo_json(result.to_json())
    except NetresError as exc:
        _fail(exc)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--preset", "preset_path", required=True, help="preset JSON file or named acceptance preset")
@click.option("--iset", "iset_spec", default="edge_del,isolate", show_default=True, help="family when --preset is a name")
@click.option("--depth", type=int, default=4, show_default=True)
@click.option("--max-states", type=int, default=10_000, show_default=True)
@seed_option
@workers_option
def rho(graph_path, preset_path, iset_spec, depth, max_states, seed, workers) -> None:
    """Minimal cost of steering a graph into the acceptance set."""
    try:
        g = _graph(graph_path)
        if preset_path in acc.PRESET_NAMES:
            spec = acc.named_acceptance(preset_path, seed=seed)
            if isinstance(spec.q, acc.StressProbability):
                _need_seed(seed)
            preset = search_mod.DmfnrPreset(
                spec, iset_from_json(iset_spec), costs_mod.UnitCount(), preset_path
            )
        else:
            preset = search_mod.preset_from_json(json.loads(_read(preset_path)), seed=seed)
            if isinstance(preset.acceptance.q, acc.StressProbability) and seed is None:
                _need_seed(preset.acceptance.q.config.seed)
        result = search_mod.rho(g, preset, depth, max_states, workers=workers)
        _echo_json(result.to_json())
    except NetresError as exc:
        _fail(exc)


def _shock_from_spec(spec: str):
    if spec in ("uniform", "uniform_single_node"):
        return stress_mod.UniformSingleNode()
    if spec.startswith("fixed:"):
        return stress_mod.FixedSet(frozenset(int(x) for x in spec[len("fixed:") :].split(",")))
    if spec.startswith("bernoulli:"):
        return stress_mod.PerNodeBernoulli(float(spec[len("bernoulli:") :]))
    raise click.UsageError(f"unknown shock {spec!r}; use uniform, fixed:<nodes>, bernoulli:<p>")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_file", default=None, type=click.Path(exists=True), help="stress config JSON")
@click.option("--tau", type=float, default=None, help="transmission rate")
@click.option("--gamma", type=float, default=None, help="recovery rate")
@click.option("--alpha", type=float, default=None, help="systemic fraction threshold")
@click.option("--lam", "--lambda", "lam", type=float, default=None, help="tolerated probability")
@click.option("--shock", default=None, help="uniform | fixed:<v,w,...> | bernoulli:<p>")
@click.option("--samples", type=int, default=None)
@click.option("--engine", type=click.Choice(["epn", "gillespie"]), default="epn", show_default=True)
@seed_option
@workers_option
@format_option
def stress(graph_path, config_file, tau, gamma, alpha, lam, shock, samples, engine, seed, workers, fmt) -> None:
    """Estimate the systemic-event probability under random SIR shocks."""
    try:
        g = _graph(graph_path)
        if config_file is not None:
            obj = json.loads(_read(config_file))
            if seed is not None:
                obj = {**obj, "seed": seed}
            if samples is not None:
                obj = {**obj, "samples": samples}
            if "seed" not in obj:
                _need_seed(None)
            cfg = stress_mod.stress_config_from_json(obj)
        else:
            missing = [n for n, v in (("--tau", tau), ("--gamma", gamma), ("--alpha", alpha)) if v is None]
            if missing:
                raise click.UsageError(f"pass --config or all of: {', '.join(missing)}")
            cfg = stress_mod.StressConfig(
                stress_mod.SirParams(tau, gamma),
                alpha,
                lam if lam is not None else 0.5,
                _shock_from_spec(shock or "uniform"),
                samples if samples is not None else 1000,
                _need_seed(seed),
            )
        result = stress_mod.systemic_stress(g, cfg, engine=engine, workers=workers)
        est = result.estimate
        limit = cfg.lam
        indeterminate = est.ci_low <= limit <= est.ci_high
        payload = {
            "estimate": est.to_json(),
            "threshold": limit,
            "systemic_risk": None if indeterminate else bool(est.ci_low > limit),
            "final_sizes": [[s, c] for s, c in result.final_sizes],
            "engine": engine,
        }
        if fmt == "csv":
            _echo_csv(
                [[est.p_hat, est.ci_low, est.ci_high, est.samples, est.seed]],
                ["p_hat", "ci_low", "ci_high", "samples", "seed"],
            )
            _echo_csv([[s, c] for s, c in result.final_sizes], ["size", "count"])
        else:
            _echo_json(payload)
    except NetresError as exc:
        _fail(exc)


def _report_json(report: acc.PropertyReport) -> dict:
    return {
        "prop": report.prop,
        "ok": report.ok,
        "sizes": [
            {"size": s.size, "ok": s.ok, "definitive": s.definitive, "detail": s.detail}
            for s in report.sizes
        ],
        "notes": list(report.notes),
    }


@main.command()
@click.option("--q", "q_name", default=None, help="quantity for monotonicity falsification")
@click.option("--iset", "iset_spec", default=None, help="intervention kinds for falsification")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--sizes", default="2..8", show_default=True, help="node-count range a..b")
@click.option("--preset", default=None, help="named acceptance preset for P1-P4 checks")
@click.option("--acceptance", "acceptance_file", default=None, type=click.Path(exists=True))
@click.option("--checks", default="p1,p2,p3,p4", show_default=True)
@click.option("--up-to", "up_to", type=int, default=8, show_default=True, help="largest size for P1")
@click.option("--mode", type=click.Choice(["witness", "closed_form"]), default="witness")
@seed_option
def props(q_name, iset_spec, trials, sizes, preset, acceptance_file, checks, up_to, mode, seed) -> None:
    """Check acceptance-set properties and probe monotonicity claims."""
    try:
        lo, _, hi = sizes.partition("..")
        size_range = range(int(lo), int(hi or lo) + 1)
        out: dict = {}
        if q_name is not None and iset_spec is not None:
            s = _need_seed(seed)
            q = acc.q_from_json(q_name)
            family = iset_from_json(iset_spec)
            report = acc.falsify_monotonicity(q, family, trials, size_range, s)
            out["monotonicity"] = {
                "q": q.value,
                "trials": report.trials,
                "counterexample": None
                if report.counterexample is None
                else {
                    "graph": graph_to_json(report.counterexample.graph),
                    "intervention": step_to_json(report.counterexample.intervention),
                    "q_before": acc.number_to_json(report.counterexample.q_before),
                    "q_after": acc.number_to_json(report.counterexample.q_after),
                },
                "verdict": "Counterexample" if report.counterexample else "NoCounterexample",
            }
        if preset is not None or acceptance_file is not None:
            spec = _acceptance_from_options(preset, acceptance_file, seed)
            wanted = {c.strip() for c in checks.split(",") if c.strip()}
            if "p1" in wanted:
                out["p1"] = _report_json(acc.check_p1(spec, up_to))
            if "p2" in wanted:
                out["p2"] = _report_json(acc.check_p2(spec, size_range, mode))
            if "p3" in wanted:
                out["p3"] = _report_json(acc.check_p3(spec, size_range, mode))
            if "p4" in wanted:
                library = [
                    make(n)
                    for n in (3, 4)
                    for make in (
                        directed_star,
                        directed_line,
                        undirected_line,
                        undirected_star,
                        bidirectional_ring,
                        complete_graph,
                    )
                ]
                out["p4"] = _report_json(acc.check_p4(spec, library, seed=seed if seed is not None else 0))
        if not out:
            raise click.UsageError("pass --q/--iset for monotonicity or --preset/--acceptance for P1-P4")
        _echo_json(out)
    except NetresError as exc:
        _fail(exc)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8008, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the supervision HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
