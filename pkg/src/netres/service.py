"""Supervision HTTP service.

In-memory session state: uploaded graphs with per-graph undo history, a
preset store, and an async job registry for long stress runs. Domain errors
surface as 422 with the error's machine-readable code; malformed requests as
400; unknown ids as 404; undo on empty history as 409.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import acceptance as acc
from .costs import UnitCount, cost_model_from_json, strategy_cost, transformation_cost
from .errors import NetresError
from .graphio import GraphEntry, Workspace, graph_from_json, graph_hash, graph_to_json, parse_graph, serialize_graph
from .graphs import Graph
from .interventions import (
    InterventionSet,
    is_effective,
    iset_from_json,
    step_from_json,
    step_to_json,
)
from .search import DmfnrPreset, preset_from_json, rho, suggest_greedy
from .stress import stress_config_from_json, systemic_stress


class HttpError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.payload = {"code": code, "message": message}


def _bad(message: str) -> HttpError:
    return HttpError(400, "bad_request", message)


@dataclass
class SessionState:
    workspace: Workspace = field(default_factory=Workspace)
    jobs: dict[str, dict] = field(default_factory=dict)
    cache: dict[tuple, dict] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock)
    job_counter: int = 0

    def entry(self, gid: str) -> GraphEntry:
        entry = self.workspace.graphs.get(gid)
        if entry is None:
            raise HttpError(404, "not_found", f"no graph {gid!r}")
        return entry


def _graph_payload(gid: str, entry: GraphEntry) -> dict:
    return {
        "id": gid,
        "graph": graph_to_json(entry.current),
        "text": serialize_graph(entry.current),
        "hash": graph_hash(entry.current),
        "history": [step_to_json(k) for k in entry.history],
        "nodes": entry.current.n,
        "edges": len(entry.current.edges),
    }


def _graph_from_body(body) -> Graph:
    if isinstance(body, dict) and "text" in body:
        if not isinstance(body["text"], str):
            raise _bad("'text' must be a string")
        return parse_graph(body["text"])
    if isinstance(body, dict) and "graph" in body:
        body = body["graph"]
    if isinstance(body, str):
        return parse_graph(body)
    if isinstance(body, dict):
        return graph_from_json(body)
    raise _bad("body must be a graph object, {'graph': ...} or {'text': ...}")


def _acceptance_from_body(body: dict, default_seed=None) -> acc.AcceptanceSpec:
    seed = body.get("seed", default_seed)
    samples = body.get("samples")
    preset = body.get("preset")
    if isinstance(preset, str):
        if preset not in acc.PRESET_NAMES:
            raise _bad(f"unknown preset {preset!r}")
        return acc.named_acceptance(preset, seed=seed, samples=samples)
    if "acceptance" in body:
        return acc.acceptance_from_json(body["acceptance"], seed=seed)
    raise _bad("body needs 'preset' (a name) or 'acceptance' (a spec object)")


def _preset_from_body(body: dict) -> DmfnrPreset:
    seed = body.get("seed")
    preset = body.get("preset")
    if isinstance(preset, dict):
        return preset_from_json(preset, seed=seed)
    if isinstance(preset, str) and preset in acc.PRESET_NAMES:
        spec = acc.named_acceptance(preset, seed=seed, samples=body.get("samples"))
        kinds = body.get("iset", {"kinds": ["edge_del", "isolate"]})
        return DmfnrPreset(spec, iset_from_json(kinds), UnitCount(), preset)
    raise _bad("body needs 'preset': a preset object or a known preset name")


def create_app() -> FastAPI:
    app = FastAPI(title="netres supervision service", openapi_url="/spec")
    state = SessionState()
    app.state.netres = state

    @app.exception_handler(HttpError)
    async def _http_error(_req: Request, exc: HttpError):
        return JSONResponse(exc.payload, status_code=exc.status)

    @app.exception_handler(NetresError)
    async def _domain_error(_req: Request, exc: NetresError):
        return JSONResponse(exc.payload(), status_code=422)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse({"code": "bad_request", "message": str(exc.errors()[:1])}, status_code=400)

    @app.post("/graphs", status_code=201)
    def create_graph(body=Body(...)):
        g = _graph_from_body(body)
        with state.lock:
            gid = state.workspace.add_graph(g)
            return _graph_payload(gid, state.entry(gid))

    @app.get("/graphs/{gid}")
    def get_graph(gid: str):
        with state.lock:
            return _graph_payload(gid, state.entry(gid))

    @app.get("/graphs/{gid}/metrics")
    def get_metrics(gid: str, kinds: str | None = None):
        with state.lock:
            g = state.entry(gid).current
        names = [s for s in (kinds or "").split(",") if s] or [q.value for q in acc.SimpleQ]
        out = {}
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
        return {"id": gid, "metrics": out}

    @app.post("/graphs/{gid}/apply")
    def apply_step(gid: str, body=Body(...)):
        if isinstance(body, dict) and "step" in body:
            body = body["step"]
        step = step_from_json(body)
        with state.lock:
            entry = state.entry(gid)
            effective = is_effective(step, entry.current)
            entry.push(step)
            payload = _graph_payload(gid, entry)
        payload["effective"] = effective
        payload["applied"] = step_to_json(step)
        return payload

    @app.post("/graphs/{gid}/undo")
    def undo_step(gid: str):
        with state.lock:
            entry = state.entry(gid)
            if not entry.history:
                raise HttpError(409, "history_empty", "nothing to undo")
            step = entry.pop()
            payload = _graph_payload(gid, entry)
        payload["undone"] = step_to_json(step)
        return payload

    @app.post("/graphs/{gid}/evaluate")
    def evaluate(gid: str, body=Body(...)):
        if not isinstance(body, dict):
            raise _bad("body must be an object")
        with state.lock:
            g = state.entry(gid).current
        spec = _acceptance_from_body(body)
        workers = int(body.get("workers", 1))
        verdict = acc.is_acceptable(spec, g, workers=workers)
        return acc.verdict_to_json(verdict)

    @app.post("/graphs/{gid}/cost")
    def price(gid: str, body=Body(...)):
        if not isinstance(body, dict):
            raise _bad("body must be an object")
        with state.lock:
            entry = state.entry(gid)
            g = entry.current
        model = cost_model_from_json(body.get("model", "unit_count"))
        if "strategy" in body:
            steps = [step_from_json(s) for s in body["strategy"]]
            return {"cost": strategy_cost(model, steps, g)}
        if "history" in body and body["history"]:
            steps = list(entry.history)
            return {"cost": strategy_cost(model, steps, entry.base)}
        if "target" in body:
            target = graph_from_json(body["target"])
            family: InterventionSet | None = None
            if "iset" in body:
                family = iset_from_json(body["iset"])
            result = transformation_cost(
                model, g, target, family, int(body.get("depth", 6)), int(body.get("max_states", 20_000))
            )
            return result.to_json()
        raise _bad("body needs 'strategy', 'history': true, or 'target'")

    def _run_stress(g: Graph, cfg, engine: str, workers: int) -> dict:
        result = systemic_stress(g, cfg, engine=engine, workers=workers)
        return {
            "estimate": result.estimate.to_json(),
            "final_sizes": [[s, c] for s, c in result.final_sizes],
            "engine": engine,
        }

    @app.post("/graphs/{gid}/stress")
    def run_stress(gid: str, body=Body(...)):
        if not isinstance(body, dict):
            raise _bad("body must be an object")
        with state.lock:
            g = state.entry(gid).current
            ghash = graph_hash(g)
        cfg_obj = body.get("config", {k: v for k, v in body.items() if k not in ("engine", "workers", "async")})
        cfg = stress_config_from_json(cfg_obj, seed=body.get("seed"))
        engine = body.get("engine", "epn")
        if engine not in ("epn", "gillespie"):
            raise _bad(f"unknown engine {engine!r}")
        workers = int(body.get("workers", 1))
        key = (ghash, json.dumps(cfg_obj, sort_keys=True), engine, cfg.seed)
        with state.lock:
            cached = state.cache.get(key)
        if cached is not None:
            return {**cached, "cached": True}
        if body.get("async"):
            with state.lock:
                state.job_counter += 1
                jid = f"j{state.job_counter}"
                state.jobs[jid] = {"status": "pending"}

            def work():
                try:
                    result = _run_stress(g, cfg, engine, workers)
                    with state.lock:
                        state.cache[key] = result
                        state.jobs[jid] = {"status": "done", "result": result}
                except Exception as exc:  # job errors surface via polling
                    with state.lock:
                        state.jobs[jid] = {"status": "error", "message": str(exc)}

            threading.Thread(target=work, daemon=True).start()
            return {"job": jid, "status": "pending"}
        result = _run_stress(g, cfg, engine, workers)
        with state.lock:
            state.cache[key] = result
        return {**result, "cached": False}

    @app.get("/jobs/{jid}")
    def get_job(jid: str):
        with state.lock:
            job = state.jobs.get(jid)
            if job is None:
                raise HttpError(404, "not_found", f"no job {jid!r}")
            return dict(job)

    @app.post("/graphs/{gid}/suggest")
    def suggest(gid: str, body=Body(...)):
        if not isinstance(body, dict):
            raise _bad("body must be an object")
        with state.lock:
            g = state.entry(gid).current
        preset = _preset_from_body(body)
        report = suggest_greedy(
            g,
            preset,
            beam_width=int(body.get("beam", 4)),
            max_steps=int(body.get("steps", 4)),
        )
        return report.to_json()

    @app.post("/graphs/{gid}/rho")
    def run_rho(gid: str, body=Body(...)):
        if not isinstance(body, dict):
            raise _bad("body must be an object")
        with state.lock:
            g = state.entry(gid).current
        preset = _preset_from_body(body)
        result = rho(
            g,
            preset,
            max_depth=int(body.get("depth", 4)),
            max_states=int(body.get("max_states", 10_000)),
            workers=int(body.get("workers", 1)),
        )
        return result.to_json()

    @app.get("/workspace")
    def get_workspace():
        with state.lock:
            return state.workspace.to_json()

    @app.put("/workspace")
    def put_workspace(body=Body(...)):
        ws = Workspace.from_json(body)
        with state.lock:
            state.workspace = ws
            return {"graphs": len(ws.graphs), "presets": len(ws.presets)}

    return app
