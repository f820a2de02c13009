"""Risk measurement: cheapest intervention strategy into the acceptance set.

The induced risk of a graph is the least cost of any strategy from the
configured family whose result the acceptance spec accepts; infinity when no
reachable graph is accepted. Searches are deterministic: ties break on the
lexicographic encoding of the strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .acceptance import (
    AcceptanceSpec,
    RiskReducingReport,
    acceptance_from_json,
    acceptance_to_json,
    is_acceptable,
    is_risk_reducing,
)
from .costs import (
    CostModel,
    Monetary,
    UnitCount,
    cheapest_to_goal,
    cost_model_from_json,
    cost_model_to_json,
    functionality,
    min_step_price,
    strategy_cost,
)
from .errors import BadConfig
from .graphs import Graph
from .interventions import (
    Intervention,
    InterventionSet,
    apply,
    iset_from_json,
    iset_to_json,
    sort_key,
    step_to_json,
)

INF = math.inf

STATUS_OPTIMAL = "optimal-within-budget"
STATUS_BUDGET = "budget-limited"
STATUS_UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class DmfnrPreset:
    """An acceptance spec, an intervention family, and a cost model, together."""

    acceptance: AcceptanceSpec
    iset: InterventionSet
    cost: CostModel
    name: str = ""


def preset_to_json(preset: DmfnrPreset) -> dict:
    return {
        "name": preset.name,
        "acceptance": acceptance_to_json(preset.acceptance),
        "iset": iset_to_json(preset.iset),
        "cost": cost_model_to_json(preset.cost),
    }


def preset_from_json(obj, *, seed: int | None = None) -> DmfnrPreset:
    if not isinstance(obj, dict):
        raise BadConfig("preset must be a JSON object")
    if "acceptance" not in obj:
        raise BadConfig("preset needs an 'acceptance' entry")
    acceptance = acceptance_from_json(obj["acceptance"], seed=seed)
    iset = iset_from_json(obj.get("iset", {"kinds": []}))
    cost = cost_model_from_json(obj.get("cost", {"kind": "unit_count"}))
    return DmfnrPreset(acceptance, iset, cost, str(obj.get("name", "")))


def register_preset(
    preset: DmfnrPreset,
    probes: Iterable[Graph],
    depth: int = 2,
    max_states: int = 300,
) -> RiskReducingReport:
    """Evidence-level gate for new presets: the family must not be able to
    push a probe graph out of the acceptance set. Raises on a counterexample."""
    report = is_risk_reducing(preset.iset, preset.acceptance, probes, depth, max_states)
    if not report.ok:
        raise BadConfig(
            "intervention family can leave the acceptance set; "
            f"counterexample: {report.counterexample}"
        )
    return report


# ---------------------------------------------------------------------------
# The risk measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RhoResult:
    value: float
    witness: tuple[Intervention, ...] | None
    status: str

    def to_json(self) -> dict:
        return {
            "value": None if self.value == INF else self.value,
            "witness": None if self.witness is None else [step_to_json(k) for k in self.witness],
            "status": self.status,
        }


def _accepted(spec: AcceptanceSpec, g: Graph, workers: int) -> bool:
    try:
        return is_acceptable(spec, g, workers=workers).accepted is True
    except Exception:
        return False


def rho(
    g: Graph,
    preset: DmfnrPreset,
    max_depth: int = 4,
    max_states: int = 10_000,
    workers: int = 1,
) -> RhoResult:
    """Least strategy cost into the acceptance set, or infinity."""
    def goal(h: Graph) -> bool:
        return _accepted(preset.acceptance, h, workers)

    if isinstance(preset.cost, (Monetary, UnitCount)):
        found = cheapest_to_goal(preset.cost, g, preset.iset, goal, max_depth, max_states)
        if found.witness is not None:
            return RhoResult(found.value, found.witness, STATUS_OPTIMAL)
        status = STATUS_BUDGET if found.status == "budget-limited" else STATUS_UNREACHABLE
        return RhoResult(INF, None, status)
    return _rho_functionality(g, preset, goal, max_depth, max_states)


def _rho_functionality(g, preset, goal, max_depth, max_states) -> RhoResult:
    """For functionality costs, minimising h(F(g) - F(h)) over acceptable
    reachable h means maximising F(h); enumerate the reachable set."""
    model = preset.cost
    seen: dict[Graph, tuple[Intervention, ...]] = {g: ()}
    frontier = [g]
    truncated = False
    for _ in range(max_depth):
        nxt = []
        for state in sorted(frontier, key=lambda s: tuple(sort_key(k) for k in seen[s])):
            for k in preset.iset.moves(state):
                h = apply(k, state)
                if h == state or h in seen:
                    continue
                if len(seen) >= max_states:
                    truncated = True
                    break
                seen[h] = seen[state] + (k,)
                nxt.append(h)
            if truncated:
                break
        frontier = nxt
        if truncated or not frontier:
            break
    best: tuple[float, tuple, tuple[Intervention, ...]] | None = None
    base = functionality(model, g)
    for h, path in seen.items():
        if not goal(h):
            continue
        value = model.h(base - functionality(model, h))
        enc = tuple(sort_key(k) for k in path)
        if best is None or (value, enc) < (best[0], best[1]):
            best = (value, enc, path)
    if best is None:
        return RhoResult(INF, None, STATUS_BUDGET if truncated else STATUS_UNREACHABLE)
    return RhoResult(best[0], best[2], STATUS_BUDGET if truncated else STATUS_OPTIMAL)


# ---------------------------------------------------------------------------
# Sanity checks on the induced measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RhoPropertyCheck:
    name: str
    ok: bool | None
    detail: str


@dataclass(frozen=True)
class RhoPropertyReport:
    checks: tuple[RhoPropertyCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok is not False for c in self.checks)


def verify_rho_properties(
    preset: DmfnrPreset,
    samples: Iterable[Graph],
    max_depth: int = 3,
    max_states: int = 2_000,
) -> RhoPropertyReport:
    """Check the measure behaves like one on the given samples: non-negative,
    zero exactly on the acceptance set, and at least one step's price off it."""
    samples = list(samples)
    nu = min_step_price(preset.cost)
    nonneg = RhoPropertyCheck("non-negative", True, "no violation found")
    zero_on = RhoPropertyCheck("zero-on-acceptance", True, "no violation found")
    floor = RhoPropertyCheck(
        "floor-off-acceptance",
        True if nu is not None else None,
        "no violation found" if nu is not None else "no positive step-price floor; not applicable",
    )
    zero_only = RhoPropertyCheck("zero-only-on-acceptance", True, "no violation found")
    for g in samples:
        result = rho(g, preset, max_depth, max_states)
        accepted = _accepted(preset.acceptance, g, 1)
        if result.value < 0:
            nonneg = RhoPropertyCheck("non-negative", False, f"rho = {result.value} on {g!r}")
        if accepted and result.value != 0:
            zero_on = RhoPropertyCheck("zero-on-acceptance", False, f"accepted graph has rho = {result.value}")
        if not accepted and nu is not None and result.value < nu:
            floor = RhoPropertyCheck("floor-off-acceptance", False, f"rho = {result.value} < {nu}")
        if result.value == 0 and not accepted:
            zero_only = RhoPropertyCheck("zero-only-on-acceptance", False, f"rho = 0 on rejected {g!r}")
    return RhoPropertyReport((nonneg, zero_on, floor, zero_only))


# ---------------------------------------------------------------------------
# Greedy suggestions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Suggestion:
    strategy: tuple[Intervention, ...]
    cost: float
    margin: float
    accepted: bool

    def to_json(self) -> dict:
        return {
            "strategy": [step_to_json(k) for k in self.strategy],
            "cost": self.cost,
            "margin": self.margin,
            "accepted": self.accepted,
        }


@dataclass(frozen=True)
class SuggestReport:
    suggestions: tuple[Suggestion, ...]
    note: str = ""

    def to_json(self) -> dict:
        return {"suggestions": [s.to_json() for s in self.suggestions], "note": self.note}


def _margin(spec: AcceptanceSpec, g: Graph) -> float:
    try:
        verdict = is_acceptable(spec, g)
    except Exception:
        return -INF
    if verdict.margin is None:
        return -INF
    return float(verdict.margin)


def suggest_greedy(
    g: Graph,
    preset: DmfnrPreset,
    beam_width: int = 4,
    max_steps: int = 4,
    max_results: int = 5,
) -> SuggestReport:
    """Beam search for cheap strategies that land in the acceptance set.

    Every returned strategy is re-verified by evaluating its endpoint; ranking
    is by (cost, -margin, encoding). Greedy, so not guaranteed optimal.
    """
    spec = preset.acceptance
    verdict = is_acceptable(spec, g)
    if verdict.accepted is True:
        return SuggestReport((Suggestion((), 0.0, float(verdict.margin), True),), "already acceptable")
    found: dict[tuple, Suggestion] = {}
    beam: list[tuple[Graph, tuple[Intervention, ...]]] = [(g, ())]
    seen = {g}
    expanded_any = False
    for _ in range(max_steps):
        candidates: list[tuple[float, float, tuple, Graph, tuple[Intervention, ...]]] = []
        for state, path in beam:
            for k in preset.iset.moves(state):
                h = apply(k, state)
                if h == state or h in seen:
                    continue
                expanded_any = True
                strategy = path + (k,)
                enc = tuple(sort_key(s) for s in strategy)
                cost = strategy_cost(preset.cost, strategy, g)
                margin = _margin(spec, h)
                candidates.append((cost, -margin, enc, h, strategy))
        if not candidates:
            break
        candidates.sort(key=lambda c: (c[0], c[1], c[2]))
        nxt: list[tuple[Graph, tuple[Intervention, ...]]] = []
        for cost, neg_margin, enc, h, strategy in candidates:
            check = is_acceptable(spec, h)
            if check.accepted is True:
                if enc not in found:
                    found[enc] = Suggestion(strategy, cost, float(check.margin), True)
            elif len(nxt) < beam_width and h not in seen:
                nxt.append((h, strategy))
                seen.add(h)
        beam = nxt
        if not beam:
            break
    ranked = sorted(found.values(), key=lambda s: (s.cost, -s.margin, tuple(sort_key(k) for k in s.strategy)))
    if not ranked:
        note = "no moves available from this family" if not expanded_any else "no acceptable graph found within the step budget"
        return SuggestReport((), note)
    return SuggestReport(tuple(ranked[:max_results]), "")
