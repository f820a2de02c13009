"""Cost models for network transformations and the C1-C4 axiom checkers.

Monetary costs price individual interventions and induce a transformation
cost through cheapest-strategy search. Functionality costs compare a network
quantity (efficiency or average communicability) before and after, mapped
through a monotone h with h(0) = 0; they need no reachability witness.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union

from . import metrics
from .errors import BadConfig
from .graphs import Graph
from .interventions import (
    Identity,
    Intervention,
    InterventionSet,
    Strategy,
    apply,
    kind_of,
    reachable_set,
    sort_key,
    step_to_json,
)

INF = math.inf

STATUS_OPTIMAL = "optimal-within-budget"
STATUS_BUDGET = "budget-limited"
STATUS_UNREACHABLE = "proven-unreachable"


# ---------------------------------------------------------------------------
# Monotone maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityMap:
    def __call__(self, x: float) -> float:
        return x


@dataclass(frozen=True)
class Scale:
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise BadConfig("scale factor must be positive")

    def __call__(self, x: float) -> float:
        return self.a * x


@dataclass(frozen=True)
class SoftCap:
    """h(x) = cap * (1 - exp(-a*x/cap)): strictly increasing, h(0)=0, bounded above."""

    a: float
    cap: float

    def __post_init__(self):
        if not (self.a > 0 and self.cap > 0):
            raise BadConfig("softcap needs a > 0 and cap > 0")

    def __call__(self, x: float) -> float:
        return self.cap * -math.expm1(-self.a * x / self.cap)


MonotoneMap = Union[IdentityMap, Scale, SoftCap]


def monotone_map_to_json(h: MonotoneMap) -> dict:
    if isinstance(h, IdentityMap):
        return {"kind": "identity"}
    if isinstance(h, Scale):
        return {"kind": "scale", "a": h.a}
    return {"kind": "softcap", "a": h.a, "cap": h.cap}


def monotone_map_from_json(obj) -> MonotoneMap:
    if not isinstance(obj, dict):
        raise BadConfig(f"bad monotone map: {obj!r}")
    kind = obj.get("kind")
    try:
        if kind == "identity":
            return IdentityMap()
        if kind == "scale":
            return Scale(float(obj["a"]))
        if kind == "softcap":
            return SoftCap(float(obj["a"]), float(obj["cap"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise BadConfig(f"bad monotone map: {obj!r}") from exc
    raise BadConfig(f"unknown monotone map kind {kind!r}")


# ---------------------------------------------------------------------------
# Price tables
# ---------------------------------------------------------------------------


def scope_key(k: Intervention) -> str:
    """Canonical per-value price key, e.g. `edge_del:(3,7)`."""
    j = step_to_json(k)
    name = j.pop("kind")
    if not j:
        return name
    parts = []
    for key in ("v", "w", "u", "new", "merged"):
        if key in j:
            parts.append(str(j[key]))
    for key in ("within", "src", "dst"):
        if key in j:
            parts.append("{" + ",".join(str(x) for x in sorted(j[key])) + "}")
    if "edges" in j:
        parts.append("[" + ",".join(f"({a},{b})" for a, b in j["edges"]) + "]")
    return f"{name}:({','.join(parts)})"


@dataclass(frozen=True)
class PriceTable:
    """Non-negative base prices per intervention kind, with value-level overrides."""

    base: tuple[tuple[str, float], ...] = ()
    scoped: tuple[tuple[str, float], ...] = ()
    default: float = 1.0

    def __post_init__(self):
        base = dict(self.base.items() if isinstance(self.base, Mapping) else self.base)
        scoped = dict(self.scoped.items() if isinstance(self.scoped, Mapping) else self.scoped)
        for table in (base, scoped):
            for key, price in table.items():
                if not (isinstance(price, (int, float)) and price >= 0 and math.isfinite(price)):
                    raise BadConfig(f"price for {key!r} must be a finite non-negative number")
        if self.default < 0 or not math.isfinite(self.default):
            raise BadConfig("default price must be a finite non-negative number")
        if base.get("identity", 0) != 0:
            raise BadConfig("the identity intervention always costs 0")
        object.__setattr__(self, "base", tuple(sorted(base.items())))
        object.__setattr__(self, "scoped", tuple(sorted(scoped.items())))
        object.__setattr__(self, "default", float(self.default))

    def price(self, k: Intervention) -> float:
        if isinstance(k, Identity):
            return 0.0
        scoped = dict(self.scoped)
        hit = scoped.get(scope_key(k))
        if hit is not None:
            return float(hit)
        base = dict(self.base)
        return float(base.get(kind_of(k), self.default))

    def min_step_price(self) -> float:
        """Infimum over non-identity prices this table can emit."""
        values = [price for key, price in self.base if key != "identity"]
        values += [price for _, price in self.scoped]
        values.append(self.default)
        return min(values)


def price_table_to_json(table: PriceTable) -> dict:
    out: dict = {key: value for key, value in table.base}
    out.update({key: value for key, value in table.scoped})
    out["*"] = table.default
    return out


def price_table_from_json(obj) -> PriceTable:
    if not isinstance(obj, dict):
        raise BadConfig("price table must be a JSON object")
    base: dict[str, float] = {}
    scoped: dict[str, float] = {}
    default = 1.0
    for key, value in obj.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise BadConfig(f"price for {key!r} must be a number")
        if key in ("*", "default"):
            default = float(value)
        elif ":" in key:
            scoped[key] = float(value)
        else:
            base[key] = float(value)
    return PriceTable(tuple(base.items()), tuple(scoped.items()), default)


# ---------------------------------------------------------------------------
# Cost models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monetary:
    table: PriceTable
    budget: int = 100_000  # state cap for induced transformation search


@dataclass(frozen=True)
class UnitCount:
    pass


@dataclass(frozen=True)
class Efficiency:
    h: MonotoneMap = field(default_factory=IdentityMap)


@dataclass(frozen=True)
class Communicability:
    h: MonotoneMap = field(default_factory=IdentityMap)


CostModel = Union[Monetary, UnitCount, Efficiency, Communicability]


def cost_model_to_json(model: CostModel) -> dict:
    if isinstance(model, Monetary):
        return {"kind": "monetary", "prices": price_table_to_json(model.table), "budget": model.budget}
    if isinstance(model, UnitCount):
        return {"kind": "unit_count"}
    name = "efficiency" if isinstance(model, Efficiency) else "communicability"
    return {"kind": name, "h": monotone_map_to_json(model.h)}


def cost_model_from_json(obj) -> CostModel:
    if isinstance(obj, str):
        obj = {"kind": obj}
    if not isinstance(obj, dict):
        raise BadConfig(f"bad cost model: {obj!r}")
    kind = obj.get("kind")
    if kind == "monetary":
        table = price_table_from_json(obj.get("prices", {}))
        budget = int(obj.get("budget", 100_000))
        return Monetary(table, budget)
    if kind == "unit_count":
        return UnitCount()
    if kind in ("efficiency", "communicability"):
        h = monotone_map_from_json(obj.get("h", {"kind": "identity"}))
        return Efficiency(h) if kind == "efficiency" else Communicability(h)
    raise BadConfig(f"unknown cost model kind {kind!r}")


def functionality(model: Efficiency | Communicability, g: Graph) -> float:
    if isinstance(model, Efficiency):
        return float(metrics.graph_efficiency(g))
    return metrics.avg_communicability(g)


def strategy_cost(model: CostModel, steps: Strategy, g: Graph) -> float:
    """Cost of one concrete strategy applied to g.

    Monetary sums the listed step prices; UnitCount counts steps that change
    the graph; functionality models evaluate h(F(before) - F(after)).
    """
    if isinstance(model, Monetary):
        return sum(model.table.price(k) for k in steps)
    if isinstance(model, UnitCount):
        state, count = g, 0
        for k in steps:
            nxt = apply(k, state)
            if nxt != state:
                count += 1
            state = nxt
        return float(count)
    after = g
    for k in steps:
        after = apply(k, after)
    return model.h(functionality(model, g) - functionality(model, after))


# ---------------------------------------------------------------------------
# Induced transformation cost (cheapest-strategy search)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransformResult:
    value: float
    witness: tuple[Intervention, ...] | None
    status: str

    def to_json(self) -> dict:
        return {
            "value": None if self.value == INF else self.value,
            "witness": None if self.witness is None else [step_to_json(k) for k in self.witness],
            "status": self.status,
        }


def _step_price(model: Monetary | UnitCount, k: Intervention) -> float:
    return model.table.price(k) if isinstance(model, Monetary) else 1.0


def cheapest_to_goal(
    model: Monetary | UnitCount,
    g: Graph,
    family: InterventionSet,
    goal: Callable[[Graph], bool],
    max_depth: int,
    max_states: int,
) -> TransformResult:
    """Uniform-cost search over labeled graph states; deterministic tie-breaks."""
    if goal(g):
        return TransformResult(0.0, (), STATUS_OPTIMAL)
    start_key = ()
    heap: list[tuple[float, tuple, Graph, tuple[Intervention, ...]]] = [(0.0, start_key, g, ())]
    best: dict[Graph, float] = {g: 0.0}
    truncated = False
    while heap:
        cost, enc, state, path = heapq.heappop(heap)
        if cost > best.get(state, INF):
            continue
        if goal(state):
            return TransformResult(cost, path, STATUS_OPTIMAL)
        if len(path) >= max_depth:
            truncated = True
            continue
        for k in family.moves(state):
            nxt = apply(k, state)
            if nxt == state:
                continue
            nxt_cost = cost + _step_price(model, k)
            if nxt_cost >= best.get(nxt, INF):
                continue
            if nxt not in best and len(best) >= max_states:
                truncated = True
                continue
            best[nxt] = nxt_cost
            heapq.heappush(heap, (nxt_cost, enc + (sort_key(k),), nxt, path + (k,)))
    status = STATUS_BUDGET if truncated else STATUS_UNREACHABLE
    return TransformResult(INF, None, status)


def transformation_cost(
    model: CostModel,
    g: Graph,
    target: Graph,
    family: InterventionSet | None = None,
    max_depth: int = 6,
    max_states: int = 20_000,
) -> TransformResult:
    """Minimal cost of turning g into target.

    Functionality models are defined on arbitrary pairs and need no search.
    """
    if isinstance(model, (Efficiency, Communicability)):
        value = model.h(functionality(model, g) - functionality(model, target))
        return TransformResult(value, None, STATUS_OPTIMAL)
    if family is None:
        raise BadConfig("monetary transformation cost needs an intervention family")
    if isinstance(model, Monetary):
        max_states = min(max_states, model.budget)
    return cheapest_to_goal(model, g, family, lambda h: h == target, max_depth, max_states)


# ---------------------------------------------------------------------------
# Axiom checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    ok: bool | None  # None: hypothesis unmet / not applicable
    detail: str


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok is not False for c in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _pair_cost(model: CostModel, g: Graph, h: Graph, family, depth, states) -> float:
    return transformation_cost(model, g, h, family, depth, states).value


def _stride(items, cap: int):
    """Deterministic, evenly spread downsample keeping first and last."""
    items = list(items)
    if len(items) <= cap:
        return items
    step = (len(items) - 1) / (cap - 1)
    return [items[round(i * step)] for i in range(cap)]


def check_cost_axioms(
    model: CostModel,
    family: InterventionSet,
    samples: Iterable[Graph],
    depth: int = 2,
    max_states: int = 2_000,
    tolerance: float = 1e-9,
    max_pairs: int = 400,
    max_mids: int = 24,
) -> AxiomReport:
    """Evidence-level verification of C1, C2, restricted C3, and C4.

    C1: no self-transformation cost. C2: reachable targets cost >= 0.
    C3 (restricted): zero cost implies identical graphs, for reachable targets.
    C4: going through a sampled reachable intermediate never beats the direct
    cost. Pair and triple populations are downsampled deterministically.
    """
    samples = list(samples)
    c1 = c2 = c3 = c4 = True
    d1 = d2 = d3 = d4 = "no violation found"
    for g in samples:
        cost_gg = _pair_cost(model, g, g, family, depth, max_states)
        if abs(cost_gg) > tolerance:
            c1, d1 = False, f"C(G,G) = {cost_gg} on {g!r}"
            break
    for g in samples:
        closure = reachable_set(g, family, depth, max_states, dedup="labeled")
        for h in _stride(closure.graphs, max_pairs):
            cost = _pair_cost(model, g, h, family, depth, max_states)
            if cost < -tolerance:
                c2, d2 = False, f"C(G,H) = {cost} < 0"
                break
            if cost <= tolerance and h != g and c3:
                c3, d3 = False, "zero-cost transformation between distinct graphs"
        if not c2:
            break
    triples = 0
    for g in samples:
        mids = _stride(reachable_set(g, family, depth, max_states, dedup="labeled").graphs, max_mids)
        for m in mids:
            finals = _stride(
                reachable_set(m, family, depth, max_states, dedup="labeled").graphs, max_mids
            )
            for h in finals:
                res = transformation_cost(model, g, h, family, 2 * depth, max_states)
                if res.status == STATUS_BUDGET:
                    # the direct leg was truncated, the comparison says nothing
                    continue
                via = _pair_cost(model, g, m, family, depth, max_states) + _pair_cost(
                    model, m, h, family, depth, max_states
                )
                triples += 1
                if res.value > via + tolerance:
                    c4, d4 = False, f"C(G,H)={res.value} > C(G,M)+C(M,H)={via}"
                    break
            if not c4:
                break
        if not c4:
            break
    return AxiomReport(
        (
            AxiomCheck("C1", c1, d1),
            AxiomCheck("C2", c2, d2),
            AxiomCheck("C3-restricted", c3, d3),
            AxiomCheck("C4", c4, f"{d4} ({triples} triples)" if c4 else d4),
        )
    )


def min_step_price(model: CostModel) -> float | None:
    """A lower bound on any effective step's price, when one exists."""
    if isinstance(model, UnitCount):
        return 1.0
    if isinstance(model, Monetary):
        nu = model.table.min_step_price()
        return nu if nu > 0 else None
    return None
