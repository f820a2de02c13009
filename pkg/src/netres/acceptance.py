"""Acceptance sets {G : Q(G) <= l_N}, threshold schedules, property checkers.

A network quantity Q paired with a size-indexed threshold schedule defines an
acceptance set. Checkers probe the structural properties an acceptance set
should have (edgeless graphs acceptable, some connected member at each size,
no graph with a super-spreader, isomorphism closure) and search for
monotonicity counterexamples against a given intervention family.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from . import metrics
from .errors import BadConfig, DirectedUnsupported, NoClosedForm
from .graphs import (
    Graph,
    all_digraphs,
    all_undirected_graphs,
    bidirectional_ring,
    complete_graph,
    connectivity,
    directed_line,
    directed_star,
    edgeless,
    is_undirected,
    reversed_star,
    undirected_line,
    undirected_star,
)
from .interventions import (
    Intervention,
    InterventionSet,
    NodeDel,
    UEdgeDel,
    USplit,
    apply,
    reachable_set,
)
from .stress import (
    SirParams,
    StressConfig,
    StressEstimate,
    UniformSingleNode,
    estimate_systemic_probability,
    stress_config_from_json,
    stress_config_to_json,
)

Number = Union[Fraction, float, int]


class SimpleQ(str, Enum):
    AVG_DEGREE = "avg_degree"
    MOMENT2_OUT = "moment2_out"
    MOMENT2_IN = "moment2_in"
    VARIANCE_IN = "variance_in"
    VARIANCE_OUT = "variance_out"
    MAX_DEG_OUT = "max_deg_out"
    MAX_DEG_IN = "max_deg_in"
    MAX_CLOSE_OUT = "max_close_out"
    MAX_CLOSE_IN = "max_close_in"
    MAX_BETWEENNESS = "max_betweenness"
    EPIDEMIC_RATIO = "epidemic_ratio"
    SPECTRAL_RADIUS = "spectral_radius"
    MAX_TOTAL_DEG = "max_total_deg"
    MOMENT2_TOTAL = "moment2_total"


@dataclass(frozen=True)
class StressProbability:
    config: StressConfig


QKind = Union[SimpleQ, StressProbability]

UNDIRECTED_ONLY = frozenset(
    {SimpleQ.EPIDEMIC_RATIO, SimpleQ.SPECTRAL_RADIUS, SimpleQ.MAX_TOTAL_DEG, SimpleQ.MOMENT2_TOTAL}
)

# variance-controlled acceptance breaks monotonicity under node deletion;
# kept for the negative tests, flagged so UIs can warn
DISCOURAGED = frozenset({SimpleQ.VARIANCE_IN, SimpleQ.VARIANCE_OUT})

_SIMPLE_EVAL: dict[SimpleQ, Callable[[Graph], Number]] = {
    SimpleQ.AVG_DEGREE: metrics.average_degree,
    SimpleQ.MOMENT2_OUT: lambda g: metrics.degree_moment(g, metrics.Side.OUT, 2),
    SimpleQ.MOMENT2_IN: lambda g: metrics.degree_moment(g, metrics.Side.IN, 2),
    SimpleQ.VARIANCE_IN: lambda g: metrics.degree_variance(g, metrics.Side.IN),
    SimpleQ.VARIANCE_OUT: lambda g: metrics.degree_variance(g, metrics.Side.OUT),
    SimpleQ.MAX_DEG_OUT: lambda g: metrics.max_centrality(g, metrics.CentralityKind.DEG_OUT),
    SimpleQ.MAX_DEG_IN: lambda g: metrics.max_centrality(g, metrics.CentralityKind.DEG_IN),
    SimpleQ.MAX_CLOSE_OUT: lambda g: metrics.max_centrality(g, metrics.CentralityKind.CLOSE_OUT),
    SimpleQ.MAX_CLOSE_IN: lambda g: metrics.max_centrality(g, metrics.CentralityKind.CLOSE_IN),
    SimpleQ.MAX_BETWEENNESS: lambda g: metrics.max_centrality(g, metrics.CentralityKind.BETWEENNESS),
    SimpleQ.EPIDEMIC_RATIO: metrics.epidemic_ratio,
    SimpleQ.SPECTRAL_RADIUS: metrics.spectral_radius,
    SimpleQ.MAX_TOTAL_DEG: lambda g: metrics.max_centrality(g, metrics.CentralityKind.TOTAL_DEG),
    SimpleQ.MOMENT2_TOTAL: lambda g: metrics.degree_moment(g, metrics.Side.TOTAL, 2),
}


def evaluate_q(q: QKind, g: Graph, workers: int = 1):
    """Value of the controlled quantity; a StressEstimate for stress kinds."""
    if isinstance(q, StressProbability):
        return estimate_systemic_probability(g, q.config, workers=workers)
    if q in UNDIRECTED_ONLY and not is_undirected(g):
        raise DirectedUnsupported(f"{q.value} is defined for undirected graphs only")
    return _SIMPLE_EVAL[q](g)


# ---------------------------------------------------------------------------
# Threshold schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    value: Number


@dataclass(frozen=True)
class Table:
    values: tuple[tuple[int, Number], ...]
    default: Number | None = None

    def __post_init__(self):
        pairs = self.values.items() if isinstance(self.values, Mapping) else self.values
        object.__setattr__(self, "values", tuple(sorted((int(n), v) for n, v in pairs)))


@dataclass(frozen=True)
class Formula:
    preset: str
    eps: Number = 0

    def __post_init__(self):
        if self.preset not in FORMULA_PRESETS:
            raise BadConfig(f"unknown threshold formula {self.preset!r}")


Schedule = Union[Constant, Table, Formula]


def _f_star_out2(n: int, eps: Number) -> Number:
    return Fraction((n - 1) ** 2, n) - eps


def _f_line_epidemic(n: int, eps: Number) -> Number:
    if n < 2:
        return Fraction(0) - eps
    return Fraction(2 * n - 3, n - 1) - eps


def _f_star_spectral(n: int, eps: Number) -> float:
    return math.sqrt(n - 1) - eps


def _f_line_total2(n: int, eps: Number) -> Number:
    return Fraction(4 * n - 6, n) - eps


FORMULA_PRESETS: dict[str, Callable[[int, Number], Number]] = {
    "star-out2": _f_star_out2,
    "line-epidemic": _f_line_epidemic,
    "star-spectral": _f_star_spectral,
    "line-total2": _f_line_total2,
}


def threshold(schedule: Schedule, n: int) -> Number:
    if n < 1:
        raise BadConfig("thresholds are defined for sizes >= 1")
    if isinstance(schedule, Constant):
        return schedule.value
    if isinstance(schedule, Table):
        for size, value in schedule.values:
            if size == n:
                return value
        if schedule.default is None:
            raise BadConfig(f"no threshold configured for size {n}")
        return schedule.default
    return FORMULA_PRESETS[schedule.preset](n, schedule.eps)


@dataclass(frozen=True)
class AcceptanceSpec:
    q: QKind
    schedule: Schedule


@dataclass(frozen=True)
class Verdict:
    accepted: bool | None  # None: indeterminate at this confidence
    q_value: Number
    threshold: Number
    margin: Number
    estimate: StressEstimate | None = None


def is_acceptable(spec: AcceptanceSpec, g: Graph, workers: int = 1) -> Verdict:
    """Three-valued for stress quantities: the CI may straddle the threshold."""
    value = evaluate_q(spec.q, g, workers=workers)
    limit = threshold(spec.schedule, len(g.nodes))
    if isinstance(value, StressEstimate):
        limit = float(limit)
        if value.ci_low <= limit <= value.ci_high:
            accepted = None
        else:
            accepted = value.ci_high < limit
        return Verdict(accepted, value.p_hat, limit, limit - value.p_hat, value)
    return Verdict(value <= limit, value, limit, limit - value)


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------


def number_to_json(x: Number):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def number_from_json(x) -> Number:
    if isinstance(x, bool) or x is None:
        raise BadConfig(f"expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise BadConfig(f"bad rational literal {x!r}") from exc
    raise BadConfig(f"expected a number, got {x!r}")


def q_to_json(q: QKind):
    if isinstance(q, StressProbability):
        return {"kind": "stress_probability", "config": stress_config_to_json(q.config)}
    return q.value


def q_from_json(obj, *, seed: int | None = None) -> QKind:
    if isinstance(obj, str):
        compact = obj.lower().replace("_", "").replace("-", "")
        for kind in SimpleQ:
            if kind.value.replace("_", "") == compact:
                return kind
        raise BadConfig(f"unknown quantity {obj!r}")
    if isinstance(obj, dict) and obj.get("kind") == "stress_probability":
        return StressProbability(stress_config_from_json(obj.get("config", {}), seed=seed))
    raise BadConfig(f"bad quantity object: {obj!r}")


def schedule_to_json(schedule: Schedule) -> dict:
    if isinstance(schedule, Constant):
        return {"kind": "constant", "value": number_to_json(schedule.value)}
    if isinstance(schedule, Table):
        return {
            "kind": "table",
            "values": {str(n): number_to_json(v) for n, v in schedule.values},
            "default": None if schedule.default is None else number_to_json(schedule.default),
        }
    return {"kind": "formula", "preset": schedule.preset, "eps": number_to_json(schedule.eps)}


def schedule_from_json(obj) -> Schedule:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise BadConfig(f"bad schedule object: {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "constant":
            return Constant(number_from_json(obj["value"]))
        if kind == "table":
            values = {int(n): number_from_json(v) for n, v in obj["values"].items()}
            default = obj.get("default")
            return Table(tuple(values.items()), None if default is None else number_from_json(default))
        if kind == "formula":
            return Formula(obj["preset"], number_from_json(obj.get("eps", 0)))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise BadConfig(f"bad schedule object: {obj!r}") from exc
    raise BadConfig(f"unknown schedule kind {kind!r}")


def acceptance_to_json(spec: AcceptanceSpec) -> dict:
    return {"q": q_to_json(spec.q), "schedule": schedule_to_json(spec.schedule)}


def acceptance_from_json(obj, *, seed: int | None = None) -> AcceptanceSpec:
    if not isinstance(obj, dict) or "q" not in obj or "schedule" not in obj:
        raise BadConfig("acceptance spec needs 'q' and 'schedule'")
    return AcceptanceSpec(q_from_json(obj["q"], seed=seed), schedule_from_json(obj["schedule"]))


def verdict_to_json(v: Verdict) -> dict:
    out = {
        "accepted": v.accepted,
        "q": float(v.q_value),
        "q_exact": number_to_json(v.q_value) if isinstance(v.q_value, Fraction) else None,
        "threshold": float(v.threshold),
        "threshold_exact": number_to_json(v.threshold) if isinstance(v.threshold, Fraction) else None,
        "margin": float(v.margin),
    }
    if v.estimate is not None:
        out["estimate"] = v.estimate.to_json()
    return out


# ---------------------------------------------------------------------------
# Named presets
# ---------------------------------------------------------------------------

PRESET_NAMES = (
    "prop-6.1-out2",
    "prop-6.2-maxoutdeg",
    "prop-B-epi",
    "prop-B-spectral",
    "stress-sir",
)


def named_acceptance(name: str, *, seed: int | None = None, samples: int | None = None) -> AcceptanceSpec:
    if name == "prop-6.1-out2":
        return AcceptanceSpec(SimpleQ.MOMENT2_OUT, Formula("star-out2", Fraction(1, 100)))
    if name == "prop-6.2-maxoutdeg":
        return AcceptanceSpec(SimpleQ.MAX_DEG_OUT, Constant(Fraction(1)))
    if name == "prop-B-epi":
        return AcceptanceSpec(SimpleQ.EPIDEMIC_RATIO, Formula("line-epidemic"))
    if name == "prop-B-spectral":
        return AcceptanceSpec(SimpleQ.SPECTRAL_RADIUS, Formula("star-spectral", 1e-6))
    if name == "stress-sir":
        cfg = StressConfig(
            params=SirParams(1.0, 1.0),
            alpha=0.5,
            lam=0.1,
            shock=UniformSingleNode(),
            samples=samples if samples is not None else 2000,
            seed=seed if seed is not None else 0,
        )
        return AcceptanceSpec(StressProbability(cfg), Constant(cfg.lam))
    raise BadConfig(f"unknown acceptance preset {name!r}")


# ---------------------------------------------------------------------------
# Structural property checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SizeVerdict:
    size: int
    ok: bool
    definitive: bool  # exhaustive or exact-closed-form backed
    detail: str


@dataclass(frozen=True)
class PropertyReport:
    prop: str
    ok: bool
    sizes: tuple[SizeVerdict, ...]
    notes: tuple[str, ...] = ()


def _accepted(spec: AcceptanceSpec, g: Graph) -> bool | None:
    return is_acceptable(spec, g).accepted


def check_p1(spec: AcceptanceSpec, up_to_n: int = 8) -> PropertyReport:
    """Edgeless graphs of every size 2..up_to_n must be acceptable."""
    if up_to_n < 2:
        raise BadConfig("up_to_n must be >= 2")
    sizes = []
    for n in range(2, up_to_n + 1):
        verdict = is_acceptable(spec, edgeless(n))
        ok = verdict.accepted is True
        detail = f"Q={verdict.q_value} vs l_{n}={verdict.threshold}"
        if verdict.accepted is None:
            detail += " (indeterminate)"
        sizes.append(SizeVerdict(n, ok, True, detail))
    return PropertyReport("P1", all(s.ok for s in sizes), tuple(sizes))


def _weakly_connected(g: Graph) -> bool:
    return connectivity(g)[0]


def _q_is_undirected(q: QKind) -> bool:
    return isinstance(q, SimpleQ) and q in UNDIRECTED_ONLY


_P2_WITNESSES: tuple[tuple[str, Callable[[int], Graph]], ...] = (
    ("directed line", directed_line),
    ("bidirectional ring", bidirectional_ring),
    ("directed star", directed_star),
    ("reversed star", reversed_star),
    ("undirected line", undirected_line),
    ("undirected star", undirected_star),
    ("complete graph", complete_graph),
)

_P2_WITNESSES_UNDIRECTED: tuple[tuple[str, Callable[[int], Graph]], ...] = (
    ("undirected line", undirected_line),
    ("bidirectional ring", bidirectional_ring),
    ("undirected star", undirected_star),
    ("complete graph", complete_graph),
)


def has_super_spreader(g: Graph) -> bool:
    """Some node has out-edges to every other node."""
    n = len(g.nodes)
    return any(len(g.out_neighbors(v)) == n - 1 for v in g.nodes)


def star_with_matching(n: int, pairs: int) -> Graph:
    """Undirected star plus `pairs` disjoint satellite-satellite edges."""
    if not 0 <= 2 * pairs <= n - 1:
        raise ValueError("too many matching pairs")
    g = undirected_star(n)
    extra = set(g.edges)
    for t in range(pairs):
        a, b = 1 + 2 * t, 2 + 2 * t
        extra |= {(a, b), (b, a)}
    return Graph(g.nodes, frozenset(extra))


def _p3_witnesses(n: int, undirected: bool) -> list[tuple[str, Graph]]:
    out: list[tuple[str, Graph]] = []
    if undirected:
        out.append(("undirected star", undirected_star(n)))
        for pairs in range(1, (n - 1) // 2 + 1):
            out.append((f"star plus {pairs}-matching", star_with_matching(n, pairs)))
        out.append(("complete graph", complete_graph(n)))
    else:
        out.append(("directed star", directed_star(n)))
        out.append(("complete graph", complete_graph(n)))
    return out


# Exact minimum of Q over weakly connected graphs of size n, with witness.
# Values verified in tests against exhaustive enumeration at small sizes.
def _cf_p2(q: SimpleQ, n: int) -> tuple[Number, str]:
    if q in (SimpleQ.MOMENT2_OUT, SimpleQ.MOMENT2_IN, SimpleQ.AVG_DEGREE):
        return Fraction(n - 1, n), "directed line"
    if q in (SimpleQ.MAX_DEG_OUT, SimpleQ.MAX_DEG_IN):
        return Fraction(min(n - 1, 1)), "directed line"
    if q == SimpleQ.MAX_CLOSE_OUT:
        return (Fraction(1, n - 1), "reversed star") if n >= 2 else (Fraction(0), "single node")
    if q == SimpleQ.MAX_CLOSE_IN:
        return (Fraction(1, n - 1), "directed star") if n >= 2 else (Fraction(0), "single node")
    if q == SimpleQ.MAX_BETWEENNESS:
        return Fraction(0), "directed star"
    if q in (SimpleQ.VARIANCE_IN, SimpleQ.VARIANCE_OUT):
        return Fraction(0), "bidirectional ring"
    if q == SimpleQ.EPIDEMIC_RATIO:
        return (Fraction(2 * n - 3, n - 1), "undirected line") if n >= 2 else (Fraction(0), "single node")
    if q == SimpleQ.SPECTRAL_RADIUS:
        return 2.0 * math.cos(math.pi / (n + 1)), "undirected line"
    if q == SimpleQ.MAX_TOTAL_DEG:
        return Fraction(min(n - 1, 2)), "undirected line"
    if q == SimpleQ.MOMENT2_TOTAL:
        return Fraction(4 * n - 6, n), "undirected line"
    raise NoClosedForm(f"no closed-form minimum registered for {q!r}")


# Minimum of Q over graphs containing a super-spreader; exact flag False means
# the value is only a sound lower bound (the checker then cannot certify P3).
def _cf_p3(q: SimpleQ, n: int) -> tuple[Number, bool, str]:
    if q == SimpleQ.MOMENT2_OUT:
        return Fraction((n - 1) ** 2, n), True, "directed star"
    if q == SimpleQ.MAX_DEG_OUT:
        return Fraction(n - 1), True, "directed star"
    if q == SimpleQ.MOMENT2_IN:
        return Fraction(n - 1, n), True, "directed star"
    if q == SimpleQ.MAX_DEG_IN:
        return Fraction(min(n - 1, 1)), True, "directed star"
    if q == SimpleQ.MAX_CLOSE_OUT:
        return Fraction(min(n - 1, 1)), True, "any super-spreader"
    if q == SimpleQ.MAX_CLOSE_IN:
        return (Fraction(1, n - 1), True, "directed star") if n >= 2 else (Fraction(0), True, "single node")
    if q == SimpleQ.MAX_BETWEENNESS:
        return Fraction(0), True, "complete graph"
    if q == SimpleQ.AVG_DEGREE:
        return Fraction(n - 1, n), True, "directed star"
    if q in (SimpleQ.VARIANCE_IN, SimpleQ.VARIANCE_OUT):
        return Fraction(0), True, "complete graph"
    if q == SimpleQ.SPECTRAL_RADIUS:
        return math.sqrt(n - 1), True, "undirected star"
    if q == SimpleQ.MAX_TOTAL_DEG:
        return Fraction(n - 1), True, "undirected star"
    if q == SimpleQ.MOMENT2_TOTAL:
        return Fraction(n - 1), True, "undirected star"
    if q == SimpleQ.EPIDEMIC_RATIO:
        if n <= 6:
            return Fraction(n, 2), True, "undirected star"
        return Fraction(2 * (n - 1), n), False, "lower bound E[K]"
    raise NoClosedForm(f"no closed-form minimum registered for {q!r}")


def min_q_weakly_connected(q: SimpleQ, n: int) -> tuple[Number, Graph]:
    """Exhaustive minimum over weakly connected graphs on labels 0..n-1."""
    undirected = q in UNDIRECTED_ONLY
    pool = all_undirected_graphs(range(n)) if undirected else all_digraphs(range(n))
    best: tuple[Number, Graph] | None = None
    for g in pool:
        if not _weakly_connected(g):
            continue
        value = _SIMPLE_EVAL[q](g)
        if best is None or value < best[0]:
            best = (value, g)
    if best is None:
        raise BadConfig(f"no weakly connected graphs of size {n}")
    return best


def min_q_super_spreader(q: SimpleQ, n: int) -> tuple[Number, Graph]:
    """Exhaustive minimum over graphs of size n containing a super-spreader."""
    undirected = q in UNDIRECTED_ONLY
    pool = all_undirected_graphs(range(n)) if undirected else all_digraphs(range(n))
    best: tuple[Number, Graph] | None = None
    for g in pool:
        if not has_super_spreader(g):
            continue
        value = _SIMPLE_EVAL[q](g)
        if best is None or value < best[0]:
            best = (value, g)
    if best is None:
        raise BadConfig(f"no super-spreader graphs of size {n}")
    return best


def check_p2(
    spec: AcceptanceSpec,
    sizes: Iterable[int],
    mode: str = "witness",
    exhaustive_limit: int = 5,
) -> PropertyReport:
    """Seek an acceptable weakly connected member at each size.

    Witness mode tries the canonical families, then exhausts small sizes;
    closed-form mode compares the threshold against the registered minimum.
    """
    if mode not in ("witness", "closed_form"):
        raise BadConfig("mode must be 'witness' or 'closed_form'")
    out = []
    notes: list[str] = []
    undirected = _q_is_undirected(spec.q)
    if mode == "closed_form":
        if isinstance(spec.q, StressProbability):
            raise NoClosedForm("stress probabilities have no closed-form minimum")
        for n in sorted(sizes):
            value, witness = _cf_p2(spec.q, n)
            ok = value <= threshold(spec.schedule, n)
            out.append(SizeVerdict(n, ok, True, f"min Q = {value} ({witness})"))
    else:
        families = _P2_WITNESSES_UNDIRECTED if undirected else _P2_WITNESSES
        for n in sorted(sizes):
            found = None
            for name, make in families:
                try:
                    g = make(n)
                except ValueError:
                    continue
                if not _weakly_connected(g):
                    continue
                if _accepted(spec, g) is True:
                    found = name
                    break
            if found is not None:
                out.append(SizeVerdict(n, True, True, f"witness: {found}"))
                continue
            if n <= exhaustive_limit and not isinstance(spec.q, StressProbability):
                pool = all_undirected_graphs(range(n)) if undirected else all_digraphs(range(n))
                hit = next(
                    (g for g in pool if _weakly_connected(g) and _accepted(spec, g) is True),
                    None,
                )
                if hit is not None:
                    out.append(SizeVerdict(n, True, True, "witness: exhaustive search"))
                else:
                    out.append(SizeVerdict(n, False, True, "exhausted: no member exists"))
                continue
            out.append(SizeVerdict(n, False, False, "no canonical witness accepted"))
            notes.append(f"size {n} beyond exhaustive limit; absence not proven")
    return PropertyReport("P2", all(s.ok for s in out), tuple(out), tuple(notes))


def check_p3(
    spec: AcceptanceSpec,
    sizes: Iterable[int],
    mode: str = "witness",
    exhaustive_limit: int = 4,
) -> PropertyReport:
    """No graph containing a super-spreader may be acceptable."""
    if mode not in ("witness", "closed_form"):
        raise BadConfig("mode must be 'witness' or 'closed_form'")
    out = []
    notes: list[str] = []
    undirected = _q_is_undirected(spec.q)
    if mode == "closed_form":
        if isinstance(spec.q, StressProbability):
            raise NoClosedForm("stress probabilities have no closed-form minimum")
        for n in sorted(sizes):
            value, exact, witness = _cf_p3(spec.q, n)
            limit = threshold(spec.schedule, n)
            if exact:
                out.append(SizeVerdict(n, limit < value, True, f"min Q = {value} ({witness})"))
            elif limit < value:
                out.append(SizeVerdict(n, True, True, f"l_{n} below sound bound {value}"))
            else:
                out.append(SizeVerdict(n, False, False, f"bound {value} not exact ({witness})"))
                notes.append(f"size {n}: only a lower bound is registered; not certified")
    else:
        for n in sorted(sizes):
            accepted_witness = None
            for name, g in _p3_witnesses(n, undirected):
                if _accepted(spec, g) is True:
                    accepted_witness = name
                    break
            if accepted_witness is not None:
                out.append(SizeVerdict(n, False, True, f"accepted super-spreader: {accepted_witness}"))
                continue
            if n <= exhaustive_limit and not isinstance(spec.q, StressProbability):
                pool = all_undirected_graphs(range(n)) if undirected else all_digraphs(range(n))
                hit = next(
                    (g for g in pool if has_super_spreader(g) and _accepted(spec, g) is True),
                    None,
                )
                if hit is not None:
                    out.append(SizeVerdict(n, False, True, "exhaustive search found accepted super-spreader"))
                else:
                    out.append(SizeVerdict(n, True, True, "exhausted: all rejected"))
                continue
            out.append(SizeVerdict(n, True, False, "all witness families rejected"))
            notes.append(f"size {n} beyond exhaustive limit; acceptance of some super-spreader not excluded")
    return PropertyReport("P3", all(s.ok for s in out), tuple(out), tuple(notes))


def _relabel(g: Graph, mapping: dict[int, int]) -> Graph:
    return Graph(
        frozenset(mapping[v] for v in g.nodes),
        frozenset((mapping[v], mapping[w]) for v, w in g.edges),
    )


def check_p4(
    spec: AcceptanceSpec,
    graphs: Sequence[Graph],
    permutations: int = 3,
    seed: int = 0,
) -> PropertyReport:
    """Verdict and Q must be invariant under relabeling."""
    rng = random.Random(seed)
    out = []
    for idx, g in enumerate(graphs):
        ok = True
        detail = "invariant"
        for _ in range(permutations):
            labels = list(g.nodes)
            shuffled = labels[:]
            rng.shuffle(shuffled)
            offset = rng.choice((0, 0, 100))
            mapping = {a: b + offset for a, b in zip(labels, shuffled)}
            h = _relabel(g, mapping)
            va, vb = is_acceptable(spec, g), is_acceptable(spec, h)
            if isinstance(spec.q, StressProbability):
                assert va.estimate is not None and vb.estimate is not None
                disjoint = va.estimate.ci_high < vb.estimate.ci_low or vb.estimate.ci_high < va.estimate.ci_low
                if disjoint and va.accepted is not None and vb.accepted is not None and va.accepted != vb.accepted:
                    ok, detail = False, f"verdicts differ with disjoint CIs under {mapping}"
                    break
            else:
                same_value = (
                    abs(va.q_value - vb.q_value) <= 1e-9
                    if isinstance(va.q_value, float) or isinstance(vb.q_value, float)
                    else va.q_value == vb.q_value
                )
                if not same_value or va.accepted != vb.accepted:
                    ok, detail = False, f"Q {va.q_value} -> {vb.q_value} under {mapping}"
                    break
        out.append(SizeVerdict(idx, ok, False, detail))
    return PropertyReport("P4", all(s.ok for s in out), tuple(out))


# ---------------------------------------------------------------------------
# Monotonicity falsification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    graph: Graph
    intervention: Intervention
    q_before: Number
    q_after: Number


@dataclass(frozen=True)
class MonotonicityReport:
    counterexample: Counterexample | None
    trials: int

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _padded_triangle_split() -> tuple[Graph, Intervention]:
    # full triangle plus isolated padding; splitting off one triangle edge
    # raises the maximum closeness once the graph is large enough
    tri = {(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)}
    g = Graph(frozenset(range(7)), frozenset(tri))
    return g, USplit(frozenset({(2, 1), (1, 2)}), 2, 7)


def _adversarial_probes(q: QKind, family: InterventionSet) -> list[tuple[Graph, Intervention]]:
    probes: list[tuple[Graph, Intervention]] = []
    if not isinstance(q, SimpleQ):
        return probes
    if q in (SimpleQ.VARIANCE_IN, SimpleQ.VARIANCE_OUT) and family.contains(NodeDel(0)):
        probes.append((bidirectional_ring(5), NodeDel(0)))
    if q == SimpleQ.EPIDEMIC_RATIO:
        star = undirected_star(5)
        g = Graph(star.nodes | {5, 6}, star.edges | {(5, 6), (6, 5)})
        if family.contains(UEdgeDel(5, 6)):
            probes.append((g, UEdgeDel(5, 6)))
    if q in (SimpleQ.MAX_CLOSE_OUT, SimpleQ.MAX_CLOSE_IN, SimpleQ.MAX_BETWEENNESS):
        g, split = _padded_triangle_split()
        if family.contains(split):
            probes.append((g, split))
    return probes


def _random_graph(rng: random.Random, n: int, undirected: bool) -> Graph:
    p = rng.choice((0.2, 0.4, 0.6))
    edges = set()
    for v in range(n):
        for w in range(v + 1, n):
            if undirected:
                if rng.random() < p:
                    edges |= {(v, w), (w, v)}
            else:
                if rng.random() < p:
                    edges.add((v, w))
                if rng.random() < p:
                    edges.add((w, v))
    return Graph(frozenset(range(n)), frozenset(edges))


def falsify_monotonicity(
    q: QKind,
    family: InterventionSet,
    trials: int = 1000,
    sizes: Iterable[int] = range(2, 9),
    seed: int = 0,
) -> MonotonicityReport:
    """Search for an intervention that strictly increases Q."""
    if isinstance(q, StressProbability):
        raise BadConfig("monotonicity search expects an exactly computable quantity")
    sizes = tuple(sizes)
    undirected = q in UNDIRECTED_ONLY
    slack = 1e-9 if q == SimpleQ.SPECTRAL_RADIUS else 0

    def value(g: Graph) -> Number | None:
        try:
            return _SIMPLE_EVAL[q](g)
        except DirectedUnsupported:
            return None

    checked = 0
    for g, k in _adversarial_probes(q, family):
        before, after = value(g), value(apply(k, g))
        checked += 1
        if before is not None and after is not None and after > before + slack:
            return MonotonicityReport(Counterexample(g, k, before, after), checked)
    rng = random.Random(seed)
    for _ in range(trials):
        g = _random_graph(rng, rng.choice(sizes), undirected)
        moves = family.moves(g)
        if not moves:
            continue
        k = rng.choice(moves)
        h = apply(k, g)
        if h == g or not h.nodes:
            continue
        before, after = value(g), value(h)
        checked += 1
        if before is not None and after is not None and after > before + slack:
            return MonotonicityReport(Counterexample(g, k, before, after), checked)
    return MonotonicityReport(None, checked)


# ---------------------------------------------------------------------------
# Risk reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RiskReducingReport:
    ok: bool
    checked: int
    counterexample: tuple[Graph, Graph] | None = None
    notes: tuple[str, ...] = ()


def is_risk_reducing(
    family: InterventionSet,
    spec: AcceptanceSpec | Callable[[Graph], bool | None],
    samples: Iterable[Graph],
    depth: int = 2,
    max_states: int = 500,
) -> RiskReducingReport:
    """No strategy may lead an acceptable graph out of the acceptance set.

    Evidence-level: explores reachable sets of the sampled graphs only.
    """
    accept = spec if callable(spec) else (lambda g: _accepted(spec, g))
    checked = 0
    notes: list[str] = []
    for g in samples:
        try:
            base = accept(g)
        except DirectedUnsupported:
            continue
        if base is not True:
            continue
        closure = reachable_set(g, family, depth, max_states, dedup="labeled")
        if not closure.complete:
            notes.append("state budget hit; evidence partial")
        for h in closure.graphs:
            checked += 1
            try:
                verdict = accept(h)
            except DirectedUnsupported:
                notes.append("family leaves the undirected domain; such states skipped")
                continue
            if verdict is False:
                return RiskReducingReport(False, checked, (g, h), tuple(notes))
    return RiskReducingReport(True, checked, None, tuple(notes))
