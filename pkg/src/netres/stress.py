"""SIR contagion stress test via epidemic percolation network sampling.

The percolation construction: per node draw an infectious period
r_v ~ Exp(gamma); per out-edge (v, w) a transmission time t_vw ~ Exp(tau);
the edge survives iff t_vw < r_v. The union of out-components of the shocked
nodes then has the same distribution as the set of ever-infected nodes of the
continuous-time process. A Gillespie simulator of the rate dynamics is kept
as an independent engine for cross-validation.

Randomness is counter-based (Philox): sample s consumes a fixed block of
uniforms, so estimates are bit-identical for any worker count and the
edge-deletion coupling compares two graphs on literally the same draws.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BadConfig, EdgeAbsent, EmptyGraph, ShockOutsideGraph
from .graphs import Graph

WILSON_Z = 2.5758293035489004  # two-sided 99% normal quantile
CHUNK = 2048  # fixed so that chunk boundaries never depend on worker count

MAX_SEED = 2**64 - 1


def _check_rate(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise BadConfig(f"{name} must be a positive finite rate, got {x!r}")
    return x


@dataclass(frozen=True)
class SirParams:
    tau: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "tau", _check_rate("tau", self.tau))
        object.__setattr__(self, "gamma", _check_rate("gamma", self.gamma))


@dataclass(frozen=True)
class UniformSingleNode:
    pass


@dataclass(frozen=True)
class FixedSet:
    nodes: frozenset[int]

    def __post_init__(self):
        nodes = frozenset(int(v) for v in self.nodes)
        if not nodes:
            raise BadConfig("fixed shock set must be nonempty")
        object.__setattr__(self, "nodes", nodes)


@dataclass(frozen=True)
class PerNodeBernoulli:
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise BadConfig(f"shock probability must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "p", p)


InitialShock = UniformSingleNode | FixedSet | PerNodeBernoulli


@dataclass(frozen=True)
class StressConfig:
    params: SirParams
    alpha: float
    lam: float
    shock: InitialShock
    samples: int
    seed: int

    def __post_init__(self):
        alpha, lam = float(self.alpha), float(self.lam)
        # alpha = 1 means "every node infected counts as systemic"; still a valid event
        if not 0.0 < alpha <= 1.0:
            raise BadConfig(f"alpha must lie in (0, 1], got {alpha!r}")
        if not 0.0 < lam < 1.0:
            raise BadConfig(f"lambda must lie in (0, 1), got {lam!r}")
        if int(self.samples) < 1:
            raise BadConfig(f"samples must be >= 1, got {self.samples!r}")
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise BadConfig("seed must fit in 64 bits")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "samples", int(self.samples))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class StressEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class StressResult:
    estimate: StressEstimate
    final_sizes: tuple[tuple[int, int], ...]  # (size, count), ascending


@dataclass(frozen=True)
class CouplingReport:
    samples: int
    violations: int
    first_violation: int | None

    @property
    def ok(self) -> bool:
        return self.violations == 0


# ---------------------------------------------------------------------------
# Config JSON
# ---------------------------------------------------------------------------


def shock_to_json(shock: InitialShock) -> dict:
    if isinstance(shock, UniformSingleNode):
        return {"kind": "uniform_single_node"}
    if isinstance(shock, FixedSet):
        return {"kind": "fixed_set", "nodes": sorted(shock.nodes)}
    return {"kind": "per_node_bernoulli", "p": shock.p}


def shock_from_json(obj) -> InitialShock:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise BadConfig(f"bad shock object: {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "uniform_single_node":
            return UniformSingleNode()
        if kind == "fixed_set":
            return FixedSet(frozenset(obj["nodes"]))
        if kind == "per_node_bernoulli":
            return PerNodeBernoulli(obj["p"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadConfig(f"bad shock object: {obj!r}") from exc
    raise BadConfig(f"unknown shock kind {kind!r}")


def stress_config_to_json(cfg: StressConfig) -> dict:
    return {
        "tau": cfg.params.tau,
        "gamma": cfg.params.gamma,
        "alpha": cfg.alpha,
        "lambda": cfg.lam,
        "shock": shock_to_json(cfg.shock),
        "samples": cfg.samples,
        "seed": cfg.seed,
    }


def stress_config_from_json(obj, *, seed: int | None = None) -> StressConfig:
    if not isinstance(obj, dict):
        raise BadConfig("stress config must be a JSON object")
    try:
        params = SirParams(obj["tau"], obj["gamma"])
        shock = shock_from_json(obj.get("shock", {"kind": "uniform_single_node"}))
        eff_seed = seed if seed is not None else obj.get("seed")
        if eff_seed is None:
            raise BadConfig("stress config needs a seed")
        return StressConfig(
            params=params,
            alpha=obj["alpha"],
            lam=obj.get("lambda", obj.get("lam", 0.5)),
            shock=shock,
            samples=obj.get("samples", 1000),
            seed=eff_seed,
        )
    except KeyError as exc:
        raise BadConfig(f"stress config missing field {exc.args[0]!r}") from exc


# ---------------------------------------------------------------------------
# Counter-based uniform draws
# ---------------------------------------------------------------------------


class _Layout:
    """Fixed placement of every uniform draw a single sample consumes.

    Order: shock draws first, then per node (ascending label) one recovery
    draw followed by one draw per out-edge (ascending neighbor label).
    """

    def __init__(self, g: Graph, shock: InitialShock):
        self.order = g.node_list()
        self.index = {v: i for i, v in enumerate(self.order)}
        n = len(self.order)
        self.shock_draws = {UniformSingleNode: 1, PerNodeBernoulli: n}.get(type(shock), 0)
        self.rec_slots = np.zeros(n, dtype=np.int64)
        edge_slots: list[int] = []
        edge_src: list[int] = []
        edges: list[tuple[int, int]] = []
        pos = self.shock_draws
        for i, v in enumerate(self.order):
            self.rec_slots[i] = pos
            pos += 1
            for w in sorted(g.out_neighbors(v)):
                edge_slots.append(pos)
                edge_src.append(i)
                edges.append((v, w))
                pos += 1
        self.edge_slots = np.asarray(edge_slots, dtype=np.int64)
        self.edge_src = np.asarray(edge_src, dtype=np.int64)
        self.edges = edges
        self.draws = pos
        self.padded = max(4, 4 * ((pos + 3) // 4))


def _uniform_block(seed: int, layout: _Layout, s0: int, s1: int) -> np.ndarray:
    """Uniforms for samples [s0, s1), one row each, placed by absolute counter."""
    counter = s0 * (layout.padded // 4)
    gen = np.random.Generator(np.random.Philox(key=seed, counter=counter))
    return gen.random((s1 - s0) * layout.padded).reshape(s1 - s0, layout.padded)


def _kept_edges(layout: _Layout, params: SirParams, block: np.ndarray) -> np.ndarray:
    """Boolean matrix (samples, edges): which edges each percolation keeps."""
    rec = -np.log1p(-block[:, layout.rec_slots]) / params.gamma
    if layout.edge_slots.size == 0:
        return np.zeros((block.shape[0], 0), dtype=bool)
    trans = -np.log1p(-block[:, layout.edge_slots]) / params.tau
    return trans < rec[:, layout.edge_src]


def _shocked(layout: _Layout, shock: InitialShock, row: np.ndarray) -> frozenset[int]:
    if isinstance(shock, FixedSet):
        return shock.nodes
    n = len(layout.order)
    if isinstance(shock, UniformSingleNode):
        return frozenset({layout.order[min(int(row[0] * n), n - 1)]})
    return frozenset(v for i, v in enumerate(layout.order) if row[i] < shock.p)


def _final_from_mask(layout: _Layout, keep: np.ndarray, shocked: Iterable[int]) -> frozenset[int]:
    adj: dict[int, list[int]] = {}
    for j, kept in enumerate(keep):
        if kept:
            v, w = layout.edges[j]
            adj.setdefault(v, []).append(w)
    seen = set(shocked)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Public sampling operations
# ---------------------------------------------------------------------------


class _NoShock:
    pass


_NO_SHOCK = _NoShock()


def sample_epn(g: Graph, params: SirParams, seed: int, sample_index: int = 0) -> Graph:
    """One percolation subgraph: same nodes, surviving edges only.

    Uses a shock-free draw layout, so the subgraph for (g, seed, index) does
    not depend on any shock configuration.
    """
    layout = _Layout(g, _NO_SHOCK)
    block = _uniform_block(seed, layout, sample_index, sample_index + 1)
    keep = _kept_edges(layout, params, block)[0]
    edges = frozenset(layout.edges[j] for j in range(len(layout.edges)) if keep[j])
    return Graph(g.nodes, edges)


def epn_final_set(epn: Graph, shock: Iterable[int]) -> frozenset[int]:
    """Union of out-components of the shocked nodes within the percolation graph."""
    shock = frozenset(int(v) for v in shock)
    outside = shock - epn.nodes
    if outside:
        raise ShockOutsideGraph(f"shocked nodes not in graph: {sorted(outside)}")
    seen = set(shock)
    stack = list(shock)
    while stack:
        v = stack.pop()
        for w in epn.out_neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def gillespie_final_set(
    g: Graph, params: SirParams, shock: Iterable[int], rng: np.random.Generator
) -> frozenset[int]:
    """Ever-infected set of the continuous-time process, simulated directly.

    Events are drawn from the embedded jump chain (probabilities proportional
    to rates); holding times do not influence the final set.
    """
    shock = frozenset(int(v) for v in shock)
    outside = shock - g.nodes
    if outside:
        raise ShockOutsideGraph(f"shocked nodes not in graph: {sorted(outside)}")
    infected = set(shock)
    recovered: set[int] = set()
    # per susceptible node: number of currently infected in-neighbors
    pressure: dict[int, int] = {}
    for v in infected:
        for w in g.out_neighbors(v):
            if w not in infected:
                pressure[w] = pressure.get(w, 0) + 1
    tau, gamma = params.tau, params.gamma
    while infected:
        targets = [w for w, c in pressure.items() if c > 0]
        rates = [tau * pressure[w] for w in targets]
        total = gamma * len(infected) + sum(rates)
        u = rng.random() * total
        acc = gamma * len(infected)
        if u < acc:
            # recovery; infected nodes are exchangeable at rate gamma each
            victim = sorted(infected)[int(u / gamma)]
            infected.discard(victim)
            recovered.add(victim)
            for w in g.out_neighbors(victim):
                if w in pressure:
                    pressure[w] -= 1
        else:
            for w, r in zip(targets, rates):
                acc += r
                if u < acc:
                    del pressure[w]
                    infected.add(w)
                    for x in g.out_neighbors(w):
                        if x not in infected and x not in recovered:
                            pressure[x] = pressure.get(x, 0) + 1
                    break
    return frozenset(recovered)


# ---------------------------------------------------------------------------
# Systemic probability estimation
# ---------------------------------------------------------------------------


def wilson_interval(successes: int, samples: int, z: float = WILSON_Z) -> tuple[float, float]:
    p = successes / samples
    denom = 1.0 + z * z / samples
    center = (p + z * z / (2 * samples)) / denom
    half = z * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / denom
    # rounding at p in {0, 1} can push a bound a few ulp past the point
    # estimate; the exact interval always contains it
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def _epn_chunk(g, cfg, layout, s0, s1):
    block = _uniform_block(cfg.seed, layout, s0, s1)
    keep = _kept_edges(layout, cfg.params, block)
    n = len(layout.order)
    systemic = 0
    sizes: dict[int, int] = {}
    for i in range(s1 - s0):
        shocked = _shocked(layout, cfg.shock, block[i])
        final = _final_from_mask(layout, keep[i], shocked)
        sizes[len(final)] = sizes.get(len(final), 0) + 1
        if len(final) >= cfg.alpha * n:
            systemic += 1
    return systemic, sizes


def _gillespie_chunk(g, cfg, s0, s1):
    order = g.node_list()
    n = len(order)
    systemic = 0
    sizes: dict[int, int] = {}
    for s in range(s0, s1):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(s,)))
        if isinstance(cfg.shock, FixedSet):
            shocked = cfg.shock.nodes
        elif isinstance(cfg.shock, UniformSingleNode):
            shocked = frozenset({order[min(int(rng.random() * n), n - 1)]})
        else:
            draws = rng.random(n)
            shocked = frozenset(v for i, v in enumerate(order) if draws[i] < cfg.shock.p)
        final = gillespie_final_set(g, cfg.params, shocked, rng)
        sizes[len(final)] = sizes.get(len(final), 0) + 1
        if len(final) >= cfg.alpha * n:
            systemic += 1
    return systemic, sizes


def systemic_stress(
    g: Graph, cfg: StressConfig, engine: str = "epn", workers: int = 1
) -> StressResult:
    """Monte Carlo estimate of P(final infected fraction >= alpha)."""
    if not g.nodes:
        raise EmptyGraph("stress test needs a nonempty graph")
    if engine not in ("epn", "gillespie"):
        raise BadConfig(f"unknown engine {engine!r}")
    if isinstance(cfg.shock, FixedSet):
        outside = cfg.shock.nodes - g.nodes
        if outside:
            raise ShockOutsideGraph(f"shocked nodes not in graph: {sorted(outside)}")
    layout = _Layout(g, cfg.shock)
    bounds = [(s, min(s + CHUNK, cfg.samples)) for s in range(0, cfg.samples, CHUNK)]

    def run(bound):
        s0, s1 = bound
        if engine == "epn":
            return _epn_chunk(g, cfg, layout, s0, s1)
        return _gillespie_chunk(g, cfg, s0, s1)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    systemic = sum(p[0] for p in parts)
    sizes: dict[int, int] = {}
    for _, part_sizes in parts:
        for size, count in part_sizes.items():
            sizes[size] = sizes.get(size, 0) + count
    low, high = wilson_interval(systemic, cfg.samples)
    est = StressEstimate(systemic / cfg.samples, low, high, cfg.samples, cfg.seed)
    return StressResult(est, tuple(sorted(sizes.items())))


def estimate_systemic_probability(
    g: Graph, cfg: StressConfig, engine: str = "epn", workers: int = 1
) -> StressEstimate:
    return systemic_stress(g, cfg, engine, workers).estimate


def coupled_edge_deletion_check(g: Graph, edge: tuple[int, int], cfg: StressConfig) -> CouplingReport:
    """Per-sample check that deleting `edge` never grows the final set.

    Both graphs are evaluated on identical draws laid out for g; the deleted
    edge's draw is simply ignored on the smaller graph, which realizes the
    coupling exactly.
    """
    edge = (int(edge[0]), int(edge[1]))
    if edge not in g.edges:
        raise EdgeAbsent(f"edge {edge} not in graph")
    if not g.nodes:
        raise EmptyGraph("stress test needs a nonempty graph")
    layout = _Layout(g, cfg.shock)
    drop = layout.edges.index(edge)
    violations = 0
    first: int | None = None
    for s0 in range(0, cfg.samples, CHUNK):
        s1 = min(s0 + CHUNK, cfg.samples)
        block = _uniform_block(cfg.seed, layout, s0, s1)
        keep = _kept_edges(layout, cfg.params, block)
        for i in range(s1 - s0):
            shocked = _shocked(layout, cfg.shock, block[i])
            full = _final_from_mask(layout, keep[i], shocked)
            reduced_mask = keep[i].copy()
            reduced_mask[drop] = False
            reduced = _final_from_mask(layout, reduced_mask, shocked)
            if not reduced <= full:
                violations += 1
                if first is None:
                    first = s0 + i
    return CouplingReport(cfg.samples, violations, first)
