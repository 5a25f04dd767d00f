"""Published scenario tallies, baseline graph constructors and random DAGs.

Randomness comes from :class:`SplitMix64` (Steele, Lea & Flood 2014) rather
than :mod:`random`, so a seed produces the same graphs in any
implementation that follows the same draw order.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from itertools import combinations

from .confusion import ConfusionTally, GroundTruthStats, effective_counts
from .errors import InfeasiblePlan, NotADag
from .graph import ABSENT, MixedGraph, directed, is_dag, max_edges, topological_order
from .metrics import ShdWeighting, score_tally, shd

MASK64 = (1 << 64) - 1

# published precision of the tables; two-decimal cells are checked at their printed precision
TOLERANCE = 0.0005
TWO_DECIMAL_TOLERANCE = 0.005


class SplitMix64:
    """SplitMix64 generator: 64-bit state, golden-gamma increment."""

    def __init__(self, seed: int):
        if seed < 0 or seed > MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, no modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: list) -> None:
        for k in range(len(items) - 1, 0, -1):
            j = self.below(k + 1)
            items[k], items[j] = items[j], items[k]

    def sample(self, items, k: int) -> list:
        """``k`` distinct items in draw order (partial Fisher-Yates)."""
        pool = list(items)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for m in range(k):
            j = m + self.below(len(pool) - m)
            pool[m], pool[j] = pool[j], pool[m]
        return pool[:k]


def node_labels(n: int) -> list[str]:
    return [f"X{k}" for k in range(1, n + 1)]


def random_dag(n: int, density: float, seed: int) -> MixedGraph:
    """Random node ordering, then each forward pair kept with probability ``density``."""
    if n < 2:
        raise ValueError("random_dag needs at least 2 nodes")
    if not 0.0 < density < 1.0:
        raise ValueError("density must lie in (0, 1)")
    rng = SplitMix64(seed)
    nodes = node_labels(n)
    order = list(nodes)
    rng.shuffle(order)
    arcs = [(u, v, directed(u, v)) for u, v in combinations(order, 2) if rng.random() < density]
    return MixedGraph(nodes).with_edges(arcs)


def random_dag_with_arcs(n: int, arcs: int, seed: int) -> MixedGraph:
    """Like :func:`random_dag` but with exactly ``arcs`` arcs chosen uniformly."""
    if n < 2:
        raise ValueError("random_dag needs at least 2 nodes")
    if not 0 <= arcs <= max_edges(n):
        raise ValueError(f"arc count must lie in [0, {max_edges(n)}]")
    rng = SplitMix64(seed)
    nodes = node_labels(n)
    order = list(nodes)
    rng.shuffle(order)
    chosen = rng.sample(list(combinations(order, 2)), arcs)
    return MixedGraph(nodes).with_edges((u, v, directed(u, v)) for u, v in chosen)


def empty_learnt(truth: MixedGraph) -> MixedGraph:
    return MixedGraph(truth.nodes)


def fully_connected_a(truth: MixedGraph) -> MixedGraph:
    """Every true arc kept; every other pair filled along a topological order of ``truth``."""
    if not is_dag(truth):
        raise NotADag("fully_connected_a needs a DAG truth")
    order = topological_order(truth)
    updates = [(u, v, directed(u, v)) for u, v in combinations(order, 2) if not truth.adjacent(u, v)]
    return truth.with_edges(updates)


def most_inaccurate(truth: MixedGraph) -> MixedGraph:
    """Arcs exactly on the truth's non-adjacent pairs, oriented along node order."""
    if not is_dag(truth):
        raise NotADag("most_inaccurate needs a DAG truth")
    updates = [(u, v, directed(u, v)) for u, v in truth.pairs() if not truth.adjacent(u, v)]
    return MixedGraph(truth.nodes).with_edges(updates)


@dataclass(frozen=True)
class PerturbationPlan:
    deletions: int = 0
    insertions: int = 0
    reversals: int = 0
    seed: int = 0

    def check(self, dag: MixedGraph) -> None:
        arcs = dag.edge_count
        absent = max_edges(len(dag)) - arcs
        if min(self.deletions, self.insertions, self.reversals) < 0:
            raise InfeasiblePlan("perturbation counts must be non-negative")
        if self.deletions + self.reversals > arcs:
            raise InfeasiblePlan(
                f"{self.deletions} deletions + {self.reversals} reversals exceed the {arcs} arcs available"
            )
        if self.insertions > absent:
            raise InfeasiblePlan(f"{self.insertions} insertions exceed the {absent} absent pairs available")


def _has_path(graph: MixedGraph, src: str, dst: str, skip: tuple[str, str]) -> bool:
    children = {n: [] for n in graph.nodes}
    for t, h in graph.arcs():
        if (t, h) != skip:
            children[t].append(h)
    stack, seen = [src], {src}
    while stack:
        n = stack.pop()
        if n == dst:
            return True
        for c in children[n]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def perturb_detailed(dag: MixedGraph, plan: PerturbationPlan) -> tuple[MixedGraph, int]:
    """Apply ``plan`` and also return how many reversals had to be skipped."""
    if not is_dag(dag):
        raise NotADag("perturb needs a DAG")
    plan.check(dag)
    rng = SplitMix64(plan.seed)

    def key(arc):
        return dag.index(arc[0]), dag.index(arc[1])

    original_absent = [(u, v) for u, v in dag.pairs() if not dag.adjacent(u, v)]

    arcs = sorted(dag.arcs(), key=key)
    doomed = rng.sample(arcs, plan.deletions)
    g = dag.with_edges((u, v, ABSENT) for u, v in doomed)

    remaining = sorted(g.arcs(), key=key)
    rng.shuffle(remaining)
    reversed_count = 0
    for tail, head in remaining:
        if reversed_count == plan.reversals:
            break
        # reversing tail->head closes a cycle iff another tail~>head path exists
        if _has_path(g, tail, head, skip=(tail, head)):
            continue
        g = g.set_edge(tail, head, directed(head, tail))
        reversed_count += 1
    skipped = plan.reversals - reversed_count

    new_pairs = rng.sample(original_absent, plan.insertions)
    order = {n: k for k, n in enumerate(topological_order(g))}
    g = g.with_edges((u, v, directed(u, v) if order[u] < order[v] else directed(v, u)) for u, v in new_pairs)
    return g, skipped


def perturb(dag: MixedGraph, plan: PerturbationPlan) -> MixedGraph:
    g, skipped = perturb_detailed(dag, plan)
    if skipped:
        warnings.warn(f"{skipped} of {plan.reversals} reversals skipped: every remaining candidate closed a cycle")
    return g


# canonical truth behind both tables: 10 nodes, 10 arcs
TABLE_TRUTH = GroundTruthStats(a=10, i=35)

TABLE3_METRICS = ("pr", "re", "f1", "shd_classic", "ddm")
TABLE5_METRICS = ("fn_eff", "pr", "re", "f1", "shd_weighted", "ddm", "bsf")

# scenario, description, (TP, FP, TN, FN), Pr, Re, F1, SHD, DDM
_TABLE3 = [
    ("1.1", "Discrepancies in TP", (10, 20, 15, 0), "0.33", "1", "0.5", "20", "-1"),
    ("1.2", "Discrepancies in TP", (5, 20, 15, 5), "0.2", "0.5", "0.29", "25", "-2"),
    ("1.3", "Discrepancies in TP", (0, 20, 15, 10), "0", "0", "n/a", "30", "-3"),
    ("2.1", "Discrepancies in FP", (5, 15, 20, 5), "0.25", "0.5", "0.33", "20", "-1.5"),
    ("2.2", "Discrepancies in FP", (5, 10, 25, 5), "0.33", "0.5", "0.4", "15", "-1"),
    ("2.3", "Discrepancies in FP", (5, 5, 30, 5), "0.5", "0.5", "0.5", "10", "-0.5"),
    ("3.1", "Fully connected graph A", (10, 35, 0, 0), "0.22", "1", "0.36", "35", "-2.5"),
    ("3.2", "Fully connected graph B", (5, 35, 0, 5), "0.125", "0.5", "0.2", "40", "-3.5"),
    ("3.3", "Empty graph", (0, 0, 35, 10), "n/a", "0", "n/a", "10", "-1"),
    ("3.4", "Most inaccurate graph", (0, 35, 0, 10), "0", "0", "n/a", "45", "-4.5"),
    ("3.5", "Most accurate graph", (10, 0, 35, 0), "1", "1", "1", "0", "1"),
]

# scenario, description, (TP, TP partial, FP, TN), FN, Pr, Re, F1, SHD, DDM, BSF
_TABLE5 = [
    ("1.1", "Discrepancies in TP", (8, 2, 20, 15), "1", "0.3", "0.9", "0.45", "21", "-1.2", "0.329"),
    ("1.2", "Discrepancies in TP", (4, 1, 20, 15), "5.5", "0.18", "0.45", "0.257", "25.5", "-2.1", "-0.121"),
    ("1.3", "Discrepancies in TP", (0, 0, 20, 15), "10", "0", "0", "n/a", "30", "-3", "-0.571"),
    ("2.1", "Discrepancies in FP", (4, 1, 15, 20), "5.5", "0.225", "0.45", "0.3", "20.5", "-1.6", "0.021"),
    ("2.2", "Discrepancies in FP", (4, 1, 10, 25), "5.5", "0.3", "0.45", "0.36", "15.5", "-1.1", "0.164"),
    ("2.3", "Discrepancies in FP", (4, 1, 5, 30), "5.5", "0.45", "0.45", "0.45", "10.5", "-0.6", "0.307"),
    ("3.1", "Fully connected graph A", (10, 0, 35, 0), "0", "0.22", "1", "0.364", "35", "-2.5", "0"),
    ("3.2", "Fully connected graph B", (5, 5, 35, 0), "2.5", "0.167", "0.75", "0.273", "37.5", "-3", "-0.25"),
    ("3.3", "Empty graph", (0, 0, 0, 35), "10", "n/a", "0", "n/a", "10", "-1", "0"),
    ("3.4", "Most inaccurate graph", (0, 0, 35, 0), "10", "0", "0", "n/a", "45", "-4.5", "-1"),
    ("3.5", "Most accurate graph", (10, 0, 0, 35), "0", "1", "1", "1", "0", "1", "1"),
]


@dataclass(frozen=True)
class ScenarioFixture:
    scenario_id: str
    description: str
    tally: ConfusionTally
    expected: dict = field(hash=False)

    def to_dict(self) -> dict:
        t = self.tally
        return {
            "scenario_id": self.scenario_id,
            "description": self.description,
            "tally": {"tp": t.tp, "tp_partial": t.tp_partial, "fp": t.fp, "tn": t.tn, "fn_hard": t.fn_hard},
            "expected": dict(self.expected),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioFixture":
        return cls(d["scenario_id"], d.get("description", ""), ConfusionTally(**d["tally"]), dict(d["expected"]))


def table_fixtures(which: str) -> list[ScenarioFixture]:
    which = which.lower()
    if which == "table3":
        return [
            ScenarioFixture(sid, desc, ConfusionTally(tp, 0, fp, tn, fn), dict(zip(TABLE3_METRICS, cells)))
            for sid, desc, (tp, fp, tn, fn), *cells in _TABLE3
        ]
    if which == "table5":
        out = []
        for sid, desc, (tp, tpb, fp, tn), *cells in _TABLE5:
            fn_hard = TABLE_TRUTH.a - tp - tpb
            out.append(ScenarioFixture(sid, desc, ConfusionTally(tp, tpb, fp, tn, fn_hard), dict(zip(TABLE5_METRICS, cells))))
        return out
    raise ValueError(f"unknown table {which!r}; expected table3 or table5")


def fixtures_to_json(fixtures) -> str:
    return json.dumps([fx.to_dict() for fx in fixtures], indent=2) + "\n"


def fixtures_from_json(text) -> list[ScenarioFixture]:
    return [ScenarioFixture.from_dict(d) for d in json.loads(text)]


def computed_values(t: ConfusionTally, stats: GroundTruthStats = TABLE_TRUTH) -> dict:
    """Every metric the tables publish, computed from a tally (None = n/a)."""
    s = score_tally(t, stats)
    return {
        "fn_eff": float(effective_counts(t).fn_eff),
        "pr": s.pr.value,
        "re": s.re.value,
        "f1": s.f1.value,
        "shd_classic": shd(t, ShdWeighting.CLASSIC),
        "shd_weighted": shd(t, ShdWeighting.WEIGHTED),
        "ddm": s.ddm,
        "bsf": s.bsf,
    }


def cell_tolerance(published: str) -> float:
    """Allowed error for a published cell: 0.0005, or half a unit for cells printed to 2 decimals."""
    _, dot, decimals = published.partition(".")
    return TWO_DECIMAL_TOLERANCE if dot and len(decimals) == 2 else TOLERANCE


def cell_matches(computed: float | None, published: str) -> bool:
    if published == "n/a":
        return computed is None
    if computed is None:
        return False
    return abs(computed - float(published)) <= cell_tolerance(published) + 1e-12


@dataclass(frozen=True)
class CellCheck:
    scenario_id: str
    metric: str
    computed: float | None
    published: str
    passed: bool


def check_fixtures(fixtures, stats: GroundTruthStats = TABLE_TRUTH) -> list[CellCheck]:
    checks = []
    for fx in fixtures:
        values = computed_values(fx.tally, stats)
        for metric, published in fx.expected.items():
            got = values[metric]
            checks.append(CellCheck(fx.scenario_id, metric, got, published, cell_matches(got, published)))
    return checks
