"""Markov equivalence: skeletons, v-structures, Meek closure and CPDAGs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import NoSuchArc, NotADag, NotAPdag
from .graph import UNDIRECTED, MarkKind, MixedGraph, check_aligned, directed, is_dag


@dataclass(frozen=True)
class Skeleton:
    nodes: tuple
    adjacencies: frozenset

    def __eq__(self, other):
        if not isinstance(other, Skeleton):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self.adjacencies == other.adjacencies

    def __hash__(self):
        return hash((frozenset(self.nodes), self.adjacencies))


@dataclass(frozen=True)
class VStructure:
    collider: str
    parents: frozenset


def _require_dag(g: MixedGraph):
    if not is_dag(g):
        raise NotADag("expected a DAG")


def skeleton(dag: MixedGraph) -> Skeleton:
    _require_dag(dag)
    return Skeleton(dag.nodes, frozenset(frozenset((u, v)) for u, v, _ in dag.edges()))


def _parents(dag: MixedGraph) -> dict[str, list[str]]:
    parents = {n: [] for n in dag.nodes}
    for tail, head in dag.arcs():
        parents[head].append(tail)
    return parents


def v_structures(dag: MixedGraph) -> frozenset:
    _require_dag(dag)
    return _v_structures(dag)


def _v_structures(dag: MixedGraph) -> frozenset:
    found = set()
    for c, ps in _parents(dag).items():
        for a, b in combinations(ps, 2):
            if not dag.adjacent(a, b):
                found.add(VStructure(c, frozenset((a, b))))
    return frozenset(found)


def markov_equivalent(g1: MixedGraph, g2: MixedGraph) -> bool:
    _require_dag(g1)
    _require_dag(g2)
    check_aligned(g1, g2)
    if {frozenset(a) for a in g1.arcs()} != {frozenset(a) for a in g2.arcs()}:
        return False
    return _v_structures(g1) == _v_structures(g2)


class _Pdag:
    """Mutable adjacency view used while closing a PDAG under the orientation rules."""

    def __init__(self, g: MixedGraph):
        self.g = g
        self.nodes = g.nodes
        self.adj = {n: set() for n in g.nodes}
        self.parents = {n: set() for n in g.nodes}
        self.und = {n: set() for n in g.nodes}
        for u, v, m in g.edges():
            self.adj[u].add(v)
            self.adj[v].add(u)
            if m.is_directed:
                self.parents[m.head].add(m.tail)
            else:
                self.und[u].add(v)
                self.und[v].add(u)

    def orient(self, a, b):
        self.und[a].discard(b)
        self.und[b].discard(a)
        self.parents[b].add(a)

    def directed(self, a, b):
        return a in self.parents[b]

    def _r1(self, a, b):
        # c -> a - b with c, b nonadjacent
        return any(c not in self.adj[b] and c != b for c in self.parents[a])

    def _r2(self, a, b):
        # a -> c -> b
        return any(a in self.parents[c] for c in self.parents[b])

    def _r3(self, a, b):
        # a - c -> b, a - d -> b, c and d nonadjacent
        cands = [c for c in self.und[a] if c in self.parents[b]]
        return any(d not in self.adj[c] for c, d in combinations(cands, 2))

    def _r4(self, a, b):
        # a - c -> d -> b, a adjacent d, c and b nonadjacent
        for d in self.parents[b]:
            if d not in self.adj[a]:
                continue
            for c in self.parents[d]:
                if c in self.und[a] and c != b and c not in self.adj[b]:
                    return True
        return False

    def first_applicable(self):
        for a in self.nodes:
            for b in sorted(self.und[a], key=self.g.index):
                if self._r1(a, b) or self._r2(a, b) or self._r3(a, b) or self._r4(a, b):
                    return a, b
        return None

    def to_graph(self) -> MixedGraph:
        updates = []
        for u, v, m in self.g.edges():
            if m.kind is MarkKind.UNDIRECTED and self.directed(u, v):
                updates.append((u, v, directed(u, v)))
            elif m.kind is MarkKind.UNDIRECTED and self.directed(v, u):
                updates.append((u, v, directed(v, u)))
        return self.g.with_edges(updates)


def meek_closure(pdag: MixedGraph) -> MixedGraph:
    """Apply orientation rules R1-R4 to a fixpoint.

    Undirected pairs are scanned in node order and one orientation is made
    per pass, so the result does not depend on dict ordering.
    """
    if any(m.kind not in (MarkKind.DIRECTED, MarkKind.UNDIRECTED) for _, _, m in pdag.edges()):
        raise NotAPdag("meek_closure accepts directed and undirected marks only")
    state = _Pdag(pdag)
    while (hit := state.first_applicable()) is not None:
        state.orient(*hit)
    return state.to_graph()


def cpdag_of(dag: MixedGraph) -> MixedGraph:
    _require_dag(dag)
    compelled_arcs = set()
    for vs in v_structures(dag):
        for p in vs.parents:
            compelled_arcs.add((p, vs.collider))
    updates = [
        (u, v, directed(m.tail, m.head) if (m.tail, m.head) in compelled_arcs else UNDIRECTED)
        for u, v, m in dag.edges()
    ]
    return meek_closure(dag.with_edges(updates))


def compelled(dag: MixedGraph, a: str, b: str) -> bool:
    _require_dag(dag)
    if not dag.edge_between(a, b).is_directed:
        raise NoSuchArc(f"no arc between {a!r} and {b!r}")
    return cpdag_of(dag).edge_between(a, b).is_directed
