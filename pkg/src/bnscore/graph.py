"""Mixed graph model shared by every other module.

A :class:`MixedGraph` holds an ordered node list and at most one
:class:`EdgeMark` per unordered node pair. Graphs are treated as values:
``set_edge`` returns a new graph and leaves the original untouched.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import (
    DuplicateNode,
    EmptyNodeSet,
    InvalidLabel,
    NodeSetMismatch,
    SelfLoop,
    UnknownNode,
)


class MarkKind(enum.Enum):
    ABSENT = "absent"
    DIRECTED = "directed"
    UNDIRECTED = "undirected"
    BIDIRECTED = "bidirected"


@dataclass(frozen=True)
class EdgeMark:
    """Mark on a node pair. ``tail``/``head`` are set only for directed marks."""

    kind: MarkKind
    tail: str | None = None
    head: str | None = None

    @property
    def is_absent(self) -> bool:
        return self.kind is MarkKind.ABSENT

    @property
    def is_directed(self) -> bool:
        return self.kind is MarkKind.DIRECTED

    def __str__(self):
        if self.kind is MarkKind.DIRECTED:
            return f"{self.tail} -> {self.head}"
        return self.kind.value


ABSENT = EdgeMark(MarkKind.ABSENT)
UNDIRECTED = EdgeMark(MarkKind.UNDIRECTED)
BIDIRECTED = EdgeMark(MarkKind.BIDIRECTED)


def directed(tail: str, head: str) -> EdgeMark:
    return EdgeMark(MarkKind.DIRECTED, tail, head)


class GraphKind(enum.Enum):
    DAG = "dag"
    PDAG = "pdag"
    MIXED = "mixed"


def pair(a: str, b: str) -> frozenset:
    return frozenset((a, b))


def validate_label(label) -> str:
    if not isinstance(label, str) or not label:
        raise InvalidLabel(f"invalid node label {label!r}")
    if label != label.strip() or "," in label or any(c.isspace() for c in label):
        raise InvalidLabel(f"invalid node label {label!r}")
    if "#" in label:
        raise InvalidLabel(f"node label may not contain '#': {label!r}")
    return label


class MixedGraph:
    __slots__ = ("_nodes", "_index", "_edges")

    def __init__(self, nodes: Iterable[str], edges: Mapping[frozenset, EdgeMark] | None = None):
        nodes = tuple(nodes)
        if not nodes:
            raise EmptyNodeSet("a graph needs at least one node")
        index = {}
        for label in nodes:
            validate_label(label)
            if label in index:
                raise DuplicateNode(f"duplicate node {label!r}")
            index[label] = len(index)
        self._nodes = nodes
        self._index = index
        self._edges = {}
        for key, mark in (edges or {}).items():
            if len(key) != 2:
                raise SelfLoop(f"self loop on {sorted(key)!r}")
            a, b = self._check_pair(*sorted(key))
            self._store(a, b, mark)

    @property
    def nodes(self) -> tuple:
        return self._nodes

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, label):
        return label in self._index

    def index(self, label: str) -> int:
        return self._index[label]

    def _check_pair(self, a, b):
        for x in (a, b):
            if x not in self._index:
                raise UnknownNode(f"unknown node {x!r}")
        if a == b:
            raise SelfLoop(f"self loop on {a!r}")
        return a, b

    def _store(self, a, b, mark):
        if mark.is_directed and {mark.tail, mark.head} != {a, b}:
            raise ValueError(f"mark {mark} does not match pair {{{a}, {b}}}")
        if mark.is_absent:
            self._edges.pop(pair(a, b), None)
        else:
            self._edges[pair(a, b)] = mark

    def set_edge(self, a: str, b: str, mark: EdgeMark) -> "MixedGraph":
        """Return a copy with ``mark`` on ``{a, b}``, replacing any previous mark."""
        self._check_pair(a, b)
        g = self.copy()
        g._store(a, b, mark)
        return g

    def with_edges(self, updates: Iterable[tuple[str, str, EdgeMark]]) -> "MixedGraph":
        g = self.copy()
        for a, b, mark in updates:
            g._check_pair(a, b)
            g._store(a, b, mark)
        return g

    def edge_between(self, a: str, b: str) -> EdgeMark:
        self._check_pair(a, b)
        return self._edges.get(pair(a, b), ABSENT)

    def copy(self) -> "MixedGraph":
        g = MixedGraph.__new__(MixedGraph)
        g._nodes = self._nodes
        g._index = self._index
        g._edges = dict(self._edges)
        return g

    def edges(self) -> Iterator[tuple[str, str, EdgeMark]]:
        """Non-absent pairs as ``(u, v, mark)`` with ``u`` before ``v`` in node order."""
        for key, mark in self._edges.items():
            u, v = sorted(key, key=self._index.__getitem__)
            yield u, v, mark

    def arcs(self) -> list[tuple[str, str]]:
        return [(m.tail, m.head) for m in self._edges.values() if m.is_directed]

    def pairs(self) -> Iterator[tuple[str, str]]:
        return combinations(self._nodes, 2)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def adjacent(self, a: str, b: str) -> bool:
        return pair(a, b) in self._edges

    def relabel(self, mapping: Mapping[str, str]) -> "MixedGraph":
        updates = []
        g = MixedGraph([mapping[n] for n in self._nodes])
        for key, mark in self._edges.items():
            a, b = (mapping[x] for x in key)
            if mark.is_directed:
                mark = directed(mapping[mark.tail], mapping[mark.head])
            updates.append((a, b, mark))
        return g.with_edges(updates)

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def same_structure(self, other: "MixedGraph") -> bool:
        """Equality ignoring node order."""
        return set(self._nodes) == set(other._nodes) and self._edges == other._edges

    def __hash__(self):
        return hash((self._nodes, frozenset(self._edges.items())))

    def __repr__(self):
        body = ", ".join(str(m) if m.is_directed else f"{u} {m.kind.value} {v}" for u, v, m in self.edges())
        return f"MixedGraph(nodes={list(self._nodes)}, edges=[{body}])"


def new_graph(nodes: Iterable[str]) -> MixedGraph:
    return MixedGraph(nodes)


def set_edge(graph: MixedGraph, a: str, b: str, mark: EdgeMark) -> MixedGraph:
    return graph.set_edge(a, b, mark)


def edge_between(graph: MixedGraph, a: str, b: str) -> EdgeMark:
    return graph.edge_between(a, b)


def max_edges(n: int) -> int:
    if n < 1:
        raise ValueError("node count must be at least 1")
    return n * (n - 1) // 2


def topological_order(graph: MixedGraph) -> list[str] | None:
    """Kahn's algorithm over the directed marks; None when they contain a cycle.

    Ties are broken by node order so the result is deterministic.
    """
    indegree = {n: 0 for n in graph.nodes}
    children = {n: [] for n in graph.nodes}
    for tail, head in graph.arcs():
        children[tail].append(head)
        indegree[head] += 1
    for n in children:
        children[n].sort(key=graph.index)
    ready = deque(n for n in graph.nodes if indegree[n] == 0)
    order = []
    while ready:
        n = ready.popleft()
        order.append(n)
        for c in children[n]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
    if len(order) != len(graph):
        return None
    return order


def is_dag(graph: MixedGraph) -> bool:
    if any(not m.is_directed for _, _, m in graph.edges()):
        return False
    return topological_order(graph) is not None


def graph_kind(graph: MixedGraph) -> GraphKind:
    kinds = {m.kind for _, _, m in graph.edges()}
    if kinds <= {MarkKind.DIRECTED} and topological_order(graph) is not None:
        return GraphKind.DAG
    if kinds <= {MarkKind.DIRECTED, MarkKind.UNDIRECTED}:
        return GraphKind.PDAG
    return GraphKind.MIXED


def check_aligned(true_graph: MixedGraph, learnt_graph: MixedGraph) -> None:
    diff = set(true_graph.nodes) ^ set(learnt_graph.nodes)
    if diff:
        raise NodeSetMismatch(diff)
