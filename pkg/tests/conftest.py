"""Shared brute-force oracles.

These deliberately avoid the package's own graph algorithms: DAGs are
plain sets of (tail, head) tuples and every property is recomputed from
scratch here.
"""

from collections import deque
from itertools import combinations, product
import random
import sys

import pytest

from bnscore import MixedGraph, directed
from bnscore.graph import BIDIRECTED, UNDIRECTED


def has_cycle_dfs(nodes, arcs):
    children = {n: [] for n in nodes}
    for t, h in arcs:
        children[t].append(h)
    colour = dict.fromkeys(nodes, 0)

    def visit(n):
        colour[n] = 1
        for c in children[n]:
            if colour[c] == 1 or (colour[c] == 0 and visit(c)):
                return True
        colour[n] = 2
        return False

    return any(colour[n] == 0 and visit(n) for n in nodes)


def all_dags(nodes):
    """Every labeled DAG on ``nodes`` as a frozenset of arcs."""
    pairs = list(combinations(nodes, 2))
    out = []
    for states in product((0, 1, 2), repeat=len(pairs)):
        arcs = []
        for (u, v), s in zip(pairs, states):
            if s == 1:
                arcs.append((u, v))
            elif s == 2:
                arcs.append((v, u))
        if not has_cycle_dfs(nodes, arcs):
            out.append(frozenset(arcs))
    return out


def to_graph(nodes, arcs):
    return MixedGraph(nodes).with_edges((t, h, directed(t, h)) for t, h in arcs)


def oracle_key(arcs):
    """(skeleton, v-structures) computed straight from an arc set."""
    skel = frozenset(frozenset(a) for a in arcs)
    parents = {}
    for t, h in arcs:
        parents.setdefault(h, set()).add(t)
    vs = set()
    for c, ps in parents.items():
        for a, b in combinations(sorted(ps), 2):
            if frozenset((a, b)) not in skel:
                vs.add((c, a, b))
    return skel, frozenset(vs)


def bucket_cpdags(nodes):
    """Map each DAG (arc set) to its CPDAG edge dict via class enumeration."""
    buckets = {}
    for arcs in all_dags(nodes):
        buckets.setdefault(oracle_key(arcs), []).append(arcs)
    result = {}
    for members in buckets.values():
        cp = {}
        for edge in oracle_key(members[0])[0]:
            orientations = {next(a for a in m if frozenset(a) == edge) for m in members}
            cp[edge] = orientations.pop() if len(orientations) == 1 else None
        for m in members:
            result[m] = cp
    return result, buckets


def shd_bfs(nodes, start, goal):
    """Fewest single insert/delete/reverse edits from ``start`` to ``goal`` (arc sets)."""
    pairs = list(combinations(nodes, 2))

    def encode(arcs):
        state = []
        for u, v in pairs:
            state.append(1 if (u, v) in arcs else 2 if (v, u) in arcs else 0)
        return tuple(state)

    src, dst = encode(start), encode(goal)
    dist = {src: 0}
    queue = deque([src])
    while queue:
        s = queue.popleft()
        if s == dst:
            return dist[s]
        for k, cur in enumerate(s):
            if cur == 0:
                moves = (1, 2)
            else:
                moves = (0, 3 - cur)
            for m in moves:
                nxt = s[:k] + (m,) + s[k + 1:]
                if nxt not in dist:
                    dist[nxt] = dist[s] + 1
                    queue.append(nxt)
    raise AssertionError("unreachable")


def random_mixed(nodes, rng, p_edge=0.4, marks=(0.55, 0.15, 0.15, 0.15)):
    """Random learnt graph with directed/undirected/bidirected marks."""
    updates = []
    for u, v in combinations(nodes, 2):
        if rng.random() >= p_edge:
            continue
        r = rng.random()
        if r < marks[0]:
            updates.append((u, v, directed(u, v)))
        elif r < marks[0] + marks[1]:
            updates.append((u, v, directed(v, u)))
        elif r < marks[0] + marks[1] + marks[2]:
            updates.append((u, v, UNDIRECTED))
        else:
            updates.append((u, v, BIDIRECTED))
    return MixedGraph(nodes).with_edges(updates)


@pytest.fixture(scope="session")
def four_nodes():
    return ("A", "B", "C", "D")


@pytest.fixture(scope="session")
def dags4(four_nodes):
    return all_dags(four_nodes)


@pytest.fixture(scope="session")
def cpdag_oracle4(four_nodes):
    return bucket_cpdags(four_nodes)


@pytest.fixture
def rng():
    return random.Random(20201)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
