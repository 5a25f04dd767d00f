"""Pairwise classification of a learnt graph against a ground-truth DAG.

Every unordered node pair falls into exactly one :class:`PairClass`. A
reversed, undirected or bidirected version of a true arc is a partial
match; in equivalence-aware mode a learnt edge over a reversible true arc
(one that is undirected in the truth's CPDAG) counts as a complete match.

Effective counts fold partial matches half into TP and half into FN. They
are kept as doubled integers so nothing is rounded before the metrics
divide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .equivalence import cpdag_of
from .errors import DegenerateTruth, InvalidTrueMark, NotADag
from .graph import EdgeMark, MarkKind, MixedGraph, check_aligned, is_dag, max_edges


class EvaluationMode(enum.Enum):
    STRICT_DAG = "strict"
    EQUIVALENCE_AWARE = "equiv"


class PairClass(enum.Enum):
    COMPLETE_MATCH = "complete"
    PARTIAL_MATCH = "partial"
    NO_MATCH = "no_match"
    TRUE_INDEPENDENCE = "true_independence"
    FALSE_DEPENDENCE = "false_dependence"

    @property
    def penalty(self) -> float:
        return _PENALTIES[self]


_PENALTIES = {
    PairClass.COMPLETE_MATCH: 0.0,
    PairClass.PARTIAL_MATCH: 0.5,
    PairClass.NO_MATCH: 1.0,
    PairClass.TRUE_INDEPENDENCE: 0.0,
    PairClass.FALSE_DEPENDENCE: 1.0,
}


@dataclass(frozen=True)
class GroundTruthStats:
    a: int
    i: int

    @property
    def j(self) -> int:
        return self.a + self.i

    @property
    def w_a(self) -> Fraction:
        return Fraction(1, self.a)

    @property
    def w_i(self) -> Fraction:
        return Fraction(1, self.i)

    @classmethod
    def from_counts(cls, a: int, i: int) -> "GroundTruthStats":
        if a < 1 or i < 1:
            raise DegenerateTruth(f"ground truth needs at least one arc and one independence (a={a}, i={i})")
        return cls(a, i)


@dataclass(frozen=True)
class ConfusionTally:
    tp: int
    tp_partial: int
    fp: int
    tn: int
    fn_hard: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.tp, self.tp_partial, self.fp, self.tn, self.fn_hard)

    @property
    def a(self) -> int:
        return self.tp + self.tp_partial + self.fn_hard

    @property
    def i(self) -> int:
        return self.fp + self.tn


@dataclass(frozen=True)
class EffectiveCounts:
    tp_eff2: int
    fn_eff2: int
    fp: int
    tn: int
    learnt_edges: int

    @property
    def tp_eff(self) -> Fraction:
        return Fraction(self.tp_eff2, 2)

    @property
    def fn_eff(self) -> Fraction:
        return Fraction(self.fn_eff2, 2)


def ground_truth_stats(true_graph: MixedGraph) -> GroundTruthStats:
    if not is_dag(true_graph):
        raise NotADag("ground truth must be a DAG")
    a = true_graph.edge_count
    return GroundTruthStats.from_counts(a, max_edges(len(true_graph)) - a)


def classify_pair(true_mark: EdgeMark, learnt_mark: EdgeMark, rule6: bool = False) -> PairClass:
    if true_mark.kind is MarkKind.ABSENT:
        if learnt_mark.is_absent:
            return PairClass.TRUE_INDEPENDENCE
        return PairClass.FALSE_DEPENDENCE
    if true_mark.kind is not MarkKind.DIRECTED:
        raise InvalidTrueMark(f"ground-truth marks must be directed or absent, got {true_mark.kind.value}")
    if learnt_mark.is_absent:
        return PairClass.NO_MATCH
    if learnt_mark == true_mark or rule6:
        return PairClass.COMPLETE_MATCH
    return PairClass.PARTIAL_MATCH


def reversible_pairs(true_graph: MixedGraph) -> frozenset:
    """Pairs whose true arc is not compelled, i.e. undirected in the CPDAG."""
    cp = cpdag_of(true_graph)
    return frozenset(frozenset((u, v)) for u, v, m in cp.edges() if m.kind is MarkKind.UNDIRECTED)


def tally(
    true_graph: MixedGraph,
    learnt_graph: MixedGraph,
    mode: EvaluationMode = EvaluationMode.STRICT_DAG,
    *,
    reversible: frozenset | None = None,
) -> ConfusionTally:
    """Classify all pairs of an aligned graph pair.

    ``reversible`` lets batch callers pass a precomputed
    :func:`reversible_pairs` result for a shared truth.
    """
    check_aligned(true_graph, learnt_graph)
    ground_truth_stats(true_graph)
    if mode is EvaluationMode.EQUIVALENCE_AWARE and reversible is None:
        reversible = reversible_pairs(true_graph)
    elif mode is EvaluationMode.STRICT_DAG:
        reversible = frozenset()

    counts = dict.fromkeys(PairClass, 0)
    for u, v in true_graph.pairs():
        t = true_graph.edge_between(u, v)
        rule6 = frozenset((u, v)) in reversible
        counts[classify_pair(t, learnt_graph.edge_between(u, v), rule6)] += 1
    return ConfusionTally(
        tp=counts[PairClass.COMPLETE_MATCH],
        tp_partial=counts[PairClass.PARTIAL_MATCH],
        fp=counts[PairClass.FALSE_DEPENDENCE],
        tn=counts[PairClass.TRUE_INDEPENDENCE],
        fn_hard=counts[PairClass.NO_MATCH],
    )


def effective_counts(t: ConfusionTally) -> EffectiveCounts:
    return EffectiveCounts(
        tp_eff2=2 * t.tp + t.tp_partial,
        fn_eff2=2 * t.fn_hard + t.tp_partial,
        fp=t.fp,
        tn=t.tn,
        learnt_edges=t.tp + t.tp_partial + t.fp,
    )
