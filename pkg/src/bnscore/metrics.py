"""Precision, recall, F1, SHD, DDM and the balanced scoring function.

Scores are computed exactly from integer/half-integer counts with
:class:`fractions.Fraction` and converted to float once at the end, so
boundary values such as BSF = -1, 0 and 1 come out exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .confusion import (
    ConfusionTally,
    EffectiveCounts,
    EvaluationMode,
    GroundTruthStats,
    effective_counts,
    ground_truth_stats,
    tally,
)
from .graph import MixedGraph


class UndefinedReason(enum.Enum):
    NO_LEARNT_EDGES = "no_learnt_edges"
    ZERO_DENOMINATOR = "zero_denominator"


@dataclass(frozen=True)
class Score:
    """A metric value, or the reason it cannot be computed."""

    value: float | None
    reason: UndefinedReason | None = None

    @classmethod
    def defined(cls, value) -> "Score":
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"score must be finite, got {value}")
        return cls(value)

    @classmethod
    def undefined(cls, reason: UndefinedReason) -> "Score":
        return cls(None, reason)

    @property
    def is_defined(self) -> bool:
        return self.value is not None

    def __str__(self):
        return "n/a" if self.value is None else repr(self.value)


class ShdWeighting(enum.Enum):
    CLASSIC = "classic"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class MetricScores:
    pr: Score
    re: Score
    f1: Score
    shd_classic: float
    shd_weighted: float
    ddm: float
    bsf: float


def precision(e: EffectiveCounts) -> Score:
    # partial matches count fully in the denominator, half in the numerator
    if e.learnt_edges == 0:
        return Score.undefined(UndefinedReason.NO_LEARNT_EDGES)
    return Score.defined(e.tp_eff / e.learnt_edges)


def recall(e: EffectiveCounts, s: GroundTruthStats) -> Score:
    return Score.defined(e.tp_eff / s.a)


def f1(pr: Score, re: Score) -> Score:
    if not (pr.is_defined and re.is_defined):
        return Score.undefined(UndefinedReason.ZERO_DENOMINATOR)
    # go through Fraction so 2pr*re/(pr+re) is rounded once
    p, r = Fraction(pr.value), Fraction(re.value)
    if p + r == 0:
        return Score.undefined(UndefinedReason.ZERO_DENOMINATOR)
    return Score.defined(2 * p * r / (p + r))


def shd(t: ConfusionTally, weighting: ShdWeighting = ShdWeighting.CLASSIC) -> float:
    if weighting is ShdWeighting.CLASSIC:
        return float(t.fp + t.fn_hard + t.tp_partial)
    return float(Fraction(2 * (t.fp + t.fn_hard) + t.tp_partial, 2))


def ddm(e: EffectiveCounts, s: GroundTruthStats) -> float:
    return float((e.tp_eff - e.fn_eff - e.fp) / s.a)


def bsf(e: EffectiveCounts, s: GroundTruthStats) -> float:
    return float((e.tp_eff / s.a + Fraction(e.tn, s.i) - Fraction(e.fp, s.i) - e.fn_eff / s.a) / 2)


def bsf_weighted_sum(e: EffectiveCounts, s: GroundTruthStats) -> float:
    """Prevalence-weighted sum over the four confusion parameters.

    Algebraically identical to :func:`bsf`; kept separate as a cross-check.
    The weights stay rational: rounding 1/a and 1/i to floats first costs
    several ulp whenever the terms nearly cancel.
    """
    terms = (e.tp_eff * s.w_a, e.tn * s.w_i, -e.fp * s.w_i, -e.fn_eff * s.w_a)
    return float(sum(terms, Fraction(0)) / 2)


def score_tally(t: ConfusionTally, s: GroundTruthStats) -> MetricScores:
    e = effective_counts(t)
    pr, re = precision(e), recall(e, s)
    return MetricScores(
        pr=pr,
        re=re,
        f1=f1(pr, re),
        shd_classic=shd(t, ShdWeighting.CLASSIC),
        shd_weighted=shd(t, ShdWeighting.WEIGHTED),
        ddm=ddm(e, s),
        bsf=bsf(e, s),
    )


def score_all(
    true_graph: MixedGraph,
    learnt_graph: MixedGraph,
    mode: EvaluationMode = EvaluationMode.STRICT_DAG,
) -> MetricScores:
    t = tally(true_graph, learnt_graph, mode)
    return score_tally(t, ground_truth_stats(true_graph))
