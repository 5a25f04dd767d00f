"""Rescale scores to [0, 1] (1 = best) and rank learnt graphs by BSF.

SHD and DDM are rescaled relative to the other learnt graphs scored
against the same ground truth, so every record carries a ``group_id``.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .confusion import ConfusionTally
from .errors import DegenerateGroupWarning, OutOfRange, UnknownMetric
from .metrics import MetricScores, Score, ShdWeighting


@dataclass(frozen=True)
class ScoredRecord:
    group_id: str
    learnt_id: str
    tally: ConfusionTally
    scores: MetricScores

    def __post_init__(self):
        if not self.group_id or not self.learnt_id:
            raise ValueError("group_id and learnt_id must be non-empty")


@dataclass(frozen=True)
class NormalizedRecord:
    record: ScoredRecord
    bsf_n: float
    shd_n: float
    ddm_n: float
    f1_n: float

    @property
    def group_id(self):
        return self.record.group_id

    @property
    def learnt_id(self):
        return self.record.learnt_id

    @property
    def scores(self):
        return self.record.scores

    def metric(self, name: str) -> float | None:
        if name in ("pr", "re"):
            return getattr(self.record.scores, name).value
        if name in METRIC_NAMES:
            return getattr(self, name)
        raise UnknownMetric(f"unknown metric {name!r}; expected one of {', '.join(METRIC_NAMES)}")


METRIC_NAMES = ("bsf_n", "pr", "re", "f1_n", "shd_n", "ddm_n")


@dataclass(frozen=True)
class RankedSeries:
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def normalize_bsf(bsf: float) -> float:
    if not -1.0 <= bsf <= 1.0:
        raise OutOfRange(f"BSF {bsf} outside [-1, 1]")
    return (bsf + 1.0) / 2.0


def normalize_shd(shd_values_in_group: Sequence[float]) -> list[float]:
    if not shd_values_in_group:
        raise ValueError("empty SHD group")
    top = max(shd_values_in_group)
    if top == 0:
        warnings.warn("every SHD in the group is 0; all graphs normalize to 1", DegenerateGroupWarning, stacklevel=2)
        return [1.0] * len(shd_values_in_group)
    return [1.0 - v / top for v in shd_values_in_group]


def normalize_ddm(ddm_values_in_group: Sequence[float]) -> list[float]:
    if not ddm_values_in_group:
        raise ValueError("empty DDM group")
    offset = abs(min(ddm_values_in_group))
    if min(ddm_values_in_group) > 0:
        warnings.warn(
            "every DDM in the group is positive; the group minimum does not map to 0",
            DegenerateGroupWarning,
            stacklevel=2,
        )
    out = [(v + offset) / (offset + 1.0) for v in ddm_values_in_group]
    if any(not 0.0 <= x <= 1.0 for x in out):
        warnings.warn("normalized DDM clamped to [0, 1]", DegenerateGroupWarning, stacklevel=2)
    return [_clamp01(x) for x in out]


def normalize_f1(f1: Score) -> float:
    return f1.value if f1.is_defined else 0.0


def _shd_value(scores: MetricScores, weighting: ShdWeighting) -> float:
    return scores.shd_classic if weighting is ShdWeighting.CLASSIC else scores.shd_weighted


def normalize_records(
    records: Sequence[ScoredRecord],
    shd_weighting: ShdWeighting = ShdWeighting.WEIGHTED,
) -> list[NormalizedRecord]:
    """Attach normalized columns, grouping SHD/DDM by ``group_id``. Input order is kept."""
    seen = set()
    groups = defaultdict(list)
    for idx, rec in enumerate(records):
        key = (rec.group_id, rec.learnt_id)
        if key in seen:
            raise ValueError(f"duplicate record {key}")
        seen.add(key)
        groups[rec.group_id].append(idx)

    shd_n = [0.0] * len(records)
    ddm_n = [0.0] * len(records)
    for members in groups.values():
        shds = normalize_shd([_shd_value(records[k].scores, shd_weighting) for k in members])
        ddms = normalize_ddm([records[k].scores.ddm for k in members])
        for k, s, d in zip(members, shds, ddms):
            shd_n[k], ddm_n[k] = s, d

    return [
        NormalizedRecord(
            record=rec,
            bsf_n=normalize_bsf(rec.scores.bsf),
            shd_n=shd_n[k],
            ddm_n=ddm_n[k],
            f1_n=normalize_f1(rec.scores.f1),
        )
        for k, rec in enumerate(records)
    ]


def build_series(
    records: Sequence[ScoredRecord],
    shd_weighting: ShdWeighting = ShdWeighting.WEIGHTED,
) -> RankedSeries:
    normalized = normalize_records(records, shd_weighting)
    normalized.sort(key=lambda r: (-r.scores.bsf, r.group_id, r.learnt_id))
    return RankedSeries(tuple(normalized))


def disagreement_counts(series: RankedSeries, metric: str) -> int:
    """Count pairs the BSF ranks strictly one way and ``metric`` strictly the other.

    Pairs where either metric value is undefined (Pr of an empty graph) are skipped.
    """
    if metric not in METRIC_NAMES:
        raise UnknownMetric(f"unknown metric {metric!r}; expected one of {', '.join(METRIC_NAMES)}")
    entries = series.entries
    values = [e.metric(metric) for e in entries]
    count = 0
    for x in range(len(entries)):
        for y in range(x + 1, len(entries)):
            if values[x] is None or values[y] is None:
                continue
            if entries[x].scores.bsf > entries[y].scores.bsf and values[y] > values[x]:
                count += 1
    return count
