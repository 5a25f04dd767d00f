"""Score learnt Bayesian-network structures against a ground-truth DAG.

Metrics: precision, recall, F1, SHD (classic and partial-weighted), DDM and
the balanced scoring function (BSF), with partial-match and
Markov-equivalence-aware pair classification.
"""

from .confusion import (
    ConfusionTally,
    EffectiveCounts,
    EvaluationMode,
    GroundTruthStats,
    PairClass,
    classify_pair,
    effective_counts,
    ground_truth_stats,
    tally,
)
from .equivalence import compelled, cpdag_of, markov_equivalent, meek_closure, skeleton, v_structures
from .graph import (
    ABSENT,
    BIDIRECTED,
    UNDIRECTED,
    EdgeMark,
    GraphKind,
    MarkKind,
    MixedGraph,
    check_aligned,
    directed,
    edge_between,
    graph_kind,
    is_dag,
    max_edges,
    new_graph,
    set_edge,
)
from .graph_io import parse_graph, parse_manifest, serialize_graph, write_report
from .metrics import MetricScores, Score, ShdWeighting, bsf, ddm, f1, precision, recall, score_all, score_tally, shd
from .normalize import (
    RankedSeries,
    ScoredRecord,
    build_series,
    disagreement_counts,
    normalize_bsf,
    normalize_ddm,
    normalize_f1,
    normalize_shd,
)

__version__ = "0.1.0"
