"""Command-line entry point: ``bnscore {compare,batch,rank,scenarios,gen}``.

Exit codes: 0 success, 1 internal error, 2 input/validation error,
3 a published table was not reproduced.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import graph_io
from .confusion import EvaluationMode, ground_truth_stats, reversible_pairs, tally
from .errors import DegenerateGroupWarning, GraphScoreError, InfeasiblePlan
from .metrics import ShdWeighting, score_tally
from .normalize import METRIC_NAMES, ScoredRecord, build_series, disagreement_counts, normalize_records
from .scenarios import (
    PerturbationPlan,
    TABLE3_METRICS,
    TABLE5_METRICS,
    SplitMix64,
    cell_tolerance,
    check_fixtures,
    fixtures_from_json,
    perturb_detailed,
    random_dag,
    random_dag_with_arcs,
    table_fixtures,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_REPRODUCTION = 3


class InputError(Exception):
    """One or more input problems, already formatted for the user."""

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("\n".join(self.messages))


@dataclass(frozen=True)
class RunConfig:
    command: str
    mode: EvaluationMode = EvaluationMode.STRICT_DAG
    shd_weighting: str = "both"
    output_format: str = "csv"
    output_path: Path | None = None
    seed: int | None = None

    @property
    def normalized_shd(self) -> ShdWeighting:
        return ShdWeighting.CLASSIC if self.shd_weighting == "classic" else ShdWeighting.WEIGHTED

    @property
    def omitted_columns(self) -> tuple:
        return {"classic": ("shd_weighted",), "weighted": ("shd_classic",)}.get(self.shd_weighting, ())


def _emit(data: bytes, path: Path | None, stdout) -> None:
    if path is None:
        stdout.buffer.write(data) if hasattr(stdout, "buffer") else stdout.write(data.decode("utf-8"))
        stdout.flush()
    else:
        path.write_bytes(data)


def _read_graph(path: Path):
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError([f"{path}: {exc.strerror or exc}"]) from None
    try:
        return graph_io.parse_graph(data)
    except GraphScoreError as exc:
        raise InputError([f"{path}: {exc}"]) from None


def _score(true_graph, learnt_graph, config: RunConfig, reversible=None):
    t = tally(true_graph, learnt_graph, config.mode, reversible=reversible)
    return t, score_tally(t, ground_truth_stats(true_graph))


def cmd_compare(true_path: Path, learnt_path: Path, config: RunConfig, stdout=sys.stdout) -> int:
    errors = []
    graphs = []
    for p in (true_path, learnt_path):
        try:
            graphs.append(_read_graph(p))
        except InputError as exc:
            errors.extend(exc.messages)
    if errors:
        raise InputError(errors)
    try:
        t, scores = _score(*graphs, config)
    except GraphScoreError as exc:
        raise InputError([f"{learnt_path}: {exc}"]) from None
    record = ScoredRecord(Path(true_path).stem, Path(learnt_path).stem, t, scores)
    # shd_n and ddm_n are relative to a group; a lone graph has nothing to compare against
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateGroupWarning)
        rows = normalize_records([record], config.normalized_shd)
    omit = config.omitted_columns + ("shd_n", "ddm_n")
    _emit(graph_io.write_report(rows, config.output_format, omit), config.output_path, stdout)
    return EXIT_OK


def score_manifest(manifest_path: Path, config: RunConfig) -> list[ScoredRecord]:
    """Score every learnt graph of a manifest, collecting all errors before failing."""
    try:
        manifest = graph_io.parse_manifest(Path(manifest_path).read_bytes())
    except OSError as exc:
        raise InputError([f"{manifest_path}: {exc.strerror or exc}"]) from None
    except GraphScoreError as exc:
        raise InputError([f"{manifest_path}: {exc}"]) from None

    base = Path(manifest_path).parent
    errors = []
    records = []
    for entry in manifest.entries:
        try:
            truth = _read_graph(base / entry.true_path)
            ground_truth_stats(truth)
            reversible = reversible_pairs(truth) if config.mode is EvaluationMode.EQUIVALENCE_AWARE else None
        except InputError as exc:
            errors.extend(exc.messages)
            truth = None
        except GraphScoreError as exc:
            errors.append(f"{base / entry.true_path}: {exc}")
            truth = None
        ids = {}
        for rel in entry.learnt_paths:
            path = base / rel
            learnt_id = Path(rel).stem
            if learnt_id in ids:
                errors.append(f"{path}: learnt id {learnt_id!r} already used by {ids[learnt_id]} in group {entry.group_id!r}")
                continue
            ids[learnt_id] = path
            try:
                learnt = _read_graph(path)
            except InputError as exc:
                errors.extend(exc.messages)
                continue
            if truth is None:
                continue
            try:
                t, scores = _score(truth, learnt, config, reversible)
            except GraphScoreError as exc:
                errors.append(f"{path}: {exc}")
                continue
            records.append(ScoredRecord(entry.group_id, learnt_id, t, scores))
    if errors:
        raise InputError(errors)
    return records


def cmd_batch(manifest_path: Path, config: RunConfig, stdout=sys.stdout) -> int:
    records = score_manifest(manifest_path, config)
    rows = normalize_records(records, config.normalized_shd)
    _emit(graph_io.write_report(rows, config.output_format, config.omitted_columns), config.output_path, stdout)
    return EXIT_OK


def cmd_rank(manifest_path: Path, config: RunConfig, stdout=sys.stdout) -> int:
    series = build_series(score_manifest(manifest_path, config), config.normalized_shd)
    counts = {m: disagreement_counts(series, m) for m in METRIC_NAMES}
    if config.output_format == "json":
        doc = {
            "series": [
                {c: graph_io.json_cell(row[c]) for c in graph_io.SERIES_COLUMNS}
                for row in graph_io.series_rows(series)
            ],
            "disagreements": counts,
        }
        _emit(graph_io.to_json(doc), config.output_path, stdout)
        return EXIT_OK
    summary = graph_io.rows_to_csv(("metric", "disagreements"), [{"metric": m, "disagreements": n} for m, n in counts.items()])
    data = graph_io.write_series(series, "csv")
    if config.output_path is None:
        _emit(data + b"\n" + summary, None, stdout)
    else:
        _emit(data, config.output_path, stdout)
        side = config.output_path.with_name(config.output_path.stem + ".disagreements.csv")
        _emit(summary, side, stdout)
    return EXIT_OK


def cmd_scenarios(which: str, config: RunConfig, fixtures_path: Path | None = None, stdout=sys.stdout) -> int:
    if fixtures_path is not None:
        try:
            fixtures = fixtures_from_json(Path(fixtures_path).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError([f"{fixtures_path}: cannot load fixtures ({exc})"]) from None
        known = set(TABLE3_METRICS) | set(TABLE5_METRICS)
        bad = [f"{fixtures_path}: scenario {fx.scenario_id}: unknown metric {m!r}" for fx in fixtures for m in fx.expected if m not in known]
        if bad:
            raise InputError(bad)
    else:
        fixtures = table_fixtures(which)
    checks = check_fixtures(fixtures)
    rows = [
        {
            "scenario_id": c.scenario_id,
            "metric": c.metric,
            "computed": c.computed,
            "published": c.published,
            "tolerance": cell_tolerance(c.published),
            "status": "PASS" if c.passed else "FAIL",
        }
        for c in checks
    ]
    columns = ("scenario_id", "metric", "computed", "published", "tolerance", "status")
    if config.output_format == "json":
        data = graph_io.to_json({"table": which, "checks": [{k: graph_io.json_cell(r[k]) for k in columns} for r in rows]})
    else:
        data = graph_io.rows_to_csv(columns, rows)
    _emit(data, config.output_path, stdout)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_REPRODUCTION


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if lo_i < 0 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return range(lo_i, hi_i + 1)


def cmd_gen(
    n: int,
    out_dir: Path,
    *,
    density: float | None = None,
    arcs: int | None = None,
    deletions: range = range(0, 1),
    insertions: range = range(0, 1),
    reversals: range = range(0, 1),
    seed: int = 0,
    stderr=sys.stderr,
) -> int:
    try:
        seeds = SplitMix64(seed)
        if arcs is not None:
            truth = random_dag_with_arcs(n, arcs, seeds.next_u64())
        else:
            truth = random_dag(n, density, seeds.next_u64())
    except (ValueError, TypeError) as exc:
        raise InputError([f"invalid generator parameters: {exc}"]) from None

    plans = [
        (d, i, r, PerturbationPlan(d, i, r, seeds.next_u64()))
        for d, i, r in itertools.product(deletions, insertions, reversals)
    ]
    errors = []
    for _, _, _, plan in plans:
        try:
            plan.check(truth)
        except InfeasiblePlan as exc:
            errors.append(f"InfeasiblePlan: {exc}")
    if errors:
        raise InputError(errors)

    files = {"truth.graph": graph_io.serialize_graph(truth)}
    learnt_names = []
    for d, i, r, plan in plans:
        g, skipped = perturb_detailed(truth, plan)
        if skipped:
            print(f"warning: {skipped} reversal(s) skipped for d={d} i={i} r={r}", file=stderr)
        name = f"learnt_d{d}_i{i}_r{r}.graph"
        files[name] = graph_io.serialize_graph(g)
        learnt_names.append(name)
    files["manifest.json"] = graph_io.to_json({"groups": [{"id": "g1", "true": "truth.graph", "learnt": learnt_names}]})

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, data in files.items():
            (out_dir / name).write_bytes(data)
    except OSError as exc:
        raise InputError([f"{out_dir}: cannot write ({exc.strerror or exc})"]) from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["strict", "equiv"], default="strict",
                        help="strict: every reversal is a partial match; equiv: reversible true arcs match in any orientation")
    common.add_argument("--shd", choices=["classic", "weighted", "both"], default="both")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=None)

    parser = argparse.ArgumentParser(prog="bnscore", description="Score learnt graphs against a ground-truth DAG.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="score one learnt graph")
    p.add_argument("true_path", type=Path)
    p.add_argument("learnt_path", type=Path)

    for name, text in (("batch", "score every graph in a manifest"), ("rank", "order a manifest's graphs by BSF")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("manifest", type=Path)

    p = sub.add_parser("scenarios", parents=[common], help="reproduce a published table")
    p.add_argument("which", choices=["table3", "table5"])
    p.add_argument("--fixtures", type=Path, default=None, help="JSON fixtures to check instead of the built-in ones")

    p = sub.add_parser("gen", parents=[common], help="write a random truth, perturbed learnt graphs and a manifest")
    p.add_argument("--nodes", type=int, required=True)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--density", type=float)
    size.add_argument("--arcs", type=int)
    p.add_argument("--deletions", type=parse_range, default=range(0, 1), help="N or A..B")
    p.add_argument("--insertions", type=parse_range, default=range(0, 1), help="N or A..B")
    p.add_argument("--reversals", type=parse_range, default=range(0, 1), help="N or A..B")
    return parser


def run(argv=None, stdout=sys.stdout, stderr=sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        mode=EvaluationMode(args.mode),
        shd_weighting=args.shd,
        output_format=args.format,
        output_path=args.out,
        seed=args.seed,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            if args.command == "compare":
                code = cmd_compare(args.true_path, args.learnt_path, config, stdout)
            elif args.command == "batch":
                code = cmd_batch(args.manifest, config, stdout)
            elif args.command == "rank":
                code = cmd_rank(args.manifest, config, stdout)
            elif args.command == "scenarios":
                code = cmd_scenarios(args.which, config, args.fixtures, stdout)
            else:
                if args.out is None:
                    raise InputError(["gen needs --out DIR"])
                code = cmd_gen(
                    args.nodes,
                    args.out,
                    density=args.density,
                    arcs=args.arcs,
                    deletions=args.deletions,
                    insertions=args.insertions,
                    reversals=args.reversals,
                    seed=args.seed if args.seed is not None else 0,
                    stderr=stderr,
                )
        except InputError as exc:
            for msg in exc.messages:
                print(f"error: {msg}", file=stderr)
            code = EXIT_INPUT
        except OSError as exc:
            print(f"error: {exc}", file=stderr)
            code = EXIT_INPUT
        except Exception as exc:  # noqa: BLE001
            print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
            code = EXIT_INTERNAL
    for w in caught:
        print(f"warning: {w.message}", file=stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))
