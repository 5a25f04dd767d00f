"""Text formats: graph files, batch manifests and score reports.

Graph file::

    # comments and blank lines are ignored
    nodes: A,B,C,D
    A -> B
    C <- B
    C -- D
    A <-> D

The ``nodes:`` header is mandatory so isolated nodes survive a round trip.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Sequence

from .confusion import effective_counts
from .errors import (
    DuplicateGroupId,
    DuplicatePair,
    EmptyGroup,
    GraphScoreError,
    GraphSyntaxError,
    MissingNodesHeader,
    UnknownNodeInEdge,
)
from .graph import BIDIRECTED, UNDIRECTED, MarkKind, MixedGraph, directed, pair, validate_label
from .normalize import NormalizedRecord, RankedSeries
from .metrics import Score

MARK_TOKENS = ("->", "<-", "--", "<->")

_HEADER = re.compile(r"nodes\s*:(.*)$")


def _decode(text) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = text.count(b"\n", 0, exc.start) + 1
        col = exc.start - (text.rfind(b"\n", 0, exc.start) + 1) + 1
        raise GraphSyntaxError(line, col, "input is not valid UTF-8") from None


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def parse_graph(text: bytes | str) -> MixedGraph:
    lines = _decode(text).split("\n")
    graph = None
    seen = {}
    updates = []
    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw.rstrip("\r"))
        if not line.strip():
            continue
        if graph is None:
            m = _HEADER.match(line.strip())
            if m is None:
                raise MissingNodesHeader(lineno, 1, "expected 'nodes:' header before any edge")
            graph = _parse_header(m.group(1), lineno, raw)
            continue
        updates.append(_parse_statement(line, lineno, graph, seen))
    if graph is None:
        raise MissingNodesHeader(max(len(lines), 1), 1, "missing 'nodes:' header")
    return graph.with_edges(updates)


def _parse_header(body: str, lineno: int, raw: str) -> MixedGraph:
    labels = [part.strip() for part in body.split(",")]
    if labels == [""]:
        raise GraphSyntaxError(lineno, 1, "node list is empty")
    seen = set()
    for label in labels:
        col = raw.find(label) + 1 if label else raw.find(":") + 2
        try:
            validate_label(label)
        except GraphScoreError as exc:
            raise GraphSyntaxError(lineno, col, str(exc)) from None
        if label in seen:
            raise GraphSyntaxError(lineno, col, f"duplicate node {label!r}")
        seen.add(label)
    return MixedGraph(labels)


def _parse_statement(line: str, lineno: int, graph: MixedGraph, seen: dict):
    tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
    if len(tokens) != 3:
        col = tokens[3][1] if len(tokens) > 3 else tokens[-1][1]
        raise GraphSyntaxError(lineno, col, "expected '<node> <mark> <node>'")
    (a, col_a), (tok, col_m), (b, col_b) = tokens
    if tok not in MARK_TOKENS:
        raise GraphSyntaxError(lineno, col_m, f"unknown edge mark {tok!r}; expected one of {', '.join(MARK_TOKENS)}")
    for label, col in ((a, col_a), (b, col_b)):
        if label not in graph:
            raise UnknownNodeInEdge(lineno, col, f"node {label!r} is not declared in the header")
    if a == b:
        raise GraphSyntaxError(lineno, col_a, f"self loop on {a!r}")
    key = pair(a, b)
    if key in seen:
        raise DuplicatePair(lineno, col_a, f"pair {{{a}, {b}}} already given on line {seen[key]}")
    seen[key] = lineno
    if tok == "->":
        mark = directed(a, b)
    elif tok == "<-":
        mark = directed(b, a)
    elif tok == "--":
        mark = UNDIRECTED
    else:
        mark = BIDIRECTED
    return a, b, mark


def serialize_graph(graph: MixedGraph) -> bytes:
    out = ["nodes: " + ",".join(graph.nodes)]
    statements = []
    for u, v, m in graph.edges():
        if m.kind is MarkKind.DIRECTED:
            statements.append((m.tail, "->", m.head))
        else:
            x, y = sorted((u, v))
            statements.append((x, "--" if m.kind is MarkKind.UNDIRECTED else "<->", y))
    statements.sort(key=lambda s: (s[0], s[2]))
    out.extend(f"{x} {tok} {y}" for x, tok, y in statements)
    return ("\n".join(out) + "\n").encode("utf-8")


@dataclass(frozen=True)
class ManifestEntry:
    group_id: str
    true_path: str
    learnt_paths: tuple


@dataclass(frozen=True)
class BatchManifest:
    entries: tuple


def parse_manifest(text: bytes | str) -> BatchManifest:
    source = _decode(text)
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise GraphSyntaxError(exc.lineno, exc.colno, exc.msg) from None

    def bad(msg):
        return GraphSyntaxError(1, 1, msg)

    if not isinstance(doc, dict) or not isinstance(doc.get("groups"), list):
        raise bad("manifest must be an object with a 'groups' list")
    entries = []
    ids = set()
    owner = {}
    for n, group in enumerate(doc["groups"]):
        if not isinstance(group, dict):
            raise bad(f"groups[{n}] must be an object")
        gid, true_path, learnt = group.get("id"), group.get("true"), group.get("learnt")
        if not isinstance(gid, str) or not gid:
            raise bad(f"groups[{n}].id must be a non-empty string")
        if not isinstance(true_path, str) or not true_path:
            raise bad(f"groups[{n}].true must be a non-empty string")
        if not isinstance(learnt, list) or not all(isinstance(p, str) and p for p in learnt):
            raise bad(f"groups[{n}].learnt must be a list of non-empty strings")
        if gid in ids:
            raise DuplicateGroupId(f"group id {gid!r} used more than once")
        if not learnt:
            raise EmptyGroup(f"group {gid!r} lists no learnt graphs")
        ids.add(gid)
        for p in learnt:
            if p in owner:
                raise bad(f"learnt path {p!r} listed in group {owner[p]!r} and again in {gid!r}")
            owner[p] = gid
        entries.append(ManifestEntry(gid, true_path, tuple(learnt)))
    return BatchManifest(tuple(entries))


def format_number(x) -> str:
    """Render a real with at most 6 decimals and no trailing zeros."""
    s = f"{float(x):.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _json_number(x):
    v = round(float(x), 6)
    if v == 0:
        return 0
    return int(v) if v.is_integer() else v


REPORT_COLUMNS = (
    "group_id", "learnt_id", "tp", "tp_partial", "fp", "tn", "fn_eff",
    "pr", "re", "f1", "shd_classic", "shd_weighted", "ddm", "bsf",
    "bsf_n", "shd_n", "ddm_n", "f1_n",
)

SERIES_COLUMNS = ("rank", "group_id", "learnt_id", "bsf_n", "pr", "re", "f1_n", "shd_n", "ddm_n")


def _value(v):
    if isinstance(v, Score):
        return v.value
    return v


def report_row(rec: NormalizedRecord, omit: Sequence[str] = ()) -> dict:
    t = rec.record.tally
    s = rec.scores
    row = {
        "group_id": rec.group_id,
        "learnt_id": rec.learnt_id,
        "tp": t.tp,
        "tp_partial": t.tp_partial,
        "fp": t.fp,
        "tn": t.tn,
        "fn_eff": effective_counts(t).fn_eff,
        "pr": _value(s.pr),
        "re": _value(s.re),
        "f1": _value(s.f1),
        "shd_classic": s.shd_classic,
        "shd_weighted": s.shd_weighted,
        "ddm": s.ddm,
        "bsf": s.bsf,
        "bsf_n": rec.bsf_n,
        "shd_n": rec.shd_n,
        "ddm_n": rec.ddm_n,
        "f1_n": rec.f1_n,
    }
    for col in omit:
        row[col] = None
    return row


def series_row(rank: int, rec: NormalizedRecord) -> dict:
    return {
        "rank": rank,
        "group_id": rec.group_id,
        "learnt_id": rec.learnt_id,
        "bsf_n": rec.bsf_n,
        "pr": _value(rec.scores.pr),
        "re": _value(rec.scores.re),
        "f1_n": rec.f1_n,
        "shd_n": rec.shd_n,
        "ddm_n": rec.ddm_n,
    }


def _csv_cell(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return format_number(v)


def json_cell(v):
    if v is None or isinstance(v, (str, int)):
        return v
    return _json_number(v)


def rows_to_csv(columns: Sequence[str], rows: Sequence[dict]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue().encode("utf-8")


def to_json(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def write_report(results: Sequence[NormalizedRecord], format: str = "csv", omit: Sequence[str] = ()) -> bytes:
    """Render scored records. ``omit`` names columns to print as n/a/null."""
    rows = [report_row(r, omit) for r in results]
    if format == "csv":
        return rows_to_csv(REPORT_COLUMNS, rows)
    if format == "json":
        return to_json({"records": [{c: json_cell(row[c]) for c in REPORT_COLUMNS} for row in rows]})
    raise ValueError(f"unknown report format {format!r}")


def series_rows(series: RankedSeries) -> list[dict]:
    return [series_row(k, rec) for k, rec in enumerate(series, start=1)]


def write_series(series: RankedSeries, format: str = "csv") -> bytes:
    rows = series_rows(series)
    if format == "csv":
        return rows_to_csv(SERIES_COLUMNS, rows)
    if format == "json":
        return to_json({"series": [{c: json_cell(row[c]) for c in SERIES_COLUMNS} for row in rows]})
    raise ValueError(f"unknown series format {format!r}")
