"""Turn a clustering result into a ranked, costed move-class plan."""
from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .analysis import CkMetrics, DependencyEdge, Snapshot, as_snapshot, compute_all_ck, \
    extract_dependencies, outgoing_kind_counts
from .dataset import FEATURE_NAMES, feature_vector
from .errors import DataError
from .gbm import check_schema, predict
from .javaparse import ClassSummary

LARGE_HOURS = 8.0
PROXY_NOTE = "commit size (cloc) is proxied by the class LOC at prediction time"


@dataclass
class ClusterAssignment:
    entries: dict[str, str] = field(default_factory=dict)

    def clusters(self) -> dict[str, list[str]]:
        out = defaultdict(list)
        for fqn, cid in self.entries.items():
            out[cid].append(fqn)
        return dict(out)


def read_cluster_assignment(path) -> ClusterAssignment:
    """Read ``fully.qualified.Name,clusterId`` lines; ``#`` starts a comment."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise DataError(f"expected 'class,cluster', got {raw.strip()!r}", line=lineno)
            if parts[0] in entries:
                raise DataError(f"class {parts[0]} assigned twice", line=lineno)
            entries[parts[0]] = parts[1]
    return ClusterAssignment(entries)


@dataclass(frozen=True)
class Move:
    class_fqn: str
    from_package: str
    to_package: str


def derive_moves(assignment: ClusterAssignment,
                 snapshot: Union[Snapshot, Sequence[ClassSummary]]) -> list[Move]:
    """Move every class to its cluster's plurality package.

    The plurality package holds most of the cluster's classes; ties go to the
    lexicographically smallest package name.
    """
    snap = as_snapshot(snapshot)
    missing = sorted(f for f in assignment.entries if f not in snap)
    if missing:
        raise DataError("classes not found in snapshot: " + ", ".join(missing))
    moves = []
    for members in assignment.clusters().values():
        counts = Counter(snap.by_fqn[f].package for f in members)
        home = min(counts, key=lambda p: (-counts[p], p))
        for f in members:
            pkg = snap.by_fqn[f].package
            if pkg != home:
                moves.append(Move(f, pkg, home))
    return sorted(moves, key=lambda m: m.class_fqn)


@dataclass
class PlannedMove:
    class_fqn: str
    from_package: str
    to_package: str
    features: tuple[float, ...]
    predicted_hours: float


@dataclass
class RefactoringPlan:
    moves: list[PlannedMove] = field(default_factory=list)

    @property
    def total_hours(self) -> float:
        return sum(m.predicted_hours for m in self.moves)


def move_features(
    moves: Sequence[Move],
    snapshot: Union[Snapshot, Sequence[ClassSummary]],
    metrics: Optional[Mapping[str, CkMetrics]] = None,
    edges: Optional[Sequence[DependencyEdge]] = None,
) -> list[tuple[float, ...]]:
    """Feature vectors built exactly like training rows for a MoveClass op."""
    snap = as_snapshot(snapshot)
    if edges is None:
        edges = extract_dependencies(snap)
    if metrics is None:
        metrics = compute_all_ck(snap, edges)
    out = []
    for mv in moves:
        m = metrics.get(mv.class_fqn)
        loc = m.loc if m is not None else snap.by_fqn[mv.class_fqn].loc
        deps = outgoing_kind_counts(mv.class_fqn, edges)
        out.append(feature_vector(m, "MoveClass", len(moves), loc, deps))
    return out


def estimate_plan(
    moves: Sequence[Move],
    snapshot: Union[Snapshot, Sequence[ClassSummary]],
    model,
    metrics: Optional[Mapping[str, CkMetrics]] = None,
    edges: Optional[Sequence[DependencyEdge]] = None,
) -> RefactoringPlan:
    check_schema(model.schema, FEATURE_NAMES)
    vectors = move_features(moves, snapshot, metrics, edges)
    planned = [
        PlannedMove(mv.class_fqn, mv.from_package, mv.to_package, vec, predict(model, vec))
        for mv, vec in zip(moves, vectors)
    ]
    planned.sort(key=lambda p: (-p.predicted_hours, p.class_fqn))
    return RefactoringPlan(planned)


PLAN_CSV_FIELDS = ("class", "from", "to", "predicted_hours")


def render_report(plan: RefactoringPlan, format: str = "text") -> str:
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(PLAN_CSV_FIELDS)
        for m in plan.moves:
            w.writerow((m.class_fqn, m.from_package, m.to_package, repr(m.predicted_hours)))
        return buf.getvalue()
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    lines = [f"{len(plan.moves)} moves, total {plan.total_hours:.2f} person-hours"]
    if not plan.moves:
        return lines[0] + "\n"
    width = max(len(m.class_fqn) for m in plan.moves)
    route_w = max(len(f"{m.from_package} -> {m.to_package}") for m in plan.moves)
    lines.append(f"{'rank':>4}  {'class':<{width}}  {'from -> to':<{route_w}}  {'hours':>8}")
    for rank, m in enumerate(plan.moves, start=1):
        route = f"{m.from_package} -> {m.to_package}"
        flag = "  LARGE" if m.predicted_hours > LARGE_HOURS else ""
        lines.append(f"{rank:>4}  {m.class_fqn:<{width}}  {route:<{route_w}}  {m.predicted_hours:>8.2f}{flag}")
    lines.append(f"Total: {plan.total_hours:.2f} person-hours")
    lines.append(f"LARGE: predicted above {LARGE_HOURS:g} person-hours (one working day)")
    lines.append(f"Note: {PROXY_NOTE}")
    return "\n".join(lines) + "\n"


def read_plan_csv(text: str) -> list[tuple[str, str, str, float]]:
    reader = csv.reader(io.StringIO(text))
    head = next(reader)
    if tuple(head) != PLAN_CSV_FIELDS:
        raise DataError("unexpected plan header", line=1)
    return [(r[0], r[1], r[2], float(r[3])) for r in reader if r]
