"""Class-level refactoring detection between two parsed snapshots.

Disappeared classes are paired with appeared classes by Jaccard similarity
of their member signatures (``name/arity`` for methods, bare names for
fields). Constructors are left out of the signature because their name
follows the class name and would penalise every rename.
"""
from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .analysis import Snapshot, as_snapshot
from .history import CommitRecord
from .javaparse import ClassSummary

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.7
OP_KINDS = ("MoveClass", "RenameClass", "MoveAndRenameClass", "ExtractClass")


@dataclass
class RefactoringOp:
    kind: str
    commit_id: str
    before_fqn: str
    after_fqn: str
    touched_lines: float = 0
    before_path: str = ""
    after_path: str = ""


def member_signature(cls: ClassSummary) -> frozenset[str]:
    members = {f"{m.name}/{m.arity}" for m in cls.methods if not m.is_constructor}
    members.update(cls.field_names)
    return frozenset(members)


def jaccard(a: frozenset, b: frozenset) -> float:
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def _similarity(before: ClassSummary, after: ClassSummary) -> float:
    sa, sb = member_signature(before), member_signature(after)
    if not sa and not sb:
        # Memberless types carry no evidence beyond their simple name.
        return 1.0 if before.name == after.name else 0.0
    return jaccard(sa, sb)


def _classify(before: ClassSummary, after: ClassSummary) -> str:
    if before.name == after.name:
        return "MoveClass"
    if before.package == after.package:
        return "RenameClass"
    return "MoveAndRenameClass"


def detect(
    before: Union[Snapshot, Sequence[ClassSummary]],
    after: Union[Snapshot, Sequence[ClassSummary]],
    commit: Union[CommitRecord, str],
    threshold: float = DEFAULT_THRESHOLD,
) -> list[RefactoringOp]:
    """Refactorings that turn snapshot ``before`` into snapshot ``after``."""
    before, after = as_snapshot(before), as_snapshot(after)
    commit_id = commit if isinstance(commit, str) else commit.commit_id
    gone = [c for c in before.classes if c.fqn not in after]
    new = [c for c in after.classes if c.fqn not in before]

    candidates = []
    for b in gone:
        for a in new:
            sim = _similarity(b, a)
            if sim >= threshold:
                candidates.append((-sim, a.fqn, b.fqn, b, a))
    candidates.sort(key=lambda t: t[:3])
    matched_before: dict[str, str] = {}
    matched_after: set[str] = set()
    pairs = []
    for _, _, _, b, a in candidates:
        if b.fqn in matched_before or a.fqn in matched_after:
            continue
        matched_before[b.fqn] = a.fqn
        matched_after.add(a.fqn)
        pairs.append((b, a))

    ops = []
    for b, a in pairs:
        # Nested types carried along by a moved/renamed outer class are implied.
        if b.outer_fqn and a.outer_fqn and matched_before.get(b.outer_fqn) == a.outer_fqn \
                and b.name == a.name:
            continue
        ops.append(RefactoringOp(_classify(b, a), commit_id, b.fqn, a.fqn,
                                 before_path=b.path, after_path=a.path))

    removed_members = {}
    for c in before.classes:
        if c.fqn in after:
            lost = member_signature(c) - member_signature(after.by_fqn[c.fqn])
            if lost:
                removed_members[c.fqn] = (frozenset(lost), c)
    for a in new:
        if a.fqn in matched_after or not removed_members:
            continue
        sig = member_signature(a)
        best: Optional[tuple[float, str]] = None
        for src_fqn, (lost, _) in removed_members.items():
            sim = jaccard(sig, lost)
            if sim >= threshold and (best is None or (-sim, src_fqn) < (-best[0], best[1])):
                best = (sim, src_fqn)
        if best is not None:
            src = removed_members[best[1]][1]
            ops.append(RefactoringOp("ExtractClass", commit_id, src.fqn, a.fqn,
                                     before_path=src.path, after_path=a.path))
    ops.sort(key=lambda op: (op.after_fqn, op.before_fqn))
    return ops


def attribute_lines(ops: Sequence[RefactoringOp], commit: CommitRecord) -> list[RefactoringOp]:
    """Set ``touched_lines`` for every op of one commit.

    A file referenced by k ops contributes 1/k of its churn to each of them.
    """
    files_of = {}
    refs = defaultdict(int)
    for idx, op in enumerate(ops):
        changes = []
        for path in dict.fromkeys(p for p in (op.before_path, op.after_path) if p):
            fc = commit.find_change(path)
            if fc is not None and all(fc is not other for other in changes):
                changes.append(fc)
        if not changes:
            logger.debug("no diff entry for %s -> %s in %s", op.before_fqn, op.after_fqn,
                         commit.commit_id[:10])
        files_of[idx] = changes
        for fc in changes:
            refs[id(fc)] += 1
    for idx, op in enumerate(ops):
        total = 0.0
        for fc in files_of[idx]:
            total += fc.churn / refs[id(fc)]
        op.touched_lines = int(total) if float(total).is_integer() else total
    return list(ops)


def refactored_loc(op: RefactoringOp, commit: CommitRecord,
                   siblings: Optional[Sequence[RefactoringOp]] = None) -> float:
    """Refactored Lines of Code of ``op``; stored into ``op.touched_lines``.

    ``siblings`` are the other ops of the same commit, used to apportion
    shared files.
    """
    group = list(siblings or [])
    if all(o is not op for o in group):
        group.append(op)
    attribute_lines(group, commit)
    return op.touched_lines


OPS_FIELDS = ("commit_id", "kind", "before_fqn", "after_fqn", "touched_lines")


def write_ops_csv(path, ops: Iterable[RefactoringOp]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(OPS_FIELDS)
        for op in ops:
            w.writerow((op.commit_id, op.kind, op.before_fqn, op.after_fqn, op.touched_lines))


def read_ops_csv(path) -> list[RefactoringOp]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            RefactoringOp(r["kind"], r["commit_id"], r["before_fqn"], r["after_fqn"],
                          float(r["touched_lines"]))
            for r in csv.DictReader(fh)
        ]
