"""Refactoring Time Taken: the proxy effort used as regression target."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .detector import RefactoringOp
from .errors import ContractViolation, DataError
from .history import CommitRecord, commit_loc


@dataclass
class EffortTarget:
    op: RefactoringOp
    rtt_hours: float
    tct_hours: float
    cloc: int
    timestamp_utc: int


def compute_rtt(tct_hours: float, rloc: float, cloc: float) -> float:
    """Share of the commit's time spent on the refactored lines.

    >>> round(compute_rtt(9, 25, 102), 4)
    2.2059
    """
    if cloc <= 0:
        raise DataError("commit carries no measurable change (cloc = 0)")
    if tct_hours <= 0:
        raise ContractViolation("tct_hours must be positive")
    if rloc < 0 or rloc > cloc:
        raise ContractViolation(f"need 0 <= rloc <= cloc, got rloc={rloc}, cloc={cloc}")
    return tct_hours * rloc / cloc


def build_targets(
    commits: Sequence[CommitRecord],
    ops: Sequence[RefactoringOp],
    max_target_hours: Optional[float] = None,
) -> list[EffortTarget]:
    """One target per op with a positive RTT, ordered by (commit time, after_fqn).

    Ops with zero refactored lines are dropped, as are targets above
    ``max_target_hours`` when that filter is set.
    """
    by_id = {c.commit_id: c for c in commits}
    targets = []
    for op in ops:
        commit = by_id.get(op.commit_id)
        if commit is None:
            raise ContractViolation(f"op references unknown commit {op.commit_id}")
        if commit.tct_hours is None:
            raise ContractViolation(f"commit {op.commit_id[:10]} has no tct_hours")
        if op.touched_lines <= 0:
            continue
        cloc = commit_loc(commit)
        rtt = compute_rtt(commit.tct_hours, op.touched_lines, cloc)
        if rtt <= 0:
            continue
        if max_target_hours is not None and rtt > max_target_hours:
            continue
        targets.append(EffortTarget(op, rtt, commit.tct_hours, cloc, commit.timestamp_utc))
    targets.sort(key=lambda t: (t.timestamp_utc, t.op.after_fqn))
    return targets
