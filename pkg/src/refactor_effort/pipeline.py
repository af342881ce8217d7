"""End-to-end mining: repository history -> effort dataset."""
from __future__ import annotations

import logging
import subprocess
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .analysis import CkMetrics, DependencyEdge, Snapshot, compute_all_ck, extract_dependencies
from .dataset import Dataset, assemble
from .detector import DEFAULT_THRESHOLD, RefactoringOp, attribute_lines, detect
from .effort import EffortTarget, build_targets
from .errors import ConfigurationError
from .history import (
    DEFAULT_CAP_HOURS, DEFAULT_SEED_HOURS, DEFAULT_SESSION_GAP_HOURS,
    CommitRecord, estimate_tct, git, walk_history,
)
from .javaparse import ClassSummary, parse_compilation_unit

logger = logging.getLogger(__name__)

SOURCE_SUFFIX = ".java"


class GitSnapshotLoader:
    """Parse the source tree of any commit, reusing parses of unchanged blobs."""

    def __init__(self, repo_path, keep: int = 4):
        self.repo_path = repo_path
        self._blobs: dict[tuple[str, str], list[ClassSummary]] = {}
        self._snapshots: OrderedDict[str, Snapshot] = OrderedDict()
        self._keep = keep
        self._proc: Optional[subprocess.Popen] = None

    def _cat(self, sha: str) -> bytes:
        if self._proc is None:
            self._proc = subprocess.Popen(
                ["git", "-C", str(self.repo_path), "cat-file", "--batch"],
                stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            )
        self._proc.stdin.write(sha.encode() + b"\n")
        self._proc.stdin.flush()
        header = self._proc.stdout.readline().split()
        if len(header) < 3 or header[1] == b"missing":
            raise ConfigurationError(f"object {sha} missing from repository")
        data = self._proc.stdout.read(int(header[2]))
        self._proc.stdout.read(1)
        return data

    def close(self) -> None:
        if self._proc is not None:
            self._proc.stdin.close()
            self._proc.wait()
            self._proc = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def snapshot(self, commit_id: Optional[str]) -> Snapshot:
        if commit_id is None:
            return Snapshot([])
        if commit_id in self._snapshots:
            self._snapshots.move_to_end(commit_id)
            return self._snapshots[commit_id]
        listing = git(self.repo_path, "ls-tree", "-r", "-z", commit_id).split(b"\0")
        classes = []
        for entry in listing:
            if not entry:
                continue
            meta, _, raw_path = entry.partition(b"\t")
            _, otype, sha = meta.split()
            path = raw_path.decode("utf-8", errors="replace")
            if otype != b"blob" or not path.endswith(SOURCE_SUFFIX):
                continue
            key = (sha.decode(), path)
            if key not in self._blobs:
                self._blobs[key] = parse_compilation_unit(self._cat(key[0]), path)
            classes.extend(self._blobs[key])
        snap = Snapshot(classes)
        self._snapshots[commit_id] = snap
        if len(self._snapshots) > self._keep:
            self._snapshots.popitem(last=False)
        return snap


def snapshot_from_directory(root) -> Snapshot:
    """Parse every source file below ``root`` (hidden directories skipped)."""
    root = Path(root)
    if not root.is_dir():
        raise ConfigurationError(f"not a directory: {root}")
    classes = []
    for path in sorted(root.rglob("*" + SOURCE_SUFFIX)):
        rel = path.relative_to(root)
        if any(part.startswith(".") for part in rel.parts[:-1]):
            continue
        classes.extend(parse_compilation_unit(path.read_bytes(), rel.as_posix()))
    return Snapshot(classes)


@dataclass
class MiningResult:
    commits: list[CommitRecord]
    ops: list[RefactoringOp]
    targets: list[EffortTarget]
    dataset: Dataset
    parent_metrics: dict[str, dict[str, CkMetrics]] = field(default_factory=dict)
    parent_edges: dict[str, list[DependencyEdge]] = field(default_factory=dict)
    diagnostics: dict[str, int] = field(default_factory=dict)


def _touches_sources(commit: CommitRecord) -> bool:
    return any(p.endswith(SOURCE_SUFFIX) for p in commit.touched_paths)


def mine(
    repo_path,
    branch: str = "HEAD",
    max_commits: Optional[int] = None,
    session_gap_hours: float = DEFAULT_SESSION_GAP_HOURS,
    seed_hours: float = DEFAULT_SEED_HOURS,
    cap_hours: float = DEFAULT_CAP_HOURS,
    threshold: float = DEFAULT_THRESHOLD,
    max_target_hours: Optional[float] = None,
) -> MiningResult:
    commits = walk_history(repo_path, branch, max_commits)
    estimate_tct(sorted(commits, key=lambda c: c.timestamp_utc),
                 session_gap_hours, seed_hours, cap_hours)
    ops: list[RefactoringOp] = []
    metrics: dict[str, dict[str, CkMetrics]] = {}
    edges: dict[str, list[DependencyEdge]] = {}
    diag = {"merges_skipped": 0, "commits_scanned": 0, "unresolved_names": 0}
    with GitSnapshotLoader(repo_path) as loader:
        for c in commits:
            if c.is_merge:
                diag["merges_skipped"] += 1
                continue
            if not _touches_sources(c):
                continue
            parent = c.parent_ids[0] if c.parent_ids else None
            diag["commits_scanned"] += 1
            before = loader.snapshot(parent)
            after = loader.snapshot(c.commit_id)
            found = detect(before, after, c, threshold)
            if not found:
                continue
            attribute_lines(found, c)
            parent_edges = extract_dependencies(before)
            parent_ck = compute_all_ck(before, parent_edges)
            diag["unresolved_names"] += before.unresolved
            wanted = {op.before_fqn for op in found}
            metrics[c.commit_id] = {f: m for f, m in parent_ck.items() if f in wanted}
            edges[c.commit_id] = [e for e in parent_edges if e.from_fqn in wanted]
            ops.extend(found)
    targets = build_targets(commits, ops, max_target_hours)
    ds = assemble(targets, metrics, edges)
    diag["imputed_rows"] = ds.imputed
    diag["ops"] = len(ops)
    diag["targets"] = len(targets)
    logger.info("mined %d commits, %d ops, %d samples", len(commits), len(ops), len(ds))
    return MiningResult(commits, ops, targets, ds, metrics, edges, diag)
