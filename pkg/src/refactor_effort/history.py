"""Walk git history and attach a Total Commit Time to every commit.

Commit timing follows a per-author session model: a commit that comes less
than ``session_gap_hours`` after the same author's previous commit is credited
with the elapsed time (capped), otherwise it opens a new session and is
credited ``seed_hours``.
"""
from __future__ import annotations

import csv
import logging
import os
import re
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import ConfigurationError, ContractViolation

logger = logging.getLogger(__name__)

DEFAULT_SESSION_GAP_HOURS = 4.0
DEFAULT_SEED_HOURS = 0.5
DEFAULT_CAP_HOURS = 12.0
RENAME_SIMILARITY = 50

_COMMIT_MARK = "\x1ecommit\x1f"
_HUNK_RE = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


@dataclass
class FileChange:
    path: str
    lines_added: int
    lines_deleted: int
    changed_line_ranges: list[tuple[int, int]] = field(default_factory=list)
    old_path: Optional[str] = None

    @property
    def churn(self) -> int:
        return self.lines_added + self.lines_deleted


@dataclass
class CommitRecord:
    commit_id: str
    author_key: str
    timestamp_utc: int
    parent_ids: list[str]
    file_changes: list[FileChange] = field(default_factory=list)
    tct_hours: Optional[float] = None
    # every path named in the diff, including pure renames and binary files
    touched_paths: list[str] = field(default_factory=list)

    @property
    def is_merge(self) -> bool:
        return len(self.parent_ids) > 1

    def find_change(self, path: str) -> Optional[FileChange]:
        """Return the change touching ``path`` (either side of a rename)."""
        for fc in self.file_changes:
            if fc.path == path or fc.old_path == path:
                return fc
        return None


def commit_loc(commit: CommitRecord) -> int:
    """Commit Lines of Code: added plus deleted lines over all files."""
    return sum(fc.lines_added + fc.lines_deleted for fc in commit.file_changes)


def git(repo_path, *args: str, input: Optional[bytes] = None) -> bytes:
    """Run a git command inside ``repo_path`` and return raw stdout."""
    cmd = ["git", "-C", str(repo_path), "-c", "core.quotepath=off", *args]
    env = dict(os.environ, LC_ALL="C", GIT_PAGER="cat")
    proc = subprocess.run(cmd, input=input, capture_output=True, env=env)
    if proc.returncode != 0:
        raise ConfigurationError(
            f"git {' '.join(args)} failed: {proc.stderr.decode(errors='replace').strip()}"
        )
    return proc.stdout


def _resolve_branch(repo_path, branch: str) -> Optional[str]:
    if not Path(repo_path).exists():
        raise ConfigurationError(f"repository path does not exist: {repo_path}")
    try:
        git(repo_path, "rev-parse", "--git-dir")
    except ConfigurationError as exc:
        raise ConfigurationError(f"not a readable git repository: {repo_path}") from exc
    try:
        return git(repo_path, "rev-parse", "--verify", "-q", f"{branch}^{{commit}}").decode().strip()
    except ConfigurationError:
        pass
    # An unborn branch in a repository without any commit is an empty history.
    if not git(repo_path, "rev-list", "--all", "-n", "1").strip():
        return None
    raise ConfigurationError(f"branch {branch!r} does not resolve to a commit")


def _parse_log(text: str) -> list[CommitRecord]:
    commits: list[CommitRecord] = []
    current: Optional[CommitRecord] = None
    fc: Optional[FileChange] = None
    binary = False

    def close_file():
        nonlocal fc
        if fc is not None:
            current.touched_paths.append(fc.path)
            if fc.old_path and fc.old_path != fc.path:
                current.touched_paths.append(fc.old_path)
            if fc.churn > 0 and not binary:
                current.file_changes.append(fc)
        fc = None

    for line in text.split("\n"):
        if line.startswith(_COMMIT_MARK):
            if current is not None:
                close_file()
            sha, parents, email, ts = line[len(_COMMIT_MARK):].split("\x1f")
            current = CommitRecord(
                commit_id=sha,
                author_key=email.strip().lower(),
                timestamp_utc=int(ts),
                parent_ids=parents.split(),
            )
            commits.append(current)
        elif current is None:
            continue
        elif line.startswith("diff --git "):
            close_file()
            binary = False
            # Fallback path for headers without ---/+++ lines (binary, mode-only).
            m = re.match(r"diff --git a/(.*) b/(.*)$", line)
            fc = FileChange(path=m.group(2) if m else line[11:], lines_added=0, lines_deleted=0)
        elif fc is None:
            continue
        elif line.startswith("@@"):
            m = _HUNK_RE.match(line)
            if m:
                old_len = int(m.group(2)) if m.group(2) is not None else 1
                start = int(m.group(3))
                new_len = int(m.group(4)) if m.group(4) is not None else 1
                fc.lines_deleted += old_len
                fc.lines_added += new_len
                if new_len > 0:
                    fc.changed_line_ranges.append((start, new_len))
        elif line.startswith("rename from "):
            fc.old_path = line[len("rename from "):]
        elif line.startswith("rename to "):
            fc.path = line[len("rename to "):]
        elif line.startswith("+++ ") and not fc.changed_line_ranges and fc.churn == 0:
            target = line[4:]
            if target != "/dev/null":
                fc.path = target[2:] if target.startswith("b/") else target
        elif line.startswith("--- ") and not fc.changed_line_ranges and fc.churn == 0:
            source = line[4:]
            if source != "/dev/null" and fc.old_path is None:
                src = source[2:] if source.startswith("a/") else source
                if src != fc.path:
                    fc.old_path = src
        elif line.startswith("Binary files ") or line.startswith("GIT binary patch"):
            binary = True
    if current is not None:
        close_file()
    for c in commits:
        for change in c.file_changes:
            change.changed_line_ranges.sort()
            if change.old_path == change.path:
                change.old_path = None
    return commits


def walk_history(repo_path, branch: str = "HEAD", max_commits: Optional[int] = None) -> list[CommitRecord]:
    """Return the commits reachable from ``branch``, oldest first.

    Order is topological, with commit timestamps breaking ties between
    unrelated commits. Merge commits are kept (see ``CommitRecord.is_merge``)
    and diffed against their first parent only. When ``max_commits`` is given
    the most recent ``max_commits`` commits are returned.
    """
    tip = _resolve_branch(repo_path, branch)
    if tip is None:
        return []
    args = [
        "log", "--reverse", "--date-order",
        "--diff-merges=first-parent", f"-M{RENAME_SIMILARITY}%",
        "-U0", "--no-color", "--no-ext-diff", "-p",
        f"--format={_COMMIT_MARK}%H%x1f%P%x1f%ae%x1f%at",
    ]
    if max_commits is not None:
        if max_commits < 0:
            raise ConfigurationError("max_commits must be non-negative")
        args.append(f"-n{max_commits}")
    args.append(tip)
    text = git(repo_path, *args).decode("utf-8", errors="replace")
    commits = _parse_log(text)
    logger.info("walked %d commits on %s", len(commits), branch)
    return commits


def estimate_tct(
    commits: list[CommitRecord],
    session_gap_hours: float = DEFAULT_SESSION_GAP_HOURS,
    seed_hours: float = DEFAULT_SEED_HOURS,
    cap_hours: float = DEFAULT_CAP_HOURS,
) -> list[CommitRecord]:
    """Fill ``tct_hours`` in place using the per-author session rule.

    ``commits`` must be sorted by ascending timestamp.
    """
    if session_gap_hours <= 0:
        raise ConfigurationError("session_gap_hours must be positive")
    if not 0 < seed_hours <= cap_hours:
        raise ConfigurationError("need 0 < seed_hours <= cap_hours")
    for prev, cur in zip(commits, commits[1:]):
        if cur.timestamp_utc < prev.timestamp_utc:
            raise ContractViolation(
                f"commits not sorted by timestamp at {cur.commit_id[:10]}"
            )
    last_seen: dict[str, int] = {}
    for c in commits:
        prev_ts = last_seen.get(c.author_key)
        if prev_ts is None:
            tct = seed_hours
        else:
            delta = (c.timestamp_utc - prev_ts) / 3600.0
            # A zero gap would credit nothing; treat it as a fresh session.
            if delta > session_gap_hours or delta <= 0:
                tct = seed_hours
            else:
                tct = min(delta, cap_hours)
        c.tct_hours = tct
        last_seen[c.author_key] = c.timestamp_utc
    return commits


MANIFEST_FIELDS = ("commit_id", "author_key", "timestamp_utc", "cloc", "tct_hours")


def write_commits_manifest(path, commits: Iterable[CommitRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_FIELDS)
        for c in commits:
            tct = "" if c.tct_hours is None else repr(c.tct_hours)
            writer.writerow([c.commit_id, c.author_key, c.timestamp_utc, commit_loc(c), tct])


def read_commits_manifest(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        row["timestamp_utc"] = int(row["timestamp_utc"])
        row["cloc"] = int(row["cloc"])
        row["tct_hours"] = float(row["tct_hours"]) if row["tct_hours"] else None
    return rows
