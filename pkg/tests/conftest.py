from __future__ import annotations

import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

from refactor_effort.dataset import FEATURE_NAMES, Dataset, Row
from refactor_effort.synthetic import build_synthetic_corpus

FIXTURES = Path(__file__).parent / "fixtures"

# Acceptance outcomes are collected here and printed at the end of the run.
_ACCEPTANCE: dict[str, tuple[str, str]] = {}


class GitRepo:
    """Tiny scripted repository: every commit gets an explicit author and time."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.run("init", "-q", "-b", "main")
        self.run("config", "user.name", "fixture")
        self.run("config", "user.email", "fixture@example.org")
        self.run("config", "commit.gpgsign", "false")

    def run(self, *args: str, env: dict | None = None) -> str:
        out = subprocess.run(["git", "-C", str(self.path), *args], check=True,
                             capture_output=True, env=dict(os.environ, **(env or {})))
        return out.stdout.decode()

    def write(self, rel: str, text) -> None:
        target = self.path / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(text, bytes):
            target.write_bytes(text)
        else:
            target.write_text(text)

    def commit(self, files: dict | None = None, *, author: str = "dev@example.org",
               ts: int = 1_700_000_000, message: str = "change", remove=(), moves=()) -> str:
        for src, dst in moves:
            (self.path / dst).parent.mkdir(parents=True, exist_ok=True)
            self.run("mv", src, dst)
        for rel in remove:
            self.run("rm", "-q", rel)
        for rel, text in (files or {}).items():
            self.write(rel, text)
        date = f"{ts} +0000"
        env = {"GIT_AUTHOR_EMAIL": author, "GIT_AUTHOR_NAME": author.split("@")[0],
               "GIT_AUTHOR_DATE": date, "GIT_COMMITTER_DATE": date,
               "GIT_COMMITTER_EMAIL": author, "GIT_COMMITTER_NAME": author.split("@")[0]}
        self.run("add", "-A")
        self.run("commit", "-q", "--allow-empty", "-m", message, env=env)
        return self.run("rev-parse", "HEAD").strip()


def lines(n: int, stem: str = "line") -> str:
    return "".join(f"{stem} {i}\n" for i in range(n))


def signal_dataset(n: int = 500, seed: int = 0, null: bool = False) -> Dataset:
    """Rows with y = 3*wmc + 0.5*cbo + N(0, 0.1); other columns are distractors.

    With ``null`` the target is independent noise instead.
    """
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 20, size=(n, len(FEATURE_NAMES))).astype(float)
    X[:, FEATURE_NAMES.index("wmc")] = rng.integers(1, 16, n)
    X[:, FEATURE_NAMES.index("cbo")] = rng.integers(0, 11, n)
    y = 3 * X[:, FEATURE_NAMES.index("wmc")] + 0.5 * X[:, FEATURE_NAMES.index("cbo")] + rng.normal(0, 0.1, n)
    if null:
        y = rng.normal(10, 3, n)
    rows = [Row(tuple(x), float(t), f"c{i}", "MoveClass", f"p.C{i}", 10.0) for i, (x, t) in enumerate(zip(X, y))]
    return Dataset(FEATURE_NAMES, rows)


@pytest.fixture
def git_repo(tmp_path) -> GitRepo:
    return GitRepo(tmp_path / "repo")


@pytest.fixture(scope="session")
def synthetic_corpus(tmp_path_factory):
    return build_synthetic_corpus(tmp_path_factory.mktemp("corpus") / "repo", seed=7)


@pytest.fixture(scope="session")
def mined_corpus(synthetic_corpus):
    from refactor_effort.pipeline import mine

    return mine(synthetic_corpus.path)


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance_label", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        if report.when == "call" or report.nodeid not in _ACCEPTANCE:
            _ACCEPTANCE[report.nodeid] = (marker, verdict)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep.acceptance_label = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in sorted(_ACCEPTANCE.values()):
        terminalreporter.write_line(f"{verdict}  {label}")
