"""Flat numeric training data: features of the pre-refactoring class plus RTT.

CSV layout: ``commit_id,op_kind,before_fqn,rloc``, the feature columns in
``FEATURE_NAMES`` order, then ``rtt_hours``. ``rloc`` is provenance (the
refactored line count) and is not a model feature.
"""
from __future__ import annotations

import csv
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .analysis import EDGE_KINDS, CkMetrics, DependencyEdge, outgoing_kind_counts
from .detector import OP_KINDS
from .effort import EffortTarget
from .errors import ContractViolation, DataError

logger = logging.getLogger(__name__)

CK_FEATURES = CkMetrics.names()
KIND_FEATURES = tuple(f"kind_{k}" for k in OP_KINDS)
DEP_FEATURES = tuple(f"dep_{k}" for k in EDGE_KINDS)
FEATURE_NAMES = CK_FEATURES + KIND_FEATURES + ("ops_in_commit", "cloc") + DEP_FEATURES
PROVENANCE = ("commit_id", "op_kind", "before_fqn", "rloc")
TARGET = "rtt_hours"


def feature_vector(
    metrics: Optional[CkMetrics],
    kind: str,
    ops_in_commit: int,
    cloc: float,
    dep_counts: Mapping[str, int],
) -> tuple[float, ...]:
    ck = metrics.as_tuple() if metrics is not None else (0,) * len(CK_FEATURES)
    onehot = tuple(1 if k == kind else 0 for k in OP_KINDS)
    deps = tuple(dep_counts.get(k, 0) for k in EDGE_KINDS)
    return tuple(float(v) for v in ck + onehot + (ops_in_commit, cloc) + deps)


@dataclass(frozen=True)
class Row:
    features: tuple[float, ...]
    target: float
    commit_id: str
    op_kind: str
    before_fqn: str
    rloc: float = 0.0


@dataclass
class Dataset:
    schema: tuple[str, ...] = FEATURE_NAMES
    rows: list[Row] = field(default_factory=list)
    imputed: int = 0

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.schema == other.schema and self.rows == other.rows

    @property
    def X(self) -> np.ndarray:
        return np.array([r.features for r in self.rows], dtype=float).reshape(len(self.rows), len(self.schema))

    @property
    def y(self) -> np.ndarray:
        return np.array([r.target for r in self.rows], dtype=float)


def assemble(
    targets: Sequence[EffortTarget],
    metrics: Mapping[str, Mapping[str, CkMetrics]],
    edges: Mapping[str, Sequence[DependencyEdge]],
) -> Dataset:
    """Join targets with features of the *parent* snapshot of each op's commit.

    ``metrics`` and ``edges`` are keyed by the commit id of the op; each value
    describes the snapshot before that commit. Missing class metrics are
    imputed as zeros and counted in ``Dataset.imputed``.
    """
    per_commit = Counter(t.op.commit_id for t in targets)
    ds = Dataset()
    for t in sorted(targets, key=lambda t: (t.timestamp_utc, t.op.after_fqn)):
        op = t.op
        m = metrics.get(op.commit_id, {}).get(op.before_fqn)
        if m is None:
            ds.imputed += 1
            logger.debug("no parent metrics for %s in %s; imputing zeros", op.before_fqn, op.commit_id[:10])
        deps = outgoing_kind_counts(op.before_fqn, edges.get(op.commit_id, ()))
        vec = feature_vector(m, op.kind, per_commit[op.commit_id], t.cloc, deps)
        if len(vec) != len(ds.schema):
            raise DataError("feature vector does not match schema")
        ds.rows.append(Row(vec, float(t.rtt_hours), op.commit_id, op.kind, op.before_fqn,
                           float(op.touched_lines)))
    return ds


def split(ds: Dataset, test_fraction: float = 0.2, seed: int = 42) -> tuple[Dataset, Dataset]:
    """Seeded shuffle split; the test side gets round(n * test_fraction) rows."""
    n = len(ds)
    if n < 2:
        raise DataError("need at least 2 rows to split")
    if not 0 < test_fraction < 1:
        raise ContractViolation("test_fraction must lie in (0, 1)")
    n_test = max(1, math.floor(n * test_fraction + 0.5))
    if n - n_test < 1:
        raise DataError(f"split of {n} rows at {test_fraction} leaves an empty train side")
    perm = np.random.default_rng(seed).permutation(n)
    test_idx = sorted(perm[:n_test].tolist())
    train_idx = sorted(perm[n_test:].tolist())
    return (
        Dataset(ds.schema, [ds.rows[i] for i in train_idx]),
        Dataset(ds.schema, [ds.rows[i] for i in test_idx]),
    )


def header(schema: Sequence[str] = FEATURE_NAMES) -> list[str]:
    return list(PROVENANCE) + list(schema) + [TARGET]


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header(ds.schema))
        for r in ds.rows:
            w.writerow([r.commit_id, r.op_kind, r.before_fqn, repr(float(r.rloc))]
                       + [repr(float(v)) for v in r.features] + [repr(float(r.target))])


def read_csv(path) -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            head = next(reader)
        except StopIteration:
            raise DataError("empty dataset file (header row missing)", line=1)
        if head[:len(PROVENANCE)] != list(PROVENANCE) or head[-1] != TARGET:
            raise DataError("unexpected dataset header", line=1)
        schema = tuple(head[len(PROVENANCE):-1])
        ds = Dataset(schema=schema)
        width = len(head)
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != width:
                raise DataError(f"expected {width} cells, found {len(cells)}", line=lineno)
            try:
                nums = [float(c) for c in cells[3:]]
            except ValueError as exc:
                raise DataError(f"non-numeric cell: {exc}", line=lineno) from None
            ds.rows.append(Row(tuple(nums[1:-1]), nums[-1], cells[0], cells[1], cells[2], nums[0]))
    return ds
