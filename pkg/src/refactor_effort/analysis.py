"""Class-level dependency graph and CK metrics over a parsed snapshot."""
from __future__ import annotations

import csv
import logging
from collections import Counter, defaultdict
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Optional, Sequence, Union

from .errors import ContractViolation
from .javaparse import PRIMITIVES, ClassSummary, base_type, parse_compilation_unit, type_names

logger = logging.getLogger(__name__)

EDGE_KINDS = ("Import", "Contain", "Call", "Return", "Implement", "Extend", "Parameter", "Use")


@dataclass(frozen=True)
class DependencyEdge:
    from_fqn: str
    to_fqn: str
    kind: str
    count: int = 1


@dataclass(frozen=True)
class CkMetrics:
    wmc: int = 0
    dit: int = 0
    noc: int = 0
    cbo: int = 0
    rfc: int = 0
    lcom: int = 0
    loc: int = 0
    fan_in: int = 0
    fan_out: int = 0

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_tuple(self) -> tuple[int, ...]:
        return astuple(self)


class Snapshot:
    """An immutable set of classes with syntactic name resolution."""

    def __init__(self, classes: Iterable[ClassSummary]):
        self.classes: list[ClassSummary] = []
        self.by_fqn: dict[str, ClassSummary] = {}
        for c in classes:
            if c.fqn in self.by_fqn:
                logger.warning("duplicate class %s (%s); keeping first", c.fqn, c.path)
                continue
            self.by_fqn[c.fqn] = c
            self.classes.append(c)
        self.nested: dict[str, list[str]] = defaultdict(list)
        for c in self.classes:
            if c.outer_fqn:
                self.nested[c.outer_fqn].append(c.fqn)
        self.unresolved = 0
        self._cache: dict[tuple[str, str], Optional[str]] = {}

    def __contains__(self, fqn: str) -> bool:
        return fqn in self.by_fqn

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def resolve(self, name: str, context: ClassSummary) -> Optional[str]:
        """Resolve a type name used inside ``context`` to a universe fqn."""
        name = base_type(name)
        if not name or name in PRIMITIVES:
            return None
        key = (name, context.fqn)
        if key not in self._cache:
            found = self._resolve(name, context)
            if found is None:
                self.unresolved += 1
            self._cache[key] = found
        return self._cache[key]

    def _resolve(self, name: str, ctx: ClassSummary) -> Optional[str]:
        if "." in name:
            if name in self.by_fqn:
                return name
            head, rest = name.split(".", 1)
            if head[:1].isupper():
                outer = self._resolve(head, ctx)
                if outer and f"{outer}.{rest}" in self.by_fqn:
                    return f"{outer}.{rest}"
            return None
        if name in ctx.type_params:
            return None
        scope: Optional[ClassSummary] = ctx
        while scope is not None:
            if scope.name == name:
                return scope.fqn
            if f"{scope.fqn}.{name}" in self.by_fqn:
                return f"{scope.fqn}.{name}"
            scope = self.by_fqn.get(scope.outer_fqn) if scope.outer_fqn else None
        for imp in ctx.imports:
            if imp.startswith("static ") or imp.endswith(".*"):
                continue
            if imp.rsplit(".", 1)[-1] == name:
                # an explicit import shadows same-package classes even if external
                return imp if imp in self.by_fqn else None
        local = f"{ctx.package}.{name}" if ctx.package else name
        if local in self.by_fqn:
            return local
        for imp in ctx.imports:
            if imp.endswith(".*") and not imp.startswith("static "):
                cand = f"{imp[:-2]}.{name}"
                if cand in self.by_fqn:
                    return cand
        return None

    def superclass_of(self, cls: ClassSummary) -> Optional[str]:
        if cls.superclass_fqn is None or cls.kind == "interface":
            return None
        return self.resolve(cls.superclass_fqn, cls)


def as_snapshot(universe: Union[Snapshot, Sequence[ClassSummary]]) -> Snapshot:
    return universe if isinstance(universe, Snapshot) else Snapshot(universe)


def parse_sources(files: Iterable[tuple[str, Union[str, bytes]]]) -> Snapshot:
    """Parse ``(path, source)`` pairs into a snapshot."""
    classes = []
    for path, text in files:
        classes.extend(parse_compilation_unit(text, path))
    return Snapshot(classes)


def _raw_edges(snap: Snapshot, cls: ClassSummary) -> Iterable[tuple[str, str]]:
    def targets(type_text: str):
        for name in type_names(type_text):
            found = snap.resolve(name, cls)
            if found:
                yield found

    if cls.outer_fqn is None:
        for imp in cls.imports:
            target = imp[len("static "):] if imp.startswith("static ") else imp
            if target.endswith(".*"):
                continue
            if target in snap:
                yield target, "Import"
            elif imp.startswith("static ") and target.rsplit(".", 1)[0] in snap:
                yield target.rsplit(".", 1)[0], "Import"
    for inner in snap.nested.get(cls.fqn, ()):
        yield inner, "Contain"
    if cls.superclass_fqn and cls.kind != "interface":
        sup = snap.superclass_of(cls)
        if sup:
            yield sup, "Extend"
    for iface in cls.interface_fqns:
        found = snap.resolve(iface, cls)
        if found:
            yield found, "Extend" if cls.kind == "interface" else "Implement"
    for ftype in cls.field_types:
        for t in targets(ftype):
            yield t, "Use"
    for name in cls.initializer_types:
        for t in targets(name):
            yield t, "Use"
    for m in cls.methods:
        if not m.is_constructor:
            for t in targets(m.return_type):
                yield t, "Return"
        for ptype in m.parameter_types:
            for t in targets(ptype):
                yield t, "Parameter"
        for name in m.referenced_types:
            for t in targets(name):
                yield t, "Use"
        for receiver, _ in m.invoked_names:
            if receiver != "?":
                found = snap.resolve(receiver, cls)
                if found:
                    yield found, "Call"


def extract_dependencies(universe: Union[Snapshot, Sequence[ClassSummary]]) -> list[DependencyEdge]:
    """Typed class-to-class edges with multiplicities folded into ``count``."""
    snap = as_snapshot(universe)
    counts: Counter = Counter()
    for cls in snap.classes:
        for target, kind in _raw_edges(snap, cls):
            if target != cls.fqn:
                counts[(cls.fqn, target, kind)] += 1
    order = {k: i for i, k in enumerate(EDGE_KINDS)}
    keys = sorted(counts, key=lambda k: (k[0], k[1], order[k[2]]))
    return [DependencyEdge(f, t, k, counts[(f, t, k)]) for f, t, k in keys]


def _depth_of_inheritance(snap: Snapshot, cls: ClassSummary) -> int:
    depth = 0
    seen = {cls.fqn}
    current = cls
    while True:
        parent = snap.superclass_of(current)
        if parent is None:
            return depth
        if parent in seen:
            logger.warning("inheritance cycle through %s; cut at first revisit", parent)
            return depth
        seen.add(parent)
        depth += 1
        current = snap.by_fqn[parent]


def lcom1(method_fields: Sequence[Iterable[str]]) -> int:
    """LCOM1: non-sharing method pairs minus sharing pairs, floored at zero."""
    sets = [set(f) for f in method_fields]
    p = q = 0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i] & sets[j]:
                q += 1
            else:
                p += 1
    return max(p - q, 0)


def compute_ck(
    target: ClassSummary,
    universe: Union[Snapshot, Sequence[ClassSummary]],
    edges: Sequence[DependencyEdge],
) -> CkMetrics:
    snap = as_snapshot(universe)
    if target.fqn not in snap:
        raise ContractViolation(f"{target.fqn} is not part of the universe")
    outgoing = {e.to_fqn for e in edges if e.from_fqn == target.fqn}
    incoming = {e.from_fqn for e in edges if e.to_fqn == target.fqn}
    invoked = {inv for m in target.methods for inv in m.invoked_names}
    return CkMetrics(
        wmc=sum(m.cyclomatic_complexity for m in target.methods),
        dit=_depth_of_inheritance(snap, target),
        noc=sum(1 for c in snap.classes if snap.superclass_of(c) == target.fqn),
        cbo=len((outgoing | incoming) - {target.fqn}),
        rfc=len(target.methods) + len(invoked),
        lcom=lcom1([m.accessed_fields for m in target.methods]),
        loc=target.loc,
        fan_in=len(incoming),
        fan_out=len(outgoing),
    )


def compute_all_ck(
    universe: Union[Snapshot, Sequence[ClassSummary]],
    edges: Optional[Sequence[DependencyEdge]] = None,
) -> dict[str, CkMetrics]:
    """CK metrics for every class, sharing one pass over the edge list."""
    snap = as_snapshot(universe)
    if edges is None:
        edges = extract_dependencies(snap)
    out_by = defaultdict(set)
    in_by = defaultdict(set)
    for e in edges:
        out_by[e.from_fqn].add(e.to_fqn)
        in_by[e.to_fqn].add(e.from_fqn)
    children = Counter()
    for c in snap.classes:
        sup = snap.superclass_of(c)
        if sup:
            children[sup] += 1
    result = {}
    for c in snap.classes:
        invoked = {inv for m in c.methods for inv in m.invoked_names}
        result[c.fqn] = CkMetrics(
            wmc=sum(m.cyclomatic_complexity for m in c.methods),
            dit=_depth_of_inheritance(snap, c),
            noc=children[c.fqn],
            cbo=len((out_by[c.fqn] | in_by[c.fqn]) - {c.fqn}),
            rfc=len(c.methods) + len(invoked),
            lcom=lcom1([m.accessed_fields for m in c.methods]),
            loc=c.loc,
            fan_in=len(in_by[c.fqn]),
            fan_out=len(out_by[c.fqn]),
        )
    return result


def outgoing_kind_counts(fqn: str, edges: Sequence[DependencyEdge]) -> dict[str, int]:
    """Sum of outgoing edge multiplicities of ``fqn`` per dependency kind."""
    totals = dict.fromkeys(EDGE_KINDS, 0)
    for e in edges:
        if e.from_fqn == fqn:
            totals[e.kind] += e.count
    return totals


def write_metrics_csv(path, metrics: dict[str, CkMetrics]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("fqn",) + CkMetrics.names())
        for fqn in sorted(metrics):
            w.writerow((fqn,) + metrics[fqn].as_tuple())


def read_metrics_csv(path) -> dict[str, CkMetrics]:
    with open(path, encoding="utf-8", newline="") as fh:
        return {
            row["fqn"]: CkMetrics(**{k: int(row[k]) for k in CkMetrics.names()})
            for row in csv.DictReader(fh)
        }


def write_edges_csv(path, edges: Sequence[DependencyEdge]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("from", "to", "kind", "count"))
        for e in edges:
            w.writerow((e.from_fqn, e.to_fqn, e.kind, e.count))


def read_edges_csv(path) -> list[DependencyEdge]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            DependencyEdge(r["from"], r["to"], r["kind"], int(r["count"]))
            for r in csv.DictReader(fh)
        ]
