"""Scripted Java repositories with planted class-level refactorings.

The generator keeps an in-memory model of classes, renders it to Java after
every step and commits the result with controlled authors and timestamps.
Class references are stored by stable id, so moving or renaming a class
also rewrites the imports and type names of every class that uses it.
"""
from __future__ import annotations

import os
import re
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .detector import OP_KINDS

AUTHORS = (
    ("Ana Souza", "ana@example.org"),
    ("Bo Lindqvist", "Bo.Lindqvist@example.org"),
    ("Chidi Okafor", "chidi@example.org"),
)
PACKAGES = ("org.acme.core", "org.acme.io", "org.acme.model", "org.acme.util", "org.acme.web")
NOUNS = (
    "Order", "Invoice", "Ledger", "Route", "Ticket", "Cache", "Parser", "Token", "Report",
    "Widget", "Session", "Account", "Shipment", "Catalog", "Budget", "Sensor", "Channel",
    "Profile", "Bundle", "Quota", "Badge", "Schedule", "Tariff", "Voucher", "Metric",
)
VERBS = ("compute", "load", "store", "render", "merge", "check", "update", "resolve",
         "build", "scan", "apply", "flush", "collect", "encode", "measure")
START_EPOCH = 1672650000  # 2023-01-02 09:00 UTC

_REF = re.compile(r"\{C:(\d+)\}")


@dataclass
class MethodSpec:
    name: str
    params: list[tuple[str, str]]
    returns: str
    body: list[str]


@dataclass
class ClassSpec:
    cid: int
    package: str
    name: str
    fields: list[tuple[str, str]] = field(default_factory=list)
    methods: list[MethodSpec] = field(default_factory=list)

    @property
    def fqn(self) -> str:
        return f"{self.package}.{self.name}"

    @property
    def path(self) -> str:
        return "src/main/java/" + self.package.replace(".", "/") + f"/{self.name}.java"

    def members(self) -> set[str]:
        return {f"{m.name}/{len(m.params)}" for m in self.methods} | {f for _, f in self.fields}


@dataclass
class PlantedOp:
    commit_index: int
    kind: str
    before_fqn: str
    after_fqn: str
    commit_id: str = ""


@dataclass
class SyntheticCorpus:
    path: Path
    commit_ids: list[str]
    planted: list[PlantedOp]
    classes: dict[int, ClassSpec]


class _Builder:
    def __init__(self, path: Path, seed: int):
        self.path = Path(path)
        self.rng = np.random.default_rng(seed)
        self.classes: dict[int, ClassSpec] = {}
        self.next_id = 0
        self.counter = 0
        self.used_names: set[str] = set()
        self.clock = START_EPOCH
        self.commit_ids: list[str] = []

    # -- naming ---------------------------------------------------------
    def fresh(self, stem: str) -> str:
        self.counter += 1
        return f"{stem}{self.counter}"

    def class_name(self) -> str:
        while True:
            noun = NOUNS[int(self.rng.integers(len(NOUNS)))]
            suffix = ("Service", "Manager", "Store", "Handler", "Mapper", "Registry", "")[
                int(self.rng.integers(7))]
            name = self.fresh(noun + suffix)
            if name not in self.used_names:
                self.used_names.add(name)
                return name

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    # -- content ----------------------------------------------------------
    def statement(self, cls: ClassSpec, params: list[tuple[str, str]]) -> str:
        ints = [f for t, f in cls.fields if t == "int"]
        refs = [(t, f) for t, f in cls.fields if t.startswith("{C:")]
        roll = self.rng.random()
        k = int(self.rng.integers(2, 50))
        int_params = [p for t, p in params if t == "int"]
        if roll < 0.2 and int_params and ints:
            return f"if ({self.pick(int_params)} > {k}) {{ {self.pick(ints)} = {self.pick(int_params)}; }}"
        if roll < 0.35:
            return f"for (int i = 0; i < {k}; i++) {{ total += i % {k // 2 + 1}; }}"
        if roll < 0.55 and refs:
            t, f = refs[int(self.rng.integers(len(refs)))]
            target = self.classes.get(int(_REF.match(t).group(1)))
            if target is not None and target.methods:
                m = self.pick(target.methods)
                args = ", ".join(str(int(self.rng.integers(9))) if pt == "int" else "null"
                                 for pt, _ in m.params)
                return f"{f}.{m.name}({args});"
        if roll < 0.7 and len(self.classes) > 1:
            other = self.pick(sorted(self.classes))
            if other != cls.cid:
                return f"{{C:{other}}} tmp{k} = new {{C:{other}}}();"
        if ints:
            f = self.pick(ints)
            return f"total += {f} * {k}{' > 0 && ' + f + ' < 100 ? 1 : 0' if roll > 0.9 else ''};"
        return f"total += {k};"

    def method(self, cls: ClassSpec) -> MethodSpec:
        params = [("int", f"arg{i}") for i in range(int(self.rng.integers(0, 3)))]
        if self.rng.random() < 0.3 and self.classes:
            other = self.pick(sorted(self.classes))
            if other != cls.cid:
                params.append((f"{{C:{other}}}", "peer"))
        body = [self.statement(cls, params) for _ in range(int(self.rng.integers(1, 5)))]
        returns = "int" if self.rng.random() < 0.6 else "void"
        return MethodSpec(self.fresh(self.pick(VERBS) + self.pick(NOUNS)), params, returns, body)

    def new_field(self, cls: ClassSpec) -> tuple[str, str]:
        others = [c for c in sorted(self.classes) if c != cls.cid]
        if others and self.rng.random() < 0.4:
            return f"{{C:{self.pick(others)}}}", self.fresh("ref")
        return "int", self.fresh("count")

    def new_class(self, package: Optional[str] = None) -> ClassSpec:
        cls = ClassSpec(self.next_id, package or self.pick(PACKAGES), self.class_name())
        self.next_id += 1
        self.classes[cls.cid] = cls
        for _ in range(int(self.rng.integers(1, 4))):
            cls.fields.append(self.new_field(cls))
        for _ in range(int(self.rng.integers(4, 8))):
            cls.methods.append(self.method(cls))
        return cls

    def render(self, cls: ClassSpec) -> str:
        def sub(text: str) -> str:
            return _REF.sub(lambda m: self.classes[int(m.group(1))].name
                            if int(m.group(1)) in self.classes else "Object", text)

        lines = []
        for t, f in cls.fields:
            lines.append(f"    private {sub(t)} {f};")
        for m in cls.methods:
            params = ", ".join(f"{sub(t)} {p}" for t, p in m.params)
            lines.append("")
            lines.append(f"    public {m.returns} {m.name}({params}) {{")
            lines.append("        int total = 0;")
            lines += [f"        {sub(s)}" for s in m.body]
            if m.returns == "int":
                lines.append("        return total;")
            lines.append("    }")
        text = "\n".join(lines)
        raw = " ".join([t for t, _ in cls.fields] + [t for m in cls.methods for t, _ in m.params]
                       + [s for m in cls.methods for s in m.body])
        imports = sorted({
            self.classes[int(i)].fqn for i in _REF.findall(raw)
            if int(i) in self.classes and self.classes[int(i)].package != cls.package
        })
        head = [f"package {cls.package};", ""]
        if imports:
            head += [f"import {imp};" for imp in imports] + [""]
        return "\n".join(head + [f"public class {cls.name} {{"]) + "\n" + text + "\n}\n"

    # -- git --------------------------------------------------------------
    def git(self, *args: str, env: Optional[dict] = None) -> str:
        full_env = dict(os.environ, **(env or {}))
        out = subprocess.run(["git", "-C", str(self.path), *args], check=True,
                             capture_output=True, env=full_env)
        return out.stdout.decode()

    def write_tree(self) -> None:
        root = self.path / "src"
        wanted = {c.path: self.render(c) for c in self.classes.values()}
        if root.exists():
            for existing in root.rglob("*.java"):
                rel = existing.relative_to(self.path).as_posix()
                if rel not in wanted:
                    existing.unlink()
        for rel, text in wanted.items():
            target = self.path / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            if not target.exists() or target.read_text() != text:
                target.write_text(text)

    def commit(self, message: str) -> str:
        roll = self.rng.random()
        if roll < 0.7:
            self.clock += int(self.rng.integers(10, 180)) * 60
        elif roll < 0.9:
            self.clock += int(self.rng.integers(4, 20)) * 3600
        else:
            self.clock += int(self.rng.integers(1, 4)) * 86400
        name, email = AUTHORS[int(self.rng.integers(len(AUTHORS)))]
        date = f"{self.clock} +0000"
        env = {
            "GIT_AUTHOR_NAME": name, "GIT_AUTHOR_EMAIL": email, "GIT_AUTHOR_DATE": date,
            "GIT_COMMITTER_NAME": name, "GIT_COMMITTER_EMAIL": email, "GIT_COMMITTER_DATE": date,
        }
        self.write_tree()
        self.git("add", "-A")
        self.git("commit", "-q", "--allow-empty", "-m", message, env=env)
        sha = self.git("rev-parse", "HEAD").strip()
        self.commit_ids.append(sha)
        return sha

    # -- scripted steps ---------------------------------------------------
    def plain_change(self) -> str:
        roll = self.rng.random()
        cls = self.classes[self.pick(sorted(self.classes))]
        if roll < 0.35:
            cls.methods.append(self.method(cls))
            return f"Add {cls.methods[-1].name} to {cls.name}"
        if roll < 0.75:
            m = self.pick(cls.methods)
            m.body.append(self.statement(cls, m.params))
            if len(m.body) > 2 and self.rng.random() < 0.5:
                m.body.pop(0)
            return f"Tweak {m.name}"
        if roll < 0.9:
            cls.fields.append(self.new_field(cls))
            return f"Track more state in {cls.name}"
        new = self.new_class()
        return f"Introduce {new.name}"

    def candidates(self, min_members: int) -> list[int]:
        return [cid for cid, c in sorted(self.classes.items()) if len(c.members()) >= min_members]

    def refactor(self, kind: str, index: int) -> PlantedOp:
        if kind == "ExtractClass":
            src = self.classes[self.pick([c for c in self.candidates(0)
                                          if len(self.classes[c].methods) >= 6] or self.candidates(0))]
            moved = [src.methods[i] for i in sorted(
                self.rng.choice(len(src.methods), size=3, replace=False).tolist())]
            new = ClassSpec(self.next_id, src.package, self.class_name())
            self.next_id += 1
            new.methods = moved
            src.methods = [m for m in src.methods if m not in moved]
            ints = [fl for fl in src.fields if fl[0] == "int"]
            if ints and len(src.fields) > 1:
                new.fields.append(ints[0])
                src.fields.remove(ints[0])
            self.classes[new.cid] = new
            src.fields.append((f"{{C:{new.cid}}}", self.fresh("delegate")))
            return PlantedOp(index, kind, src.fqn, new.fqn)
        cls = self.classes[self.pick(self.candidates(4))]
        before = cls.fqn
        if kind in ("MoveClass", "MoveAndRenameClass"):
            cls.package = self.pick([p for p in PACKAGES if p != cls.package])
        if kind in ("RenameClass", "MoveAndRenameClass"):
            cls.name = self.class_name()
        if len(cls.members()) >= 6 and self.rng.random() < 0.4:
            cls.methods.append(self.method(cls))  # small concurrent edit
        return PlantedOp(index, kind, before, cls.fqn)


def build_synthetic_corpus(path, seed: int = 7, n_refactorings: int = 20,
                           n_plain: int = 30, n_initial_classes: int = 14) -> SyntheticCorpus:
    """Create a git repo at ``path`` and return it with its planted ground truth.

    The first commit imports ``n_initial_classes`` classes and counts as one
    of the ``n_plain`` non-refactoring commits. Refactoring kinds cycle
    through all four kinds; some refactoring commits also carry an unrelated
    edit so that refactored lines are a strict subset of commit lines.
    """
    b = _Builder(Path(path), seed)
    b.path.mkdir(parents=True, exist_ok=True)
    subprocess.run(["git", "init", "-q", "-b", "main", str(b.path)], check=True)
    b.git("config", "user.name", "corpus")
    b.git("config", "user.email", "corpus@example.org")
    b.git("config", "commit.gpgsign", "false")
    for _ in range(n_initial_classes):
        b.new_class()
    b.commit("Initial import")

    slots = ["R"] * n_refactorings + ["P"] * (n_plain - 1)
    slots = [slots[i] for i in b.rng.permutation(len(slots))]
    planted = []
    r = 0
    for slot in slots:
        index = len(b.commit_ids)
        if slot == "P":
            b.commit(b.plain_change())
            continue
        kind = OP_KINDS[r % len(OP_KINDS)]
        r += 1
        op = b.refactor(kind, index)
        if b.rng.random() < 0.5:
            other = b.classes[b.pick(sorted(b.classes))]
            if other.fqn not in (op.before_fqn, op.after_fqn):
                m = b.pick(other.methods)
                m.body.append(b.statement(other, m.params))
        op.commit_id = b.commit(f"{kind}: {op.before_fqn} -> {op.after_fqn}")
        planted.append(op)
    return SyntheticCorpus(b.path, b.commit_ids, planted, b.classes)
