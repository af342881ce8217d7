"""Genetic-programming symbolic regression used as a comparison estimator.

Programs are prefix lists: operator names (``add``, ``sub``, ``mul``,
``div``), feature indices (``int``) and constants (``float``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .dataset import Dataset
from .errors import ConfigurationError, ContractViolation, DataError

Node = Union[str, int, float]
OPERATORS = ("add", "sub", "mul", "div")
_SYMBOLS = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


@dataclass(frozen=True)
class GpConfig:
    population: int = 200
    generations: int = 50
    tournament_size: int = 7
    max_tree_depth: int = 8
    init_depth: tuple[int, int] = (2, 6)
    crossover_prob: float = 0.9
    mutation_prob: float = 0.1
    const_range: tuple[float, float] = (-5.0, 5.0)
    seed: int = 42

    def __post_init__(self):
        if self.population < 2 or self.generations < 0 or self.tournament_size < 1:
            raise ConfigurationError("invalid GP population/generation/tournament settings")
        if self.max_tree_depth < self.init_depth[1]:
            raise ConfigurationError("max_tree_depth must cover the initial depth range")


def protected_div(a, b):
    """Division that yields 1 where the denominator is (numerically) zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(b) > 1e-9, a / np.where(b == 0, 1.0, b), 1.0)


def _apply(op: str, a, b):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    return protected_div(a, b)


def evaluate_program(program: Sequence[Node], X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    stack: list = []
    with np.errstate(over="ignore", invalid="ignore"):
        for node in reversed(program):
            if isinstance(node, str):
                a = stack.pop()
                b = stack.pop()
                stack.append(_apply(node, a, b))
            elif isinstance(node, int):
                stack.append(X[:, node])
            else:
                stack.append(np.full(len(X), node))
    out = stack[-1]
    return np.broadcast_to(out, (len(X),)).astype(float)


def subtree_end(program: Sequence[Node], start: int) -> int:
    """Index one past the subtree rooted at ``start``."""
    need = 1
    i = start
    while need:
        need += 1 if isinstance(program[i], str) else -1
        i += 1
    return i


def depth(program: Sequence[Node]) -> int:
    best = 0
    stack = []
    for node in program:
        d = stack.pop() if stack else 0
        best = max(best, d)
        if isinstance(node, str):
            stack += [d + 1, d + 1]
    return best


def to_infix(program: Sequence[Node], names: Sequence[str] = ()) -> str:
    def walk(i):
        node = program[i]
        if isinstance(node, str):
            left, j = walk(i + 1)
            right, k = walk(j)
            return f"({left} {_SYMBOLS[node]} {right})", k
        if isinstance(node, int):
            return (names[node] if node < len(names) else f"x{node}"), i + 1
        return repr(node), i + 1
    return walk(0)[0]


@dataclass
class GpExpression:
    program: list[Node]
    schema: tuple[str, ...]
    fitness: float = math.inf
    history: list[float] = field(default_factory=list, compare=False)
    kind = "gp"

    @property
    def depth(self) -> int:
        return depth(self.program)

    def __str__(self) -> str:
        return to_infix(self.program, self.schema)

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.schema):
            raise ContractViolation(f"expected {len(self.schema)} features per row")
        out = evaluate_program(self.program, X)
        return np.maximum(np.nan_to_num(out, nan=0.0, posinf=0.0, neginf=0.0), 0.0)

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        return self.predict_many(ds.X)

    def to_dict(self) -> dict:
        # JSON cannot tell 1 from 1.0, so node types are tagged explicitly.
        nodes = [
            ["op", n] if isinstance(n, str) else ["x", n] if isinstance(n, int) else ["c", n]
            for n in self.program
        ]
        return {"program": nodes, "schema": list(self.schema), "fitness": self.fitness}

    @classmethod
    def from_dict(cls, d: dict) -> "GpExpression":
        conv = {"op": str, "x": int, "c": float}
        program = [conv[tag](v) for tag, v in d["program"]]
        return cls(program, tuple(d["schema"]), float(d["fitness"]))


class _Generator:
    def __init__(self, cfg: GpConfig, n_features: int):
        self.cfg = cfg
        self.n_features = n_features

    def terminal(self, rng) -> Node:
        # features and constants drawn with equal weight
        if rng.random() < 0.5:
            return int(rng.integers(self.n_features))
        lo, hi = self.cfg.const_range
        return float(round(rng.uniform(lo, hi), 3))

    def grow(self, rng, max_d: int, full: bool) -> list[Node]:
        if max_d == 0 or (not full and rng.random() < 0.3):
            return [self.terminal(rng)]
        op = OPERATORS[int(rng.integers(len(OPERATORS)))]
        return [op] + self.grow(rng, max_d - 1, full) + self.grow(rng, max_d - 1, full)


def _fitness(program, X, y) -> float:
    pred = np.maximum(evaluate_program(program, X), 0.0)
    if not np.all(np.isfinite(pred)):
        return math.inf
    with np.errstate(over="ignore"):
        val = math.sqrt(float(np.mean((pred - y) ** 2)))
    return val if math.isfinite(val) else math.inf


def gp_fit(train: Dataset, cfg: GpConfig = GpConfig()) -> GpExpression:
    """Evolve an expression minimising training RMSE; returns the best of run.

    Random streams are derived from ``(seed, generation, index)``, so every
    individual's construction is independent of evaluation order.
    """
    if len(train) == 0:
        raise DataError("cannot fit GP on an empty training set")
    X, y = train.X, train.y
    gen = _Generator(cfg, X.shape[1])
    lo, hi = cfg.init_depth
    depths = list(range(lo, hi + 1))

    pop = []
    for i in range(cfg.population):
        rng = np.random.default_rng([cfg.seed, 0, i])
        d = depths[i % len(depths)]
        pop.append(gen.grow(rng, d, full=(i // len(depths)) % 2 == 0))
    fit = [_fitness(p, X, y) for p in pop]
    best_i = min(range(len(pop)), key=lambda i: (fit[i], i))
    best = (fit[best_i], list(pop[best_i]))
    history = [best[0]]

    for g in range(1, cfg.generations + 1):
        new_pop = [list(best[1])]  # elitism of one
        new_fit = [best[0]]
        for i in range(1, cfg.population):
            rng = np.random.default_rng([cfg.seed, g, i])

            def tournament():
                picks = rng.integers(len(pop), size=cfg.tournament_size)
                return min(picks.tolist(), key=lambda j: (fit[j], j))

            parent = pop[tournament()]
            roll = rng.random()
            if roll < cfg.crossover_prob:
                donor = pop[tournament()]
                a = int(rng.integers(len(parent)))
                b = int(rng.integers(len(donor)))
                child = parent[:a] + donor[b:subtree_end(donor, b)] + parent[subtree_end(parent, a):]
            elif roll < cfg.crossover_prob + cfg.mutation_prob:
                child = list(parent)
                k = int(rng.integers(len(child)))
                if isinstance(child[k], str):
                    child[k] = OPERATORS[int(rng.integers(len(OPERATORS)))]
                else:
                    child[k] = gen.terminal(rng)
            else:
                child = list(parent)
            if depth(child) > cfg.max_tree_depth:
                child = list(parent)
            new_pop.append(child)
            new_fit.append(_fitness(child, X, y))
        pop, fit = new_pop, new_fit
        best_i = min(range(len(pop)), key=lambda i: (fit[i], i))
        if fit[best_i] < best[0]:
            best = (fit[best_i], list(pop[best_i]))
        history.append(best[0])

    return GpExpression(best[1], tuple(train.schema), best[0], history)


def gp_predict(expr: GpExpression, x: Sequence[float]) -> float:
    return float(expr.predict_many(np.asarray(x, dtype=float).reshape(1, -1))[0])

