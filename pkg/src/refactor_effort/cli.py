"""Command-line entry point: ``mine``, ``train``, ``evaluate`` and ``predict``.

Exit codes: 0 success, 1 usage or configuration error, 2 data/contract error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import baselines, gbm
from .dataset import read_csv, split, write_csv
from .detector import DEFAULT_THRESHOLD, write_ops_csv
from .errors import ConfigurationError, ContractViolation, DataError
from .evaluation import EvalReport, evaluate
from .gp import GpConfig
from .history import DEFAULT_CAP_HOURS, DEFAULT_SEED_HOURS, DEFAULT_SESSION_GAP_HOURS, write_commits_manifest
from .pipeline import mine, snapshot_from_directory
from .planner import derive_moves, estimate_plan, read_cluster_assignment, render_report

logger = logging.getLogger("refactor_effort")

MODEL_CHOICES = ("gbm", "mean", "cocomo", "gp")
LABELS = {"gbm": "GBM", "mean": "Mean", "cocomo": "COCOMOII", "gp": "GeneticP"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="refactor-effort", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("mine", help="mine a repository into an effort dataset")
    m.add_argument("repo")
    m.add_argument("--branch", default="HEAD")
    m.add_argument("--max-commits", type=int)
    m.add_argument("--session-gap", type=float, default=DEFAULT_SESSION_GAP_HOURS, help="hours")
    m.add_argument("--seed-hours", type=float, default=DEFAULT_SEED_HOURS)
    m.add_argument("--cap-hours", type=float, default=DEFAULT_CAP_HOURS)
    m.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="member-signature Jaccard threshold for class matching")
    m.add_argument("--max-target-hours", type=float)
    m.add_argument("-o", "--output", default="dataset.csv")
    m.add_argument("--commits-manifest")
    m.add_argument("--ops-dump")

    t = sub.add_parser("train", help="fit an estimator and report test-split scores")
    t.add_argument("dataset")
    t.add_argument("--model", choices=MODEL_CHOICES, default="gbm")
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--test-fraction", type=float, default=0.2)
    t.add_argument("--trees", type=int, default=300)
    t.add_argument("--depth", type=int, default=4)
    t.add_argument("--rate", type=float, default=0.05)
    t.add_argument("--min-leaf", type=int, default=5)
    t.add_argument("--subsample", type=float, default=0.8)
    t.add_argument("--early-stopping", type=int)
    t.add_argument("--population", type=int, default=200)
    t.add_argument("--generations", type=int, default=50)
    t.add_argument("-o", "--output", default="model.json")

    e = sub.add_parser("evaluate", help="compare a trained model with the baselines")
    e.add_argument("dataset")
    e.add_argument("--model-file", required=True)
    e.add_argument("--baselines", action="store_true")
    e.add_argument("--seed", type=int, default=42)
    e.add_argument("--test-fraction", type=float, default=0.2)
    e.add_argument("--population", type=int, default=200)
    e.add_argument("--generations", type=int, default=50)

    pr = sub.add_parser("predict", help="cost the moves implied by a clustering")
    pr.add_argument("snapshot", help="directory holding the current source tree")
    pr.add_argument("--clusters", required=True)
    pr.add_argument("--model-file", required=True)
    pr.add_argument("--format", choices=("text", "csv"), default="text")
    pr.add_argument("-o", "--output")
    return p


def _fit(kind: str, train, args):
    if kind == "gbm":
        hp = gbm.GbmHyperparams(
            n_trees=args.trees, max_depth=args.depth, learning_rate=args.rate,
            min_samples_leaf=args.min_leaf, subsample=args.subsample, seed=args.seed,
            early_stopping_rounds=args.early_stopping,
        )
        valid = None
        if hp.early_stopping_rounds and len(train) >= 4:
            train, valid = split(train, 0.2, args.seed)
        return gbm.fit(train, valid, hp)
    if kind == "mean":
        return baselines.mean_fit(train)
    if kind == "cocomo":
        return baselines.CocomoModel(schema=tuple(train.schema))
    cfg = GpConfig(population=args.population, generations=args.generations, seed=args.seed)
    return baselines.gp_fit(train, cfg)


def format_table(rows: Sequence[tuple[str, EvalReport]]) -> str:
    lines = [f"{'Estimation Model':<18}{'R2':>14}{'RMSE':>12}{'MAE':>12}{'n':>6}"]
    for label, rep in rows:
        lines.append(f"{label:<18}{rep.format_r2():>14}{rep.rmse:>12.2f}{rep.mae:>12.2f}{rep.n:>6}")
    return "\n".join(lines)


def cmd_mine(args) -> int:
    result = mine(
        args.repo, args.branch, args.max_commits, args.session_gap, args.seed_hours,
        args.cap_hours, args.threshold, args.max_target_hours,
    )
    write_csv(result.dataset, args.output)
    if args.commits_manifest:
        write_commits_manifest(args.commits_manifest, result.commits)
    if args.ops_dump:
        write_ops_csv(args.ops_dump, result.ops)
    print(f"{len(result.commits)} commits, {len(result.ops)} refactorings, "
          f"{len(result.dataset)} samples -> {args.output}")
    for key, value in sorted(result.diagnostics.items()):
        print(f"  {key}: {value}")
    return 0


def cmd_train(args) -> int:
    ds = read_csv(args.dataset)
    train, test = split(ds, args.test_fraction, args.seed)
    model = _fit(args.model, train, args)
    gbm.save_model(model, args.output)
    report = evaluate(model.predict_dataset(test), test.y)
    print(format_table([(LABELS[args.model], report)]))
    print(f"model written to {args.output}")
    return 0


def cmd_evaluate(args) -> int:
    ds = read_csv(args.dataset)
    model = gbm.load_model(args.model_file)
    train, test = split(ds, args.test_fraction, args.seed)
    rows = [(LABELS.get(model.kind, model.kind), evaluate(model.predict_dataset(test), test.y))]
    if args.baselines:
        for kind in MODEL_CHOICES:
            if kind == model.kind:
                continue
            fitted = _fit(kind, train, argparse.Namespace(
                seed=args.seed, population=args.population, generations=args.generations,
                trees=300, depth=4, rate=0.05, min_leaf=5, subsample=0.8, early_stopping=None,
            ))
            rows.append((LABELS[kind], evaluate(fitted.predict_dataset(test), test.y)))
    order = {label: i for i, label in enumerate(LABELS[k] for k in ("mean", "gbm", "cocomo", "gp"))}
    rows.sort(key=lambda r: order.get(r[0], len(order)))
    print(f"Benchmark on {len(test)} held-out samples (person-hours)")
    print(format_table(rows))
    if args.baselines:
        print(f"Note: COCOMOII {baselines.CocomoModel.note}; "
              "GeneticP evolves over the same feature columns as GBM.")
    return 0


def cmd_predict(args) -> int:
    snap = snapshot_from_directory(args.snapshot)
    assignment = read_cluster_assignment(args.clusters)
    model = gbm.load_model(args.model_file)
    plan = estimate_plan(derive_moves(assignment, snap), snap, model)
    text = render_report(plan, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {"mine": cmd_mine, "train": cmd_train, "evaluate": cmd_evaluate, "predict": cmd_predict}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, ContractViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
