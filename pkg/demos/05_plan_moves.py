# Cost the class moves implied by a clustering of the current source tree.
import tempfile
from pathlib import Path

from refactor_effort import gbm
from refactor_effort.pipeline import mine, snapshot_from_directory
from refactor_effort.planner import derive_moves, estimate_plan, read_cluster_assignment, render_report
from refactor_effort.synthetic import build_synthetic_corpus

tmp = tempfile.mkdtemp()
corpus = build_synthetic_corpus(f"{tmp}/repo", seed=7)
model = gbm.fit(mine(corpus.path).dataset, hp=gbm.GbmHyperparams(min_samples_leaf=2))

# %% every cluster goes to the package most of its members already live in
clusters = read_cluster_assignment(Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "clusters.txt")
snap = snapshot_from_directory(corpus.path)
moves = derive_moves(clusters, snap)
for mv in moves:
    print(mv.class_fqn, ":", mv.from_package, "->", mv.to_package)

# %% predicted person-hours, largest first
plan = estimate_plan(moves, snap, model)
print(render_report(plan))
print(render_report(plan, "csv"))
