# Mine an effort dataset, fit the booster and compare it against the baselines.
import tempfile

from refactor_effort import gbm
from refactor_effort.baselines import CocomoModel, GpConfig, gp_fit, mean_fit
from refactor_effort.dataset import split
from refactor_effort.evaluation import evaluate
from refactor_effort.pipeline import mine
from refactor_effort.synthetic import build_synthetic_corpus

tmp = tempfile.mkdtemp()
corpus = build_synthetic_corpus(f"{tmp}/repo", seed=11, n_refactorings=60, n_plain=260, n_initial_classes=20)
result = mine(corpus.path)
ds = result.dataset
print(len(result.commits), "commits ->", len(ds), "samples;", result.diagnostics)

# %% one row: parent-snapshot metrics of the class plus commit context
row = ds.rows[0]
print(row.op_kind, row.before_fqn, dict(zip(ds.schema, row.features)), "->", round(row.target, 3), "h")

# %% 80/20 split, same seed everywhere
train, test = split(ds, 0.2, seed=42)
models = {
    "Mean": mean_fit(train),
    "GBM": gbm.fit(train),
    "COCOMOII": CocomoModel(schema=train.schema),
    "GeneticP": gp_fit(train, GpConfig(generations=20)),
}
for name, model in models.items():
    rep = evaluate(model.predict_dataset(test), test.y)
    print(f"{name:<10} R2 {rep.format_r2():>10}  RMSE {rep.rmse:8.2f}  MAE {rep.mae:8.2f}")

# COCOMO sizes a refactoring by its changed lines, which grossly overshoots
print("COCOMO for 25 lines:", round(models["COCOMOII"].predict_lines([25])[0], 2), "h")
