from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import signal_dataset
from refactor_effort import gbm
from refactor_effort.baselines import (
    CocomoConfig, CocomoModel, GpConfig, GpExpression, MeanModel, cocomo_predict, gp_fit, gp_predict,
    mean_fit, mean_predict,
)
from refactor_effort.dataset import Dataset, Row
from refactor_effort.errors import ConfigurationError, ContractViolation, DataError
from refactor_effort.evaluation import evaluate
from refactor_effort.gp import depth, evaluate_program, protected_div, subtree_end, to_infix


def _ds(X, y):
    X = np.asarray(X, dtype=float)
    return Dataset(tuple(f"x{i}" for i in range(X.shape[1])),
                   [Row(tuple(x), float(t), f"c{i}", "MoveClass", "p.A", float(10 * (i + 1)))
                    for i, (x, t) in enumerate(zip(X, y))])


# -- mean --------------------------------------------------------------------

def test_mean_examples():
    assert mean_predict(mean_fit(_ds([[0], [0]], [2, 4])), [9]) == 3.0
    assert mean_predict(mean_fit(_ds([[1]], [7])), [0]) == 7.0


def test_mean_on_own_training_set_has_zero_r2():
    ds = _ds([[0], [1], [2]], [1, 5, 6])
    assert evaluate(mean_fit(ds).predict_dataset(ds), ds.y).r2 == pytest.approx(0.0, abs=1e-12)


def test_mean_rejects_empty_training_set():
    with pytest.raises(DataError):
        mean_fit(Dataset())


# -- COCOMO II ---------------------------------------------------------------------

def test_cocomo_one_ksloc():
    assert cocomo_predict(1.0) == pytest.approx(446.88, abs=1e-9)


def test_cocomo_small_refactoring():
    # 2.94 * 0.025 ** 1.0997 * 152, evaluated independently
    assert cocomo_predict(0.025) == pytest.approx(7.7340245, abs=1e-6)
    assert cocomo_predict(0.025) == pytest.approx(7.75, abs=0.02)


def test_cocomo_is_linear_in_multipliers():
    double = CocomoConfig(effort_multiplier_product=2.0)
    assert cocomo_predict(0.3, double) == pytest.approx(2 * cocomo_predict(0.3))


@given(st.floats(1e-4, 100), st.floats(1e-4, 100))
def test_cocomo_strictly_increasing(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert cocomo_predict(lo) < cocomo_predict(hi)


def test_cocomo_rejects_bad_input():
    with pytest.raises(ContractViolation):
        cocomo_predict(0)
    with pytest.raises(ConfigurationError):
        CocomoConfig(a_coeff=-1)


def test_cocomo_model_sizes_rows_by_refactored_lines():
    ds = _ds([[0], [0]], [1, 1])
    got = CocomoModel(schema=ds.schema).predict_dataset(ds)
    assert got == pytest.approx([cocomo_predict(0.010), cocomo_predict(0.020)])


# -- genetic programming -------------------------------------------------------------

def test_expression_arithmetic():
    assert evaluate_program(["add", 0, 1.0], np.array([[2.0]])).tolist() == [3.0]
    assert to_infix(["mul", "sub", 0, 1.5, 1], ("a", "b")) == "((a - 1.5) * b)"


def test_protected_division():
    assert protected_div(5.0, 0.0) == 1.0
    assert protected_div(-3.0, 1e-12) == 1.0
    assert protected_div(6.0, 3.0) == 2.0
    assert evaluate_program(["div", 0, 1], np.array([[4.0, 0.0]])).tolist() == [1.0]


def test_program_structure_helpers():
    prog = ["add", "mul", 0, 1, 2.0]
    assert subtree_end(prog, 0) == 5 and subtree_end(prog, 1) == 4 and subtree_end(prog, 4) == 5
    assert depth(prog) == 2 and depth([3]) == 0


def test_gp_recovers_identity():
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 10, size=(200, 3))
    expr = gp_fit(_ds(X, X[:, 0]), GpConfig())
    assert expr.fitness < 0.1
    assert evaluate(expr.predict_many(X), X[:, 0]).rmse == pytest.approx(expr.fitness)


def test_gp_is_deterministic_and_elitist():
    ds = signal_dataset(60, seed=2)
    cfg = GpConfig(population=40, generations=8, seed=5)
    a, b = gp_fit(ds, cfg), gp_fit(ds, cfg)
    assert a.program == b.program and a.history == b.history
    assert all(y <= x for x, y in zip(a.history, a.history[1:]))
    assert len(a.history) == cfg.generations + 1
    assert a.depth <= cfg.max_tree_depth


def test_gp_predictions_are_clamped_and_finite():
    expr = GpExpression(["sub", 0, 100.0], ("x0",))
    assert gp_predict(expr, [1.0]) == 0.0
    assert np.all(np.isfinite(GpExpression(["div", 0, 1], ("a", "b")).predict_many(np.array([[1.0, 0.0]]))))


def test_gp_rejects_bad_config_and_data():
    with pytest.raises(ConfigurationError):
        GpConfig(population=1)
    with pytest.raises(DataError):
        gp_fit(Dataset(), GpConfig(population=4, generations=1))


# -- shared contract -----------------------------------------------------------------

@pytest.mark.parametrize("make", [
    lambda ds: mean_fit(ds),
    lambda ds: CocomoModel(schema=ds.schema),
    lambda ds: gp_fit(ds, GpConfig(population=20, generations=2)),
    lambda ds: gbm.fit(ds, hp=gbm.GbmHyperparams(n_trees=5, min_samples_leaf=2)),
])
def test_every_estimator_saves_loads_and_scores(tmp_path, make):
    ds = signal_dataset(30, seed=1)
    model = make(ds)
    gbm.save_model(model, tmp_path / "m.json")
    loaded = gbm.load_model(tmp_path / "m.json")
    assert type(loaded) is type(model)
    assert np.allclose(loaded.predict_dataset(ds), model.predict_dataset(ds))
    vec = ds.rows[0].features
    assert gbm.predict(loaded, vec) == pytest.approx(float(model.predict_many(np.array([vec]))[0]))
    assert evaluate(model.predict_dataset(ds), ds.y).n == 30


def test_mean_model_dict_round_trip():
    m = MeanModel(2.5, ("a",))
    assert MeanModel.from_dict(m.to_dict()) == m
