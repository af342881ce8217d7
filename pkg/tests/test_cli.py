from __future__ import annotations

import subprocess
import sys

import pytest

from conftest import FIXTURES, signal_dataset
from refactor_effort.cli import main
from refactor_effort.dataset import write_csv


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    write_csv(signal_dataset(60, seed=4), d / "data.csv")
    assert main(["train", str(d / "data.csv"), "--trees", "20", "-o", str(d / "model.json")]) == 0
    return d


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    assert main(["train"]) == 1
    assert main(["mine", "x", "--max-commits", "many"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_repository_exits_1(tmp_path):
    assert main(["mine", str(tmp_path / "nowhere"), "-o", str(tmp_path / "d.csv")]) == 1


def test_bad_dataset_exits_2(tmp_path, capsys):
    (tmp_path / "bad.csv").write_text("nonsense\n")
    assert main(["train", str(tmp_path / "bad.csv")]) == 2
    assert main(["train", str(tmp_path / "absent.csv")]) == 2
    assert "line 1" in capsys.readouterr().err


def test_bad_model_file_exits_2(trained, tmp_path):
    (tmp_path / "m.json").write_text("{}")
    assert main(["evaluate", str(trained / "data.csv"), "--model-file", str(tmp_path / "m.json")]) == 2


def test_train_reports_scores(trained, capsys):
    assert main(["train", str(trained / "data.csv"), "--model", "mean", "-o", str(trained / "mean.json")]) == 0
    out = capsys.readouterr().out
    assert "Mean" in out and "MAE" in out


def test_evaluate_with_baselines_lists_all_estimators(trained, capsys):
    rc = main(["evaluate", str(trained / "data.csv"), "--model-file", str(trained / "model.json"),
               "--baselines", "--population", "20", "--generations", "3"])
    assert rc == 0
    out = capsys.readouterr().out
    rows = [ln.split()[0] for ln in out.splitlines() if ln.split() and ln.split()[0] in
            {"Mean", "GBM", "COCOMOII", "GeneticP"}]
    assert rows == ["Mean", "GBM", "COCOMOII", "GeneticP"]


def test_predict_rejects_schema_mismatch(tmp_path):
    from refactor_effort import gbm
    from refactor_effort.baselines import MeanModel

    gbm.save_model(MeanModel(1.0, ("only",)), tmp_path / "m.json")
    (tmp_path / "c.txt").write_text("shop.Item,1\nshop.util.Money,1\n")
    rc = main(["predict", str(FIXTURES / "ck"), "--clusters", str(tmp_path / "c.txt"),
               "--model-file", str(tmp_path / "m.json")])
    assert rc == 2


def test_predict_text_report(trained, tmp_path, capsys):
    (tmp_path / "c.txt").write_text("shop.Item,1\nshop.Cart,1\nshop.util.Money,1\n")
    rc = main(["predict", str(FIXTURES / "ck"), "--clusters", str(tmp_path / "c.txt"),
               "--model-file", str(trained / "model.json")])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("1 moves, total")
    assert "shop.util.Money" in out and "shop.util -> shop" in out


def test_module_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "refactor_effort", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "predict" in proc.stdout
