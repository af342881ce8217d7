"""Regression scores reported for every estimator: R², RMSE and MAE."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractViolation


@dataclass(frozen=True)
class EvalReport:
    r2: float
    rmse: float
    mae: float
    n: int

    @property
    def r2_defined(self) -> bool:
        return not math.isinf(self.r2)

    def format_r2(self, digits: int = 3) -> str:
        return f"{self.r2:.{digits}f}" if self.r2_defined else "undefined"


def evaluate(predictions: Sequence[float], targets: Sequence[float]) -> EvalReport:
    """Score predictions against targets.

    With constant targets R² is 1 for a perfect fit and otherwise ``-inf``,
    which ``EvalReport.format_r2`` renders as "undefined".
    """
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(targets, dtype=float)
    if p.shape != t.shape or p.ndim != 1:
        raise ContractViolation(f"length mismatch: {p.shape} vs {t.shape}")
    if len(t) == 0:
        raise ContractViolation("cannot evaluate zero predictions")
    err = p - t
    sse = float(np.sum(err ** 2))
    mae = float(np.mean(np.abs(err)))
    rmse = math.sqrt(sse / len(t))
    sst = float(np.sum((t - t.mean()) ** 2))
    if sst == 0.0:
        r2 = 1.0 if rmse == 0.0 else -math.inf
    else:
        r2 = 1.0 - sse / sst
    return EvalReport(r2=r2, rmse=rmse, mae=mae, n=len(t))
