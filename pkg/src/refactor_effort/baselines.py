"""Comparison estimators: training mean, COCOMO II and genetic programming.

All of them expose ``predict_many(X)`` / ``predict_dataset(ds)`` like
:class:`~refactor_effort.gbm.GbmModel`, so the same evaluation applies.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .dataset import Dataset
from .errors import ConfigurationError, ContractViolation, DataError
from .gp import GpConfig, GpExpression, gp_fit, gp_predict

__all__ = [
    "MeanModel", "mean_fit", "mean_predict", "CocomoConfig", "CocomoModel", "cocomo_predict",
    "GpConfig", "GpExpression", "gp_fit", "gp_predict", "MODEL_KINDS",
]


@dataclass
class MeanModel:
    mean_hours: float
    schema: tuple[str, ...] = ()
    kind = "mean"

    def predict_many(self, X) -> np.ndarray:
        return np.full(len(np.atleast_2d(X)), self.mean_hours)

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        return np.full(len(ds), self.mean_hours)

    def to_dict(self) -> dict:
        return {"mean_hours": self.mean_hours, "schema": list(self.schema)}

    @classmethod
    def from_dict(cls, d: dict) -> "MeanModel":
        return cls(float(d["mean_hours"]), tuple(d["schema"]))


def mean_fit(train: Dataset) -> MeanModel:
    if len(train) == 0:
        raise DataError("cannot fit the mean on an empty training set")
    return MeanModel(float(np.mean(train.y)), tuple(train.schema))


def mean_predict(model: MeanModel, x=None) -> float:
    return model.mean_hours


@dataclass(frozen=True)
class CocomoConfig:
    """Post-architecture COCOMO II constants (all scale factors nominal)."""

    a_coeff: float = 2.94
    b_exponent_base: float = 0.91
    scale_factor_sum: float = 18.97
    effort_multiplier_product: float = 1.0
    hours_per_person_month: float = 152.0

    def __post_init__(self):
        if min(asdict(self).values()) <= 0:
            raise ConfigurationError("COCOMO parameters must all be positive")

    @property
    def exponent(self) -> float:
        return self.b_exponent_base + 0.01 * self.scale_factor_sum


def cocomo_predict(size_ksloc: float, cfg: CocomoConfig = CocomoConfig()) -> float:
    """Person-hours for ``size_ksloc`` thousand changed source lines."""
    if size_ksloc <= 0:
        raise ContractViolation("COCOMO size must be positive")
    effort_pm = cfg.a_coeff * size_ksloc ** cfg.exponent * cfg.effort_multiplier_product
    return effort_pm * cfg.hours_per_person_month


@dataclass
class CocomoModel:
    """COCOMO II applied per refactoring, sized by its refactored lines."""

    config: CocomoConfig = CocomoConfig()
    schema: tuple[str, ...] = ()
    kind = "cocomo"
    note = "size = refactored lines of the operation, in KSLOC"

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        return np.array([cocomo_predict(max(r.rloc, 1.0) / 1000.0, self.config) for r in ds.rows])

    def predict_lines(self, lines: Sequence[float]) -> np.ndarray:
        return np.array([cocomo_predict(max(v, 1.0) / 1000.0, self.config) for v in lines])

    def predict_many(self, X) -> np.ndarray:
        # Without refactored-line provenance, fall back on the class size.
        X = np.atleast_2d(np.asarray(X, dtype=float))
        loc_col = list(self.schema).index("loc") if "loc" in self.schema else None
        if loc_col is None:
            raise ContractViolation("COCOMO needs a 'loc' feature to size a plain vector")
        return self.predict_lines(X[:, loc_col])

    def to_dict(self) -> dict:
        return {"config": asdict(self.config), "schema": list(self.schema)}

    @classmethod
    def from_dict(cls, d: dict) -> "CocomoModel":
        return cls(CocomoConfig(**d["config"]), tuple(d["schema"]))


MODEL_KINDS = {"mean": MeanModel, "cocomo": CocomoModel, "gp": GpExpression}
