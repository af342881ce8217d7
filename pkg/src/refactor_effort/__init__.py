"""Predict the person-hours of class-move refactorings from repository history."""

__version__ = "0.1.0"
