"""Numerical laboratory for the 2D log-modified NLS and its 1D quintic-log analogue."""

from .errors import LogNLSError
from .grid import ComplexField, Grid
from .model import Family, ModelParams, Observables, observables

__all__ = [
    "ComplexField",
    "Family",
    "Grid",
    "LogNLSError",
    "ModelParams",
    "Observables",
    "observables",
]

__version__ = "0.1.0"
