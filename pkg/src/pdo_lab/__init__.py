"""Numerical laboratory for pseudodifferential operators with Hoelder-regular symbols."""

from .lattice import Field, Grid, bracket, fourier, inverse_fourier
from .spaces import HoelderSpec, SpaceSpec
from .symbols import Symbol, SymbolMeta, make_symbol

__version__ = "0.1.0"

__all__ = [
    "Field",
    "Grid",
    "bracket",
    "fourier",
    "inverse_fourier",
    "HoelderSpec",
    "SpaceSpec",
    "Symbol",
    "SymbolMeta",
    "make_symbol",
]
