"""Simulation of Heisenberg nilsystems, tower extensions and generalized
polynomial sequences, with certified Weyl-average suprema over polynomial
phase families."""

from .errors import (AmbiguousBoundary, BadWindow, DegenerateFit, DimensionMismatch,
                     EmptyRange, GridTooCoarse, PrecisionExhausted)
from .numeric import (CirclePoint, PreciseReal, UnitComplex, configure, floor_certified,
                      frac, parse_constant, scale_mod1, unit_exp)

__version__ = "0.1.0"
