"""Baker-Akhiezer functions for Calogero-Moser systems.

Exact residue constructions of the rational, trigonometric, and deformed
BA functions, Selberg-type numeric quadrature cross-checks, and the kernel
identity / generalized-mass eigenfunction verification harnesses.
"""

from .ba_common import BAResult, ConstructionError
from .expr import AffineForm, SymExpr
from .poly import MultiPoly, PolynomialError, poly_gcd
from .rational import RationalFn, normalize
from .reports import VerifyReport
from .residue import ResiduePlan, ResidueStep, iterated_residue, residue_at
from .series import LaurentSeries, series_expand
from .symbols import VarTable, positions, spectrals

__all__ = [
    "AffineForm",
    "BAResult",
    "ConstructionError",
    "LaurentSeries",
    "MultiPoly",
    "PolynomialError",
    "RationalFn",
    "ResiduePlan",
    "ResidueStep",
    "SymExpr",
    "VarTable",
    "VerifyReport",
    "iterated_residue",
    "normalize",
    "poly_gcd",
    "positions",
    "residue_at",
    "series_expand",
    "spectrals",
]

__version__ = "0.1.0"
