"""Universal factorial Schur functions over pluggable formal group laws."""

from fglschur._kernels import BACKEND
from fglschur.fgl import ADDITIVE, K_THEORY, UNIVERSAL, FormalGroupLaw, factorial_power
from fglschur.series import TruncatedSeries, Variable, b, series, x, y

__version__ = "0.1.0"

__all__ = [
    "ADDITIVE",
    "BACKEND",
    "FormalGroupLaw",
    "K_THEORY",
    "TruncatedSeries",
    "UNIVERSAL",
    "Variable",
    "b",
    "factorial_power",
    "series",
    "x",
    "y",
]
