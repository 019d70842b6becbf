"""Exact function-field moment computations and their predicted asymptotics."""

__version__ = "0.1.0"

from . import cocycle, exactnum, ffpoly, kacmoody, lfunc, moments, predictor

__all__ = [
    "cocycle",
    "exactnum",
    "ffpoly",
    "kacmoody",
    "lfunc",
    "moments",
    "predictor",
]
