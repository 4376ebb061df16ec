"""Static vector figures from simulator results.csv files."""

from .render import (
    KIND_OP,
    KIND_SNR,
    KINDS,
    SCHEME_NAMES,
    FigureSpec,
    FigureValidationError,
    build_figure,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "KIND_OP",
    "KIND_SNR",
    "KINDS",
    "SCHEME_NAMES",
    "FigureSpec",
    "FigureValidationError",
    "build_figure",
    "render",
    "__version__",
]
