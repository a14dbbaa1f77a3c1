"""Exact computation for l-rook coverings and packings of hypercubes."""

__version__ = "0.1.0"

from .core import Configuration, CoverageMap, GridParams, Rook  # noqa: F401
