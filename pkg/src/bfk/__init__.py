"""Exact F2 kernel for the combinatorial side of bordered Heegaard Floer homology."""

from __future__ import annotations

from .errors import BFKError

__version__ = "0.1.0"

__all__ = ["BFKError", "__version__"]
