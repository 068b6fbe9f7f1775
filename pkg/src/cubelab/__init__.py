"""Exact and numerical tools for sums of three cubes and systems of cubic forms."""

from .errors import BudgetExceeded, CubelabError, ValidationError

__all__ = ["BudgetExceeded", "CubelabError", "ValidationError"]
__version__ = "0.1.0"
