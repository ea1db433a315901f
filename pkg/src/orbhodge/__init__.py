"""Exact orbifold Hodge numbers of Clarke mirror pairs of toric Landau-Ginzburg models."""

from ._kernels import BACKEND
from .clarke import ClarkePair, HodgeTable, duality_check, hodge_table
from .fans import StackyFan

__all__ = ["BACKEND", "ClarkePair", "HodgeTable", "StackyFan", "duality_check", "hodge_table"]
__version__ = "0.1.0"
