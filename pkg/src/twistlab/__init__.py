"""Twisted-conjugacy computations over exactly represented finite groups."""

from .groups import (
    BudgetError,
    ConstructionError,
    FiniteGroup,
    ProductGroup,
    SemidirectGroup,
    SubgroupSet,
    TableGroup,
    UsageError,
)

__all__ = [
    "BudgetError",
    "ConstructionError",
    "FiniteGroup",
    "ProductGroup",
    "SemidirectGroup",
    "SubgroupSet",
    "TableGroup",
    "UsageError",
]

__version__ = "0.1.0"
