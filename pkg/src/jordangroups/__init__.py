"""Exact Jordan constants of finite groups from multiplication tables."""

from .constructors import build, parse_expr, render
from .errors import GroupError
from .jordan import jordan_constant, jordan_sup, normal_abelian_profile, subgroup_classes
from .kernel import GroupTable, SubSet

__version__ = "0.1.0"

__all__ = [
    "GroupError",
    "GroupTable",
    "SubSet",
    "build",
    "jordan_constant",
    "jordan_sup",
    "normal_abelian_profile",
    "parse_expr",
    "render",
    "subgroup_classes",
]
