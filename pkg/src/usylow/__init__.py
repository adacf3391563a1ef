"""Exact computational toolkit for Sylow p-subgroups of unitary groups,
the Thompson subgroup J(S), and the Oliver subgroup X(S)."""

__version__ = "0.1.0"

from .field import FieldSpec, field_create  # noqa: F401
from .matrix import Mat  # noqa: F401
