"""Minimizer-sketch text index.

Patterns of length at least ``ell`` are located exactly. ``str`` patterns on a
DNA index (sigma 4) are read as ACGT; ``bytes`` are raw symbols.
"""

from ._uindex import (
    DataError,
    FormatError,
    Index,
    Text,
    UsageError,
    compute_minimizers,
    random_text,
)

__all__ = [
    "DataError",
    "FormatError",
    "Index",
    "Text",
    "UsageError",
    "compute_minimizers",
    "random_text",
]
