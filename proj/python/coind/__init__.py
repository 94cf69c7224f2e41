"""Coinductive infinitary rewriting."""

from ._coind import (
    Error,
    NonProductive,
    Ordinal,
    ParseError,
    System,
    Tree,
    Witness,
    fo_system,
    lam,
    lambda_calculus,
    mumall,
    mumall_system,
)

__all__ = [
    "Error",
    "NonProductive",
    "Ordinal",
    "ParseError",
    "System",
    "Tree",
    "Witness",
    "fo_system",
    "lam",
    "lambda_calculus",
    "mumall",
    "mumall_system",
]
