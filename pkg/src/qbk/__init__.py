"""Quantified Belnapian modal logic: formulas, Kripke semantics with
verification and falsification, a Hilbert-style proof checker, bounded
countermodel search and the embedding of Nelson's constructive logics."""

from .errors import QBKError
from .frontend import load_derivation, load_model, parse_formula, print_formula
from .semantics import KripkeModel, evaluate, search_countermodel, validate_model
from .transform import is_nnf, to_nnf

__version__ = "0.1.0"

__all__ = [
    "QBKError", "load_derivation", "load_model", "parse_formula", "print_formula",
    "KripkeModel", "evaluate", "search_countermodel", "validate_model",
    "is_nnf", "to_nnf", "__version__",
]
