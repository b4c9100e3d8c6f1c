"""Hilbert calculus: schemes, derivations, checking and the deduction transform."""

from .deduction import deduction_transform
from .derivation import (
    CheckReport, Derivation, Justification, LineReport, axiom, br1, br2,
    build_disjunction, check_derivation, hyp, lemma, mb, md, mp, parse_rule,
)
from .lemmas import STORE, Lemma, ProofBuilder, verify_store
from .schemes import (
    BASE_IDS, EXTENSION_IDS, LOGICS, SCHEMES, instantiate, logic_schemes,
    match_scheme,
)

__all__ = [
    "CheckReport", "Derivation", "Justification", "LineReport", "axiom", "br1", "br2",
    "build_disjunction", "check_derivation", "hyp", "lemma", "mb", "md", "mp", "parse_rule",
    "deduction_transform", "STORE", "Lemma", "ProofBuilder", "verify_store",
    "BASE_IDS", "EXTENSION_IDS", "LOGICS", "SCHEMES", "instantiate", "logic_schemes",
    "match_scheme",
]
