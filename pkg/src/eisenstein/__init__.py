"""Residues of fundamental units modulo 2 for d = 5 (mod 8), and counts of
Eisenstein discriminants."""

from .infrastructure import METHODS, EisensteinResult
from .kernel import available_impls, batch_residues, default_impl, eisenstein_residue, full_walk_residue
from .oracle import oracle_residue, odd_pell_solution, pell_fundamental_unit
from .sieve import enumerate_D

__all__ = [
    "METHODS",
    "EisensteinResult",
    "available_impls",
    "batch_residues",
    "default_impl",
    "eisenstein_residue",
    "enumerate_D",
    "full_walk_residue",
    "odd_pell_solution",
    "oracle_residue",
    "pell_fundamental_unit",
]

__version__ = "0.1.0"
