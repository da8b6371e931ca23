"""Finite lattices, free-lattice terms, tensor products via bi-ideals, and the lattice K."""

from .catalog import boolean, by_name, chain, interval_lattice, m3, n5
from .errors import LatticeError, NotALattice
from .lattice import FiniteLattice, are_isomorphic, format_lattice, from_covers, from_leq, parse_lattice
from .terms import Join, Meet, Var, free_leq, parse_term

__all__ = [
    "FiniteLattice", "LatticeError", "NotALattice", "Var", "Meet", "Join",
    "are_isomorphic", "boolean", "by_name", "chain", "format_lattice", "free_leq",
    "from_covers", "from_leq", "interval_lattice", "m3", "n5", "parse_lattice", "parse_term",
]

__version__ = "0.1.0"
