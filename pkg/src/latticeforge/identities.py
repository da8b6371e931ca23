"""Element-level structure of finite lattices: join-irreducibles, generated
sublattices, identity checks, and the triple map behind h-modularity."""

from __future__ import annotations

from itertools import product
from typing import Iterable, Optional

from .lattice import FiniteLattice

IDENTITIES = ("modular", "distributive", "join_semidistributive")


def join_irreducibles(L: FiniteLattice) -> list:
    return [x for x in L.elements if x != L.bottom and len(L.lower_covers[x]) == 1]


def meet_irreducibles(L: FiniteLattice) -> list:
    return [x for x in L.elements if x != L.top and len(L.upper_covers[x]) == 1]


def sublattice_generated(L: FiniteLattice, S: Iterable[int]) -> set:
    closed = set(S)
    if not closed:
        raise ValueError("generating set must be nonempty")
    frontier = list(closed)
    while frontier:
        new = set()
        for x in frontier:
            for y in list(closed):
                for z in (L.join(x, y), L.meet(x, y)):
                    if z not in closed:
                        new.add(z)
        closed |= new
        frontier = list(new)
    return closed


def _modular_fails(L, x, y, z):
    return L.le(x, z) and L.join(x, L.meet(y, z)) != L.meet(L.join(x, y), z)


def _distributive_fails(L, x, y, z):
    return L.meet(x, L.join(y, z)) != L.join(L.meet(x, y), L.meet(x, z))


def _jsd_fails(L, x, y, z):
    xz = L.join(x, z)
    return xz == L.join(y, z) and xz != L.join(L.meet(x, y), z)


_CHECKS = {
    "modular": _modular_fails,
    "distributive": _distributive_fails,
    "join_semidistributive": _jsd_fails,
}


def check_identity(L: FiniteLattice, which: str):
    """Exhaustively test an identity over all triples.

    Returns ``(True, None)`` or ``(False, (x, y, z))`` with the first failing
    triple in lexicographic order. For ``modular`` the witness has x <= z.
    """
    if which not in _CHECKS:
        raise ValueError(f"unknown identity {which!r}; expected one of {IDENTITIES}")
    fails = _CHECKS[which]
    for x, y, z in product(L.elements, repeat=3):
        if fails(L, x, y, z):
            return False, (x, y, z)
    return True, None


def triple_step(L: FiniteLattice, u: tuple) -> tuple:
    x, y, z = u
    return (L.join(x, L.meet(y, z)), L.join(y, L.meet(x, z)), L.join(z, L.meet(x, y)))


def triple_iterate(L: FiniteLattice, u: tuple, k: int) -> tuple:
    for _ in range(k):
        u = triple_step(L, u)
    return u


def is_balanced(L: FiniteLattice, u: tuple) -> bool:
    return triple_step(L, u) == u


def stabilization_steps(L: FiniteLattice) -> dict:
    """Map each triple u to the least k with u^(k+1) = u^(k)."""
    steps: dict = {}
    for u in product(L.elements, repeat=3):
        path = []
        v = u
        while v not in steps:
            w = triple_step(L, v)
            if w == v:
                steps[v] = 0
                break
            path.append(v)
            v = w
        k = steps[v]
        for p in reversed(path):
            k += 1
            steps[p] = k
    return steps


def h_modularity_index(L: FiniteLattice, cutoff: int = 64) -> Optional[int]:
    """Least h >= 1 with u^(h+1) = u^(h) for every triple, or None past ``cutoff``."""
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    h = max(1, max(stabilization_steps(L).values()))
    return h if h <= cutoff else None
