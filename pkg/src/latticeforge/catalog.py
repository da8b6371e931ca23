"""Standard small lattices."""

import numpy as np

from .errors import LatticeError
from .lattice import FiniteLattice, from_covers, from_leq


def chain(n: int) -> FiniteLattice:
    """The n-element chain 0 < 1 < ... < n-1."""
    if n < 1:
        raise LatticeError("chain needs at least one element")
    return from_covers(n, [(i, i + 1) for i in range(n - 1)])


def boolean(k: int) -> FiniteLattice:
    """Subsets of a k-element set; element i is the subset with bitmask i."""
    n = 1 << k
    m = np.array([[(i & j) == i for j in range(n)] for i in range(n)], dtype=bool)
    names = ["{" + ",".join(str(b) for b in range(k) if i >> b & 1) + "}" for i in range(n)]
    return from_leq(m, names)


def m3() -> FiniteLattice:
    return from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
                       ["0", "p", "q", "r", "1"])


def n5() -> FiniteLattice:
    # a < c, b incomparable to both
    return from_covers(5, [(0, 1), (1, 3), (0, 2), (2, 4), (3, 4)],
                       ["0", "a", "b", "c", "1"])


def interval_lattice(n: int) -> FiniteLattice:
    """Intervals [i, j] of the chain 0..n-1, plus the empty interval, under containment."""
    intervals = [None] + [(i, j) for i in range(n) for j in range(i, n)]

    def contained(s, t):
        if s is None:
            return True
        if t is None:
            return False
        return t[0] <= s[0] and s[1] <= t[1]

    m = np.array([[contained(s, t) for t in intervals] for s in intervals], dtype=bool)
    names = ["e"] + [f"{i}" if i == j else f"{i}-{j}" for i, j in intervals[1:]]
    return from_leq(m, names)


def interval_index(L: FiniteLattice, i: int, j: int) -> int:
    """Element of ``interval_lattice`` for [i, j]."""
    return L.index(f"{i}" if i == j else f"{i}-{j}")


CATALOG = {
    "m3": m3,
    "n5": n5,
}


def by_name(name: str) -> FiniteLattice:
    """Resolve names like ``m3``, ``n5``, ``chain4``, ``boolean2``, ``interval5``."""
    name = name.lower()
    if name in CATALOG:
        return CATALOG[name]()
    for prefix, fn in (("chain", chain), ("boolean", boolean), ("interval", interval_lattice)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return fn(int(name[len(prefix):]))
    raise KeyError(name)


def small_catalog(max_size: int = 5):
    """Named catalog lattices with at most ``max_size`` elements."""
    out = {}
    for n in range(1, max_size + 1):
        out[f"chain{n}"] = chain(n)
    for k in range(2, 4):
        if 1 << k <= max_size:
            out[f"boolean{k}"] = boolean(k)
    if max_size >= 5:
        out["m3"] = m3()
        out["n5"] = n5()
    return out


__all__ = ["chain", "boolean", "m3", "n5", "interval_lattice", "interval_index",
           "by_name", "small_catalog"]
