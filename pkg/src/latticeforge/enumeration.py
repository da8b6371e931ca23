"""Isomorphism-free generation of small lattices.

A finite lattice minus its top is a meet-semilattice with zero, and removing
a maximal element from such a semilattice leaves another one. So every
n-element lattice arises from a one-point-smaller semilattice by adding a
new maximal element below a suitable down-set, then adjoining a top.
Duplicates are removed with a canonical certificate (lexicographically least
order matrix over all relabelings that respect a refined invariant).
"""

from __future__ import annotations

import os
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from .errors import SizeLimitExceeded
from .lattice import FiniteLattice, from_leq

MAX_ENUMERATION_SIZE = 8


def size_guard(default: int) -> int:
    """``LATTICEFORGE_GUARD`` overrides built-in size guards when set."""
    raw = os.environ.get("LATTICEFORGE_GUARD")
    return int(raw) if raw else default


def _refined_colors(leq: np.ndarray) -> list:
    n = len(leq)
    strict = leq & ~np.eye(n, dtype=bool)
    colors = [(int(leq[:, i].sum()), int(leq[i].sum())) for i in range(n)]
    while True:
        sig = [
            (colors[i],
             tuple(sorted(colors[j] for j in range(n) if strict[j, i])),
             tuple(sorted(colors[j] for j in range(n) if strict[i, j])))
            for i in range(n)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_certificate(leq: np.ndarray) -> bytes:
    """Lexicographically least packed order matrix among color-respecting relabelings."""
    n = len(leq)
    colors = _refined_colors(leq)
    cells = {}
    for i, c in enumerate(colors):
        cells.setdefault(c, []).append(i)
    ordered_cells = [cells[c] for c in sorted(cells)]
    best = None
    for choice in product(*(permutations(cell) for cell in ordered_cells)):
        order = [i for part in choice for i in part]
        cert = np.packbits(leq[np.ix_(order, order)]).tobytes()
        if best is None or cert < best:
            best = cert
    return best


def _extensions(leq: np.ndarray):
    """Down-sets D admissible as the strict down-set of a new maximal element."""
    k = len(leq)
    down = [frozenset(np.nonzero(leq[:, x])[0].tolist()) for x in range(k)]
    for mask in range(1, 1 << k):
        D = {i for i in range(k) if mask >> i & 1}
        if any(not down[x] <= D for x in D):
            continue
        ok = True
        for x in range(k):
            common = D & down[x]
            # common contains 0, so it is nonempty; it must have a greatest element
            if not any(common <= down[g] for g in common):
                ok = False
                break
        if ok:
            yield D


@lru_cache(maxsize=None)
def _semilattices(k: int) -> tuple:
    """Order matrices (as bytes, shape k x k) of meet-semilattices with zero, one per class."""
    if k == 1:
        return (np.ones((1, 1), dtype=bool).tobytes(),)
    seen = {}
    for raw in _semilattices(k - 1):
        prev = np.frombuffer(raw, dtype=bool).reshape(k - 1, k - 1)
        for D in _extensions(prev):
            m = np.zeros((k, k), dtype=bool)
            m[:k - 1, :k - 1] = prev
            m[k - 1, k - 1] = True
            for d in D:
                m[d, k - 1] = True
            cert = canonical_certificate(m)
            if cert not in seen:
                seen[cert] = m.tobytes()
    return tuple(seen[c] for c in sorted(seen))


def enumerate_lattices(n: int):
    """Yield one lattice per isomorphism class of n-element lattices."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > size_guard(MAX_ENUMERATION_SIZE):
        raise SizeLimitExceeded(f"enumeration limited to n <= {size_guard(MAX_ENUMERATION_SIZE)}")
    if n == 1:
        yield from_leq([[True]])
        return
    k = n - 1
    for raw in _semilattices(k):
        semi = np.frombuffer(raw, dtype=bool).reshape(k, k)
        m = np.ones((n, n), dtype=bool)
        m[:k, :k] = semi
        m[k, :k] = False
        yield from_leq(m)


def count_lattices(n: int) -> int:
    return sum(1 for _ in enumerate_lattices(n))


def lattice_certificate(L: FiniteLattice) -> bytes:
    return canonical_certificate(L.order_matrix)
