"""Exact arithmetic in the infinite three-generated lattice K.

The join-irreducibles of K are c and two descending chains a_0 > a_1 > ...
and b_0 > b_1 > ..., with the only nontrivial join covers

    c < a_m v b_n,    a_m < b_n v c (m > n),    b_m < a_n v c (m > n).

An element is identified with its set of join-irreducibles below it, which
is always of the shape {a_k : k >= alpha} u {b_k : k >= beta} u ({c} or {}).
``KElem`` stores (alpha, beta, has_c) with ``inf`` for an absent chain. The
closed shapes are exactly

    0, c, a_m, b_m, a_m v c, b_m v c, a_m v b_m

with a_m v c = {a_k: k>=m} u {c} u {b_k: k>=m+1} and symmetrically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from math import inf

import networkx as nx
import numpy as np

from .errors import NonCanonicalIntersection, TheoremViolated
from .lattice import from_covers


def _close(alpha, beta, has_c):
    while True:
        a, b, c = alpha, beta, has_c
        if alpha < inf and beta < inf:
            c = True
        if c and beta < inf:
            a = min(a, beta + 1)
        if c and alpha < inf:
            b = min(b, alpha + 1)
        if (a, b, c) == (alpha, beta, has_c):
            return alpha, beta, has_c
        alpha, beta, has_c = a, b, c


@dataclass(frozen=True)
class KElem:
    alpha: float
    beta: float
    has_c: bool

    def __post_init__(self):
        if _close(self.alpha, self.beta, self.has_c) != (self.alpha, self.beta, self.has_c):
            raise NonCanonicalIntersection(f"({self.alpha}, {self.beta}, {self.has_c}) is not closed")

    @property
    def kind(self) -> str:
        a, b, c = self.alpha, self.beta, self.has_c
        if a == inf and b == inf:
            return "C" if c else "Zero"
        if b == inf:
            return "A"
        if a == inf:
            return "B"
        if a == b:
            return "T"
        return "AC" if b == a + 1 else "BC"

    @property
    def index(self) -> int:
        k = self.kind
        if k in ("Zero", "C"):
            return 0
        return int(min(self.alpha, self.beta))

    def is_join_irreducible(self) -> bool:
        return self.kind in ("A", "B", "C")

    def __str__(self):
        return format_kelem(self)

    def __repr__(self):
        return f"KElem({format_kelem(self)})"


ZERO = KElem(inf, inf, False)
C = KElem(inf, inf, True)
TOP = KElem(0, 0, True)


def A(m: int) -> KElem:
    return KElem(m, inf, False)


def B(m: int) -> KElem:
    return KElem(inf, m, False)


def AC(m: int) -> KElem:
    return KElem(m, m + 1, True)


def BC(m: int) -> KElem:
    return KElem(m + 1, m, True)


def T(m: int) -> KElem:
    return KElem(m, m, True)


def format_kelem(e: KElem) -> str:
    k, m = e.kind, e.index
    return {"Zero": "0", "C": "c", "A": f"a{m}", "B": f"b{m}",
            "AC": f"a{m}+c", "BC": f"b{m}+c", "T": f"a{m}+b{m}"}[k]


_ATOM = re.compile(r"^(?:([ab])(\d+)|(c)|(0))$")


def parse_kelem(text: str) -> KElem:
    """Parse ``0``, ``c``, ``a3``, ``b0``, or '+'-joins of those (normalized)."""
    out = ZERO
    for part in text.replace(" ", "").split("+"):
        m = _ATOM.match(part)
        if not m:
            raise ValueError(f"bad K element {text!r}")
        if m.group(1) == "a":
            out = k_join(out, A(int(m.group(2))))
        elif m.group(1) == "b":
            out = k_join(out, B(int(m.group(2))))
        elif m.group(3):
            out = k_join(out, C)
    return out


def k_leq(e: KElem, f: KElem) -> bool:
    return e.alpha >= f.alpha and e.beta >= f.beta and (not e.has_c or f.has_c)


def k_join(e: KElem, f: KElem) -> KElem:
    return KElem(*_close(min(e.alpha, f.alpha), min(e.beta, f.beta), e.has_c or f.has_c))


def k_meet(e: KElem, f: KElem) -> KElem:
    # KElem raises NonCanonicalIntersection if the intersection is not closed
    return KElem(max(e.alpha, f.alpha), max(e.beta, f.beta), e.has_c and f.has_c)


def ji_below(e: KElem, bound: int) -> list:
    """Join-irreducibles below e with index <= bound."""
    out = [C] if e.has_c else []
    out += [A(k) for k in range(bound + 1) if k >= e.alpha]
    out += [B(k) for k in range(bound + 1) if k >= e.beta]
    return out


def canonical_elements(N: int) -> list:
    """Zero, c, and every a_m, b_m, a_m+c, b_m+c, a_m+b_m with m <= N."""
    out = [ZERO, C]
    for m in range(N + 1):
        out += [A(m), B(m), AC(m), BC(m), T(m)]
    return out


def k_triple_step(u: tuple) -> tuple:
    x, y, z = u
    return (k_join(x, k_meet(y, z)), k_join(y, k_meet(x, z)), k_join(z, k_meet(x, y)))


def k_iterate(u: tuple, k: int) -> tuple:
    for _ in range(k):
        u = k_triple_step(u)
    return u


def k_check_2modular(max_index: int):
    """Check u^(3) = u^(2) for all triples with indices <= max_index.

    Returns ``(True, witness)`` where ``witness`` is a triple with
    u^(2) != u^(1) (so K is not modular); raises ``TheoremViolated`` otherwise.
    """
    elems = canonical_elements(max_index)
    witness = None
    for u in product(elems, repeat=3):
        u1 = k_triple_step(u)
        u2 = k_triple_step(u1)
        if witness is None and u2 != u1:
            witness = u
        if k_triple_step(u2) != u2:
            raise TheoremViolated("u^(3) != u^(2)", u)
    if witness is None:
        raise TheoremViolated("no triple with u^(2) != u^(1); K would be modular")
    return True, witness


def k_truncation(N: int):
    """The finite sub-poset K_N of elements with index <= N, validated as a lattice.

    Returns ``(lattice, elements)``; element i of the lattice is ``elements[i]``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    elems = canonical_elements(N)
    n = len(elems)
    m = np.array([[k_leq(e, f) for f in elems] for e in elems], dtype=bool)
    strict = m & ~np.eye(n, dtype=bool)
    si = strict.astype(np.int64)
    cov = strict & ~((si @ si) > 0)
    covers = [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]
    L = from_covers(n, covers, [format_kelem(e) for e in elems])
    return L, elems


def generated_elements(N: int, generators=(A(0), B(0), C)) -> set:
    """Closure of the generators under join and meet, discarding index > N."""
    got = set(generators)
    frontier = list(got)
    while frontier:
        new = set()
        for x in frontier:
            for y in list(got):
                for z in (k_join(x, y), k_meet(x, y)):
                    if z.index <= N and z not in got:
                        new.add(z)
        got |= new
        frontier = list(new)
    return got


def width(N: int) -> int:
    """Size of the largest antichain among canonical elements with index <= N."""
    elems = canonical_elements(N)
    g = nx.Graph()
    g.add_nodes_from(range(len(elems)))
    for i, j in combinations(range(len(elems)), 2):
        if not k_leq(elems[i], elems[j]) and not k_leq(elems[j], elems[i]):
            g.add_edge(i, j)
    return max(len(c) for c in nx.find_cliques(g))


def check_noetherian(N: int, margin: int = 3) -> bool:
    """Bounded check that K has no infinite ascending chain.

    Every element with index <= N other than 0 and c must have nothing of
    larger index above it (tested against index N + margin). Anything
    strictly above 0 or c is such an element, so every ascending chain is
    finite.
    """
    big = canonical_elements(N + margin)
    for e in canonical_elements(N):
        if e in (ZERO, C):
            continue
        if any(f.index > e.index for f in big if k_leq(e, f)):
            return False
    return True


def is_antichain(u) -> bool:
    return all(not k_leq(x, y) and not k_leq(y, x) for x, y in combinations(u, 2))
