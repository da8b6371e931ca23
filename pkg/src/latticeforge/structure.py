"""Join covers, the join-dependency relation, congruences, and the
simplicity/amenability scans for finite lattices."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from .catalog import interval_index, interval_lattice
from .enumeration import enumerate_lattices
from .errors import NotJoinIrreducible, TheoremViolated, TrivialLattice
from .identities import check_identity, join_irreducibles
from .lattice import FiniteLattice


@dataclass(frozen=True)
class JoinCover:
    target: int
    cover: frozenset


def _refines(L, A, B) -> bool:
    """A << B: every element of A lies below some element of B."""
    return all(any(L.le(a, b) for b in B) for a in A)


def _is_antichain(L, S) -> bool:
    return all(not L.le(a, b) and not L.le(b, a) for a, b in combinations(S, 2))


def minimal_join_covers(L: FiniteLattice, p: int) -> list:
    """Minimal nontrivial join covers of a join-irreducible p by join-irreducibles.

    A nontrivial cover is an antichain A with p <= join(A) and p not below any
    member. It is minimal when no other nontrivial cover refines it.
    """
    J = join_irreducibles(L)
    if p not in J:
        raise NotJoinIrreducible(p)
    pool = [q for q in J if not L.le(p, q)]
    covers = []
    for r in range(2, len(pool) + 1):
        for A in combinations(pool, r):
            if _is_antichain(L, A) and L.le(p, L.join_all(A)):
                covers.append(frozenset(A))
    minimal = [A for A in covers
               if not any(B != A and _refines(L, B, A) for B in covers)]
    return [JoinCover(p, A) for A in sorted(minimal, key=sorted)]


def join_dependency(L: FiniteLattice) -> set:
    """Pairs (p, q) with p D q."""
    rel = set()
    for p in join_irreducibles(L):
        for jc in minimal_join_covers(L, p):
            rel.update((p, q) for q in jc.cover if q != p)
    return rel


def satisfies_T_join(L: FiniteLattice):
    """``(True, None)`` if the D relation is acyclic, else ``(False, cycle)``."""
    g = nx.DiGraph()
    g.add_nodes_from(join_irreducibles(L))
    g.add_edges_from(join_dependency(L))
    try:
        cycle = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        return True, None
    return False, [u for u, _ in cycle]


def is_amenable_finite(L: FiniteLattice) -> bool:
    return satisfies_T_join(L)[0]


# ----------------------------------------------------------------------------
# Congruences

class Congruence:
    """A partition of the elements, stored as a block label per element."""

    def __init__(self, labels):
        # relabel blocks by first occurrence so equal partitions compare equal
        canon = {}
        self.labels = tuple(canon.setdefault(b, len(canon)) for b in labels)

    @property
    def blocks(self) -> list:
        out = {}
        for x, b in enumerate(self.labels):
            out.setdefault(b, []).append(x)
        return list(out.values())

    def same(self, x, y) -> bool:
        return self.labels[x] == self.labels[y]

    def is_full(self) -> bool:
        return len(set(self.labels)) == 1

    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    def __le__(self, other) -> bool:
        return all(other.same(x, y) for x in range(len(self.labels))
                   for y in range(x + 1, len(self.labels)) if self.same(x, y))

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"Congruence({self.blocks})"


def principal_congruence(L: FiniteLattice, x: int, y: int) -> Congruence:
    parent = list(L.elements)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    union(x, y)
    changed = True
    while changed:
        changed = False
        for a in L.elements:
            r = find(a)
            if r == a:
                continue
            for c in L.elements:
                if union(L.join(a, c), L.join(r, c)):
                    changed = True
                if union(L.meet(a, c), L.meet(r, c)):
                    changed = True
    return Congruence([find(a) for a in L.elements])


def is_simple(L: FiniteLattice) -> bool:
    if L.size < 2:
        raise TrivialLattice("simplicity needs at least two elements")
    return all(principal_congruence(L, x, y).is_full()
               for x in L.elements for y in L.elements if L.lt(x, y))


def dpt_holds(L: FiniteLattice):
    """Check: Θ(u0,u) = Θ(v0,v) implies u∧v ≰ u0 and u∧v ≰ v0 (u0<u, v0<v).

    Returns ``(True, None)`` or ``(False, (u0, u, v0, v))``.
    """
    pairs = [(a, b) for a in L.elements for b in L.elements if L.lt(a, b)]
    theta = {pr: principal_congruence(L, *pr) for pr in pairs}
    for (u0, u) in pairs:
        for (v0, v) in pairs:
            if theta[(u0, u)] != theta[(v0, v)]:
                continue
            uv = L.meet(u, v)
            if L.le(uv, u0) or L.le(uv, v0):
                return False, (u0, u, v0, v)
    return True, None


def no_simple_amenable_scan(n_max: int) -> dict:
    """Scan all lattices of sizes 3..n_max for ones that are simple and satisfy (T∨).

    Raises ``TheoremViolated`` on the first such lattice.
    """
    report = {"n_max": n_max, "sizes": {}}
    for n in range(3, n_max + 1):
        counts = {"lattices": 0, "simple": 0, "T_join": 0, "violations": 0}
        for L in enumerate_lattices(n):
            counts["lattices"] += 1
            simple = is_simple(L)
            tj = is_amenable_finite(L)
            counts["simple"] += simple
            counts["T_join"] += tj
            if simple and tj:
                raise TheoremViolated(f"simple lattice of size {n} satisfies (T_join)", L)
        report["sizes"][n] = counts
    report["violations"] = 0
    return report


def interval_lattice_simplicity_profile(n: int) -> dict:
    """Compare Θ(∅,{u}) and Θ(∅,{v}) for all atom pairs u < v of interval_lattice(n).

    Pairs with a point strictly left of u and strictly right of v inside the
    chain must have equal congruences; this raises ``TheoremViolated`` if not.
    """
    if not 3 <= n <= 8:
        raise ValueError("n must be between 3 and 8")
    S = interval_lattice(n)
    empty = S.bottom
    theta = {u: principal_congruence(S, empty, interval_index(S, u, u)) for u in range(n)}
    pairs = []
    for u, v in combinations(range(n), 2):
        margins = u > 0 and v < n - 1
        equal = theta[u] == theta[v]
        if margins and not equal:
            raise TheoremViolated(f"Θ(∅,{{{u}}}) != Θ(∅,{{{v}}}) in interval_lattice({n})", (u, v))
        pairs.append({"u": u, "v": v, "margins": margins, "equal": equal})
    jsd, witness = check_identity(S, "join_semidistributive")
    return {
        "n": n,
        "size": S.size,
        "join_semidistributive": jsd,
        "jsd_witness": witness,
        "pairs": pairs,
        "simple": all(theta[u].is_full() for u in range(n)) and is_simple(S),
    }
