"""Finite bounded lattices stored as an order matrix plus join/meet tables.

Elements are the integers ``0 .. size-1``; labels in ``names`` are for display
and I/O only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher

from .errors import CyclicCovers, LatticeError, NotALattice


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    size: int
    leq: tuple
    join_table: tuple
    meet_table: tuple
    bottom: int
    top: int
    names: Optional[tuple] = None
    _np_leq: np.ndarray = field(default=None, repr=False, compare=False)

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq[x][y]

    def join(self, x: int, y: int) -> int:
        return self.join_table[x][y]

    def meet(self, x: int, y: int) -> int:
        return self.meet_table[x][y]

    def join_all(self, xs: Iterable[int]) -> int:
        return reduce(self.join, xs, self.bottom)

    def meet_all(self, xs: Iterable[int]) -> int:
        return reduce(self.meet, xs, self.top)

    @property
    def elements(self) -> range:
        return range(self.size)

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def index(self, label) -> int:
        """Element index for a label (or for an integer index given as str/int)."""
        if self.names and label in self.names:
            return self.names.index(label)
        try:
            i = int(label)
        except (TypeError, ValueError):
            raise KeyError(label) from None
        if not 0 <= i < self.size:
            raise KeyError(label)
        return i

    @property
    def order_matrix(self) -> np.ndarray:
        return self._np_leq

    @cached_property
    def covers(self) -> list:
        """Sorted list of cover pairs ``(i, j)`` meaning i is covered by j."""
        strict = self._np_leq & ~np.eye(self.size, dtype=bool)
        two_step = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        cov = strict & ~two_step
        return sorted((int(i), int(j)) for i, j in zip(*np.nonzero(cov)))

    @cached_property
    def lower_covers(self) -> tuple:
        low = [[] for _ in range(self.size)]
        for i, j in self.covers:
            low[j].append(i)
        return tuple(tuple(x) for x in low)

    @cached_property
    def upper_covers(self) -> tuple:
        up = [[] for _ in range(self.size)]
        for i, j in self.covers:
            up[i].append(j)
        return tuple(tuple(x) for x in up)

    def down_set(self, x: int) -> list:
        return [y for y in range(self.size) if self.leq[y][x]]

    def up_set(self, x: int) -> list:
        return [y for y in range(self.size) if self.leq[x][y]]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteLattice(size={self.size}, covers={self.covers})"


def _lub_table(leq: np.ndarray, kind: str) -> np.ndarray:
    # leq[i, j] is i <= j, so row i is the up-set of i
    n = len(leq)
    up_count = leq.sum(axis=1)
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        ub = leq[x][None, :] & leq
        score = np.where(ub, up_count[None, :], -1)
        cand = score.argmax(axis=1)
        ok = (leq[cand] == ub).all(axis=1)
        if not ok.all():
            y = int(np.nonzero(~ok)[0][0])
            raise NotALattice(x, y, kind)
        table[x] = cand
    return table


def from_leq(leq, names: Optional[Sequence[str]] = None) -> FiniteLattice:
    """Build a lattice from a full order matrix, validating the lattice axioms."""
    m = np.array(leq, dtype=bool)
    n = m.shape[0]
    if n == 0 or m.shape != (n, n):
        raise LatticeError("order matrix must be square and nonempty")
    if not m.diagonal().all():
        raise LatticeError("order is not reflexive")
    if (m & m.T & ~np.eye(n, dtype=bool)).any():
        raise CyclicCovers("order is not antisymmetric")
    mi = m.astype(np.int64)
    if ((mi @ mi > 0) & ~m).any():
        raise LatticeError("order is not transitive")
    join = _lub_table(m, "lub")
    meet = _lub_table(m.T.copy(), "glb")
    bottom = int(np.nonzero(m.all(axis=1))[0][0])
    top = int(np.nonzero(m.all(axis=0))[0][0])
    if names is not None:
        names = tuple(str(s) for s in names)
        if len(names) != n or len(set(names)) != n:
            raise LatticeError("names must be distinct and one per element")
    m.setflags(write=False)
    return FiniteLattice(
        size=n,
        leq=tuple(tuple(bool(v) for v in row) for row in m),
        join_table=tuple(tuple(int(v) for v in row) for row in join),
        meet_table=tuple(tuple(int(v) for v in row) for row in meet),
        bottom=bottom,
        top=top,
        names=names,
        _np_leq=m,
    )


def from_covers(size: int, covers: Iterable, names: Optional[Sequence[str]] = None) -> FiniteLattice:
    """Lattice whose order is the reflexive-transitive closure of ``covers``.

    Raises ``CyclicCovers`` if the relation has a cycle and ``NotALattice``
    (carrying the offending pair) if some pair lacks a unique lub or glb.
    """
    if size < 1:
        raise LatticeError("size must be positive")
    g = nx.DiGraph()
    g.add_nodes_from(range(size))
    for i, j in covers:
        if not (0 <= i < size and 0 <= j < size):
            raise LatticeError(f"cover ({i}, {j}) out of range")
        if i == j:
            raise CyclicCovers(f"self-loop at {i}")
        g.add_edge(i, j)
    if not nx.is_directed_acyclic_graph(g):
        raise CyclicCovers(f"cycle {nx.find_cycle(g)}")
    m = np.eye(size, dtype=bool)
    for i in range(size):
        for j in nx.descendants(g, i):
            m[i, j] = True
    return from_leq(m, names)


def relabel(L: FiniteLattice, perm: Sequence[int]) -> FiniteLattice:
    """Copy of L where old element i becomes perm[i]."""
    n = L.size
    m = np.zeros((n, n), dtype=bool)
    src = L.order_matrix
    p = np.asarray(perm)
    m[np.ix_(p, p)] = src
    names = None
    if L.names:
        names = [None] * n
        for i, nm in enumerate(L.names):
            names[perm[i]] = nm
    return from_leq(m, names)


def sublattice(L: FiniteLattice, elems: Iterable[int]) -> FiniteLattice:
    """Induced lattice on a subset that is closed under join and meet."""
    elems = sorted(set(elems))
    sub = L.order_matrix[np.ix_(elems, elems)]
    names = [L.name(e) for e in elems] if L.names else None
    return from_leq(sub, names)


def _hasse_graph(L: FiniteLattice) -> nx.DiGraph:
    g = nx.DiGraph()
    for x in L.elements:
        g.add_node(x, sig=(len(L.lower_covers[x]), len(L.upper_covers[x]),
                           sum(L.leq[y][x] for y in L.elements)))
    g.add_edges_from(L.covers)
    return g


def are_isomorphic(L1: FiniteLattice, L2: FiniteLattice):
    """Return ``(True, mapping)`` for an order-isomorphism L1 -> L2, else ``(False, None)``."""
    if L1.size != L2.size or len(L1.covers) != len(L2.covers):
        return False, None
    g1, g2 = _hasse_graph(L1), _hasse_graph(L2)
    matcher = DiGraphMatcher(g1, g2, node_match=lambda a, b: a["sig"] == b["sig"])
    for mapping in matcher.isomorphisms_iter():
        return True, dict(sorted(mapping.items()))
    return False, None


# ----------------------------------------------------------------------------
# Text format

def format_lattice(L: FiniteLattice) -> str:
    lines = [f"lattice {L.size}"]
    if L.names:
        lines.append("names " + " ".join(L.names))
    lines.extend(f"cover {i} {j}" for i, j in L.covers)
    return "\n".join(lines) + "\n"


def parse_lattice(text: str) -> FiniteLattice:
    size = None
    names = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if size is None:
            if head != "lattice" or len(rest) != 1:
                raise LatticeError(f"line {lineno}: expected 'lattice <n>'")
            size = int(rest[0])
        elif head == "names":
            if names is not None or covers:
                raise LatticeError(f"line {lineno}: 'names' must follow the header")
            names = rest
        elif head == "cover":
            if len(rest) != 2:
                raise LatticeError(f"line {lineno}: expected 'cover <i> <j>'")
            covers.append((int(rest[0]), int(rest[1])))
        else:
            raise LatticeError(f"line {lineno}: unknown directive {head!r}")
    if size is None:
        raise LatticeError("missing 'lattice <n>' header")
    return from_covers(size, covers, names)
