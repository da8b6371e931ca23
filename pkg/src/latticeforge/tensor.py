"""Tensor products of finite lattices with zero.

A bi-ideal I of A x B is stored as the map f: A -> B with
``I = {(a, b) : b <= f(a)}``. Such maps are exactly those with f(0) = 1 and
f(a v a') = f(a) ^ f(a'). The raw subset form (``RawSpace``, a bitmask over
A x B) is kept as an independent oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .enumeration import size_guard
from .errors import DepthExhausted, LatticeError, SizeLimitExceeded
from .identities import join_irreducibles
from .lattice import FiniteLattice, from_leq
from .terms import default_names, dual_term, eval_term, format_term, join, meet, Var


@dataclass(frozen=True, eq=False)
class TensorElement:
    A: FiniteLattice
    B: FiniteLattice
    f: tuple

    def __eq__(self, other):
        return (isinstance(other, TensorElement) and self.A is other.A
                and self.B is other.B and self.f == other.f)

    def __hash__(self):
        return hash(self.f)

    def __le__(self, other):
        return all(self.B.le(u, v) for u, v in zip(self.f, other.f))

    def contains(self, a, b) -> bool:
        return self.B.le(b, self.f[a])

    def label(self) -> str:
        return ".".join(self.B.name(v) for v in self.f)

    def __repr__(self):
        return f"TensorElement({self.label()})"


@dataclass(frozen=True)
class Capping:
    pairs: frozenset


def is_tensor_map(A: FiniteLattice, B: FiniteLattice, f: Sequence[int]) -> bool:
    if f[A.bottom] != B.top:
        return False
    return all(f[A.join(a, c)] == B.meet(f[a], f[c]) for a in A.elements for c in A.elements)


def _check_same(x, y):
    if x.A is not y.A or x.B is not y.B:
        raise LatticeError("tensor elements over different factors")


def bottom_tensor(A: FiniteLattice, B: FiniteLattice) -> TensorElement:
    return TensorElement(A, B, tuple(B.top if a == A.bottom else B.bottom for a in A.elements))


def pure_tensor(A: FiniteLattice, B: FiniteLattice, a: int, b: int) -> TensorElement:
    f = []
    for x in A.elements:
        if x == A.bottom:
            f.append(B.top)
        elif A.le(x, a):
            f.append(b)
        else:
            f.append(B.bottom)
    return TensorElement(A, B, tuple(f))


def tensor_join(x: TensorElement, y: TensorElement) -> TensorElement:
    _check_same(x, y)
    A, B = x.A, x.B
    g = [B.join(u, v) for u, v in zip(x.f, y.f)]
    changed = True
    while changed:
        changed = False
        for a in A.elements:
            for c in A.elements:
                d = A.join(a, c)
                # lateral join closure
                v = B.join(g[d], B.meet(g[a], g[c]))
                if v != g[d]:
                    g[d] = v
                    changed = True
                # hereditary in the first coordinate
                if A.le(c, a) and not B.le(g[a], g[c]):
                    g[c] = B.join(g[c], g[a])
                    changed = True
    return TensorElement(A, B, tuple(g))


def tensor_meet(x: TensorElement, y: TensorElement) -> TensorElement:
    _check_same(x, y)
    return TensorElement(x.A, x.B, tuple(x.B.meet(u, v) for u, v in zip(x.f, y.f)))


def tensor_join_all(A, B, xs) -> TensorElement:
    out = bottom_tensor(A, B)
    for x in xs:
        out = tensor_join(out, x)
    return out


def tensor_elements(A: FiniteLattice, B: FiniteLattice, limit=None) -> list:
    """All bi-ideals of A x B in map form, via antitone maps on J(A)."""
    limit = size_guard(10 ** 6) if limit is None else limit
    # larger elements first, so every q > p is assigned before p
    J = sorted(join_irreducibles(A), key=lambda p: len(A.up_set(p)))
    below = {a: [i for i, p in enumerate(J) if A.le(p, a)] for a in A.elements}
    out = []
    vals = [None] * len(J)

    def extend(i):
        if i == len(J):
            f = tuple(B.meet_all(vals[k] for k in below[a]) for a in A.elements)
            if is_tensor_map(A, B, f):
                out.append(TensorElement(A, B, f))
                if len(out) > limit:
                    raise SizeLimitExceeded(f"tensor product exceeds {limit} elements")
            return
        p = J[i]
        uppers = [vals[k] for k in range(i) if A.lt(p, J[k])]
        for v in B.elements:
            if all(B.le(u, v) for u in uppers):
                vals[i] = v
                extend(i + 1)
        vals[i] = None

    extend(0)
    out.sort(key=lambda t: t.f)
    return out


def _pointwise_leq(B: FiniteLattice, F: np.ndarray) -> np.ndarray:
    Bleq = B.order_matrix
    return Bleq[F[:, None, :], F[None, :, :]].all(axis=2)


def tensor_lattice(A: FiniteLattice, B: FiniteLattice) -> FiniteLattice:
    """A (x) B as a finite lattice; element names encode the map form."""
    elems = tensor_elements(A, B)
    F = np.array([t.f for t in elems], dtype=np.int64)
    return from_leq(_pointwise_leq(B, F), [t.label() for t in elems])


def element_of(A, B, T: FiniteLattice, i: int) -> TensorElement:
    """Decode element i of ``tensor_lattice(A, B)`` back into map form."""
    names = {n: k for k, n in enumerate(B.names)} if B.names else None
    parts = T.name(i).split(".")
    f = tuple(names[p] if names else int(p) for p in parts)
    return TensorElement(A, B, f)


# ----------------------------------------------------------------------------
# Raw subset form (oracle)

class RawSpace:
    """Bit positions for pairs of A x B: pair (a, b) is bit ``a * |B| + b``."""

    def __init__(self, A: FiniteLattice, B: FiniteLattice):
        self.A, self.B = A, B
        self.nb = B.size
        self.pairs = [(a, b) for a in A.elements for b in B.elements]
        self.down = [self._down_mask(a, b) for a, b in self.pairs]
        self.bot = 0
        for a, b in self.pairs:
            if a == A.bottom or b == B.bottom:
                self.bot |= self.bit(a, b)

    def bit(self, a, b) -> int:
        return 1 << (a * self.nb + b)

    def _down_mask(self, a, b) -> int:
        m = 0
        for x in self.A.down_set(a):
            for y in self.B.down_set(b):
                m |= self.bit(x, y)
        return m

    def members(self, mask) -> list:
        return [p for i, p in enumerate(self.pairs) if mask >> i & 1]

    def hereditary(self, mask) -> int:
        out = mask
        for i in range(len(self.pairs)):
            if mask >> i & 1:
                out |= self.down[i]
        return out

    def closure(self, mask) -> int:
        """Least bi-ideal containing the given pairs."""
        A, B = self.A, self.B
        cur = self.hereditary(mask | self.bot)
        while True:
            nxt = cur
            mem = self.members(cur)
            for i, (a, b) in enumerate(mem):
                for a2, b2 in mem[i + 1:]:
                    if a == a2 or b == b2:
                        nxt |= self.bit(A.join(a, a2), B.join(b, b2))
            nxt = self.hereditary(nxt)
            if nxt == cur:
                return cur
            cur = nxt

    def is_bi_ideal(self, mask) -> bool:
        return mask & self.bot == self.bot and self.closure(mask) == mask

    def from_tensor(self, x: TensorElement) -> int:
        m = 0
        for a in self.A.elements:
            for b in self.B.down_set(x.f[a]):
                m |= self.bit(a, b)
        return m

    def to_tensor(self, mask) -> TensorElement:
        if not self.is_bi_ideal(mask):
            raise LatticeError("mask is not a bi-ideal")
        f = []
        for a in self.A.elements:
            bs = [b for b in self.B.elements if mask >> (a * self.nb + b) & 1]
            f.append(self.B.join_all(bs))
        return TensorElement(self.A, self.B, tuple(f))


def brute_force_biideals(A: FiniteLattice, B: FiniteLattice):
    """All bi-ideals of A x B as raw masks, and their lattice under inclusion.

    Bi-ideals are generated breadth-first from the least one by closing
    ``I ∪ {p}`` for every pair p.
    """
    if A.size * B.size > size_guard(64):
        raise SizeLimitExceeded("raw bi-ideal oracle limited to |A|*|B| <= 64")
    space = RawSpace(A, B)
    start = space.closure(0)
    seen = {start}
    queue = deque([start])
    full = (1 << len(space.pairs)) - 1
    while queue:
        I = queue.popleft()
        for i in range(len(space.pairs)):
            if not I >> i & 1:
                J = space.closure(I | (1 << i))
                if J not in seen:
                    seen.add(J)
                    queue.append(J)
    masks = sorted(seen)
    assert full in seen
    leq = [[(s & t) == s for t in masks] for s in masks]
    return from_leq(leq), masks


# ----------------------------------------------------------------------------
# Cappings

def capping_of(x: TensorElement) -> Capping:
    """Maximal pairs of the bi-ideal lying outside ⊥."""
    A, B = x.A, x.B
    pairs = set()
    for a in A.elements:
        v = x.f[a]
        if a == A.bottom or v == B.bottom:
            continue
        if all(x.f[c] != v for c in A.elements if A.lt(a, c)):
            pairs.add((a, v))
    return Capping(frozenset(pairs))


def capping_closure(A, B, capping: Capping) -> int:
    """Raw mask of the hereditary set generated by the capping and ⊥."""
    space = RawSpace(A, B)
    m = space.bot
    for a, b in capping.pairs:
        m |= space.down[a * B.size + b]
    return space.hereditary(m)


def from_capping(A, B, capping: Capping) -> TensorElement:
    return tensor_join_all(A, B, (pure_tensor(A, B, a, b) for a, b in capping.pairs))


# ----------------------------------------------------------------------------
# Union of P(a) (x) P^d(b) over terms P

def _value_closure(A, B, pairs_map: dict) -> dict:
    """One level deeper: add flattened meets and joins of existing value pairs."""
    out = dict(pairs_map)
    for op, fa, fb in ((meet, A.meet, B.join), (join, A.join, B.meet)):
        acc = dict(pairs_map)
        frontier = list(acc)
        while frontier:
            new = {}
            for p in frontier:
                for q in list(acc):
                    v = (fa(p[0], q[0]), fb(p[1], q[1]))
                    if v not in acc and v not in new:
                        new[v] = op(acc[p], acc[q])
            acc.update(new)
            frontier = list(new)
        for v, t in acc.items():
            out.setdefault(v, t)
    return out


def tensun_verify(A: FiniteLattice, B: FiniteLattice, pairs: Sequence, depth: int = 4):
    """Check that the join of the a_i (x) b_i equals the union of P(a) (x) P^d(b).

    Terms are explored level by level up to ``depth`` by tracking the value
    pairs (P(a), P^d(b)) with one witness term each. Returns ``(ok, report)``
    where ``ok`` means equality was reached and the union is a bi-ideal; the
    report's ``trace`` lists witness terms, each re-evaluated directly.
    Raises ``DepthExhausted`` if the union is still growing at ``depth``.
    """
    n = len(pairs)
    if n < 1:
        raise ValueError("need at least one pair")
    names = default_names(n)
    space = RawSpace(A, B)
    lhs = tensor_join_all(A, B, (pure_tensor(A, B, a, b) for a, b in pairs))
    lhs_mask = space.from_tensor(lhs)

    def union_mask(vals):
        m = 0
        for (p, q) in vals:
            m |= space.from_tensor(pure_tensor(A, B, p, q))
        return m

    level = {}
    for i, (a, b) in enumerate(pairs):
        level.setdefault((a, b), Var(names[i]))
    reached = None
    for d in range(depth + 1):
        if d > 0:
            nxt = _value_closure(A, B, level)
            if set(nxt) == set(level):
                reached = d - 1
                break
            level = nxt
        if union_mask(level) == lhs_mask:
            reached = d
            break
    um = union_mask(level)
    if reached is None and um != lhs_mask:
        raise DepthExhausted(f"union still growing at depth {depth}")
    sa = {names[i]: a for i, (a, _) in enumerate(pairs)}
    sb = {names[i]: b for i, (_, b) in enumerate(pairs)}
    trace = []
    for (p, q), t in sorted(level.items()):
        if eval_term(t, A, sa) != p or eval_term(dual_term(t), B, sb) != q:
            raise LatticeError(f"witness {format_term(t)} does not evaluate to {(p, q)}")
        trace.append((format_term(t), p, q))
    is_ideal = space.is_bi_ideal(um)
    equal = um == lhs_mask
    return equal and is_ideal, {
        "depth_reached": reached,
        "equal": equal,
        "union_is_bi_ideal": is_ideal,
        "lhs": lhs,
        "trace": trace,
    }
