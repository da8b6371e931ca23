"""Antitone assignments J(K) -> L and the capped tensor product K (x) L.

An assignment x sends c to ``c_val``, a_n to ``a_chain[n]`` (or ``a_lim``
past the end of the chain) and likewise for b_n. Because a_{n+1} < a_n,
antitone means each chain is nondecreasing and bounded by its limit.
Assignments are kept normalized: trailing chain entries equal to the limit
are dropped, so ``degree`` is the least d with all values at index >= d equal
to the limits.

Fixed points of ``step`` are exactly the assignments that extend to
join-to-meet homomorphisms K \\ {0} -> L; each such x gives the bi-ideal
{(u, xi) : u > 0 implies xi <= xbar(u)} of K x L.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence

from .errors import (BoundExceeded, FiberUnstable, MismatchWithOracle, NotHModular,
                     TheoremViolated, TruncationTooSmall, ZeroArgument)
from .identities import h_modularity_index, triple_step
from .klat import ZERO, KElem, canonical_elements, format_kelem, ji_below, k_leq, k_truncation
from .lattice import FiniteLattice
from .tensor import RawSpace, TensorElement


@dataclass(frozen=True, eq=False)
class AntitoneAssignment:
    L: FiniteLattice
    c_val: int
    a_chain: tuple
    a_lim: int
    b_chain: tuple
    b_lim: int

    def __post_init__(self):
        L = self.L
        for chain, lim in ((self.a_chain, self.a_lim), (self.b_chain, self.b_lim)):
            seq = list(chain) + [lim]
            if any(not L.le(u, v) for u, v in zip(seq, seq[1:])):
                raise ValueError("assignment is not antitone")
            if chain and chain[-1] == lim:
                raise ValueError("assignment is not normalized")

    @classmethod
    def create(cls, L, c_val, a_chain, a_lim, b_chain, b_lim):
        """Build an assignment, dropping trailing entries equal to the limit."""
        a_chain, b_chain = list(a_chain), list(b_chain)
        while a_chain and a_chain[-1] == a_lim:
            a_chain.pop()
        while b_chain and b_chain[-1] == b_lim:
            b_chain.pop()
        return cls(L, c_val, tuple(a_chain), a_lim, tuple(b_chain), b_lim)

    def a(self, n: int) -> int:
        return self.a_chain[n] if n < len(self.a_chain) else self.a_lim

    def b(self, n: int) -> int:
        return self.b_chain[n] if n < len(self.b_chain) else self.b_lim

    def at(self, p: KElem) -> int:
        """Value at a join-irreducible of K."""
        kind = p.kind
        if kind == "C":
            return self.c_val
        if kind == "A":
            return self.a(p.index)
        if kind == "B":
            return self.b(p.index)
        raise ValueError(f"{format_kelem(p)} is not join-irreducible")

    @property
    def degree(self) -> int:
        return max(len(self.a_chain), len(self.b_chain))

    def key(self):
        return (self.c_val, self.a_chain, self.a_lim, self.b_chain, self.b_lim)

    def __eq__(self, other):
        return isinstance(other, AntitoneAssignment) and self.L is other.L and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __le__(self, other):
        L = self.L
        n = max(self.degree, other.degree) + 1
        return (L.le(self.c_val, other.c_val)
                and all(L.le(self.a(i), other.a(i)) and L.le(self.b(i), other.b(i)) for i in range(n)))

    def __repr__(self):
        name = self.L.name
        return (f"AntitoneAssignment(c={name(self.c_val)}, "
                f"a={[name(v) for v in self.a_chain]}->{name(self.a_lim)}, "
                f"b={[name(v) for v in self.b_chain]}->{name(self.b_lim)})")


def constant_assignment(L: FiniteLattice, xi: int) -> AntitoneAssignment:
    return AntitoneAssignment.create(L, xi, (), xi, (), xi)


def bottom_assignment(L: FiniteLattice) -> AntitoneAssignment:
    return constant_assignment(L, L.bottom)


def step(x: AntitoneAssignment) -> AntitoneAssignment:
    """One application of x -> x^(1)."""
    L = x.L
    j, m = L.join, L.meet
    d = x.degree
    c = j(x.c_val, m(x.a_lim, x.b_lim))
    a_new = [x.a(0)] + [j(x.a(n + 1), m(x.b(n), x.c_val)) for n in range(d)]
    b_new = [x.b(0)] + [j(x.b(n + 1), m(x.a(n), x.c_val)) for n in range(d)]
    a_lim = j(x.a_lim, m(x.b_lim, x.c_val))
    b_lim = j(x.b_lim, m(x.a_lim, x.c_val))
    return AntitoneAssignment.create(L, c, a_new, a_lim, b_new, b_lim)


def iterate(x: AntitoneAssignment, k: int) -> AntitoneAssignment:
    for _ in range(k):
        x = step(x)
    return x


def is_closed(x: AntitoneAssignment) -> bool:
    return step(x) == x


def ell(x: AntitoneAssignment) -> tuple:
    return (x.a_lim, x.b_lim, x.c_val)


def in_a_prime(x: AntitoneAssignment) -> bool:
    return ell(step(x)) == ell(x)


@lru_cache(maxsize=64)
def _h_index(L: FiniteLattice) -> Optional[int]:
    return h_modularity_index(L, cutoff=64)


def closure_with_steps(x: AntitoneAssignment, h: int):
    """Iterate ``step`` to its fixed point; return ``(closure, steps)``.

    The loop runs to a literal fixed point; the bound d(x^(1)) + h is checked
    afterwards and ``BoundExceeded`` is raised if it was not met.
    """
    hm = _h_index(x.L)
    if hm is None or hm > h:
        raise NotHModular(f"lattice is not {h}-modular (index {hm})")
    bound = step(x).degree + h
    y, k = x, 0
    while True:
        z = step(y)
        if z == y:
            break
        y, k = z, k + 1
    if k > bound:
        raise BoundExceeded(f"closure took {k} steps, bound is {bound}")
    return y, k


def closure(x: AntitoneAssignment, h: int) -> AntitoneAssignment:
    return closure_with_steps(x, h)[0]


def _pointwise(op, x, y):
    if x.L is not y.L:
        raise ValueError("assignments into different lattices")
    n = max(x.degree, y.degree)
    return AntitoneAssignment.create(
        x.L, op(x.c_val, y.c_val),
        [op(x.a(i), y.a(i)) for i in range(n)], op(x.a_lim, y.a_lim),
        [op(x.b(i), y.b(i)) for i in range(n)], op(x.b_lim, y.b_lim))


def vee_c(x, y) -> AntitoneAssignment:
    """Componentwise join; shorter chains are padded with their limits."""
    return _pointwise(x.L.join, x, y)


def vee_star(x, y, h: int) -> AntitoneAssignment:
    return closure(vee_c(x, y), h)


def meet_star(x, y) -> AntitoneAssignment:
    """Pointwise meet; closed when both arguments are."""
    z = _pointwise(x.L.meet, x, y)
    if is_closed(x) and is_closed(y) and not is_closed(z):
        raise TheoremViolated("pointwise meet of closed assignments is not closed", (x, y))
    return z


def join_star_all(L, xs: Iterable, h: int) -> AntitoneAssignment:
    return reduce(lambda u, v: vee_star(u, v, h), xs, bottom_assignment(L))


# ----------------------------------------------------------------------------
# Extension to K \ {0} and the bi-ideal it defines

def extend_bar(x: AntitoneAssignment, e: KElem) -> int:
    """Value at e of the join-to-meet extension of a closed assignment."""
    if e == ZERO:
        raise ZeroArgument("the extension is defined on nonzero elements only")
    m = x.L.meet
    kind, n = e.kind, e.index
    if kind in ("A", "B", "C"):
        return x.at(e)
    if kind == "AC":
        return m(x.a(n), x.c_val)
    if kind == "BC":
        return m(x.b(n), x.c_val)
    return m(x.a(n), x.b(n))


def meet_over_ji(x: AntitoneAssignment, e: KElem, bound: int) -> int:
    """Meet of x over every join-irreducible below e with index <= bound."""
    return x.L.meet_all(x.at(p) for p in ji_below(e, bound))


@lru_cache(maxsize=32)
def truncation(N: int):
    """Cached ``k_truncation(N)`` so tensor elements over K_N share one factor."""
    return k_truncation(N)


def epsilon_restricted(x: AntitoneAssignment, N: int) -> TensorElement:
    """The bi-ideal of x cut down to K_N x L, in map form."""
    if N < x.degree + 2:
        raise TruncationTooSmall(f"N={N} < degree {x.degree} + 2")
    if not is_closed(x):
        raise ValueError("assignment is not step-fixed")
    KN, elems = truncation(N)
    f = tuple(x.L.top if e == ZERO else extend_bar(x, e) for e in elems)
    return TensorElement(KN, x.L, f)


def gamma_capping(x: AntitoneAssignment, margin: int = 2) -> list:
    """Pairs (u, xi) with u maximal in the fiber of xi under the extension.

    Fibers are searched over indices <= degree + margin and searched again
    at margin + 2; ``FiberUnstable`` is raised if the maximal elements move.
    """
    if not is_closed(x):
        raise ValueError("assignment is not step-fixed")

    def search(bound):
        elems = [e for e in canonical_elements(bound) if e != ZERO]
        fibers = {}
        for e in elems:
            fibers.setdefault(extend_bar(x, e), []).append(e)
        out = set()
        for xi, fib in fibers.items():
            for u in fib:
                if not any(v != u and k_leq(u, v) for v in fib):
                    out.add((u, xi))
        return out

    first = search(x.degree + margin)
    second = search(x.degree + margin + 2)
    if first != second:
        raise FiberUnstable(f"maximal fiber elements changed: {first ^ second}")
    return sorted(first, key=lambda p: (p[1], p[0].index, p[0].kind))


def gamma_fibers(gamma: Sequence) -> dict:
    out = {}
    for u, xi in gamma:
        out.setdefault(xi, []).append(u)
    return out


def capping_mask(gamma: Sequence, L: FiniteLattice, N: int) -> int:
    """Raw mask in K_N x L of the hereditary set generated by the capping and ⊥."""
    KN, elems = truncation(N)
    space = RawSpace(KN, L)
    pos = {e: i for i, e in enumerate(elems)}
    m = space.bot
    for u, xi in gamma:
        m |= space.down[pos[u] * L.size + xi]
    return space.hereditary(m)


def capping_regenerates(x: AntitoneAssignment, N: int, gamma=None) -> bool:
    gamma = gamma_capping(x) if gamma is None else gamma
    KN, _ = truncation(N)
    space = RawSpace(KN, x.L)
    return capping_mask(gamma, x.L, N) == space.from_tensor(epsilon_restricted(x, N))


def pure_preimage(u: KElem, xi: int, L: FiniteLattice) -> AntitoneAssignment:
    """The closed assignment whose bi-ideal is the pure tensor u (x) xi."""
    zero = L.bottom

    def chain(threshold):
        if threshold == float("inf"):
            return (), zero
        return (zero,) * int(threshold), xi

    a_chain, a_lim = chain(u.alpha)
    b_chain, b_lim = chain(u.beta)
    x = AntitoneAssignment.create(L, xi if u.has_c else zero, a_chain, a_lim, b_chain, b_lim)
    if not is_closed(x):
        raise TheoremViolated(f"pure preimage of {format_kelem(u)} is not step-fixed", x)
    return x


def verify_capped(L: FiniteLattice, tensors: Sequence, h: int, N: Optional[int] = None) -> dict:
    """Join pure tensors u_i (x) xi_i in K (x) L through closed assignments
    and compare with the raw bi-ideal closure in K_N x L.

    ``N`` defaults to the joined assignment's degree + 2. Raises
    ``MismatchWithOracle`` if the two bi-ideals differ.
    """
    xs = [pure_preimage(u, xi, L) for u, xi in tensors]
    z = join_star_all(L, xs, h)
    N = z.degree + 2 if N is None else N
    if N < z.degree + 2:
        raise TruncationTooSmall(f"N={N} < degree {z.degree} + 2")
    if any(u.index > N for u, _ in tensors):
        raise TruncationTooSmall("a tensor factor lies outside K_N")
    KN, elems = truncation(N)
    space = RawSpace(KN, L)
    pos = {e: i for i, e in enumerate(elems)}
    gens = 0
    for u, xi in tensors:
        gens |= space.down[pos[u] * L.size + xi]
    oracle = space.closure(gens)
    eps = space.from_tensor(epsilon_restricted(z, N))
    gamma = gamma_capping(z)
    cap = capping_mask(gamma, L, N)
    if oracle != eps or cap != eps:
        raise MismatchWithOracle("closed-assignment join differs from raw bi-ideal closure")
    fibers = gamma_fibers(gamma)
    return {
        "tensors": [(format_kelem(u), L.name(xi)) for u, xi in tensors],
        "N": N,
        "degree": z.degree,
        "assignment": repr(z),
        "capping": [(format_kelem(u), L.name(xi)) for u, xi in gamma],
        "capping_size": len(gamma),
        "max_fiber": max((len(v) for v in fibers.values()), default=0),
        "oracle_equal": True,
    }


# ----------------------------------------------------------------------------
# Sampling

def random_chain(L: FiniteLattice, rng: random.Random, length: int) -> list:
    """A nondecreasing list of ``length + 1`` elements (last one is the limit)."""
    v = rng.randrange(L.size)
    out = [v]
    for _ in range(length):
        v = L.join(v, rng.randrange(L.size)) if rng.random() < 0.6 else v
        out.append(v)
    return out


def random_assignment(L: FiniteLattice, rng: random.Random, max_len: int = 4) -> AntitoneAssignment:
    a = random_chain(L, rng, rng.randint(0, max_len))
    b = random_chain(L, rng, rng.randint(0, max_len))
    return AntitoneAssignment.create(L, rng.randrange(L.size), a[:-1], a[-1], b[:-1], b[-1])


def random_closed(L: FiniteLattice, rng: random.Random, h: int, max_len: int = 3) -> AntitoneAssignment:
    return closure(random_assignment(L, rng, max_len), h)
