"""Free-lattice terms.

Terms are immutable and kept flattened: a ``Meet`` never has a ``Meet``
argument (likewise for ``Join``) and arguments are pairwise distinct. Argument
order is preserved as written; equivalence in the free lattice is decided by
``free_leq``, not by structural equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Optional, Sequence

from .errors import (HypothesisFails, InternalCaseExhaustion, TermSyntaxError,
                     UnboundVariable)
from .lattice import FiniteLattice


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Meet:
    args: tuple

    def __post_init__(self):
        _check_args(self, Meet)

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Join:
    args: tuple

    def __post_init__(self):
        _check_args(self, Join)

    def __str__(self):
        return format_term(self)


def _check_args(term, cls):
    if len(term.args) < 2:
        raise ValueError(f"{cls.__name__} needs at least two arguments")
    if any(isinstance(a, cls) for a in term.args):
        raise ValueError(f"{cls.__name__} arguments must be flattened")
    if len(set(term.args)) != len(term.args):
        raise ValueError(f"{cls.__name__} arguments must be distinct")


def _build(cls, parts):
    flat = []
    for p in parts:
        for q in (p.args if isinstance(p, cls) else (p,)):
            if q not in flat:
                flat.append(q)
    if not flat:
        raise ValueError("empty meet/join")
    return flat[0] if len(flat) == 1 else cls(tuple(flat))


def meet(*parts):
    """Flattened meet; a single distinct argument is returned as is."""
    return _build(Meet, parts)


def join(*parts):
    return _build(Join, parts)


def variables(P) -> list:
    """Variable names of P in order of first occurrence."""
    out: list = []

    def walk(t):
        if isinstance(t, Var):
            if t.name not in out:
                out.append(t.name)
        else:
            for a in t.args:
                walk(a)

    walk(P)
    return out


def term_depth(P) -> int:
    if isinstance(P, Var):
        return 0
    return 1 + max(term_depth(a) for a in P.args)


def substitute(P, mapping: Mapping):
    if isinstance(P, Var):
        return mapping.get(P.name, P)
    parts = [substitute(a, mapping) for a in P.args]
    return meet(*parts) if isinstance(P, Meet) else join(*parts)


def dual_term(P):
    if isinstance(P, Var):
        return P
    parts = [dual_term(a) for a in P.args]
    return join(*parts) if isinstance(P, Meet) else meet(*parts)


# ----------------------------------------------------------------------------
# Text form

_TOKEN = re.compile(r"\s*(?:(?P<var>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()&|]))")


def format_term(P) -> str:
    if isinstance(P, Var):
        return P.name
    op = " & " if isinstance(P, Meet) else " | "
    return "(" + op.join(format_term(a) for a in P.args) + ")"


def parse_term(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError("unexpected character", text, pos)
        start = m.start("var") if m.group("var") else m.start("sym")
        tokens.append((m.group("var") or m.group("sym"), start, bool(m.group("var"))))
        pos = m.end()
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else (None, len(text), False)

    def parse():
        nonlocal idx
        tok, at, is_var = peek()
        if tok is None:
            raise TermSyntaxError("unexpected end of input", text, at)
        if is_var:
            idx += 1
            return Var(tok)
        if tok != "(":
            raise TermSyntaxError(f"unexpected {tok!r}", text, at)
        idx += 1
        parts = [parse()]
        op = None
        while True:
            tok, at, is_var = peek()
            if tok == ")":
                idx += 1
                break
            if tok not in ("&", "|"):
                raise TermSyntaxError("expected '&', '|' or ')'", text, at)
            if op is not None and tok != op:
                raise TermSyntaxError("mixed operators in one group", text, at)
            op = tok
            idx += 1
            parts.append(parse())
        if op is None:
            raise TermSyntaxError("group needs at least two terms", text, at)
        return meet(*parts) if op == "&" else join(*parts)

    result = parse()
    if idx != len(tokens):
        raise TermSyntaxError("trailing input", text, tokens[idx][1])
    return result


# ----------------------------------------------------------------------------
# Free lattice order and evaluation

@lru_cache(maxsize=1 << 18)
def free_leq(P, Q) -> bool:
    """Whitman's decision procedure for P <= Q in the free lattice."""
    if isinstance(P, Join):
        return all(free_leq(a, Q) for a in P.args)
    if isinstance(Q, Meet):
        return all(free_leq(P, b) for b in Q.args)
    if isinstance(P, Var) and isinstance(Q, Var):
        return P == Q
    # P is a variable or a meet; Q is a variable or a join
    if isinstance(P, Meet) and any(free_leq(a, Q) for a in P.args):
        return True
    if isinstance(Q, Join) and any(free_leq(P, b) for b in Q.args):
        return True
    return False


def free_equiv(P, Q) -> bool:
    return free_leq(P, Q) and free_leq(Q, P)


def eval_term(P, L: FiniteLattice, assignment: Mapping) -> int:
    if isinstance(P, Var):
        try:
            return assignment[P.name]
        except KeyError:
            raise UnboundVariable(P.name) from None
    vals = [eval_term(a, L, assignment) for a in P.args]
    return L.meet_all(vals) if isinstance(P, Meet) else L.join_all(vals)


# ----------------------------------------------------------------------------
# Enumeration

def default_names(k: int) -> list:
    return list("xyz")[:k] if k <= 3 else [f"x{i}" for i in range(k)]


def _key(t):
    if isinstance(t, Var):
        return t
    return (type(t).__name__, frozenset(_key(a) for a in t.args))


def enumerate_terms(k: int, depth: int, names: Optional[Sequence[str]] = None):
    """Stream terms over k variables with nesting depth <= ``depth``.

    Meet and join arguments range over sets of shallower terms, so terms that
    differ only by argument order or repetition appear once. The stream is
    lazy; the number of terms grows doubly exponentially with depth.
    """
    names = list(names) if names is not None else default_names(k)
    if len(names) != k:
        raise ValueError("need one name per variable")
    level = [Var(n) for n in names]
    seen = {_key(t) for t in level}
    yield from level
    for _ in range(depth):
        new = []
        for r in range(2, len(level) + 1):
            for combo in combinations(level, r):
                for op in (meet, join):
                    t = op(*combo)
                    kt = _key(t)
                    if kt not in seen:
                        seen.add(kt)
                        new.append(t)
                        yield t
        level = level + new


# ----------------------------------------------------------------------------
# Pure meet extraction

def _copy(P, tag):
    return substitute(P, {v: Var(f"{v}@{tag}") for v in variables(P)})


def is_pure_meet(P) -> bool:
    return isinstance(P, Var) or (isinstance(P, Meet) and all(isinstance(a, Var) for a in P.args))


def is_pure_join(P) -> bool:
    return isinstance(P, Var) or (isinstance(P, Join) and all(isinstance(a, Var) for a in P.args))


def pure_meet_extract(U, V, U_list: Sequence, V_list: Sequence, R,
                      r_names: Optional[Sequence[str]] = None, trace: Optional[list] = None):
    """Find a pure meet polynomial R* <= R keeping U(x) & V(y) <= R*(U_j(x) & V_j(y)).

    U, V and the U_j, V_j are terms over one variable set; the y-side is a
    renamed copy. R's j-th variable (``r_names[j]``, default ``r{j}``) stands
    for U_j(x) & V_j(y). At each join of R, Whitman's condition leaves three
    cases; the two where U(x) or V(y) alone lies below R cannot occur and raise
    ``InternalCaseExhaustion`` if seen. Ties between joinands go to the first.
    """
    n = len(U_list)
    if len(V_list) != n:
        raise ValueError("U_list and V_list must have equal length")
    r_names = list(r_names) if r_names is not None else [f"r{j}" for j in range(n)]
    Ux, Vy = _copy(U, "x"), _copy(V, "y")
    lhs = meet(Ux, Vy)
    plug = {r_names[j]: meet(_copy(U_list[j], "x"), _copy(V_list[j], "y")) for j in range(n)}

    def lower(S):
        return free_leq(lhs, substitute(S, plug))

    if not lower(R):
        raise HypothesisFails("U(x) & V(y) <= R(U_j(x) & V_j(y)) does not hold in the free lattice")

    def extract(S):
        if isinstance(S, Var):
            return S
        if isinstance(S, Meet):
            return meet(*(extract(a) for a in S.args))
        S_sub = substitute(S, plug)
        if free_leq(Ux, S_sub):
            raise InternalCaseExhaustion(f"U(x) <= {format_term(S)} after substitution")
        if free_leq(Vy, S_sub):
            raise InternalCaseExhaustion(f"V(y) <= {format_term(S)} after substitution")
        for nu, branch in enumerate(S.args):
            if lower(branch):
                if trace is not None:
                    trace.append((format_term(S), nu))
                return extract(branch)
        raise InternalCaseExhaustion(f"no Whitman case applies at {format_term(S)}")

    return extract(R)
