"""Shared brute-force oracles, written independently of the library code paths."""

from itertools import combinations, permutations, product

import pytest

from latticeforge import catalog


def _transitive(rel, n):
    return all(not (rel[i][j] and rel[j][k]) or rel[i][k]
               for i in range(n) for j in range(n) for k in range(n))


def _has_bounds_and_lubs(rel, n):
    for x, y in combinations(range(n), 2):
        ups = [z for z in range(n) if rel[x][z] and rel[y][z]]
        least = [z for z in ups if all(rel[z][w] for w in ups)]
        downs = [z for z in range(n) if rel[z][x] and rel[z][y]]
        great = [z for z in downs if all(rel[w][z] for w in downs)]
        if len(least) != 1 or len(great) != 1:
            return False
    return True


def brute_lattice_classes(n):
    """Isomorphism classes of n-element lattices.

    Every finite order has a linear extension, so it suffices to range over
    relations with i <= j only when i <= j numerically; 0 is the bottom and
    n-1 the top. Classes are keyed by the lexicographically least relation
    over all relabelings of the interior points.
    """
    if n <= 2:
        return 1
    inner = list(range(1, n - 1))
    slots = list(combinations(inner, 2))
    seen = set()
    for bits in product((False, True), repeat=len(slots)):
        rel = [[i == j or i == 0 or j == n - 1 for j in range(n)] for i in range(n)]
        for (i, j), b in zip(slots, bits):
            rel[i][j] = b
        if not _transitive(rel, n) or not _has_bounds_and_lubs(rel, n):
            continue
        best = None
        for perm in permutations(inner):
            m = [0] + list(perm) + [n - 1]
            key = tuple(rel[m.index(i)][m.index(j)] for i in range(n) for j in range(n))
            best = key if best is None or key < best else best
        seen.add(best)
    return len(seen)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def all_congruences(L):
    """Every congruence of L as a tuple of block labels, by checking all partitions."""
    out = []
    for part in _set_partitions(list(L.elements)):
        lab = [0] * L.size
        for b, block in enumerate(part):
            for x in block:
                lab[x] = b
        ok = all(lab[L.join(x, z)] == lab[L.join(y, z)] and lab[L.meet(x, z)] == lab[L.meet(y, z)]
                 for x in L.elements for y in L.elements if lab[x] == lab[y] for z in L.elements)
        if ok:
            out.append(lab)
    return out


def brute_principal(L, x, y, congruences=None):
    """Block-membership matrix of the least congruence identifying x and y."""
    congs = congruences if congruences is not None else all_congruences(L)
    n = L.size
    same = [[True] * n for _ in range(n)]
    for lab in congs:
        if lab[x] == lab[y]:
            for i in range(n):
                for j in range(n):
                    same[i][j] = same[i][j] and lab[i] == lab[j]
    return same


CATALOG_NAMES = ["chain2", "chain3", "chain4", "boolean2", "m3", "n5"]


@pytest.fixture(params=CATALOG_NAMES)
def catalog_lattice(request):
    return catalog.by_name(request.param)
