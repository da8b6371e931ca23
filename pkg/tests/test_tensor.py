import random
from itertools import product

import pytest

from latticeforge import catalog
from latticeforge.errors import LatticeError, SizeLimitExceeded
from latticeforge.lattice import are_isomorphic
from latticeforge.tensor import (Capping, RawSpace, bottom_tensor, brute_force_biideals,
                                 capping_closure, capping_of, element_of, from_capping,
                                 is_tensor_map, pure_tensor, tensor_elements, tensor_join,
                                 tensor_join_all, tensor_lattice, tensor_meet, tensun_verify)

SMALL = ["chain2", "chain3", "boolean2", "m3", "n5"]


def test_pure_tensor_contract():
    A, B = catalog.n5(), catalog.m3()
    a, b = A.index("c"), B.index("p")
    t = pure_tensor(A, B, a, b)
    assert t.f[A.bottom] == B.top
    for x in A.elements:
        if x != A.bottom:
            assert t.f[x] == (b if A.le(x, a) else B.bottom)
    assert is_tensor_map(A, B, t.f)
    assert capping_of(t) == Capping(frozenset({(a, b)}))


def test_degenerate_pure_tensors_are_bottom():
    A, B = catalog.m3(), catalog.n5()
    bot = bottom_tensor(A, B)
    assert pure_tensor(A, B, A.index("p"), B.bottom) == bot
    assert pure_tensor(A, B, A.bottom, B.index("a")) == bot
    assert capping_of(bot).pairs == frozenset()


def test_join_examples():
    A, B = catalog.m3(), catalog.boolean(2)
    x = pure_tensor(A, B, A.index("p"), 1)
    assert tensor_join(x, bottom_tensor(A, B)) == x
    y = pure_tensor(A, B, A.index("p"), 2)
    assert tensor_join(x, y) == pure_tensor(A, B, A.index("p"), 3)


def test_join_of_atom_tensors_in_m3_matches_oracle():
    M = catalog.m3()
    space = RawSpace(M, M)
    p, q = M.index("p"), M.index("q")
    x, y = pure_tensor(M, M, p, p), pure_tensor(M, M, q, q)
    raw = space.closure(space.from_tensor(x) | space.from_tensor(y))
    assert space.from_tensor(tensor_join(x, y)) == raw


def test_join_and_meet_match_oracle_randomly():
    rng = random.Random(7)
    for _ in range(60):
        A, B = (catalog.by_name(rng.choice(SMALL)) for _ in range(2))
        space = RawSpace(A, B)
        xs = [tensor_join_all(A, B, [pure_tensor(A, B, rng.randrange(A.size), rng.randrange(B.size))
                                     for _ in range(rng.randint(1, 3))]) for _ in range(2)]
        x, y = xs
        j = tensor_join(x, y)
        assert is_tensor_map(A, B, j.f)
        assert space.from_tensor(j) == space.closure(space.from_tensor(x) | space.from_tensor(y))
        m = tensor_meet(x, y)
        assert is_tensor_map(A, B, m.f)
        assert space.from_tensor(m) == space.from_tensor(x) & space.from_tensor(y)


def test_meet_examples():
    A, B = catalog.n5(), catalog.boolean(2)
    for a, a2, b, b2 in product(A.elements, A.elements, B.elements, B.elements):
        lhs = tensor_meet(pure_tensor(A, B, a, b), pure_tensor(A, B, a2, b2))
        assert lhs == pure_tensor(A, B, A.meet(a, a2), B.meet(b, b2))
    x = pure_tensor(A, B, 3, 1)
    assert tensor_meet(x, x) == x
    assert tensor_meet(x, bottom_tensor(A, B)) == bottom_tensor(A, B)


def test_mixed_factors_rejected():
    x = bottom_tensor(catalog.chain(2), catalog.chain(2))
    y = bottom_tensor(catalog.chain(2), catalog.chain(3))
    with pytest.raises(LatticeError):
        tensor_join(x, y)


def test_two_element_factor_is_neutral():
    for name in SMALL:
        B = catalog.by_name(name)
        assert are_isomorphic(tensor_lattice(catalog.chain(2), B), B)[0]


def test_small_counts():
    assert tensor_lattice(catalog.chain(3), catalog.chain(3)).size == 6
    L, masks = brute_force_biideals(catalog.chain(2), catalog.chain(2))
    assert L.size == 2 and len(masks) == 2


@pytest.mark.parametrize("a,b", list(product(SMALL, repeat=2)))
def test_map_form_matches_oracle(a, b):
    A, B = catalog.by_name(a), catalog.by_name(b)
    T = tensor_lattice(A, B)
    O, masks = brute_force_biideals(A, B)
    assert T.size == O.size
    assert are_isomorphic(T, O)[0]
    assert are_isomorphic(T, tensor_lattice(B, A))[0]
    space = RawSpace(A, B)
    assert sorted(space.from_tensor(element_of(A, B, T, i)) for i in T.elements) == sorted(masks)
    assert min(masks, key=lambda m: bin(m).count("1")) == space.bot


def test_tensor_elements_are_valid():
    A, B = catalog.n5(), catalog.m3()
    for t in tensor_elements(A, B):
        assert is_tensor_map(A, B, t.f)


def test_guards(monkeypatch):
    with pytest.raises(SizeLimitExceeded):
        brute_force_biideals(catalog.chain(9), catalog.chain(8))
    monkeypatch.setenv("LATTICEFORGE_GUARD", "3")
    with pytest.raises(SizeLimitExceeded):
        tensor_elements(catalog.m3(), catalog.m3())


def test_capping_reproduces_element(catalog_lattice):
    A, B = catalog_lattice, catalog.boolean(2)
    T = tensor_lattice(A, B)
    space = RawSpace(A, B)
    for i in T.elements:
        x = element_of(A, B, T, i)
        cap = capping_of(x)
        assert capping_closure(A, B, cap) == space.from_tensor(x)
        assert from_capping(A, B, cap) == x


def test_boolean_mixed_capping():
    A = B = catalog.boolean(2)
    x = tensor_join(pure_tensor(A, B, 1, 1), pure_tensor(A, B, 2, 2))
    cap = capping_of(x)
    assert cap.pairs == frozenset({(1, 1), (2, 2)})
    y = tensor_join(pure_tensor(A, B, 1, 2), pure_tensor(A, B, 2, 1))
    assert capping_closure(A, B, capping_of(y)) == RawSpace(A, B).from_tensor(y)


def test_tensun_single_pair():
    A, B = catalog.m3(), catalog.n5()
    ok, rep = tensun_verify(A, B, [(1, 2)])
    assert ok and rep["depth_reached"] == 0 and rep["trace"] == [("x", 1, 2)]


def test_tensun_chains():
    A = B = catalog.chain(3)
    for pairs in product(product(A.elements, B.elements), repeat=2):
        ok, rep = tensun_verify(A, B, list(pairs), depth=4)
        assert ok and rep["depth_reached"] <= 2


def test_tensun_m3_n5_atoms():
    A, B = catalog.m3(), catalog.n5()
    for u, v in product("pqr", repeat=2):
        ok, rep = tensun_verify(A, B, [(A.index(u), B.index("a")), (A.index(v), B.index("b"))])
        assert ok and rep["depth_reached"] <= 4


def test_tensun_depth_positive_case():
    A, B = catalog.chain(3), catalog.m3()
    ok, rep = tensun_verify(A, B, [(1, B.index("p")), (2, B.index("q"))])
    assert ok and rep["depth_reached"] >= 1
    assert any("&" in t or "|" in t for t, _, _ in rep["trace"])
