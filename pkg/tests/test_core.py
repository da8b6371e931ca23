from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_lattice_classes
from latticeforge import catalog
from latticeforge.enumeration import (count_lattices, enumerate_lattices, lattice_certificate,
                                      size_guard)
from latticeforge.errors import CyclicCovers, NotALattice, SizeLimitExceeded
from latticeforge.identities import (check_identity, h_modularity_index, is_balanced,
                                     join_irreducibles, meet_irreducibles, sublattice_generated,
                                     triple_iterate, triple_step)
from latticeforge.lattice import (are_isomorphic, format_lattice, from_covers, from_leq,
                                  parse_lattice, relabel, sublattice)


def test_two_element_chain_from_covers():
    L = from_covers(2, [(0, 1)])
    assert L.join(0, 1) == 1 and L.meet(0, 1) == 0
    assert L.bottom == 0 and L.top == 1


def test_m3_atoms_join_to_top():
    L = from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
    for x, y in [(1, 2), (1, 3), (2, 3)]:
        assert L.join(x, y) == 4 and L.meet(x, y) == 0


def test_missing_top_is_rejected():
    with pytest.raises(NotALattice) as exc:
        from_covers(3, [(0, 1), (0, 2)])
    assert set(exc.value.pair) == {1, 2}
    # with an isolated fourth point the first failing pair involves it
    with pytest.raises(NotALattice):
        from_covers(4, [(0, 1), (0, 2)])


def test_cyclic_covers_rejected():
    with pytest.raises(CyclicCovers):
        from_covers(3, [(0, 1), (1, 2), (2, 1)])


def test_non_transitive_leq_rejected():
    m = np.eye(3, dtype=bool)
    m[0, 1] = m[1, 2] = True
    with pytest.raises(Exception):
        from_leq(m)


def test_lattice_axioms(catalog_lattice):
    L = catalog_lattice
    for x, y, z in product(L.elements, repeat=3):
        assert L.join(x, L.join(y, z)) == L.join(L.join(x, y), z)
        assert L.meet(x, L.join(x, y)) == x
        assert L.join(x, L.meet(x, y)) == x
    for x, y in product(L.elements, repeat=2):
        assert L.le(x, y) == (L.join(x, y) == y) == (L.meet(x, y) == x)


def test_join_irreducibles():
    assert join_irreducibles(catalog.chain(4)) == [1, 2, 3]
    m3 = catalog.m3()
    assert sorted(m3.name(x) for x in join_irreducibles(m3)) == ["p", "q", "r"]
    n5 = catalog.n5()
    assert sorted(n5.name(x) for x in join_irreducibles(n5)) == ["a", "b", "c"]
    assert sorted(n5.name(x) for x in meet_irreducibles(n5)) == ["a", "b", "c"]


def test_sublattice_generated():
    m3, n5 = catalog.m3(), catalog.n5()
    assert sublattice_generated(m3, {2}) == {2}
    p, q = m3.index("p"), m3.index("q")
    assert sublattice_generated(m3, {p, q}) == {p, q, m3.bottom, m3.top}
    a, b = n5.index("a"), n5.index("b")
    assert sublattice_generated(n5, {a, b}) == {a, b, n5.bottom, n5.top}


def test_identity_witnesses():
    n5, m3 = catalog.n5(), catalog.m3()
    ok, w = check_identity(n5, "modular")
    assert not ok and tuple(n5.name(x) for x in w) == ("a", "b", "c")
    assert check_identity(m3, "modular") == (True, None)
    assert not check_identity(m3, "distributive")[0]
    assert not check_identity(m3, "join_semidistributive")[0]
    assert check_identity(n5, "join_semidistributive")[0]
    for n in range(1, 6):
        for which in ("modular", "distributive", "join_semidistributive"):
            assert check_identity(catalog.chain(n), which)[0]


def test_identity_unknown_name():
    with pytest.raises(ValueError):
        check_identity(catalog.chain(2), "nonsense")


def test_triple_step_examples():
    c3 = catalog.chain(3)
    assert triple_step(c3, (0, 1, 1)) == (1, 1, 1)
    m3 = catalog.m3()
    atoms = tuple(m3.index(x) for x in "pqr")
    assert triple_step(m3, atoms) == atoms and is_balanced(m3, atoms)
    assert triple_iterate(m3, atoms, 5) == atoms


def test_balanced_triples_are_fixed(catalog_lattice):
    L = catalog_lattice
    for u in product(L.elements, repeat=3):
        x, y, z = u
        if L.meet(x, y) == L.meet(x, z) == L.meet(y, z):
            assert triple_step(L, u) == u


def test_triple_step_inflationary(catalog_lattice):
    L = catalog_lattice
    for u in product(L.elements, repeat=3):
        assert all(L.le(a, b) for a, b in zip(u, triple_step(L, u)))


def test_h_modularity_indices():
    assert h_modularity_index(catalog.m3()) == 1
    assert h_modularity_index(catalog.n5()) == 2
    assert h_modularity_index(catalog.chain(3)) == 1
    assert h_modularity_index(catalog.boolean(2)) == 1
    with pytest.raises(ValueError):
        h_modularity_index(catalog.n5(), cutoff=0)
    assert h_modularity_index(catalog.n5(), cutoff=1) is None


def test_modular_iff_index_one():
    for n in range(3, 7):
        for L in enumerate_lattices(n):
            assert (h_modularity_index(L) == 1) == check_identity(L, "modular")[0]


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 5), (6, 15), (7, 53)])
def test_enumeration_counts_match_oracle(n, count):
    assert brute_lattice_classes(n) == count
    assert count_lattices(n) == count


def test_enumeration_n8():
    assert count_lattices(8) == 222


def test_enumeration_contains_named_lattices():
    certs = {lattice_certificate(L) for L in enumerate_lattices(5)}
    for L in (catalog.m3(), catalog.n5(), catalog.chain(5)):
        assert lattice_certificate(L) in certs


def test_enumeration_pairwise_nonisomorphic():
    lats = list(enumerate_lattices(6))
    for i in range(len(lats)):
        for j in range(i + 1, len(lats)):
            assert not are_isomorphic(lats[i], lats[j])[0]


def test_enumeration_guard(monkeypatch):
    with pytest.raises(SizeLimitExceeded):
        list(enumerate_lattices(9))
    monkeypatch.setenv("LATTICEFORGE_GUARD", "4")
    assert size_guard(100) == 4
    with pytest.raises(SizeLimitExceeded):
        list(enumerate_lattices(5))


def test_isomorphism():
    m3 = catalog.m3()
    ok, mapping = are_isomorphic(m3, m3)
    assert ok and all(m3.le(x, y) == m3.le(mapping[x], mapping[y])
                      for x in m3.elements for y in m3.elements)
    assert are_isomorphic(catalog.chain(3), catalog.chain(4)) == (False, None)
    assert not are_isomorphic(m3, catalog.n5())[0]


def test_relabel_is_isomorphic():
    n5 = catalog.n5()
    R = relabel(n5, [4, 2, 3, 0, 1])
    ok, mapping = are_isomorphic(n5, R)
    assert ok
    assert all(R.join(mapping[x], mapping[y]) == mapping[n5.join(x, y)]
               for x in n5.elements for y in n5.elements)


def test_sublattice_of_boolean():
    B = catalog.boolean(3)
    S = sublattice(B, [0, 1, 2, 3])
    assert are_isomorphic(S, catalog.boolean(2))[0]


def test_text_round_trip(catalog_lattice):
    text = format_lattice(catalog_lattice)
    again = parse_lattice(text)
    assert format_lattice(again) == text
    assert again.leq == catalog_lattice.leq


def test_parse_comments_and_errors():
    L = parse_lattice("# a chain\nlattice 3\ncover 0 1 # lower\ncover 1 2\n")
    assert L.size == 3 and L.join(0, 2) == 2
    with pytest.raises(Exception):
        parse_lattice("lattice 3\nfrob 0 1\n")
    with pytest.raises(Exception):
        parse_lattice("cover 0 1\n")


def test_interval_lattice_shape():
    S = catalog.interval_lattice(4)
    assert S.size == 1 + 4 * 5 // 2
    assert S.name(S.bottom) == "e" and S.name(S.top) == "0-3"
    a, b = catalog.interval_index(S, 0, 0), catalog.interval_index(S, 2, 2)
    assert S.join(a, b) == catalog.interval_index(S, 0, 2)


@given(st.sampled_from(["chain3", "boolean2", "boolean3", "m3", "n5"]), st.data())
@settings(max_examples=60, deadline=None)
def test_join_meet_absorption_random(name, data):
    L = catalog.by_name(name)
    x = data.draw(st.integers(0, L.size - 1))
    y = data.draw(st.integers(0, L.size - 1))
    assert L.meet(x, L.join(x, y)) == x
    assert L.le(L.meet(x, y), L.join(x, y))
