import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import antichain, chain, diamond
from monocone.errors import CycleInCovers, DuplicateLabel, SizeOutOfRange, UnknownLabel
from monocone.poset import (
    Poset,
    canonical_form,
    dual,
    enumerate_increasing_maps,
    enumerate_posets,
    enumerate_upsets,
    induced_subposet_search,
    is_acyclic,
    is_isomorphic,
)


@st.composite
def posets(draw, max_n=6):
    """Random posets from a random DAG on a fixed topological order."""
    n = draw(st.integers(1, max_n))
    els = oracles.labels(n)
    pairs = [(els[i], els[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(els))
    relabel = dict(zip(els, perm))
    return Poset.from_covers(perm, [(relabel[a], relabel[b]) for a, b in chosen])


# -- construction -----------------------------------------------------------


def test_two_chain():
    p = Poset.from_covers(["a", "b"], [("a", "b")])
    assert oracles.leq_set(p) == {("a", "a"), ("a", "b"), ("b", "b")}
    assert p.leq("a", "b") and not p.leq("b", "a")


def test_p1_closure(catalog):
    p = catalog.poset("P1")
    assert len(p) == 5 and len(p.covers) == 5
    assert p.leq("w", "d")


def test_redundant_covers_are_reduced():
    p = Poset.from_covers("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert set(p.covers) == {("a", "b"), ("b", "c")}


@pytest.mark.parametrize("covers,exc", [
    ([("a", "b"), ("b", "a")], CycleInCovers),
    ([("a", "a")], CycleInCovers),
    ([("a", "z")], UnknownLabel),
])
def test_bad_covers(covers, exc):
    with pytest.raises(exc):
        Poset.from_covers("ab", covers)


def test_duplicate_label():
    with pytest.raises(DuplicateLabel):
        Poset.from_covers(["a", "a"], [])


def test_leq_unknown_label():
    with pytest.raises(UnknownLabel):
        chain(2).leq("a", "q")


@settings(max_examples=60, deadline=None)
@given(posets())
def test_closure_reduction_round_trip(p):
    leq = oracles.leq_set(p)
    # order axioms
    assert all((x, x) in leq for x in p.elements)
    assert all(not ((x, y) in leq and (y, x) in leq) or x == y for x in p.elements for y in p.elements)
    assert all((x, z) in leq for x, y in leq for y2, z in leq if y == y2)
    # covers are exactly the pairs with nothing strictly between
    strict = {(x, y) for x, y in leq if x != y}
    reduction = {(x, y) for x, y in strict if not any((x, z) in strict and (z, y) in strict for z in p.elements)}
    assert set(p.covers) == reduction
    again = Poset.from_covers(p.elements, p.covers)
    assert again.up == p.up


# -- up-sets and increasing maps --------------------------------------------


@pytest.mark.parametrize("p,count", [(chain(2), 3), (antichain(2), 4), (diamond(), 6)])
def test_upset_counts(p, count):
    assert len(enumerate_upsets(p)) == count


def test_two_chain_upsets():
    assert [u.members for u in enumerate_upsets(chain(2))] == [frozenset(), frozenset("b"), frozenset("ab")]


def test_upsets_match_subset_filter_exhaustively():
    for n in range(1, 7):
        for p in enumerate_posets(n):
            got = [u.members for u in enumerate_upsets(p)]
            assert len(got) == len(set(got))
            assert set(got) == oracles.upsets(p)


def test_upset_order_is_size_then_membership_vector():
    for p in enumerate_posets(4):
        ups = enumerate_upsets(p)
        keys = [(len(u.members), [e in u for e in p.elements]) for u in ups]
        assert keys == sorted(keys)


def test_upsets_form_a_lattice():
    for n in range(1, 7):
        for p in enumerate_posets(n):
            ups = {u.mask for u in enumerate_upsets(p)}
            assert all(a | b in ups and a & b in ups for a in ups for b in ups)


@pytest.mark.parametrize("p,count", [(chain(2), 3), (antichain(2), 4), (chain(3), 10)])
def test_increasing_map_counts(p, count):
    assert len(enumerate_increasing_maps(p)) == count


def test_increasing_maps_match_brute_force():
    for n in range(1, 6):
        for p in enumerate_posets(n):
            got = [tuple(f.as_dict()[x] for x in p.elements) for f in enumerate_increasing_maps(p)]
            assert got == sorted(set(got), key=lambda t: [p.index(x) for x in t])
            assert set(got) == oracles.increasing_maps(p)


def test_increasing_maps_closed_under_composition():
    for n in range(1, 6):
        for p in enumerate_posets(n):
            maps = {f.table for f in enumerate_increasing_maps(p)}
            assert tuple(range(n)) in maps
            for f, g in itertools.product(maps, repeat=2):
                assert tuple(f[g[i]] for i in range(n)) in maps


# -- duality, acyclicity ----------------------------------------------------


def test_dual_of_chain():
    d = dual(chain(2))
    assert d.leq("b", "a") and not d.leq("a", "b")


def test_dual_is_involution(catalog):
    for p in catalog.posets.values():
        assert dual(dual(p)).up == p.up


def test_diamond_self_dual():
    assert is_isomorphic(dual(diamond()), diamond())


@settings(max_examples=60, deadline=None)
@given(posets())
def test_dual_properties(p):
    d = dual(p)
    assert all(d.leq(x, y) == p.leq(y, x) for x in p.elements for y in p.elements)
    full = frozenset(p.elements)
    assert {u.members for u in enumerate_upsets(d)} == {full - u.members for u in enumerate_upsets(p)}
    assert {f.table for f in enumerate_increasing_maps(d)} == {f.table for f in enumerate_increasing_maps(p)}
    assert is_acyclic(d) == is_acyclic(p)


def _has_undirected_cycle(p: Poset) -> bool:
    # a simple graph has a cycle iff removing some edge keeps its endpoints connected
    edges = [tuple(c) for c in p.covers]
    for k, (a, b) in enumerate(edges):
        rest = edges[:k] + edges[k + 1:]
        seen, todo = {a}, [a]
        while todo:
            x = todo.pop()
            for u, v in rest:
                for s, t in ((u, v), (v, u)):
                    if s == x and t not in seen:
                        seen.add(t)
                        todo.append(t)
        if b in seen:
            return True
    return False


def test_acyclic_examples(catalog):
    assert is_acyclic(chain(5))
    assert not is_acyclic(diamond())
    assert not is_acyclic(catalog.poset("P1"))


def test_acyclic_matches_cycle_search():
    for n in range(1, 6):
        for p in enumerate_posets(n):
            assert is_acyclic(p) == (not _has_undirected_cycle(p))


# -- isomorphism and enumeration --------------------------------------------


def test_canonical_form_examples(catalog):
    a = Poset.from_covers("ab", [("a", "b")])
    x = Poset.from_covers("xy", [("x", "y")])
    assert canonical_form(a) == canonical_form(x)
    assert canonical_form(a) != canonical_form(antichain(2))
    assert canonical_form(diamond()) != canonical_form(catalog.poset("bowtie"))


@settings(max_examples=80, deadline=None)
@given(posets(), st.randoms(use_true_random=False))
def test_canonical_form_invariant_under_relabeling(p, rnd):
    perm = list(p.elements)
    rnd.shuffle(perm)
    new = [f"v{k}" for k in range(len(p))]
    ren = dict(zip(perm, new))
    q = Poset.from_covers(new[::-1], [(ren[a], ren[b]) for a, b in p.covers])
    assert canonical_form(q) == canonical_form(p)


def test_canonical_form_separates_all_classes():
    for n in range(1, 7):
        forms = [canonical_form(p) for p in enumerate_posets(n)]
        assert len(forms) == len(set(forms))


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 5), (4, 16), (5, 63), (6, 318)])
def test_enumeration_counts(n, count):
    assert len(enumerate_posets(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_matches_brute_force(n):
    assert len(enumerate_posets(n)) == oracles.count_isomorphism_classes(n)


def test_enumeration_size_guard():
    for n in (0, 8):
        with pytest.raises(SizeOutOfRange):
            enumerate_posets(n)


def test_subposet_examples(catalog):
    p1 = catalog.poset("P1")
    d = diamond()
    emb = induced_subposet_search(p1, d)
    # w sits below b, c, d too, so the first embedding found uses w as the bottom
    assert emb is not None and emb.map == {"a": "w", "b": "b", "c": "c", "d": "d"}
    assert all(d.leq(x, y) == p1.leq(x, y) for x in d.elements for y in d.elements)
    assert induced_subposet_search(catalog.poset("fish"), catalog.poset("P4")) is not None
    ident = induced_subposet_search(p1, p1)
    assert ident.map == {x: x for x in p1.elements}


def test_subposet_matches_brute_force():
    hosts = enumerate_posets(5)[::3]
    patterns = enumerate_posets(4)
    for h in hosts:
        for q in patterns:
            emb = induced_subposet_search(h, q)
            assert (emb is not None) == oracles.is_induced_subposet(h, q)
            if emb is not None:
                m = emb.map
                assert len(set(m.values())) == len(m)
                assert all(q.leq(a, b) == h.leq(m[a], m[b]) for a in q.elements for b in q.elements)
