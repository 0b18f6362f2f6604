from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import antichain, chain, diamond
from monocone.cones import (
    RateVector,
    build_increasing_indicators,
    build_monotonicity_inequalities,
    dimension,
    is_monotone,
    pair_coordinates,
)
from monocone.equivalence import check_equivalence
from monocone.errors import IndexMismatch, ValidationError
from monocone.poset import dual, enumerate_increasing_maps, enumerate_posets, enumerate_upsets

rationals = st.fractions(min_value=0, max_value=5, max_denominator=6)


def rate_vectors(p, values=rationals):
    return st.lists(values, min_size=dimension(p), max_size=dimension(p)).map(lambda v: RateVector.from_vector(p, v))


def as_dict(p, vec):
    els = p.elements
    return {(els[i], els[j]): v for (i, j), v in zip(pair_coordinates(p), vec) if v}


# -- coordinates and rate vectors ---------------------------------------------


def test_pair_coordinates_are_lexicographic():
    assert pair_coordinates(chain(3)) == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


def test_rate_vector_diagonal():
    p = chain(3)
    L = RateVector.from_rates(p, {("a", "b"): Fraction(1, 2), ("a", "c"): 2, ("c", "a"): 1})
    assert L.diagonal() == {"a": Fraction(-5, 2), "b": 0, "c": -1}
    assert L["b", "a"] == 0


@pytest.mark.parametrize("rates,exc", [
    ({("a", "z"): 1}, IndexMismatch),
    ({("a", "a"): 1}, IndexMismatch),
    ({("a", "b"): -1}, ValidationError),
])
def test_rate_vector_rejects(rates, exc):
    with pytest.raises(exc):
        RateVector.from_rates(chain(2), rates)


# -- inequality vectors -------------------------------------------------------


def test_two_chain_has_no_inequalities():
    assert build_monotonicity_inequalities(chain(2)) == []


def test_diamond_inequalities_are_balanced():
    ws = build_monotonicity_inequalities(diamond())
    assert ws
    for w in ws:
        assert w.coefficients.count(1) == w.coefficients.count(-1) > 0


def test_p1_named_inequality(catalog):
    p = catalog.poset("P1")
    vecs = {tuple(sorted(as_dict(p, w.coefficients).items())) for w in build_monotonicity_inequalities(p)}
    assert ((("a", "d"), -1), (("b", "d"), 1)) in vecs


def test_inequalities_match_definition():
    # the full family, rebuilt from the two-case definition over all (up-set, x, y)
    for n in range(1, 6):
        for p in enumerate_posets(n):
            ref = set()
            for g in oracles.upsets(p):
                for x in p.elements:
                    for y in p.elements:
                        w = oracles.w_vector(p, g, x, y)
                        if w:
                            ref.add(frozenset(w.items()))
            ws = build_monotonicity_inequalities(p)
            got = [frozenset(as_dict(p, w.coefficients).items()) for w in ws]
            assert len(got) == len(set(got))
            assert set(got) == ref


def test_inequality_provenance_reproduces_vector():
    for p in enumerate_posets(4):
        for w in build_monotonicity_inequalities(p):
            ref = oracles.w_vector(p, frozenset(w.upset.members), w.x, w.y)
            assert as_dict(p, w.coefficients) == ref


def test_incomparable_pairs_give_zero_vectors():
    for p in enumerate_posets(4):
        for g in oracles.upsets(p):
            for x in p.elements:
                for y in p.elements:
                    if not p.leq(x, y) and not p.leq(y, x):
                        assert oracles.w_vector(p, g, x, y) == {}


# -- indicator rays -----------------------------------------------------------


def test_two_chain_indicators():
    p = chain(2)
    rays = {tuple(r.entries) for r in build_increasing_indicators(p)}
    # coordinates are (a,b), (b,a): f = const a gives (b,a); f = const b gives (a,b)
    assert rays == {(0, 1), (1, 0)}


def test_indicator_counts():
    assert len(build_increasing_indicators(antichain(2))) == 3
    for n in range(1, 5):
        for p in enumerate_posets(n):
            rays = build_increasing_indicators(p)
            assert len(rays) == len(enumerate_increasing_maps(p)) - 1
            assert len({r.entries for r in rays}) == len(rays)


def test_indicator_entries_follow_map():
    for p in enumerate_posets(4):
        for r in build_increasing_indicators(p):
            f = r.map.as_dict()
            expected = {(x, f[x]): 1 for x in p.elements if f[x] != x}
            assert as_dict(p, r.entries) == expected


def test_inclusion_exhaustive():
    # every indicator ray satisfies every monotonicity inequality
    for n in range(1, 6):
        for p in enumerate_posets(n):
            ws = build_monotonicity_inequalities(p)
            for r in build_increasing_indicators(p):
                for w in ws:
                    assert sum(a * b for a, b in zip(r.entries, w.coefficients)) >= 0


# -- monotonicity -------------------------------------------------------------


def test_l1_is_monotone(catalog):
    assert is_monotone(catalog.poset("P1"), catalog.generator("L1"))


def test_zero_is_monotone():
    for p in enumerate_posets(4):
        assert is_monotone(p, RateVector.from_vector(p, [0] * dimension(p)))


def test_diamond_violation():
    p = diamond()
    L = RateVector.from_rates(p, {("a", "d"): 1})
    verdict = is_monotone(p, L)
    assert not verdict and verdict.value < 0
    assert oracles.monotone(p, L.rates()) is False
    # the triple named by hand: up-set {d}, x=a <= y=b outside it
    w = oracles.w_vector(p, frozenset("d"), "a", "b")
    assert sum(v * L[k] for k, v in w.items()) == -1


def test_is_monotone_index_mismatch():
    with pytest.raises(IndexMismatch):
        is_monotone(chain(3), RateVector.from_vector(chain(2), [0, 0]))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_is_monotone_matches_oracle(data):
    p = data.draw(st.sampled_from(enumerate_posets(4)))
    L = data.draw(rate_vectors(p, st.integers(0, 2).map(Fraction)))
    assert bool(is_monotone(p, L)) == oracles.monotone(p, L.rates())


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_monotone_dual_invariance(data):
    p = data.draw(st.sampled_from(enumerate_posets(5)))
    d = dual(p)
    L = data.draw(rate_vectors(p, st.integers(0, 2).map(Fraction)))
    assert bool(is_monotone(p, L)) == bool(is_monotone(d, RateVector(d, L.values)))


def test_dual_has_same_inequalities():
    for n in range(2, 6):
        for p in enumerate_posets(n):
            a = {w.coefficients for w in build_monotonicity_inequalities(p)}
            b = {w.coefficients for w in build_monotonicity_inequalities(dual(p))}
            assert a == b


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_cone_laws(data):
    p = data.draw(st.sampled_from(enumerate_posets(4)))
    # sample monotone vectors as nonnegative combinations of indicator rays
    rays = [r.entries for r in build_increasing_indicators(p)]

    def member():
        lam = data.draw(st.lists(rationals, min_size=len(rays), max_size=len(rays)))
        return RateVector.from_vector(p, [sum(l * r[k] for l, r in zip(lam, rays)) for k in range(dimension(p))])

    L, M = member(), member()
    q = data.draw(rationals)
    assert is_monotone(p, L) and is_monotone(p, M)
    assert is_monotone(p, RateVector.from_vector(p, [a + b for a, b in zip(L.values, M.values)]))
    assert is_monotone(p, RateVector.from_vector(p, [q * a for a in L.values]))


@settings(max_examples=30, deadline=None)
@given(rate_vectors(chain(2)))
def test_every_generator_on_two_chain_is_monotone(L):
    assert is_monotone(chain(2), L)


def test_longer_chains_have_non_monotone_generators():
    # from three points on, a jump a -> c while b stays put breaks the order
    for n in range(3, 7):
        p = chain(n)
        L = RateVector.from_rates(p, {("a", "c"): 1})
        assert not is_monotone(p, L)
        assert not oracles.monotone(p, L.rates())
        assert check_equivalence(p).equivalent


def test_upsets_used_are_the_enumerated_ones():
    p = diamond()
    masks = {u.mask for u in enumerate_upsets(p)}
    assert all(w.upset.mask in masks for w in build_monotonicity_inequalities(p))
