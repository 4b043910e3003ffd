import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqframes.catalog import catalog_groupoids
from iqframes.errors import NoStableSupport
from iqframes.groupoid import groupoid_iso_class
from iqframes.quantale import (
    Quantale,
    chain3,
    groupoid_of_quantale,
    partial_units,
    quantale_of_groupoid,
    support,
    validate_iqf,
)
from iqframes.suplat import FinSupLattice
from oracles import identities, is_partial_bijection, mask_to_set, set_product, set_star, set_to_mask

GROUPOIDS = catalog_groupoids(3)


def arrows(G, *labels):
    return sum(1 << G.arrows.index(lab) for lab in labels)


def non_identity(G):
    return next(a for a in range(G.n_arrows) if a not in G.ids)


# --- constructions ------------------------------------------------------------


def test_quantale_of_point(T):
    Q = quantale_of_groupoid(T)
    assert len(Q.elements) == 2 and Q.e == Q.top


def test_quantale_of_z2(Z2):
    Q = quantale_of_groupoid(Z2)
    g = 1 << non_identity(Z2)
    assert len(Q.elements) == 4
    assert Q.mul(g, g) == Q.e
    assert Q.star(g) == g


def test_quantale_of_pair(P2):
    Q = quantale_of_groupoid(P2)
    assert Q.mul(arrows(P2, "(1,2)"), arrows(P2, "(2,1)")) == arrows(P2, "(1,1)")
    assert Q.e == arrows(P2, "(1,1)", "(2,2)")
    assert Q.mul(arrows(P2, "(2,1)"), arrows(P2, "(2,1)")) == 0


@given(st.sampled_from(GROUPOIDS), st.data())
def test_products_match_set_semantics(G, data):
    Q = quantale_of_groupoid(G)
    a = data.draw(st.integers(0, Q.top))
    b = data.draw(st.integers(0, Q.top))
    A, B = mask_to_set(a), mask_to_set(b)
    assert mask_to_set(Q.mul(a, b)) == set_product(G, A, B)
    assert mask_to_set(Q.star(a)) == set_star(G, A)
    assert mask_to_set(Q.e) == identities(G)


# --- the axiom battery --------------------------------------------------------


def test_z2_passes_everything(Z2):
    Q = quantale_of_groupoid(Z2)
    assert validate_iqf(Q).passed
    assert sorted(partial_units(Q)) == [0, 1 << Z2.ids[0], 1 << non_identity(Z2)]


def test_three_element_chain_fails_only_the_cover():
    rep = validate_iqf(chain3())
    failed = [c.name for c in rep.failures()]
    assert failed == ["partial units cover: ⋁Q_I = 1"]


def test_broken_involution_is_caught(Z2):
    good = quantale_of_groupoid(Z2)
    g = 1 << non_identity(Z2)
    e = good.e

    def star(a):
        # swap e and g: still an involution on the lattice, but not anti-multiplicative
        return (e if a & g else 0) | (g if a & e else 0)

    bad = Quantale(good.lattice, good.mul, star, e)
    rep = validate_iqf(bad)
    assert not rep["involution: (ab)* = b*a*"].passed
    assert rep["involution: (ab)* = b*a*"].witness is not None


def test_catalog_passes_the_battery():
    for G in GROUPOIDS:
        rep = validate_iqf(quantale_of_groupoid(G))
        assert rep.passed, (G.name, [c.name for c in rep.failures()])


# --- partial units and supports -----------------------------------------------


def test_partial_unit_counts(T, Z2, P2):
    assert len(partial_units(quantale_of_groupoid(T))) == 2
    assert len(partial_units(quantale_of_groupoid(Z2))) == 3
    # ∅, four singletons, both diagonals {(1,1),(2,2)} and {(1,2),(2,1)}
    assert len(partial_units(quantale_of_groupoid(P2))) == 7


@pytest.mark.parametrize("G", [G for G in GROUPOIDS if G.n_arrows <= 6], ids=lambda G: G.name)
def test_partial_units_are_partial_bijections(G):
    Q = quantale_of_groupoid(G)
    expect = {a for a in Q.elements if is_partial_bijection(G, mask_to_set(a))}
    assert set(partial_units(Q)) == expect


def test_support_examples(Z2, P2):
    Q = quantale_of_groupoid(P2)
    spp = support(Q)
    assert spp(Q.e) == Q.e
    assert spp(arrows(P2, "(1,2)")) == arrows(P2, "(1,1)")
    Qz = quantale_of_groupoid(Z2)
    assert support(Qz)(1 << non_identity(Z2)) == Qz.e


def test_support_needs_stability():
    # the four-element Boolean algebra with product = meet but unit = an atom
    L = FinSupLattice.powerset(2)
    bad = Quantale(L, lambda a, b: a & b, lambda a: a, 1)
    with pytest.raises(NoStableSupport) as err:
        support(bad)
    assert str(err.value) == "support: a ≤ spp(a)a"
    assert err.value.witness == ["{1}"]


@given(st.sampled_from(GROUPOIDS), st.data())
def test_support_is_stable_and_unique(G, data):
    Q = quantale_of_groupoid(G)
    a = data.draw(st.integers(0, Q.top))
    b = data.draw(st.sampled_from(Q.base_elements))
    assert Q.spp(a) == Q.mul(a, Q.star(a)) & Q.e
    assert Q.mul(b, a) == Q.mul(b, Q.top) & a
    assert Q.spp(Q.mul(b, a)) == Q.mul(b, Q.spp(a))
    # the support is cod on arrows
    assert mask_to_set(Q.spp(a)) == {G.ids[G.cod[g]] for g in mask_to_set(a)}


@pytest.mark.parametrize("G", GROUPOIDS, ids=lambda G: G.name)
def test_groupoid_round_trip(G):
    back = groupoid_of_quantale(quantale_of_groupoid(G))
    assert groupoid_iso_class(back) == groupoid_iso_class(G)
    assert back.n_arrows == G.n_arrows


def test_set_to_mask_helper_round_trips():
    assert set_to_mask(mask_to_set(0b1011)) == 0b1011
