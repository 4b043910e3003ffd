from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqframes.catalog import catalog_actions, catalog_functors, catalog_groupoids, small_groupoids
from iqframes.errors import InvalidFunctor
from iqframes.groupoid import (
    BiAction,
    FinGroupoid,
    GAction,
    GroupoidFunctor,
    bundle_of_functor,
    dual_biaction,
    functor_from_section,
    global_section_of_bundle,
    is_essential_equivalence,
    is_principal_bundle,
    iter_functors,
    orbits_isotropy_named,
    translation,
    validate,
    validate_action,
    validate_biaction,
)
from iqframes.morita import morita_oracle
from oracles import naive_morita

GROUPOIDS = catalog_groupoids(3)
FUNCTORS = catalog_functors(4)


def point_functor(G, obj_label):
    """The functor ``T → G`` onto the identity at ``obj_label``."""
    T = FinGroupoid.trivial()
    x = G.objects.index(obj_label)
    return GroupoidFunctor(T, G, [x], [G.ids[x]])


# --- validation ---------------------------------------------------------------


def test_small_groupoids_are_valid(T, Z2, P2):
    for G in (T, Z2, P2):
        assert validate(G).passed


def test_missing_composite_is_reported(P2):
    comp = dict(P2.comp_table)
    key = next(k for k in comp if k[0] != k[1])
    del comp[key]
    broken = FinGroupoid(P2.objects, P2.arrows, P2.dom, P2.cod, comp, P2.inv, P2.ids)
    rep = validate(broken)
    assert not rep.passed
    assert rep.failures()[0].witness is not None


def test_catalog_size_and_validity():
    assert len(GROUPOIDS) == 66
    assert all(validate(G).passed for G in GROUPOIDS)
    assert all(G.n_arrows <= 8 or G.name == "P3" for G in GROUPOIDS)


# --- orbits and isotropy ------------------------------------------------------


def test_orbits_isotropy_examples(T, Z2, P2):
    assert orbits_isotropy_named(P2) == [(2, "Z1")]
    assert orbits_isotropy_named(Z2) == [(1, "Z2")]
    both = FinGroupoid.disjoint_union(T, Z2)
    assert sorted(orbits_isotropy_named(both)) == [(1, "Z1"), (1, "Z2")]


@given(st.sampled_from(GROUPOIDS), st.sampled_from(GROUPOIDS))
def test_isotropy_oracle_matches_brute_force(G, H):
    assert morita_oracle(G, H) == naive_morita(G, H)


# --- actions ------------------------------------------------------------------


@given(st.sampled_from(GROUPOIDS).flatmap(lambda G: st.sampled_from(catalog_actions(G, 4))))
def test_actions_are_fiberwise_bijective(a):
    G = a.groupoid
    assert validate_action(a).passed
    for g in range(G.n_arrows):
        fiber = [x for x in range(len(a.carrier)) if a.anchor[x] == G.dom[g]]
        images = [a.act(g, x) for x in fiber]
        assert len(set(images)) == len(images)
        assert all(a.anchor[y] == G.cod[g] for y in images)


def test_broken_action_is_reported(P2):
    a = GAction.tautological(P2)
    table = dict(a.table)
    table[(P2.ids[0], 0)] = 1
    rep = validate_action(GAction(P2, a.carrier, a.anchor, table, check=False))
    assert not rep.passed


# --- functors and bundles -----------------------------------------------------


def brute_force_functors(H, G):
    out = 0
    for arr in product(range(G.n_arrows), repeat=H.n_arrows):
        obj = [None] * H.n_objects
        ok = True
        for h in range(H.n_arrows):
            for end, gend in ((H.dom[h], G.dom[arr[h]]), (H.cod[h], G.cod[arr[h]])):
                if obj[end] is None:
                    obj[end] = gend
                elif obj[end] != gend:
                    ok = False
        if not ok:
            continue
        if any(arr[H.ids[x]] != G.ids[obj[x]] for x in range(H.n_objects)):
            continue
        if all(arr[H.comp(a, b)] == G.comp(arr[a], arr[b]) for (a, b) in H.comp_table):
            out += 1
    return out


@pytest.mark.parametrize("H", small_groupoids(3), ids=lambda G: G.name)
def test_functor_enumeration_is_complete(H):
    for G in small_groupoids(3):
        assert len(list(iter_functors(H, G))) == brute_force_functors(H, G)


def test_bundle_of_identity_on_point(T):
    b = bundle_of_functor(GroupoidFunctor.identity(T))
    assert len(b) == 1


def test_bundle_of_point_into_z2(Z2):
    phi = point_functor(Z2, Z2.objects[0])
    b = bundle_of_functor(phi)
    assert len(b) == 2
    g = next(a for a in range(Z2.n_arrows) if a not in Z2.ids)
    assert b.lact(g, 0) == 1 and b.lact(g, 1) == 0
    assert all(b.ract(x, 0) == x for x in range(2))
    assert is_principal_bundle(b).passed


def test_bundle_of_object_inclusion_into_pair(P2):
    phi = point_functor(P2, 1)
    b = bundle_of_functor(phi)
    assert len(b) == 2
    assert sorted(b.p) == [0, 1]
    assert is_principal_bundle(b).passed


def test_essential_equivalence_examples(T, Z2, P2):
    assert is_essential_equivalence(GroupoidFunctor.identity(P2))[0]
    assert is_essential_equivalence(point_functor(P2, 1))[0]
    ok, rep = is_essential_equivalence(point_functor(Z2, Z2.objects[0]))
    assert not ok
    assert rep["fully faithful"].witness[2:] == (1, 2)


def test_invalid_functor_is_rejected(T, Z2):
    g = next(a for a in range(Z2.n_arrows) if a not in Z2.ids)
    with pytest.raises(InvalidFunctor):
        GroupoidFunctor(T, Z2, [0], [g])


@given(st.sampled_from(FUNCTORS))
def test_bundle_is_principal_with_a_global_section(phi):
    b = bundle_of_functor(phi)
    assert validate_biaction(b).passed
    assert is_principal_bundle(b).passed
    sec = global_section_of_bundle(phi)
    assert [b.q[s] for s in sec] == list(range(phi.source.n_objects))
    back = functor_from_section(b, sec)
    assert back.obj == phi.obj and back.arr == phi.arr


@given(st.sampled_from(FUNCTORS))
def test_essential_equivalences_preserve_the_invariant(phi):
    if is_essential_equivalence(phi)[0]:
        assert morita_oracle(phi.source, phi.target)


@given(st.sampled_from(FUNCTORS))
def test_translation_identities_in_principal_bundles(phi):
    b = bundle_of_functor(phi)
    G = b.G
    n = len(b)
    for x in range(n):
        assert translation(b, x, x) == G.ids[b.p[x]]
        for y in range(n):
            if b.q[x] != b.q[y]:
                continue
            t = translation(b, x, y)
            assert t is not None and b.lact(t, y) == x
            assert translation(b, y, x) == G.inv[t]
            for g in range(G.n_arrows):
                if G.dom[g] == b.p[x]:
                    assert translation(b, b.lact(g, x), y) == G.comp(g, t)


# --- duals --------------------------------------------------------------------


def test_dual_of_tautological_pair(taut_bi, P2):
    d = dual_biaction(taut_bi)
    assert validate_biaction(d).passed
    assert d.G.n_arrows == 1 and d.H is P2
    # x·h is defined iff x = cod(h) and lands on dom(h)
    for h in range(P2.n_arrows):
        for x in range(2):
            y = d.ract(x, h)
            assert (y is None) == (P2.cod[h] != x)
            if y is not None:
                assert y == P2.dom[h]


@given(st.sampled_from(FUNCTORS))
def test_dual_is_an_involution(phi):
    b = bundle_of_functor(phi)
    dd = dual_biaction(dual_biaction(b))
    assert dd.left.table == b.left.table and dd.right.table == b.right.table


def test_unit_biaction_is_valid(P2):
    assert validate_biaction(BiAction.unit(P2)).passed
