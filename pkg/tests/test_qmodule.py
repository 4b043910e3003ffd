import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqframes.catalog import catalog_actions, catalog_groupoids
from iqframes.groupoid import FinGroupoid, GAction
from iqframes.qmodule import (
    adjoint_identity,
    alpha_star_check,
    check_freeness,
    check_transitivity_splitting,
    hilbert_laws,
    hilbert_sections,
    inner_fast,
    inner_oracle,
    invariant_part,
    module_of_action,
    orbit_unions,
    principal_conditions,
    principal_pair_laws,
    principal_sections,
    right_structure,
)
from iqframes.quantale import partial_units
from iqframes.suplat import quotient_by_closure
from oracles import mask_to_set, point_inner

GROUPOIDS = catalog_groupoids(3)
SMALL = [G for G in GROUPOIDS if G.n_arrows <= 6]
ACTIONS = [a for G in SMALL for a in catalog_actions(G, 3)]


def arrows(G, *labels):
    return sum(1 << G.arrows.index(lab) for lab in labels)


def non_identity(G):
    return next(a for a in range(G.n_arrows) if a not in G.ids)


def z2_on_a_point(Z2):
    e, g = Z2.ids[0], non_identity(Z2)
    return GAction(Z2, ["*"], [0], {(e, 0): 0, (g, 0): 0})


@pytest.fixture(scope="module")
def X_taut(taut):
    return module_of_action(taut)


@pytest.fixture(scope="module")
def X_z2(Z2):
    return module_of_action(GAction.regular(Z2))


# --- action and inner product examples -----------------------------------------


def test_tautological_action(P2, X_taut):
    assert X_taut.act(arrows(P2, "(1,2)"), 0b10) == 0b01
    assert X_taut.act(arrows(P2, "(1,2)"), 0b01) == 0
    assert X_taut.act(X_taut.Q.e, 0b11) == 0b11


def test_tautological_inner_products(P2, X_taut):
    for f in (inner_fast, inner_oracle):
        assert f(X_taut, 0b01, 0b10) == arrows(P2, "(1,2)")
        assert f(X_taut, 0b01, 0b01) == arrows(P2, "(1,1)")
        assert f(X_taut, 0, 0b11) == 0
    assert X_taut.closed_inner(0b01, 0b10) == arrows(P2, "(1,2)")


def test_regular_z2(Z2, X_z2):
    e, g = 1 << Z2.ids[0], 1 << non_identity(Z2)
    assert X_z2.act(g, e) == g
    assert inner_oracle(X_z2, e, e) == e
    assert inner_oracle(X_z2, e, g) == g
    assert inner_oracle(X_z2, X_z2.one, X_z2.one) == e | g


def test_parseval_on_the_tautological_set(X_taut):
    secs = hilbert_sections(X_taut).sections
    for x in X_taut.elements:
        joined = 0
        for s in secs:
            joined |= X_taut.act(inner_fast(X_taut, x, s), s)
        assert joined == x


# --- sections -----------------------------------------------------------------


def test_tautological_sections(X_taut):
    secs = hilbert_sections(X_taut)
    assert secs.sections == (0, 1, 2, 3)
    assert secs.report.passed
    ps = principal_sections(X_taut)
    # {1,2} is a section but ⟨{1,2},{1,2}⟩ is all of P2, not a partial unit
    assert ps.sections == (0, 1, 2)
    assert 3 not in ps
    assert ps.covered


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_quantale_over_itself(G):
    X = module_of_action(GAction.regular(G))
    Q = X.Q
    # carrier points are the arrows, so subsets of the carrier are quantale elements
    assert set(X.sections) == {s for s in Q.elements if Q.leq(Q.mul(Q.star(s), s), Q.e)}
    assert set(principal_sections(X).sections) == set(partial_units(Q))


def test_z2_on_a_point_is_not_principally_covered(Z2):
    X = module_of_action(z2_on_a_point(Z2))
    assert X.sections == (0, 1)
    assert principal_conditions(X, 1) == (False, False, False, False)
    ps = principal_sections(X)
    assert ps.sections == (0,) and not ps.covered


# --- invariants and the right structure ----------------------------------------


def test_invariant_part_examples(T, Z2, taut):
    assert invariant_part(module_of_action(taut)).elements == (0, 3)
    trivial = GAction.trivial_on(T, [0, 0])
    assert len(invariant_part(module_of_action(trivial))) == 4
    assert invariant_part(module_of_action(GAction.regular(Z2))).elements == (0, 3)


def test_invariant_part_matches_orbit_quotient(Z2):
    reg = GAction.regular(Z2)
    L = invariant_part(module_of_action(reg))
    Qz, _ = quotient_by_closure(module_of_action(reg).X, [(1, 2)])
    assert set(L.elements) == set(Qz.elements) == orbit_unions(reg)


@given(st.sampled_from(ACTIONS))
def test_invariant_part_is_orbit_unions(a):
    assert set(invariant_part(module_of_action(a)).elements) == orbit_unions(a)


def test_right_structure_examples(Z2, X_taut, X_z2):
    r = right_structure(X_taut)
    assert r.tspp(0b01) == 0b11
    assert r.rinner(0b01, 0b10) == 0
    assert r.is_sheaf
    e, g = 1 << Z2.ids[0], 1 << non_identity(Z2)
    rz = right_structure(X_z2)
    assert rz.rinner(e, g) == 0
    assert rz.rinner(e, e) == e | g


@given(st.sampled_from(ACTIONS))
def test_adjoint_identity(a):
    X = module_of_action(a)
    right = right_structure(X)
    assert adjoint_identity(X, right).passed
    assert adjoint_identity(X, right, exhaustive=False).passed


# --- freeness and transitivity -------------------------------------------------


def test_freeness_examples(T, Z2, X_taut):
    assert check_freeness(X_taut) == (True, None)
    free, _ = check_freeness(module_of_action(z2_on_a_point(Z2)))
    assert not free
    assert check_freeness(module_of_action(GAction.trivial_on(T, [0, 0])))[0]


def test_transitivity_splitting_examples(Z2, X_taut):
    assert check_transitivity_splitting(X_taut)
    assert check_transitivity_splitting(module_of_action(GAction.regular(Z2)))
    assert check_transitivity_splitting(module_of_action(z2_on_a_point(Z2)))


@given(st.sampled_from(ACTIONS))
def test_freeness_matches_set_level_freeness(a):
    G = a.groupoid
    set_free = all(
        a.act(g, x) != x for g in range(G.n_arrows) if g not in G.ids
        for x in range(len(a.carrier)) if a.anchor[x] == G.dom[g]
    )
    X = module_of_action(a)
    free, _ = check_freeness(X)
    assert free == set_free == principal_sections(X).covered
    assert check_transitivity_splitting(X)


# --- the general laws ----------------------------------------------------------


@given(st.sampled_from(ACTIONS), st.data())
def test_inner_product_paths_agree(a, data):
    X = module_of_action(a)
    x = data.draw(st.sampled_from(X.elements))
    y = data.draw(st.sampled_from(X.elements))
    fast = inner_fast(X, x, y)
    assert fast == inner_oracle(X, x, y) == X.closed_inner(x, y)
    assert mask_to_set(fast) == point_inner(a, mask_to_set(x), mask_to_set(y))


@given(st.sampled_from(ACTIONS))
def test_hilbert_laws_hold(a):
    X = module_of_action(a)
    assert hilbert_laws(X).passed
    assert alpha_star_check(X).passed
    assert principal_pair_laws(X).passed


def test_hilbert_laws_hold_on_the_examples(X_taut, X_z2):
    for X in (X_taut, X_z2):
        rep = hilbert_laws(X)
        assert [c.name for c in rep.failures()] == []
        assert rep["Parseval"].passed


def test_point_action_over_disjoint_union(T):
    G = FinGroupoid.disjoint_union(T, T)
    X = module_of_action(GAction.tautological(G))
    assert X.inner(0b01, 0b10) == 0
    assert principal_sections(X).covered
