import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqframes.bimodule import QRBisheaf, bimodule_iso, tensor_compose
from iqframes.catalog import catalog_functors, catalog_groupoids, groupoid_by_name
from iqframes.errors import Inconclusive, NotPrincipal, QuantaleMismatch
from iqframes.groupoid import FinGroupoid, GroupoidFunctor, bundle_of_functor, is_essential_equivalence
from iqframes.morita import (
    HSMap,
    decide_morita,
    hs_compose,
    hs_identity,
    hs_of_functor,
    is_hs_invertible,
    minimal_witness_size,
    morita_invariant,
    morita_oracle,
    orbit_types,
)
from oracles import naive_morita

GROUPOIDS = catalog_groupoids(3)
TINY = [G for G in GROUPOIDS if G.n_arrows <= 4]
FUNCTORS = [phi for phi in catalog_functors(4) if len(bundle_of_functor(phi)) <= 6]
COMPOSABLE = [
    (psi, phi) for phi in FUNCTORS for psi in FUNCTORS
    if psi.source is phi.target and len(bundle_of_functor(psi.compose(phi))) <= 6
]


def point_functor(G):
    return GroupoidFunctor(FinGroupoid.trivial(), G, [0], [G.ids[0]])


# --- HS maps ------------------------------------------------------------------


def test_identity_sizes(T, Z2, P2):
    assert [hs_identity(G).rep.n for G in (T, Z2, P2)] == [1, 2, 4]


def test_hs_map_needs_a_principal_representative(Z2):
    big = next(t for t in orbit_types(Z2, Z2) if len(t) == 4)
    with pytest.raises(NotPrincipal):
        HSMap(QRBisheaf(big))


def test_identity_is_neutral(T, P2):
    f = hs_of_functor(point_functor(P2))
    assert f.source.name == "T" and f.target is P2
    assert hs_compose(hs_identity(P2), f) == f
    assert hs_compose(f, hs_identity(T)) == f


def test_composition_checks_the_groupoids(Z2, P2):
    f = hs_of_functor(point_functor(P2))
    with pytest.raises(QuantaleMismatch):
        hs_compose(f, f)
    with pytest.raises(QuantaleMismatch):
        hs_compose(hs_identity(Z2), f)


@given(st.sampled_from(FUNCTORS))
def test_identity_laws(phi):
    f = hs_of_functor(phi)
    assert hs_compose(hs_identity(f.target), f) == f
    assert hs_compose(f, hs_identity(f.source)) == f


@given(st.sampled_from(COMPOSABLE))
def test_functor_composition_is_tensor_composition(pair):
    psi, phi = pair
    assert hs_compose(hs_of_functor(psi), hs_of_functor(phi)) == hs_of_functor(psi.compose(phi))


@given(st.sampled_from(COMPOSABLE), st.data())
def test_associativity(pair, data):
    psi, phi = pair
    options = [chi for chi in FUNCTORS if chi.target is phi.source and len(bundle_of_functor(chi)) <= 4]
    chi = data.draw(st.sampled_from(options)) if options else None
    if chi is None:
        return
    f, g, h = hs_of_functor(psi), hs_of_functor(phi), hs_of_functor(chi)
    left = hs_compose(hs_compose(f, g), h)
    right = hs_compose(f, hs_compose(g, h))
    assert left == right
    assert bimodule_iso(left.rep, right.rep)


# --- invertibility ------------------------------------------------------------


def test_invertibility_examples(T, Z2, P2):
    inv = is_hs_invertible(hs_of_functor(point_functor(P2)))
    assert inv.invertible and inv.report.passed
    assert hs_compose(inv.inverse, hs_of_functor(point_functor(P2))) == hs_identity(T)
    not_inv = is_hs_invertible(hs_of_functor(point_functor(Z2)))
    assert not not_inv.invertible and not_inv.inverse is None
    assert [c.name for c in not_inv.report.failures()] == ["biprincipal"]


@given(st.sampled_from(FUNCTORS))
def test_invertible_iff_essential_equivalence(phi):
    inv = is_hs_invertible(hs_of_functor(phi))
    assert inv.invertible == is_essential_equivalence(phi)[0]
    if inv.invertible:
        assert inv.report.passed
        f = hs_of_functor(phi)
        assert hs_compose(f, inv.inverse) == hs_identity(phi.target)
        assert hs_compose(inv.inverse, f) == hs_identity(phi.source)


def test_tensor_of_an_invertible_map_with_its_inverse(P2):
    f = hs_of_functor(point_functor(P2))
    inv = is_hs_invertible(f).inverse
    assert bimodule_iso(tensor_compose(f.rep, inv.rep), hs_identity(P2).rep)


# --- the oracle ---------------------------------------------------------------


def test_oracle_examples(T, Z2, P2):
    assert morita_oracle(P2, T)
    assert not morita_oracle(Z2, T)
    assert morita_oracle(groupoid_by_name("P2(Z2)"), Z2)
    assert not morita_oracle(groupoid_by_name("V4"), groupoid_by_name("Z4"))
    assert morita_invariant(P2) == morita_invariant(T)


def test_minimal_witness_sizes(T, Z2, P2):
    assert minimal_witness_size(P2, T) == 2
    assert minimal_witness_size(FinGroupoid.pair(3), P2) == 6
    assert minimal_witness_size(Z2, Z2) == 2
    assert minimal_witness_size(Z2, T) is None


@given(st.sampled_from(GROUPOIDS), st.sampled_from(GROUPOIDS))
def test_oracle_matches_component_matching(G, H):
    assert morita_oracle(G, H) == naive_morita(G, H)


# --- the decision procedure ---------------------------------------------------


def test_pair_is_equivalent_to_a_point(T, P2):
    v = decide_morita(P2, T, 4)
    assert v.equivalent and v.oracle_agrees
    assert v.witness.n == 2
    assert v.report.passed


def test_z2_is_not_equivalent_to_a_point(T, Z2):
    v = decide_morita(Z2, T, 6)
    assert not v.equivalent and v.oracle_agrees
    assert v.witness == {"invariant_1": ["Z2"], "invariant_2": ["Z1"]}


@pytest.mark.parametrize("G", TINY, ids=lambda G: G.name)
def test_every_groupoid_is_equivalent_to_itself(G):
    v = decide_morita(G, G)
    assert v.equivalent and v.report.passed


def test_small_bound_is_inconclusive(T):
    with pytest.raises(Inconclusive) as err:
        decide_morita(FinGroupoid.pair(3), T, 2)
    assert err.value.bound == 2
    assert err.value.minimal_size == 3
    assert str(err.value) == "no biprincipal witness with at most 2 points"


@given(st.sampled_from(TINY), st.sampled_from(TINY))
def test_search_agrees_with_the_oracle(G, H):
    bound = minimal_witness_size(G, H) or max(G.n_arrows, H.n_arrows)
    v = decide_morita(G, H, bound)
    assert v.equivalent == morita_oracle(G, H)
    if v.equivalent:
        assert v.witness.n == bound
        assert v.report.passed


@given(st.sampled_from(TINY), st.sampled_from(TINY))
def test_pruning_does_not_change_the_answer(G, H):
    bound = max(G.n_arrows, H.n_arrows)
    try:
        fast = decide_morita(G, H, bound).equivalent
    except Inconclusive:
        fast = None
    try:
        slow = decide_morita(G, H, bound, prune=False).equivalent
    except Inconclusive:
        slow = None
    assert fast == slow


def test_threads_agree_with_a_single_worker(T, P2):
    G = groupoid_by_name("T+P2")
    H = groupoid_by_name("T+T")
    one = decide_morita(G, H, 6)
    two = decide_morita(G, H, 6, threads=2)
    assert one.equivalent and two.equivalent
    assert one.candidates == two.candidates
    assert bimodule_iso(one.witness, two.witness)
