import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqframes.errors import NotJoinPreserving
from iqframes.suplat import (
    FinSupLattice,
    MonotoneMap,
    SupHom,
    left_adjoint,
    quotient_by_closure,
    right_adjoint,
    tensor,
)
from oracles import closed_subsets_of_product


def downset_lattice(n, pairs):
    """Downsets of the poset on ``range(n)`` generated by ``pairs`` (a < b)."""
    below = [1 << i for i in range(n)]
    for a, b in pairs:
        below[b] |= 1 << a
    for _ in range(n):
        for i in range(n):
            for j in range(n):
                if below[i] >> j & 1:
                    below[i] |= below[j]
    return FinSupLattice.downsets(n, below)


posets = st.integers(1, 3).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1])),
    )
)


def sup_hom_from_atoms(X, Y, images):
    """The join-preserving map of a powerset sending generator ``i`` to ``images[i]``."""

    def f(x):
        return Y.join_all(images[i] for i in range(X.size) if x >> i & 1)

    return SupHom(X, Y, f)


# --- lattices -----------------------------------------------------------------


def test_powerset_and_chain_sizes():
    assert len(FinSupLattice.powerset(3)) == 8
    assert FinSupLattice.chain(3).elements == (0, 1, 3)
    assert len(FinSupLattice.chain(5)) == 5


@given(posets)
def test_closure_system_invariants(p):
    L = downset_lattice(*p)
    els = set(L.elements)
    assert L.top in els and L.bottom in els
    for a in els:
        for b in els:
            assert a & b in els  # closed under meets
            assert L.join(a, b) in els
            assert L.leq(a, L.join(a, b))


@given(posets)
def test_downsets_are_distributive(p):
    assert downset_lattice(*p).is_distributive() is None


# --- adjoints -----------------------------------------------------------------


def test_right_adjoint_of_identity():
    X = FinSupLattice.chain(4)
    g = right_adjoint(SupHom.identity(X))
    assert all(g(x) == x for x in X.elements)


def test_right_adjoint_of_bottom_map_is_top():
    X, Y = FinSupLattice.powerset(2), FinSupLattice.chain(3)
    f = SupHom(X, Y, lambda x: Y.bottom)
    g = right_adjoint(f)
    assert all(g(y) == X.top for y in Y.elements)


def test_right_adjoint_of_inclusion():
    small, big = FinSupLattice.powerset([1]), FinSupLattice.powerset([1, 2])
    f = SupHom(small, big, lambda x: x)  # {1} ↪ {1,2} on powersets
    g = right_adjoint(f)
    assert {y: g(y) for y in big.elements} == {0: 0, 1: 1, 2: 0, 3: 1}
    for x in small.elements:
        for y in big.elements:
            assert big.leq(f(x), y) == small.leq(x, g(y))


def test_right_adjoint_rejects_non_join_preserving():
    X = FinSupLattice.powerset(2)
    f = MonotoneMap(X, X, lambda x: X.top if x == X.top else 0)
    with pytest.raises(NotJoinPreserving) as err:
        right_adjoint(f)
    assert err.value.witness is not None


@given(posets, posets, st.data())
def test_adjunction_laws(p1, p2, data):
    X, Y = FinSupLattice.powerset(p1[0]), downset_lattice(*p2)
    images = [data.draw(st.sampled_from(Y.elements)) for _ in range(X.size)]
    f = sup_hom_from_atoms(X, Y, images)
    g = right_adjoint(f)
    for x in X.elements:
        assert X.leq(x, g(f(x)))
        for y in Y.elements:
            assert Y.leq(f(x), y) == X.leq(x, g(y))
    for y in Y.elements:
        assert Y.leq(f(g(y)), y)
    assert left_adjoint(g) == f


# --- tensor -------------------------------------------------------------------


def test_tensor_of_two_element_lattices():
    two = FinSupLattice.powerset(1)
    assert len(tensor(two, two)) == 2


def test_tensor_of_powersets_is_powerset_of_product():
    T = tensor(FinSupLattice.powerset(["a", "b"]), FinSupLattice.powerset(["c"]))
    assert len(T) == 4  # P({a,b} × {c})


def test_balanced_tensor_over_identity_anchors():
    X = FinSupLattice.powerset(["a", "b"])
    rel = [((b & x, y), (x, b & y)) for b in X.elements for x in X.elements for y in X.elements]
    T = tensor(X, X, rel)
    assert len(T) == 4
    # only the diagonal pairs survive
    assert T.pure(1, 2) == T.bottom
    assert T.pure(1, 1) != T.bottom


def test_tensor_of_chains():
    C = FinSupLattice.chain(3)
    assert len(tensor(C, C)) == 6


@given(posets, posets)
def test_tensor_size_matches_brute_force(p1, p2):
    X, Y = downset_lattice(*p1), downset_lattice(*p2)
    free = (len(X) - 1) * (len(Y) - 1)
    if free > 14:
        return
    expect = closed_subsets_of_product(
        X.elements, Y.elements, X.join, Y.join, X.leq, Y.leq, X.bottom, Y.bottom
    )
    assert len(tensor(X, Y)) == expect


@given(posets, posets)
def test_pure_tensors_are_bilinear(p1, p2):
    X, Y = downset_lattice(*p1), downset_lattice(*p2)
    T = tensor(X, Y)
    for x in X.elements:
        assert T.pure(x, Y.bottom) == T.bottom
        for y in Y.elements:
            for x2 in X.elements:
                assert T.pure(X.join(x, x2), y) == T.join(T.pure(x, y), T.pure(x2, y))
            for y2 in Y.elements:
                assert T.pure(x, Y.join(y, y2)) == T.join(T.pure(x, y), T.pure(x, y2))


# --- quotients ----------------------------------------------------------------


def test_quotient_by_nothing_is_identity():
    X = FinSupLattice.powerset(2)
    Q, m = quotient_by_closure(X, [])
    assert len(Q) == len(X)
    assert all(m(x) == x for x in X.elements)


def test_identifying_two_atoms_collapses_to_two_elements():
    X = FinSupLattice.powerset([1, 2])
    Q, m = quotient_by_closure(X, [(0b01, 0b10)])
    # a closed set containing {1} must contain {2}, so only ∅ and {1,2} are fixed
    assert Q.elements == (0, 3)
    assert [m(x) for x in X.elements] == [0, 3, 3, 3]


def test_orbit_lattice_of_regular_z2():
    X = FinSupLattice.powerset(["e", "g"])
    Q, _ = quotient_by_closure(X, [(1, 2)])
    assert len(Q) == 2


@given(st.integers(1, 4), st.data())
def test_quotient_map_properties(n, data):
    X = FinSupLattice.powerset(n)
    pairs = data.draw(st.lists(st.tuples(st.sampled_from(X.elements), st.sampled_from(X.elements)), max_size=3))
    Q, m = quotient_by_closure(X, pairs)
    assert m.join_failure() is None
    assert {m(x) for x in X.elements} == set(Q.elements)
    for a, b in pairs:
        assert m(a) == m(b)
    # any closed set coequalizing the pairs is already fixed
    for z in X.elements:
        if all((a & ~z == 0) == (b & ~z == 0) for a, b in pairs):
            assert z in Q
