import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqframes.catalog import catalog_blocales, catalog_posets
from iqframes.errors import NotEquivariant, NotOpen, NotSheafHom, PreconditionFailed
from iqframes.locale import (
    BLocale,
    BModule,
    FinLocale,
    SheafHom,
    compatible,
    extend_from_sections,
    local_sections,
    pairing_direct_image,
    support_of,
    surjection_pullback_check,
    tensor_over_base,
)

B12 = FinLocale([1, 2])


def discrete(points, base, anchor_labels):
    X = FinLocale(points)
    return BLocale(base, X, [base.points.index(a) for a in anchor_labels])


# --- posets and frames ------------------------------------------------------


def test_poset_catalog_has_every_shape_up_to_three_points():
    sizes = [len(L) for L in catalog_posets(3)]
    assert sizes.count(1) == 1 and sizes.count(2) == 2 and sizes.count(3) == 5


def test_order_cycles_are_rejected():
    with pytest.raises(ValueError):
        FinLocale(2, [(0, 1), (1, 0)])


@given(st.sampled_from(catalog_posets(3)))
def test_every_catalog_frame_satisfies_the_frame_law(L):
    assert L.check_frame_law() is None


# --- supports ---------------------------------------------------------------


def test_support_of_base_over_itself_is_identity():
    X = BLocale.over_itself(B12)
    spp = support_of(X)
    assert all(spp(b) == b for b in B12.frame.elements)


def test_support_collapsing_anchor():
    X = discrete([1, 2, 3], B12, [1, 2, 2])
    spp = support_of(X)
    assert spp(X.carrier.element([3])) == B12.element([2])


def test_non_open_anchor_over_sierpinski():
    S = FinLocale.chain(2)
    X = BLocale(S, FinLocale(1), [1])  # the point sits over the open top point
    with pytest.raises(NotOpen) as err:
        support_of(X)
    b, x = err.value.witness
    assert X.anchor.direct_image(X.anchor.inverse_image(b) & x) != b & X.anchor.direct_image(x)


@given(st.sampled_from([X for B in catalog_posets(2) for X in catalog_blocales(B, 3)]))
def test_frobenius_on_open_maps(X):
    f = X.anchor
    if not f.is_open():
        return
    for b in X.base.frame.elements:
        for x in X.carrier.frame.elements:
            assert f.direct_image(f.inverse_image(b) & x) == b & f.direct_image(x)
    spp = support_of(X)
    for x in X.carrier.frame.elements:
        assert X.act(spp(x), x) == x


# --- local sections ---------------------------------------------------------


def test_sections_of_base_are_everything():
    secs = local_sections(BLocale.over_itself(B12))
    assert set(secs) == set(B12.frame.elements) and secs.is_sheaf


def test_discrete_sections_are_injective_subsets():
    X = discrete(["a", "b", "c"], B12, [1, 1, 2])
    secs = local_sections(X)
    expect = {
        m for m in range(8) if not (m & 0b011 == 0b011)  # a and b share a fiber
    }
    assert set(secs) == expect and secs.is_sheaf


def test_compatibility_of_sections():
    X = discrete(["a", "b", "c"], B12, [1, 1, 2])
    a, b, c = 1, 2, 4
    assert compatible(X, a, c)
    assert not compatible(X, a, b)


# --- fiber products ---------------------------------------------------------


def test_tensor_with_base_is_identity():
    X = discrete(["a", "b", "c"], B12, [1, 2, 2])
    T = tensor_over_base(X, BLocale.over_itself(B12))
    assert len(T.carrier) == len(X.carrier)
    for x in X.carrier.frame.elements:
        assert T.pi1.direct_image(T.pure(x, B12.top)) == x


def test_tensor_of_identity_anchors_is_diagonal():
    X = BLocale.over_itself(B12)
    T = tensor_over_base(X, X)
    assert len(T.carrier.frame) == 4
    one = B12.element([1])
    assert T.pi1.direct_image(T.pure(one, one)) == one


def test_tensor_over_disjoint_fibers():
    X = discrete(["a1", "a2"], B12, [1, 2])
    Y = discrete(["b"], B12, [1])
    T = tensor_over_base(X, Y)
    assert T.pairs == ((0, 0),)
    a2, b = X.carrier.element(["a2"]), Y.carrier.element(["b"])
    assert T.pi2.direct_image(T.pure(a2, b)) == 0
    assert support_of(X)(a2) & support_of(Y)(b) == 0


def test_tensor_needs_open_arguments():
    S = FinLocale.chain(2)
    bad = BLocale(S, FinLocale(1), [1])
    with pytest.raises(NotOpen):
        tensor_over_base(bad, BLocale.over_itself(S))


# --- surjection stability ---------------------------------------------------


def test_identity_pulls_back_to_surjection():
    assert surjection_pullback_check(BLocale.over_itself(B12), BLocale.over_itself(B12))


def test_discrete_surjection_is_stable():
    p = discrete([1, 2, 3], B12, [1, 2, 2])
    assert surjection_pullback_check(BLocale.over_itself(B12), p)


def test_non_surjective_anchor_is_rejected():
    p = discrete([1], B12, [1])
    with pytest.raises(PreconditionFailed) as err:
        surjection_pullback_check(BLocale.over_itself(B12), p)
    assert err.value.witness == B12.element([2])


# --- pairings ---------------------------------------------------------------


def test_diagonal_pairing():
    X = discrete(["a", "b", "c"], B12, [1, 1, 2])
    idm = SheafHom(X, X, range(3))
    T, d = pairing_direct_image(idm, idm)
    for s in local_sections(X):
        assert d(s) == T.pure(s, s)


def test_pairing_of_inclusions():
    Z = discrete([1], B12, [1])
    X = BLocale.over_itself(B12)
    f = SheafHom(Z, X, [0])
    T, d = pairing_direct_image(f, f)
    one = B12.element([1])
    assert d(1) == T.pure(one, one)


def test_pairing_rejects_maps_off_the_base():
    Z = discrete([1], B12, [1])
    with pytest.raises(NotSheafHom):
        SheafHom(Z, BLocale.over_itself(B12), [1])


# --- extension from sections ------------------------------------------------


def test_extending_the_inclusion_gives_identity():
    X = discrete(["a", "b", "c"], B12, [1, 1, 2])
    h = extend_from_sections(X, BModule.of(X), lambda s: s)
    assert all(h(x) == x for x in X.carrier.frame.elements)


def test_extending_the_support_gives_the_support():
    X = discrete(["a", "b", "c"], B12, [1, 1, 2])
    spp = support_of(X)
    B = BLocale.over_itself(B12)
    h = extend_from_sections(X, BModule.of(B), spp)
    assert all(h(x) == spp(x) for x in X.carrier.frame.elements)


def test_extension_rejects_non_equivariant_maps():
    X = discrete(["a", "b"], B12, [1, 2])
    with pytest.raises(NotEquivariant):
        extend_from_sections(X, BModule.of(X), lambda s: X.carrier.top if s else 0)
