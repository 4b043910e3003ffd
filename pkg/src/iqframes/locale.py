"""Finite locales as downset frames of finite posets, and B-locales over them.

A locale map is given by a monotone map of points; its inverse image is
preimage and its direct image is the down-closure of the image.  A
B-locale is a locale ``X`` with a map ``p: X → B``, so that ``b·x = p*(b) ∧ x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import (
    NotCompatiblePreserving,
    NotEquivariant,
    NotOpen,
    NotSheafHom,
    PreconditionFailed,
)
from .suplat import FinSupLattice, bits


class FinLocale:
    """The frame of downsets of a finite poset of points.

    ``order`` lists pairs ``(a, b)`` meaning ``a ≤ b``; it is closed
    reflexively and transitively.  An empty order gives a discrete locale
    whose frame is a powerset.
    """

    def __init__(
        self, points: Sequence[Hashable] | int, order: Iterable[tuple[int, int]] = ()
    ) -> None:
        if isinstance(points, int):
            points = list(range(points))
        self.points = tuple(points)
        n = len(self.points)
        below = [1 << i for i in range(n)]
        for a, b in order:
            below[b] |= 1 << a
        changed = True
        while changed:
            changed = False
            for i in range(n):
                new = below[i]
                for j in bits(below[i]):
                    new |= below[j]
                if new != below[i]:
                    below[i] = new
                    changed = True
        for i in range(n):
            for j in bits(below[i]):
                if j != i and below[j] >> i & 1:
                    raise ValueError(f"order has a cycle through points {i} and {j}")
        self.below = tuple(below)
        self.discrete = all(b == 1 << i for i, b in enumerate(below))
        if self.discrete:
            self.frame = FinSupLattice(n, None, self.points)
        else:
            self.frame = FinSupLattice.downsets(n, self.below)
            self.frame.labels = self.points

    @classmethod
    def discrete_on(cls, points: Sequence[Hashable] | int) -> "FinLocale":
        return cls(points)

    @classmethod
    def chain(cls, n: int) -> "FinLocale":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    def __len__(self) -> int:
        return len(self.points)

    @property
    def top(self) -> int:
        return self.frame.top

    def leq_points(self, a: int, b: int) -> bool:
        return bool(self.below[b] >> a & 1)

    def downclose(self, mask: int) -> int:
        return self.frame.close(mask)

    def element(self, labels: Iterable[Hashable]) -> int:
        idx = {p: i for i, p in enumerate(self.points)}
        return self.downclose(sum(1 << idx[p] for p in labels))

    def check_frame_law(self) -> tuple[int, int, int] | None:
        """Witness against finite distributivity (never fires for downset frames)."""
        return self.frame.is_distributive()

    def __repr__(self) -> str:
        return f"FinLocale({len(self.points)} points)"


class LocaleMap:
    """A map of finite locales given by a monotone map of points."""

    def __init__(self, source: FinLocale, target: FinLocale, points: Sequence[int]) -> None:
        self.source = source
        self.target = target
        self.points = tuple(points)
        if len(self.points) != len(source):
            raise ValueError("point map must be total")
        for i in range(len(source)):
            for j in bits(source.below[i]):
                if not target.leq_points(self.points[j], self.points[i]):
                    raise ValueError(f"point map is not monotone at {j} ≤ {i}")

    def inverse_image(self, v: int) -> int:
        return sum(1 << i for i, t in enumerate(self.points) if v >> t & 1)

    def direct_image(self, u: int) -> int:
        img = 0
        for i in bits(u):
            img |= 1 << self.points[i]
        return self.target.downclose(img)

    def frobenius_failure(self) -> tuple[int, int] | None:
        """A pair ``(b, x)`` with ``f_!(f*(b) ∧ x) ≠ b ∧ f_!(x)``, or None."""
        for b in self.target.frame.elements:
            fb = self.inverse_image(b)
            for x in self.source.frame.elements:
                if self.direct_image(fb & x) != b & self.direct_image(x):
                    return b, x
        return None

    def is_open(self) -> bool:
        return self.frobenius_failure() is None

    def is_surjective(self) -> bool:
        """Surjective as a locale map, i.e. the inverse image is injective."""
        els = self.target.frame.elements
        return len({self.inverse_image(v) for v in els}) == len(els)

    def compose(self, other: "LocaleMap") -> "LocaleMap":
        """``self ∘ other``."""
        return LocaleMap(other.source, self.target, [self.points[i] for i in other.points])


class BLocale:
    """A locale ``X`` over a base ``B`` via an anchor ``p: X → B``."""

    def __init__(self, base: FinLocale, carrier: FinLocale, anchor: Sequence[int]) -> None:
        self.base = base
        self.carrier = carrier
        self.anchor = LocaleMap(carrier, base, anchor)

    @classmethod
    def over_itself(cls, base: FinLocale) -> "BLocale":
        return cls(base, base, range(len(base)))

    def act(self, b: int, x: int) -> int:
        return self.anchor.inverse_image(b) & x

    def one(self) -> int:
        return self.carrier.top

    @cached_property
    def _frobenius(self) -> tuple[int, int] | None:
        return self.anchor.frobenius_failure()

    @property
    def is_open(self) -> bool:
        return self._frobenius is None

    def module_failures(self) -> list[str]:
        """Check the module laws and the anchor condition exhaustively."""
        out = []
        B, X = self.base.frame, self.carrier.frame
        for b in B.elements:
            for x in X.elements:
                if self.act(b, x) != self.act(b, X.top) & x:
                    out.append(f"anchor condition fails at b={b}, x={x}")
                for c in B.elements:
                    if self.act(b & c, x) != self.act(b, self.act(c, x)):
                        out.append(f"associativity fails at {b},{c},{x}")
        if any(self.act(B.top, x) != x for x in X.elements):
            out.append("unit law fails")
        return out


def support_of(X: BLocale) -> Callable[[int], int]:
    """The support ``spp_X = p_!``; raises NotOpen with a Frobenius witness."""
    w = X._frobenius
    if w is not None:
        b, x = w
        raise NotOpen(f"anchor is not open: Frobenius fails at b={b}, x={x}", witness=w)
    return X.anchor.direct_image


@dataclass(frozen=True)
class LocalSectionSet:
    owner: BLocale
    sections: tuple[int, ...]
    is_sheaf: bool

    def __contains__(self, s: object) -> bool:
        return s in self.sections

    def __iter__(self):
        return iter(self.sections)

    def __len__(self) -> int:
        return len(self.sections)


def is_local_section(X: BLocale, s: int) -> bool:
    spp = support_of(X)
    return all(
        X.act(spp(x), s) == x for x in X.carrier.frame.elements if x & ~s == 0
    )


def local_sections(X: BLocale) -> LocalSectionSet:
    """All ``s`` with ``spp(x)s = x`` for every ``x ≤ s``."""
    spp = support_of(X)
    els = X.carrier.frame.elements
    secs = []
    for s in els:
        if all(X.act(spp(x), s) == x for x in els if x & ~s == 0):
            secs.append(s)
    joined = X.carrier.frame.join_all(secs)
    return LocalSectionSet(X, tuple(secs), joined == X.carrier.top)


def compatible(X: BLocale, s: int, t: int) -> bool:
    spp = support_of(X)
    return X.act(spp(s), t) == X.act(spp(t), s)


class FiberProduct(BLocale):
    """``X ⊗_B Y``: downsets of the pullback poset with the product order."""

    def __init__(self, X: BLocale, Y: BLocale) -> None:
        if X.base is not Y.base and X.base.below != Y.base.below:
            raise ValueError("B-locales over different bases")
        p, q = X.anchor.points, Y.anchor.points
        pairs = [
            (i, j) for i in range(len(X.carrier)) for j in range(len(Y.carrier)) if p[i] == q[j]
        ]
        index = {pr: k for k, pr in enumerate(pairs)}
        order = [
            (index[(a, b)], index[(c, d)])
            for (a, b) in pairs
            for (c, d) in pairs
            if X.carrier.leq_points(a, c) and Y.carrier.leq_points(b, d)
        ]
        carrier = FinLocale(pairs, order)
        super().__init__(X.base, carrier, [p[i] for i, _ in pairs])
        self.left, self.right = X, Y
        self.pairs = tuple(pairs)
        self.pi1 = LocaleMap(carrier, X.carrier, [i for i, _ in pairs])
        self.pi2 = LocaleMap(carrier, Y.carrier, [j for _, j in pairs])

    def pure(self, x: int, y: int) -> int:
        """``x ⊗ y = (x × y) ∩ P``."""
        return sum(1 << k for k, (i, j) in enumerate(self.pairs) if x >> i & 1 and y >> j & 1)


def tensor_over_base(X: BLocale, Y: BLocale) -> FiberProduct:
    """The pullback ``X ⊗_B Y`` of two open B-locales with its projections."""
    for Z in (X, Y):
        if not Z.is_open:
            raise NotOpen("tensor_over_base needs open B-locales", witness=Z._frobenius)
    return FiberProduct(X, Y)


def surjection_pullback_check(X: BLocale, Y: BLocale) -> bool:
    """Pull back an open surjection ``Y → B`` along an open ``X → B``.

    Verifies that ``π1: X⊗_B Y → X`` is an open surjection, using
    ``(π1)_!(x ⊗ 1_Y) = spp_Y(1_Y)x = x``.
    """
    if not Y.is_open:
        raise PreconditionFailed("p is not open", witness=Y._frobenius)
    if not X.is_open:
        raise PreconditionFailed("q is not open", witness=X._frobenius)
    if support_of(Y)(Y.carrier.top) != Y.base.top:
        missing = Y.base.top & ~support_of(Y)(Y.carrier.top)
        raise PreconditionFailed("p is not surjective", witness=missing)
    T = FiberProduct(X, Y)
    one = Y.carrier.top
    for x in X.carrier.frame.elements:
        if T.pi1.direct_image(T.pure(x, one)) != x:
            return False
    images = {T.pi1.inverse_image(x) for x in X.carrier.frame.elements}
    return len(images) == len(X.carrier.frame.elements) and T.pi1.is_open()


class SheafHom:
    """A map ``f: Z → X`` of B-locales, i.e. commuting with the anchors."""

    def __init__(self, source: BLocale, target: BLocale, points: Sequence[int]) -> None:
        self.source = source
        self.target = target
        self.map = LocaleMap(source.carrier, target.carrier, points)
        for z, x in enumerate(self.map.points):
            if target.anchor.points[x] != source.anchor.points[z]:
                raise NotSheafHom("map does not commute with the anchors", witness=z)

    def direct_image(self, s: int) -> int:
        return self.map.direct_image(s)


def pairing_direct_image(f: SheafHom, g: SheafHom) -> tuple[FiberProduct, Callable[[int], int]]:
    """The pairing ``⟨f,g⟩: Z → X⊗_B Y`` and its direct image.

    Checks ``⟨f,g⟩_!(s) = f_!(s) ⊗ g_!(s)`` on every local section of ``Z``.
    """
    if f.source is not g.source:
        raise NotSheafHom("pairing needs a common source")
    T = tensor_over_base(f.target, g.target)
    index = {pr: k for k, pr in enumerate(T.pairs)}
    pts = [index[(a, b)] for a, b in zip(f.map.points, g.map.points)]
    pairing = LocaleMap(f.source.carrier, T.carrier, pts)
    for s in local_sections(f.source).sections:
        lhs = pairing.direct_image(s)
        rhs = T.pure(f.direct_image(s), g.direct_image(s))
        if lhs != rhs:
            raise NotSheafHom("pairing direct image disagrees on a section", witness=s)
    return T, pairing.direct_image


@dataclass
class BModule:
    """A left module over a base locale, given by its action table."""

    base: FinLocale
    lattice: FinSupLattice
    act: Callable[[int, int], int]

    @classmethod
    def of(cls, X: BLocale) -> "BModule":
        return cls(X.base, X.carrier.frame, X.act)


def extend_from_sections(
    X: BLocale, M: BModule, h: Mapping[int, int] | Callable[[int], int]
) -> Callable[[int], int]:
    """Extend ``h: Σ_X → M`` to the unique module map ``h♯(x) = ⋁{h(s) : s ≤ x}``."""
    sigma = local_sections(X)
    hv = h if callable(h) else h.__getitem__
    table = {s: hv(s) for s in sigma.sections}
    secset = set(sigma.sections)
    for b in X.base.frame.elements:
        for s in sigma.sections:
            if table[X.act(b, s)] != M.act(b, table[s]):
                raise NotEquivariant("h(bs) ≠ b·h(s)", witness=(b, s))
    bottom = X.carrier.frame.bottom
    if table.get(bottom, M.lattice.bottom) != M.lattice.bottom:
        raise NotCompatiblePreserving("h does not send ⊥ to ⊥", witness=())
    for s, t in combinations(sigma.sections, 2):
        j = X.carrier.frame.join(s, t)
        if j in secset and table[j] != M.lattice.join(table[s], table[t]):
            raise NotCompatiblePreserving("h fails on a compatible join", witness=(s, t))

    def sharp(x: int) -> int:
        return M.lattice.join_all(v for s, v in table.items() if s & ~x == 0)

    # a second extension: restrict x to each section and map the pieces
    els = X.carrier.frame.elements
    for x in els:
        other = M.lattice.join_all(table[x & s] for s in sigma.sections)
        if other != sharp(x):
            raise NotCompatiblePreserving("extensions disagree", witness=x)
    return sharp
