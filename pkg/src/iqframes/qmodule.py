"""Quantale modules and sheaves: inner products, sections, invariants.

A :class:`QSheaf` is a finite left module over a :class:`~iqframes.quantale.Quantale`
together with a support map into ``Q_0`` and a join-dense set of sections.
The inner product is computed by the partial-unit formula
``⟨x,y⟩ = ⋁_{u∈Q_I} u·spp_X(u*x ∧ y)``; :func:`inner_oracle` computes it
independently from the definitional join over translating partial units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

from .errors import InvalidAction, NotBisheaf, NotOpenRight
from .groupoid import GAction, validate_action
from .locale import BLocale, FinLocale, local_sections, support_of
from .quantale import GroupoidQuantale, Quantale, quantale_of_groupoid, shared_quantale
from .report import Report
from .suplat import FinSupLattice, bits


class QSheaf:
    """A left ``Q``-module on a finite lattice with an anchor support.

    ``basis`` must be a join-dense family of local sections; it is used by the
    oracle inner product and by the basis-law checks.
    """

    def __init__(
        self,
        quantale: Quantale,
        carrier: FinSupLattice,
        act: Callable[[int, int], int],
        spp: Callable[[int], int],
        basis: Sequence[int],
        name: str | None = None,
    ) -> None:
        self.Q = quantale
        self.X = carrier
        self._act = act
        self._spp = spp
        self.basis = tuple(basis)
        self.name = name
        self._inner: dict[tuple[int, int], int] = {}
        self._oracle: dict[tuple[int, int], int] = {}

    def act(self, a: int, x: int) -> int:
        return self._act(a, x)

    def spp(self, x: int) -> int:
        return self._spp(x)

    def meet(self, x: int, y: int) -> int:
        return self.X.meet(x, y)

    @property
    def one(self) -> int:
        return self.X.top

    @property
    def elements(self) -> tuple[int, ...]:
        return self.X.elements

    def inner(self, x: int, y: int) -> int:
        key = (x, y)
        v = self._inner.get(key)
        if v is None:
            v = self._inner[key] = inner_fast(self, x, y)
        return v

    @cached_property
    def sections(self) -> tuple[int, ...]:
        return hilbert_sections(self).sections

    def render(self, x: int) -> str:
        return self.X.render(x)

    def __repr__(self) -> str:
        return f"QSheaf({self.name or ''}, {len(self.elements)} elements)"


class ActionSheaf(QSheaf):
    """The module ``P(X)`` of a finite groupoid action.

    ``A·U = {g·x : g ∈ A, x ∈ U, dom g = p(x)}``.  Besides the generic
    formulas it keeps the closed form ``⟨U,V⟩ = {g : g·y = x, x∈U, y∈V}``.
    """

    def __init__(self, action: GAction, quantale: GroupoidQuantale | None = None) -> None:
        G = action.groupoid
        self.action = action
        self.groupoid = G
        Q = quantale if quantale is not None else shared_quantale(G)
        n = len(action.carrier)
        self.n = n
        self.anchor = action.anchor
        ids = G.ids
        self._spp_pt = [1 << ids[p] for p in self.anchor]
        self._acts: dict[tuple[int, int], int] = {}
        super().__init__(
            Q,
            FinSupLattice.powerset(action.carrier),
            self._act_sets,
            self._spp_sets,
            [1 << x for x in range(n)],
            name=G.name,
        )

    @cached_property
    def gimg(self) -> list[list[int]] | None:
        """Image of every subset under each arrow, built by doubling (``n ≤ 12``)."""
        if self.n > 12:
            return None
        out = []
        for g in range(self.groupoid.n_arrows):
            row = [0]
            for x in range(self.n):
                y = self.action.act(g, x)
                bit = 0 if y is None else 1 << y
                row = row + [r | bit for r in row]
            out.append(row)
        return out

    @cached_property
    def pair(self) -> list[list[int]]:
        """``pair[x][y]`` = arrows ``g`` with ``g·y = x``."""
        out = [[0] * self.n for _ in range(self.n)]
        for (g, y), x in self.action.table.items():
            out[x][y] |= 1 << g
        return out

    def _act_sets(self, a: int, u: int) -> int:
        key = (a, u)
        out = self._acts.get(key)
        if out is not None:
            return out
        out = 0
        gimg = self.gimg
        if gimg is not None:
            for g in bits(a):
                out |= gimg[g][u]
        else:
            act = self.action.act
            for g in bits(a):
                for x in bits(u):
                    y = act(g, x)
                    if y is not None:
                        out |= 1 << y
        self._acts[key] = out
        return out

    def _spp_sets(self, u: int) -> int:
        out = 0
        for x in bits(u):
            out |= self._spp_pt[x]
        return out

    def meet(self, x: int, y: int) -> int:
        return x & y

    def closed_inner(self, u: int, v: int) -> int:
        out = 0
        for x in bits(u):
            row = self.pair[x]
            for y in bits(v):
                out |= row[y]
        return out

    def inner(self, x: int, y: int) -> int:
        # the closed form agrees with inner_fast and inner_oracle (checked in the suites)
        key = (x, y)
        v = self._inner.get(key)
        if v is None:
            v = self._inner[key] = self.closed_inner(x, y)
        return v

    def underlying_blocale(self) -> BLocale:
        """The ``Q_0``-sheaf ``p: X → G_0`` as a locale over the discrete base."""
        G = self.groupoid
        return BLocale(
            FinLocale.discrete_on(G.objects), FinLocale.discrete_on(self.action.carrier), self.anchor
        )

    @cached_property
    def sections(self) -> tuple[int, ...]:
        # subsets on which the anchor is injective
        out = []
        for s in range(1 << self.n):
            seen = 0
            for x in bits(s):
                b = self._spp_pt[x]
                if seen & b:
                    break
                seen |= b
            else:
                out.append(s)
        return tuple(out)

    def render(self, x: int) -> str:
        return "{" + ",".join(str(self.action.carrier[i]) for i in bits(x)) + "}"


def module_of_action(a: GAction, quantale: GroupoidQuantale | None = None) -> ActionSheaf:
    """The ``O(G)``-sheaf of a groupoid action, with its anchor condition verified."""
    rep = validate_action(a)
    if not rep.passed:
        bad = rep.failures()[0]
        raise InvalidAction(bad.name, witness=bad.witness)
    if quantale is None:
        quantale = quantale_of_groupoid(a.groupoid)
    X = ActionSheaf(a, quantale)
    one = X.one
    for b in X.Q.base_elements:
        b1 = X.act(b, one)
        for x in range(1 << X.n):
            if X.act(b, x) != b1 & x:
                raise InvalidAction("anchor condition bx = b1 ∧ x fails", witness=(b, x))
    for x in X.basis:
        if X.Q.leq(x, 0):
            continue
        back = 0
        for t in X.basis:
            back |= X.act(X.inner(x, t), t)
        if back != x:
            raise InvalidAction("singletons are not a Hilbert basis", witness=x)
    return X


def frame_quantale(B: FinLocale) -> Quantale:
    """A frame as a quantale: product = meet, trivial involution, unit = top."""
    L = B.frame
    return Quantale(L, lambda a, b: a & b, lambda a: a, L.top, name="frame")


def module_of_blocale(Xl: BLocale) -> QSheaf:
    """An open ``B``-locale as a module over its base frame.

    Raises NotOpen when the anchor is not open.
    """
    spp = support_of(Xl)
    secs = [s for s in local_sections(Xl).sections if s]
    return QSheaf(frame_quantale(Xl.base), Xl.carrier.frame, Xl.act, spp, secs, name="B-locale")


# ---------------------------------------------------------------------------
# inner products


def inner_fast(X: QSheaf, x: int, y: int) -> int:
    """``⋁_{u∈Q_I} u·spp_X(u*x ∧ y)``."""
    Q = X.Q
    out = Q.bottom
    for u in Q.partial_units:
        w = X.meet(X.act(Q.star(u), x), y)
        if w:
            out = Q.join(out, Q.mul(u, X.spp(w)))
    return out


def _oracle_sections(X: QSheaf, s: int, t: int) -> int:
    Q = X.Q
    ss, st = X.spp(s), X.spp(t)
    out = Q.bottom
    for u in Q.partial_units:
        if (
            Q.leq(Q.spp(u), ss)
            and Q.leq(Q.spp(Q.star(u)), st)
            and X.X.leq(X.act(u, t), s)
        ):
            out = Q.join(out, u)
    return out


def inner_oracle(X: QSheaf, x: int, y: int) -> int:
    """The definitional inner product, extended from basis sections by linearity.

    On sections ``s, t`` it is the join of the partial units ``u`` with
    ``spp(u) ≤ spp_X(s)``, ``spp(u*) ≤ spp_X(t)`` and ``ut ≤ s``.
    """
    Q = X.Q
    out = Q.bottom
    below_y = [t for t in X.basis if X.X.leq(t, y)]
    for s in X.basis:
        if not X.X.leq(s, x):
            continue
        for t in below_y:
            key = (s, t)
            v = X._oracle.get(key)
            if v is None:
                v = X._oracle[key] = _oracle_sections(X, s, t)
            out = Q.join(out, v)
    return out


def inner_on_sections(X: QSheaf, s: int, t: int) -> int:
    """The definitional formula applied directly to two sections."""
    return _oracle_sections(X, s, t)


# ---------------------------------------------------------------------------
# sections


@dataclass
class SectionSet:
    owner: QSheaf
    sections: tuple[int, ...]
    report: Report

    def __contains__(self, s: object) -> bool:
        return s in self.sections

    def __iter__(self):
        return iter(self.sections)

    def __len__(self) -> int:
        return len(self.sections)


def local_sections_of(X: QSheaf) -> tuple[int, ...]:
    """Elements ``s`` with ``spp_X(x)s = x`` for all ``x ≤ s``."""
    els = X.elements
    return tuple(
        s for s in els if all(X.act(X.spp(x), s) == x for x in els if X.X.leq(x, s))
    )


def hilbert_sections(X: QSheaf) -> SectionSet:
    """All ``s`` with ``⟨x,s⟩s ≤ x`` for every ``x``, with cross-checks."""
    els = X.elements
    secs = tuple(
        s for s in els if all(X.X.leq(X.act(X.inner(x, s), s), x) for x in els)
    )
    rep = Report()
    loc = local_sections_of(X)
    rep.add("Hilbert sections = local sections", secs == loc, sorted(set(secs) ^ set(loc)))
    if isinstance(X, ActionSheaf):
        lsec = local_sections(X.underlying_blocale()).sections
        rep.add("agrees with the underlying Q_0-sheaf", secs == tuple(lsec),
                sorted(set(secs) ^ set(lsec)))
    w = next((s for s in secs if X.act(X.inner(s, s), s) != s), None)
    rep.add("every Hilbert section is regular", w is None, w)
    w = next(
        (x for x in els if X.X.join_all(X.act(X.inner(x, t), t) for t in secs) != x), None
    )
    rep.add("basis law x = ⋁⟨x,t⟩t", w is None, w)
    return SectionSet(X, secs, rep)


@dataclass
class PrincipalSectionSet:
    owner: QSheaf
    sections: tuple[int, ...]
    covered: bool
    report: Report = field(default_factory=Report)

    def __contains__(self, s: object) -> bool:
        return s in self.sections

    def __iter__(self):
        return iter(self.sections)


def principal_conditions(X: QSheaf, s: int) -> tuple[bool, bool, bool, bool]:
    """The four equivalent characterisations of a principal section."""
    Q = X.Q
    ss = X.inner(s, s)
    sp = X.spp(s)
    c1 = Q.leq(ss, Q.e)
    c2 = sp == ss
    fixing = [a for a in Q.elements if X.act(a, s) == s]
    c3 = all(Q.mul(a, sp) == sp for a in fixing)
    c4 = all(Q.leq(a, Q.e) for a in fixing if Q.spp(Q.star(a)) == sp)
    return c1, c2, c3, c4


def principal_sections(X: QSheaf, sections: Sequence[int] | None = None) -> PrincipalSectionSet:
    secs = X.sections if sections is None else tuple(sections)
    rep = Report()
    good = []
    disagree = None
    for s in secs:
        cs = principal_conditions(X, s)
        if len(set(cs)) != 1 and disagree is None:
            disagree = (s, cs)
        if cs[0]:
            good.append(s)
    rep.add("four principal-section conditions agree", disagree is None, disagree)
    covered = X.X.join_all(good) == X.one
    return PrincipalSectionSet(X, tuple(good), covered, rep)


# ---------------------------------------------------------------------------
# invariants and the right I(X) structure


def invariant_part(X: QSheaf) -> FinSupLattice:
    """``I(X) = {x : 1x ≤ x}`` as a closure system on the carrier."""
    one_q = X.Q.top
    n = X.X.size

    def close(mask: int) -> int:
        return X.X.close(X.act(one_q, X.X.close(mask)) | mask)

    L = FinSupLattice(n, close, X.X.labels)
    invariant = {x for x in X.elements if X.X.leq(X.act(one_q, x), x)}
    if set(L.elements) != invariant:  # pragma: no cover - consistency guard
        raise AssertionError("closure system disagrees with the invariant elements")
    return L


def orbit_unions(a: GAction) -> set[int]:
    """Unions of orbits of a discrete action, as bitmasks."""
    orbs = [sum(1 << x for x in o) for o in a.orbits]
    out = set()
    for m in range(1 << len(orbs)):
        out.add(sum(orbs[i] for i in bits(m)))
    return out


@dataclass
class RightStructure:
    """A right ``R``-module structure with support and inner product on a sheaf."""

    R: Quantale
    ract: Callable[[int, int], int]
    tspp: Callable[[int], int]
    rinner: Callable[[int, int], int]
    sections: tuple[int, ...]
    is_sheaf: bool
    report: Report = field(default_factory=Report)


def invariant_quantale(X: QSheaf) -> Quantale:
    """``I(X)`` as a quantale: product = meet, trivial involution, unit = top."""
    L = invariant_part(X)
    return Quantale(L, lambda a, b: a & b, lambda a: a, L.top, name="I(X)")


def right_structure(X: QSheaf) -> RightStructure:
    """The right ``I(X)``-locale structure ``x·y = x ∧ y``.

    Verifies the openness inequality ``1x ∧ 1x' ≤ 1(x ∧ 1x')`` (raises
    NotOpenRight) and reports whether the tsections cover.
    """
    Q = X.Q
    one = Q.top
    els = X.elements
    ones = {x: X.act(one, x) for x in els}
    for x in els:
        for x2 in els:
            if not X.X.leq(X.meet(ones[x], ones[x2]), ones[X.meet(x, ones[x2])]):
                raise NotOpenRight("1x ∧ 1x' ≰ 1(x ∧ 1x')", witness=(x, x2))
    R = invariant_quantale(X)

    def tspp(x: int) -> int:
        return ones[x]

    def rinner(x: int, y: int) -> int:
        return ones[X.meet(x, y)]

    tsecs = tuple(
        s for s in els if all(X.meet(tspp(x), s) == x for x in els if X.X.leq(x, s))
    )
    rep = Report()
    rep.add("tsections cover", X.X.join_all(tsecs) == X.one)
    bis = tuple(s for s in tsecs if s in set(X.sections))
    w = next(
        (x for x in els if X.X.join_all(X.meet(t, rinner(t, x)) for t in bis) != x), None
    )
    rep.add("bisections are a right Hilbert basis", w is None, w)
    return RightStructure(R, X.meet, tspp, rinner, tsecs, rep.passed, rep)


def bisections(X: QSheaf, right: RightStructure) -> tuple[int, ...]:
    ts = set(right.sections)
    return tuple(s for s in X.sections if s in ts)


# ---------------------------------------------------------------------------
# freeness and transitivity on discrete sheaves


def _orbit_of(a: GAction) -> list[int]:
    which = [0] * len(a.carrier)
    for k, o in enumerate(a.orbits):
        for x in o:
            which[x] = k
    return which


def check_freeness(X: ActionSheaf) -> tuple[bool, object]:
    """Principal coverage versus freeness of ``⟨act, π2⟩``.

    Checks the identity ``[act*, π2*](s⊗t) = ⟨s,t⟩⊗t`` on section pairs, that
    principal coverage makes the frame map surjective, and that principal
    coverage coincides with set-theoretic freeness.  Returns ``(free,
    witness)`` where the witness explains the first disagreement, if any.
    """
    a = X.action
    G = X.groupoid
    n = X.n
    orbit = _orbit_of(a)
    # G1 ×_{G0} X and X ×_{X/G} X as index sets
    left_pairs = [(g, y) for g in range(G.n_arrows) for y in range(n) if G.dom[g] == a.anchor[y]]
    lidx = {pr: k for k, pr in enumerate(left_pairs)}
    right_pairs = [(x, y) for x in range(n) for y in range(n) if orbit[x] == orbit[y]]
    ridx = {pr: k for k, pr in enumerate(right_pairs)}
    img = [ridx[(a.act(g, y), y)] for g, y in left_pairs]

    def inverse_image(w: int) -> int:
        return sum(1 << k for k, r in enumerate(img) if w >> r & 1)

    def rect_right(s: int, t: int) -> int:
        return sum(1 << ridx[(x, y)] for x in bits(s) for y in bits(t) if (x, y) in ridx)

    def rect_left(u: int, t: int) -> int:
        return sum(1 << lidx[(g, y)] for g in bits(u) for y in bits(t) if (g, y) in lidx)

    for s in X.sections:
        for t in X.sections:
            if inverse_image(rect_right(s, t)) != rect_left(X.inner(s, t), t):
                return False, ("[act*,π2*](s⊗t) ≠ ⟨s,t⟩⊗t", s, t)
    ps = principal_sections(X)
    injective = len(set(img)) == len(img)
    if ps.covered and not injective:
        return False, ("principally covered but the frame map is not surjective",)
    free = a.is_free() is None
    if free != ps.covered:
        return free, ("freeness and principal coverage disagree", a.is_free())
    return free, None


def check_transitivity_splitting(X: ActionSheaf) -> bool:
    """``φ♯∘⟨act,π2⟩* = id`` with ``φ♯(u⊗t) = ut⊗t``.

    The splitting is the direct image of ``(g, y) ↦ (gy, y)``; both it and
    the inverse image preserve joins, so besides the generator formula the
    composite is checked on every subset when there are at most 12 pairs and
    on singletons otherwise.
    """
    rs = right_structure(X)
    if not rs.is_sheaf:
        raise NotBisheaf("right I(X)-structure is not a sheaf", witness=rs.report.failures()[0].name)
    a = X.action
    G = X.groupoid
    n = X.n
    orbit = _orbit_of(a)
    left_pairs = [(g, y) for g in range(G.n_arrows) for y in range(n) if G.dom[g] == a.anchor[y]]
    right_pairs = [(x, y) for x in range(n) for y in range(n) if orbit[x] == orbit[y]]
    ridx = {pr: k for k, pr in enumerate(right_pairs)}
    img = [ridx[(a.act(g, y), y)] for g, y in left_pairs]

    def sharp(m: int) -> int:
        out = 0
        for k in bits(m):
            out |= 1 << img[k]
        return out

    def inverse_image(w: int) -> int:
        return sum(1 << k for k, r in enumerate(img) if w >> r & 1)

    bis = bisections(X, rs)
    for u in X.Q.partial_units:
        for t in bis:
            lhs = sharp(sum(1 << k for k, (g, y) in enumerate(left_pairs)
                            if u >> g & 1 and t >> y & 1))
            ut = X.act(u, t)
            rhs = sum(1 << ridx[(x, y)] for x in bits(ut) for y in bits(t) if (x, y) in ridx)
            if lhs != rhs:
                return False
    m = len(right_pairs)
    tests = range(1 << m) if m <= 12 else [0] + [1 << k for k in range(m)]
    return all(sharp(inverse_image(w)) == w for w in tests)


# ---------------------------------------------------------------------------
# property batteries


def hilbert_laws(X: QSheaf, secs: Sequence[int] | None = None) -> Report:
    """Parseval, non-degeneracy, the support formulas and the partial-unit laws."""
    Q = X.Q
    els = X.elements
    secs = X.sections if secs is None else tuple(secs)
    rep = Report()
    w = next(
        (
            (x, y)
            for x in els
            for y in els
            if X.inner(x, y) != Q.join_all(Q.mul(X.inner(x, s), X.inner(s, y)) for s in secs)
        ),
        None,
    )
    rep.add("Parseval", w is None, w)
    rows: dict[tuple[int, ...], int] = {}
    w = None
    for x in els:
        key = tuple(X.inner(x, y) for y in els)
        if key in rows:
            w = (rows[key], x)
            break
        rows[key] = x
    rep.add("non-degeneracy", w is None, w)
    w = next((x for x in els if X.inner(x, x) & Q.e != X.spp(x)), None)
    rep.add("⟨x,x⟩ ∧ e = spp_X(x)", w is None, w)
    w = next((x for x in els if X.inner(x, X.one) & Q.e != X.spp(x)), None)
    rep.add("⟨x,1⟩ ∧ e = spp_X(x)", w is None, w)
    w = next(
        ((x, y) for x in els for y in els if not Q.leq(Q.spp(X.inner(x, y)), X.spp(x))), None
    )
    rep.add("spp_Q⟨x,y⟩ ≤ spp_X(x)", w is None, w)
    w = next(((x, y) for x in els for y in els if X.inner(x, y) != Q.star(X.inner(y, x))), None)
    rep.add("⟨x,y⟩ = ⟨y,x⟩*", w is None, w)
    w = next(
        ((a, x, y) for a in Q.partial_units for x in els for y in els
         if X.inner(X.act(a, x), y) != Q.mul(a, X.inner(x, y))),
        None,
    )
    rep.add("⟨ax,y⟩ = a⟨x,y⟩", w is None, w)
    w = None
    for s in Q.partial_units:
        st = Q.star(s)
        for x in els:
            sx = X.act(s, x)
            for y in els:
                if X.act(s, X.meet(x, y)) != X.meet(sx, X.act(s, y)):
                    w = ("s(x∧y)", s, x, y)
                elif X.act(s, X.meet(x, X.act(st, y))) != X.meet(sx, y):
                    w = ("s(x∧s*y)", s, x, y)
                if w:
                    break
            if w:
                break
        if w:
            break
    rep.add("partial-unit action laws", w is None, w)
    return rep


def alpha_star_check(X: ActionSheaf) -> Report:
    """The two formulas for the right adjoint of the action, and the inverse image.

    ``Q ⊗_{Q_0} X`` is the powerset of ``G1 ×_{G0} X`` with ``a⊗y`` the set
    of composable pairs in ``a × y``.  Compares ``⋁{a⊗y : ay ≤ x}``,
    ``⋁_{s∈Q_I} s⊗s*x`` and ``act*(x) = {(g,y) : gy ∈ x}``.
    """
    Q = X.Q
    a_ = X.action
    G = X.groupoid
    pairs = [(g, y) for g in range(G.n_arrows) for y in range(X.n) if G.dom[g] == a_.anchor[y]]
    idx = {pr: k for k, pr in enumerate(pairs)}

    def rect(a: int, y: int) -> int:
        return sum(1 << idx[(g, z)] for g in bits(a) for z in bits(y) if (g, z) in idx)

    els = X.elements
    qs = Q.elements if len(Q.elements) * len(els) <= 1 << 14 else [1 << g for g in range(G.n_arrows)]
    # every (a, y) once: the product ay and the rectangle a⊗y
    table = [(X.act(a, y), rect(a, y)) for a in qs for y in els]
    rep = Report()
    w = None
    for x in els:
        f1 = 0
        for ay, r in table:
            if ay & ~x == 0:
                f1 |= r
        f2 = 0
        for s in Q.partial_units:
            f2 |= rect(s, X.act(Q.star(s), x))
        f3 = sum(1 << k for k, (g, y) in enumerate(pairs) if x >> a_.act(g, y) & 1)
        if not f1 == f2 == f3:
            w = x
            break
    rep.add("α_* formulas agree", w is None, w)
    return rep


def principal_pair_laws(X: QSheaf, secs: Sequence[int] | None = None) -> Report:
    """The three statements about pairs of principal sections, and the basis criterion."""
    Q = X.Q
    secs = X.sections if secs is None else tuple(secs)
    pset = set(principal_sections(X, secs).sections)
    QI = set(Q.partial_units)
    rep = Report()
    w = next(((s, t) for s in pset for t in pset if X.inner(s, t) not in QI), None)
    rep.add("principal pairs have partial-unit inner products", w is None, w)
    w = None
    for t in pset:
        for u in Q.partial_units:
            if Q.spp(Q.star(u)) != X.spp(t):
                continue
            s = X.act(u, t)
            if s not in pset or X.inner(s, t) != u or X.spp(s) != Q.spp(u):
                w = (u, t)
                break
        if w:
            break
    rep.add("translating a principal section", w is None, w)
    w = None
    for s in secs:
        for t in secs:
            u = X.inner(s, t)
            if u not in QI or X.spp(s) != Q.spp(u) or X.spp(t) != Q.spp(Q.star(u)):
                continue
            if not (s in pset and t in pset and X.act(u, t) == s and X.act(Q.star(u), s) == t):
                w = (s, t)
                break
        if w:
            break
    rep.add("matching supports force principality", w is None, w)
    principal_basis = all(s in pset for s in secs)
    pu = all(X.inner(s, t) in QI for s in secs for t in secs)
    rep.add("basis principal ⟺ pairwise partial units", principal_basis == pu,
            (principal_basis, pu))
    return rep


def adjoint_identity(
    X: QSheaf, right: RightStructure, exhaustive: bool = True
) -> Report:
    """``⟨x r*, y⟩ = ⟨x, y r⟩``, ``tspp(ax) = tspp(spp(a*)x)``, ``spp_X(xr) = spp_X(x spp(r))``.

    With ``exhaustive=False`` the identities are checked on generators only
    (partial units and sections), which suffices because both sides preserve joins.
    """
    Q, R = X.Q, right.R
    xs = X.elements if exhaustive else X.sections
    qs = Q.elements if exhaustive else Q.partial_units
    rs = R.elements if exhaustive else R.partial_units
    rep = Report()
    w = next(
        ((x, r, y) for r in rs for x in xs for y in xs
         if X.inner(right.ract(x, R.star(r)), y) != X.inner(x, right.ract(y, r))),
        None,
    )
    rep.add("⟨xr*,y⟩ = ⟨x,yr⟩", w is None, w)
    w = next(
        ((a, x) for a in qs for x in xs
         if right.tspp(X.act(a, x)) != right.tspp(X.act(Q.spp(Q.star(a)), x))),
        None,
    )
    rep.add("tspp(ax) = tspp(spp(a*)x)", w is None, w)
    w = next(
        ((x, r) for r in rs for x in xs
         if X.spp(right.ract(x, r)) != X.spp(right.ract(x, R.spp(r)))),
        None,
    )
    rep.add("spp_X(xr) = spp_X(x spp(r))", w is None, w)
    return rep
