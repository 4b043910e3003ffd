"""Bisheaves over two groupoid quantales: two inner products, duals, tensors.

A :class:`QRBisheaf` wraps a discrete bi-action.  The left ``O(G)``-module is
``P(X)`` with the left action; the right ``O(H)``-structure is the left module
of the dual bi-action, so ``x·r = r*·x`` there and ``[x,y]`` is the dual's
left inner product.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Sequence

from .errors import HypothesisFailed, InvalidBiAction, NotPrincipal, QuantaleMismatch, SupportMismatch
from .groupoid import BiAction, FinGroupoid, GAction, dual_biaction, is_principal_bundle, validate_biaction
from .qmodule import ActionSheaf, inner_fast
from .quantale import GroupoidQuantale, shared_quantale
from .report import Report
from .suplat import FinSupLattice, bits, tensor


def same_groupoid(a: FinGroupoid, b: FinGroupoid) -> bool:
    return a is b or (
        a.objects == b.objects
        and a.arrows == b.arrows
        and a.dom == b.dom
        and a.cod == b.cod
        and a.comp_table == b.comp_table
        and a.inv == b.inv
        and a.ids == b.ids
    )


class QRBisheaf:
    """The ``O(G)``-``O(H)``-bisheaf ``P(X)`` of a discrete bi-action."""

    def __init__(
        self,
        b: BiAction,
        Q: GroupoidQuantale | None = None,
        R: GroupoidQuantale | None = None,
    ) -> None:
        self.b = b
        self.G, self.H = b.G, b.H
        self.Q = Q if Q is not None else shared_quantale(b.G)
        self.R = R if R is not None else shared_quantale(b.H)
        self.left = ActionSheaf(b.left, self.Q)
        self.rmod = ActionSheaf(b.right, self.R)
        self.n = len(b)
        self.p, self.q = b.p, b.q

    # ---- structure ------------------------------------------------------

    @property
    def one(self) -> int:
        return (1 << self.n) - 1

    @property
    def carrier(self) -> tuple[Hashable, ...]:
        return self.b.carrier

    def act(self, a: int, x: int) -> int:
        return self.left.act(a, x)

    def ract(self, x: int, r: int) -> int:
        return self.rmod.act(self.R.star(r), x)

    def inner(self, x: int, y: int) -> int:
        return self.left.inner(x, y)

    def rinner(self, x: int, y: int) -> int:
        return self.rmod.inner(x, y)

    def spp(self, x: int) -> int:
        return self.left.spp(x)

    def tspp(self, x: int) -> int:
        return self.rmod.spp(x)

    @cached_property
    def bisections(self) -> tuple[int, ...]:
        """Subsets on which both anchors are injective, in increasing order."""
        out: list[int] = []
        n = self.n
        p, q = self.p, self.q

        def grow(i: int, mask: int, ps: int, qs: int) -> None:
            if i == n:
                out.append(mask)
                return
            grow(i + 1, mask, ps, qs)
            if not ps >> p[i] & 1 and not qs >> q[i] & 1:
                grow(i + 1, mask | 1 << i, ps | 1 << p[i], qs | 1 << q[i])

        grow(0, 0, 0, 0)
        return tuple(sorted(out))

    def render(self, x: int) -> str:
        return "{" + ",".join(str(self.carrier[i]) for i in bits(x)) + "}"

    def __repr__(self) -> str:
        return f"QRBisheaf({self.G.name or 'G'}-{self.H.name or 'H'}, {self.n} points)"


def make_bisheaf(
    b: BiAction, Q: GroupoidQuantale | None = None, R: GroupoidQuantale | None = None
) -> QRBisheaf:
    """Validate a bi-action and return its bisheaf; raises InvalidBiAction."""
    rep = validate_biaction(b)
    if not rep.passed:
        bad = rep.failures()[0]
        raise InvalidBiAction(bad.name, witness=bad.witness)
    return QRBisheaf(b, Q, R)


def bisheaf_laws(X: QRBisheaf, fast_pairs: bool = True) -> Report:
    """Bimodule associativity, both anchor conditions, the double-basis law, supports.

    All identities preserve joins in the carrier variable, so points suffice;
    the support displays are checked on every element when ``n ≤ 10``.
    """
    Q, R = X.Q, X.R
    G, H = X.G, X.H
    pts = [1 << i for i in range(X.n)]
    rep = Report()
    w = next(
        (
            (G.label(g), X.carrier[i], H.label(h))
            for g in range(G.n_arrows)
            for i in range(X.n)
            for h in range(H.n_arrows)
            if X.ract(X.act(1 << g, 1 << i), 1 << h) != X.act(1 << g, X.ract(1 << i, 1 << h))
        ),
        None,
    )
    rep.add("(ax)r = a(xr)", w is None, w)
    w = next(
        ((b, x) for b in Q.base_elements for x in pts if X.act(b, x) != X.act(b, X.one) & x), None
    )
    rep.add("bx = b1 ∧ x", w is None, w)
    w = next(
        ((x, c) for c in R.base_elements for x in pts if X.ract(x, c) != X.ract(X.one, c) & x), None
    )
    rep.add("xc = 1c ∧ x", w is None, w)
    bis = X.bisections
    w = next(
        (x for x in pts if _join(X.act(X.inner(x, s), s) for s in bis) != x), None
    )
    rep.add("⋁⟨x,s⟩s = x", w is None, w)
    w = next(
        (x for x in pts if _join(X.ract(s, X.rinner(s, x)) for s in bis) != x), None
    )
    rep.add("⋁s[s,x] = x", w is None, w)
    els = range(1 << X.n) if X.n <= 10 else pts
    w = next((x for x in els if X.inner(x, x) & Q.e != X.spp(x)), None)
    rep.add("spp_X(x) = ⟨x,x⟩ ∧ e", w is None, w)
    w = next((x for x in els if X.rinner(x, x) & R.e != X.tspp(x)), None)
    rep.add("tspp(x) = [x,x] ∧ e", w is None, w)
    if fast_pairs:
        w = next(
            ((s, t) for s in bis for t in bis if inner_fast(X.left, s, t) != X.inner(s, t)), None
        )
        rep.add("left inner: partial-unit formula = closed form", w is None, w)
        w = next(
            ((s, t) for s in bis for t in bis if inner_fast(X.rmod, s, t) != X.rinner(s, t)), None
        )
        rep.add("right inner: partial-unit formula = closed form", w is None, w)
    return rep


def _join(xs) -> int:
    out = 0
    for x in xs:
        out |= x
    return out


def dual(X: QRBisheaf) -> QRBisheaf:
    """The ``O(H)``-``O(G)``-bisheaf on the same carrier."""
    return QRBisheaf(dual_biaction(X.b), X.R, X.Q)


# ---------------------------------------------------------------------------
# canonical forms and isomorphisms


def _bfs(b: BiAction, start: int) -> tuple[list[int], tuple]:
    """Visit a bi-orbit from ``start``; return the order and an encoding."""
    G, H = b.G, b.H
    order = [start]
    pos = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in range(G.n_arrows):
            y = b.lact(g, x)
            if y is not None and y not in pos:
                pos[y] = len(order)
                order.append(y)
                queue.append(y)
        for h in range(H.n_arrows):
            y = b.ract(x, h)
            if y is not None and y not in pos:
                pos[y] = len(order)
                order.append(y)
                queue.append(y)
    enc = tuple(
        (
            b.p[x],
            b.q[x],
            tuple(-1 if b.lact(g, x) is None else pos[b.lact(g, x)] for g in range(G.n_arrows)),
            tuple(-1 if b.ract(x, h) is None else pos[b.ract(x, h)] for h in range(H.n_arrows)),
        )
        for x in order
    )
    return order, enc


def bi_orbits(b: BiAction) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for x in range(len(b)):
        if x in seen:
            continue
        order, _ = _bfs(b, x)
        seen.update(order)
        out.append(sorted(order))
    return out


def _orbit_canon(b: BiAction, orbit: Sequence[int]) -> tuple[tuple, int]:
    best = None
    best_start = orbit[0]
    for x in orbit:
        _, enc = _bfs(b, x)
        if best is None or enc < best:
            best, best_start = enc, x
    return best, best_start


def canonical_form(X: QRBisheaf | BiAction) -> tuple:
    """An exact isomorphism invariant: sorted per-orbit minimal BFS encodings."""
    b = X.b if isinstance(X, QRBisheaf) else X
    return tuple(sorted(_orbit_canon(b, o)[0] for o in bi_orbits(b)))


@dataclass
class IsoResult:
    iso: dict[int, int] | None
    certificate: str

    def __bool__(self) -> bool:
        return self.iso is not None


def bimodule_iso(X: QRBisheaf | BiAction, Y: QRBisheaf | BiAction) -> IsoResult:
    """A carrier bijection commuting with both actions, or a certificate of absence.

    Isomorphisms of powerset bimodules are point bijections, and a bi-orbit
    is determined by any of its points, so matching minimal BFS encodings
    orbit by orbit is exhaustive.
    """
    bx = X.b if isinstance(X, QRBisheaf) else X
    by = Y.b if isinstance(Y, QRBisheaf) else Y
    if not (same_groupoid(bx.G, by.G) and same_groupoid(bx.H, by.H)):
        return IsoResult(None, "different groupoids")
    if len(bx) != len(by):
        return IsoResult(None, f"carrier sizes {len(bx)} and {len(by)} differ")
    xs = [(_orbit_canon(bx, o), o) for o in bi_orbits(bx)]
    ys = [(_orbit_canon(by, o), o) for o in bi_orbits(by)]
    xs.sort(key=lambda t: t[0][0])
    ys.sort(key=lambda t: t[0][0])
    if [c[0] for c, _ in xs] != [c[0] for c, _ in ys]:
        return IsoResult(None, "bi-orbit encodings differ: no bijection commutes with both actions")
    iso: dict[int, int] = {}
    for ((_, sx), _), ((_, sy), _) in zip(xs, ys):
        ox, _ = _bfs(bx, sx)
        oy, _ = _bfs(by, sy)
        iso.update(zip(ox, oy))
    _verify_iso(bx, by, iso)
    return IsoResult(iso, "bi-orbit encodings match")


def _verify_iso(bx: BiAction, by: BiAction, iso: dict[int, int]) -> None:
    for x, y in iso.items():
        assert bx.p[x] == by.p[y] and bx.q[x] == by.q[y]
        for g in range(bx.G.n_arrows):
            gx = bx.lact(g, x)
            assert (gx is None) == (by.lact(g, y) is None)
            assert gx is None or iso[gx] == by.lact(g, y)
        for h in range(bx.H.n_arrows):
            xh = bx.ract(x, h)
            assert (xh is None) == (by.ract(y, h) is None)
            assert xh is None or iso[xh] == by.ract(y, h)


# ---------------------------------------------------------------------------
# tensor composition


def tensor_classes(X: QRBisheaf, Y: QRBisheaf) -> tuple[list[tuple[int, int]], list[int]]:
    """Pairs ``(x,y)`` with ``q(x) = p(y)`` and their classes under ``(xh,y) ~ (x,hy)``."""
    if not same_groupoid(X.H, Y.G):
        raise QuantaleMismatch("middle groupoids differ", witness=(X.H.name, Y.G.name))
    H = X.H
    pairs = [(x, y) for x in range(X.n) for y in range(Y.n) if X.q[x] == Y.p[y]]
    idx = {pr: k for k, pr in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for (x, y2), k in idx.items():
        for h in range(H.n_arrows):
            if H.cod[h] != X.q[x]:
                continue
            xh = X.b.ract(x, h)
            y = Y.b.lact(H.inv[h], y2)
            a, c = find(idx[(xh, y)]), find(k)
            if a != c:
                parent[max(a, c)] = min(a, c)
    roots = [find(k) for k in range(len(pairs))]
    return pairs, roots


def tensor_compose(X: QRBisheaf, Y: QRBisheaf) -> QRBisheaf:
    """``X ⊗_R Y`` for discrete bisheaves, as the bi-action on ``(X ×_{H_0} Y)/H``."""
    pairs, roots = tensor_classes(X, Y)
    reps = sorted(set(roots))
    cls = {r: i for i, r in enumerate(reps)}
    of_pair = {pr: cls[roots[k]] for k, pr in enumerate(pairs)}
    carrier = [f"{X.carrier[pairs[r][0]]}⊗{Y.carrier[pairs[r][1]]}" for r in reps]
    G, K = X.G, Y.H
    p = [X.p[pairs[r][0]] for r in reps]
    q = [Y.q[pairs[r][1]] for r in reps]
    lt = {}
    rt = {}
    for i, r in enumerate(reps):
        x, y = pairs[r]
        for g in range(G.n_arrows):
            gx = X.b.lact(g, x)
            if gx is not None:
                lt[(g, i)] = of_pair[(gx, y)]
        for k in range(K.n_arrows):
            # stored right action: k acts as y·k⁻¹
            yk = Y.b.right.act(k, y)
            if yk is not None:
                rt[(k, i)] = of_pair[(x, yk)]
    left = GAction(G, carrier, p, lt, check=False)
    right = GAction(K, carrier, q, rt, check=False)
    T = QRBisheaf(BiAction(left, right, check=True), X.Q, Y.R)
    T.tensor_pairs = pairs
    T.tensor_roots = roots
    return T


def tensor_lattice_check(X: QRBisheaf, Y: QRBisheaf) -> bool:
    """The balanced sup-lattice tensor ``P(X) ⊗_R P(Y)`` is the powerset of the set quotient.

    A finite distributive lattice with ``k`` join-irreducibles and ``2^k``
    elements is Boolean, so comparing those counts with the number of
    classes decides the order-isomorphism.
    """
    PX = FinSupLattice.powerset(X.n)
    PY = FinSupLattice.powerset(Y.n)
    H = X.H
    rels = []
    for x in range(X.n):
        for y in range(Y.n):
            for h in range(H.n_arrows):
                xh = X.b.ract(x, h)
                hy = Y.b.lact(h, y)
                left = (0 if xh is None else 1 << xh, 1 << y)
                right = (1 << x, 0 if hy is None else 1 << hy)
                rels.append((left, right))
    T = tensor(PX, PY, rels)
    _, roots = tensor_classes(X, Y)
    k = len(set(roots))
    return (
        len(T.elements) == 1 << k
        and len(T.join_irreducibles) == k
        and T.is_distributive() is None
    )


def unit_bisheaf(G: FinGroupoid, Q: GroupoidQuantale | None = None) -> QRBisheaf:
    return QRBisheaf(BiAction.unit(G), Q, Q)


def orbit_bisheaf(a: GAction, Q: GroupoidQuantale | None = None) -> QRBisheaf:
    """A left action as a bisheaf over the discrete groupoid of its orbits."""
    orbs = a.orbits
    D = FinGroupoid.discrete(len(orbs))
    which = {x: k for k, o in enumerate(orbs) for x in o}
    q = [which[x] for x in range(len(a.carrier))]
    right = GAction(D, a.carrier, q, {(D.ids[q[x]], x): x for x in range(len(a.carrier))})
    return QRBisheaf(BiAction(a, right, check=False), Q)


# ---------------------------------------------------------------------------
# principality


@dataclass
class PrincipalityReport:
    """Conditions (informational) and consistency checks (must all pass)."""

    conditions: Report = field(default_factory=Report)
    consistency: Report = field(default_factory=Report)
    principal: bool = False
    surjective: bool = False
    biprincipal: bool | None = None

    def to_json(self) -> dict:
        out = {
            "principal": self.principal,
            "left_projection_surjective": self.surjective,
            "conditions": self.conditions.to_json(),
            "consistency": self.consistency.to_json(),
        }
        if self.biprincipal is not None:
            out["biprincipal"] = self.biprincipal
        return out


def _first(it):
    return next(iter(it), None)


def is_principal(X: QRBisheaf) -> PrincipalityReport:
    Q, R = X.Q, X.R
    bis = X.bisections
    one = X.one
    out = PrincipalityReport()
    c = out.conditions
    w = _first(s for s in bis if not Q.leq(X.inner(s, s), Q.e))
    c1 = c.add("(1) ⟨s,s⟩ ≤ e_Q", w is None, w)
    c2 = c.add("(2) [1,1] ≥ e_R", Q.leq(R.e, X.rinner(one, one)))
    w = _first(
        s for s in bis if not Q.leq(X.ract(one, X.tspp(s)), X.act(Q.top, s))
    )
    c3 = c.add("(3) 1_X tspp(s) ≤ 1_Q s", w is None, w)
    c4 = c.add("(4) ⟨1,1⟩ ≥ e_Q", Q.leq(Q.e, X.inner(one, one)))
    out.principal = c1 and c2 and c3
    out.surjective = c4
    k = out.consistency
    join_rr = _join(X.rinner(s, s) for s in bis)
    join_ll = _join(X.inner(s, s) for s in bis)
    k.add("(2) ⟺ ⋁[s,s] ≥ e_R", c2 == Q.leq(R.e, join_rr))
    k.add("(4) ⟺ ⋁⟨s,s⟩ ≥ e_Q", c4 == Q.leq(Q.e, join_ll))
    if c4:
        k.add("given (4): (1) ⟺ ⋁⟨s,s⟩ = e_Q", c1 == (join_ll == Q.e))
    bundle = is_principal_bundle(X.b, "left")
    k.add("(1)–(3) ⟺ principal bundle over H_0", out.principal == bundle.passed,
          [f.name for f in bundle.failures()])
    p_surj = set(X.p) == set(range(X.G.n_objects))
    k.add("(4) ⟺ p surjective", c4 == p_surj)
    return out


def is_biprincipal(X: QRBisheaf) -> PrincipalityReport:
    Q, R = X.Q, X.R
    bis = X.bisections
    one = X.one
    out = is_principal(X)
    c = out.conditions
    c1 = c.add("biprincipal (1) ⋁⟨s,s⟩ = e_Q", _join(X.inner(s, s) for s in bis) == Q.e)
    c2 = c.add("biprincipal (2) ⋁[s,s] = e_R", _join(X.rinner(s, s) for s in bis) == R.e)
    c3 = c["(3) 1_X tspp(s) ≤ 1_Q s"].passed
    w = _first(s for s in bis if not Q.leq(X.act(X.spp(s), one), X.ract(s, R.top)))
    c4 = c.add("biprincipal (4) spp_X(s)1_X ≤ s1_R", w is None, w)
    out.biprincipal = c1 and c2 and c3 and c4
    k = out.consistency
    both = is_principal_bundle(X.b, "left").passed and is_principal_bundle(X.b, "right").passed
    k.add("biprincipal ⟺ principal bundle on both sides", out.biprincipal == both)
    k.add("biprincipal ⟹ principal", not out.biprincipal or out.principal)
    if out.biprincipal:
        k.add("⟨X,X⟩ = Q", _full(X.n, X.inner, X.G.n_arrows))
        k.add("[X,X] = R", _full(X.n, X.rinner, X.H.n_arrows))
    return out


def _full(n: int, inner, n_arrows: int) -> bool:
    # the induced map on the tensor is onto iff every atom is a value on points
    hit = 0
    for x in range(n):
        for y in range(n):
            v = inner(1 << x, 1 << y)
            if v and v & (v - 1) == 0:
                hit |= v
    return hit == (1 << n_arrows) - 1


def interchange_check(X: QRBisheaf) -> tuple[bool, Report]:
    """``⟨s,t⟩u = s[t,u]`` over bisection triples, compared with biprincipality."""
    Q, R = X.Q, X.R
    bis = X.bisections
    if _join(X.inner(s, s) for s in bis) != Q.e or _join(X.rinner(s, s) for s in bis) != R.e:
        raise HypothesisFailed("the joins ⋁⟨s,s⟩ and ⋁[s,s] are not both units")
    w = None
    for s in bis:
        for t in bis:
            st = X.inner(s, t)
            for u in bis:
                if X.act(st, u) != X.ract(s, X.rinner(t, u)):
                    w = (s, t, u)
                    break
            if w:
                break
        if w:
            break
    holds = w is None
    rep = Report()
    rep.add("⟨s,t⟩u = s[t,u]", holds, w)
    bp = is_biprincipal(X)
    rep.add("interchange ⟺ biprincipal", holds == bp.biprincipal, (holds, bp.biprincipal))
    return holds, rep


def translation_element(X: QRBisheaf, s: int, t: int) -> int:
    """The unique ``u ∈ Q_I`` with ``s = ut`` and ``spp(u*) = spp_X(t)``."""
    if not is_principal(X).principal:
        raise NotPrincipal("bisheaf is not principal")
    bis = set(X.bisections)
    if s not in bis or t not in bis:
        raise NotPrincipal("arguments must be local bisections", witness=(s, t))
    if X.tspp(s) != X.tspp(t):
        raise SupportMismatch("tspp(s) ≠ tspp(t)", witness=(X.tspp(s), X.tspp(t)))
    Q = X.Q
    u = X.inner(s, t)
    if u not in set(Q.partial_units) or Q.spp(Q.star(u)) != X.spp(t) or X.act(u, t) != s:
        raise NotPrincipal("⟨s,t⟩ does not translate t to s", witness=(s, t, u))
    others = [
        v for v in Q.partial_units
        if v != u and Q.spp(Q.star(v)) == X.spp(t) and X.act(v, t) == s
    ]
    if others:
        raise NotPrincipal("translating partial unit is not unique", witness=others[0])
    return u


def translation_laws(X: QRBisheaf) -> Report:
    """Unique translation and ``⟨s∧s',t⟩ = ⟨s,t⟩∧⟨s',t⟩`` over matching bisections."""
    rep = Report()
    by_t: dict[int, list[int]] = {}
    for s in X.bisections:
        by_t.setdefault(X.tspp(s), []).append(s)
    w = None
    try:
        for group in by_t.values():
            for s in group:
                for t in group:
                    translation_element(X, s, t)
    except (NotPrincipal, SupportMismatch) as exc:
        w = (str(exc), exc.witness)
    rep.add("unique translating partial unit", w is None, w)
    w = next(
        (
            (s, s2, t)
            for group in by_t.values()
            for s in group
            for s2 in group
            for t in group
            if X.inner(s & s2, t) != X.inner(s, t) & X.inner(s2, t)
        ),
        None,
    )
    rep.add("⟨s∧s',t⟩ = ⟨s,t⟩ ∧ ⟨s',t⟩", w is None, w)
    return rep


def theta_inner_check(X: QRBisheaf) -> bool:
    """In a principal bundle the translating arrow map has ``θ_!(x⊗y) = ⟨x,y⟩``."""
    b = X.b
    for x in range(X.n):
        for y in range(X.n):
            th = 0
            if X.q[x] == X.q[y]:
                hits = [g for (g, z), w in b.left.table.items() if z == y and w == x]
                if len(hits) != 1:
                    return False
                th = 1 << hits[0]
            if th != X.inner(1 << x, 1 << y):
                return False
    for s in X.bisections:
        for t in X.bisections:
            direct = 0
            for x in bits(s):
                for y in bits(t):
                    if X.q[x] == X.q[y]:
                        direct |= X.inner(1 << x, 1 << y)
            if direct != X.inner(s, t):
                return False
    return True


# ---------------------------------------------------------------------------
# the unit isomorphisms of a biprincipal bisheaf


def unit_maps_check(X: QRBisheaf) -> Report:
    """``φ(x⊗y) = ⟨x,y⟩`` on ``X⊗X*`` and ``ψ(x⊗y) = [x,y]`` on ``X*⊗X`` are isomorphisms.

    ``η(a) = ⋁_s as⊗s`` is checked to be a two-sided inverse of ``φ`` (and its
    mirror of ``ψ``) on atoms, which suffices because all maps preserve joins.
    Equivariance of ``φ`` and ``ψ`` is checked on generators, and the
    composites are matched against the unit bisheaves by :func:`bimodule_iso`.
    """
    rep = Report()
    D = dual(X)
    for name, A, B in (("φ", X, D), ("ψ", D, X)):
        unit_g = A.G
        inner = A.inner
        T = tensor_compose(A, B)
        pairs, roots = T.tensor_pairs, T.tensor_roots
        reps = sorted(set(roots))
        cls = {r: i for i, r in enumerate(reps)}
        val: dict[int, int] = {}
        ok = True
        for k, (x, y) in enumerate(pairs):
            v = inner(1 << x, 1 << y)
            i = cls[roots[k]]
            if val.setdefault(i, v) != v or v == 0 or v & (v - 1):
                ok = False
        rep.add(f"{name} is well defined with atomic values", ok)
        if not ok:
            continue
        images = [val[i].bit_length() - 1 for i in range(len(reps))]
        rep.add(f"{name} is a bijection onto arrows",
                sorted(images) == list(range(unit_g.n_arrows)))
        # equivariance on generators: g·ξ and ξ·g
        w = None
        for i in range(len(reps)):
            a = images[i]
            for g in range(unit_g.n_arrows):
                gi = T.b.lact(g, i)
                if gi is not None and images[gi] != unit_g.comp(g, a):
                    w = ("left", i, g)
                ig = T.b.ract(i, g)
                if ig is not None and images[ig] != unit_g.comp(a, g):
                    w = ("right", i, g)
        rep.add(f"{name} is bi-equivariant", w is None, w)
        # η(a) = ⋁_s a s ⊗ s on atoms a = {g}
        of_pair = {pr: cls[roots[k]] for k, pr in enumerate(pairs)}
        bis = A.bisections
        eta_ok = True
        for g in range(unit_g.n_arrows):
            eta = 0
            for s in bis:
                gs = A.act(1 << g, s)
                for x in bits(gs):
                    for y in bits(s):
                        k = of_pair.get((x, y))
                        if k is not None:
                            eta |= 1 << k
            back = 0
            for i in bits(eta):
                back |= 1 << images[i]
            if back != 1 << g or bin(eta).count("1") != 1:
                eta_ok = False
        rep.add(f"η splits {name} on both sides", eta_ok)
        rep.add(f"{name}: composite ≅ unit bisheaf",
                bool(bimodule_iso(T, BiAction.unit(unit_g))))
    return rep
