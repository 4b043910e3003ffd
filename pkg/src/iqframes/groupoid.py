"""Finite discrete groupoids, their actions, bi-actions and functors.

Conventions used throughout the package:

* ``comp(g, h)`` is ``g∘h`` and is defined iff ``dom(g) = cod(h)``.
* A left action ``g·x`` is defined iff ``dom(g) = p(x)`` and lands in
  the fiber over ``cod(g)``.
* A right action ``x·h`` is defined iff ``q(x) = cod(h)`` and lands over
  ``dom(h)``.  It is stored as the left action ``h⁻¹·x``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InvalidAction, InvalidBiAction, InvalidFunctor, InvalidGroupoid
from .groups import Group, Table, canonical_table, group_name
from .report import Report


class FinGroupoid:
    """A finite groupoid with objects ``0..m-1`` and arrows ``0..n-1``.

    Construction does not validate; call :func:`validate` (or
    :meth:`require_valid`) before relying on the axioms.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        arrows: Sequence[Hashable],
        dom: Sequence[int],
        cod: Sequence[int],
        comp: Mapping[tuple[int, int], int],
        inv: Sequence[int],
        ids: Sequence[int],
        name: str | None = None,
    ) -> None:
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.comp_table = dict(comp)
        self.inv = tuple(inv)
        self.ids = tuple(ids)
        self.name = name

    # ---- constructors ---------------------------------------------------

    @classmethod
    def from_group(cls, group: Group, name: str | None = None) -> "FinGroupoid":
        return cls.connected(1, group, name=name)

    @classmethod
    def connected(
        cls,
        n: int,
        group: Group,
        objects: Sequence[Hashable] | None = None,
        name: str | None = None,
    ) -> "FinGroupoid":
        """The connected groupoid with ``n`` objects and vertex group ``group``.

        Arrows are triples ``(i, k, j): j → i`` composing as
        ``(i,k,j)∘(j,k',l) = (i,kk',l)``.
        """
        objects = list(objects) if objects is not None else list(range(1, n + 1))
        m = group.order
        triples = [(i, k, j) for i in range(n) for j in range(n) for k in range(m)]
        index = {t: a for a, t in enumerate(triples)}
        if n == 1:
            labels = list(group.names)
        elif m == 1:
            labels = [f"({objects[i]},{objects[j]})" for i, _, j in triples]
        else:
            labels = [f"({objects[i]},{group.names[k]},{objects[j]})" for i, k, j in triples]
        comp = {}
        for a, (i, k, j) in enumerate(triples):
            for b, (j2, k2, l) in enumerate(triples):
                if j2 == j:
                    comp[(a, b)] = index[(i, group.mul(k, k2), l)]
        return cls(
            objects,
            labels,
            dom=[j for _, _, j in triples],
            cod=[i for i, _, _ in triples],
            comp=comp,
            inv=[index[(j, group.inv[k], i)] for i, k, j in triples],
            ids=[index[(i, 0, i)] for i in range(n)],
            name=name,
        )

    @classmethod
    def pair(cls, n: int) -> "FinGroupoid":
        from .groups import cyclic

        return cls.connected(n, cyclic(1), name=f"P{n}")

    @classmethod
    def trivial(cls) -> "FinGroupoid":
        g = cls.pair(1)
        g.name = "T"
        return g

    @classmethod
    def discrete(cls, objects: int | Sequence[Hashable]) -> "FinGroupoid":
        if isinstance(objects, int):
            objects = list(range(1, objects + 1))
        n = len(objects)
        return cls(
            objects,
            [f"id{o}" for o in objects],
            range(n),
            range(n),
            {(i, i): i for i in range(n)},
            range(n),
            range(n),
            name=f"D{n}",
        )

    @classmethod
    def disjoint_union(cls, *parts: "FinGroupoid", name: str | None = None) -> "FinGroupoid":
        objects: list[Hashable] = []
        arrows: list[Hashable] = []
        dom: list[int] = []
        cod: list[int] = []
        comp: dict[tuple[int, int], int] = {}
        inv: list[int] = []
        ids: list[int] = []
        clash = len({o for p in parts for o in p.objects}) < sum(len(p.objects) for p in parts)
        clash_a = len({a for p in parts for a in p.arrows}) < sum(len(p.arrows) for p in parts)
        for c, p in enumerate(parts):
            oo, ao = len(objects), len(arrows)
            objects += [f"{c}.{o}" if clash else o for o in p.objects]
            arrows += [f"{c}.{a}" if clash_a else a for a in p.arrows]
            dom += [d + oo for d in p.dom]
            cod += [d + oo for d in p.cod]
            inv += [i + ao for i in p.inv]
            ids += [i + ao for i in p.ids]
            for (g, h), gh in p.comp_table.items():
                comp[(g + ao, h + ao)] = gh + ao
        return cls(objects, arrows, dom, cod, comp, inv, ids, name=name)

    # ---- basic structure ------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def comp(self, g: int, h: int) -> int | None:
        return self.comp_table.get((g, h))

    def hom(self, x: int, y: int) -> list[int]:
        """Arrows ``x → y``."""
        return [a for a in range(self.n_arrows) if self.dom[a] == x and self.cod[a] == y]

    def vertex_group(self, x: int) -> Group:
        arrows = self.hom(x, x)
        arrows.remove(self.ids[x])
        arrows.insert(0, self.ids[x])
        pos = {a: i for i, a in enumerate(arrows)}
        table = [[pos[self.comp(a, b)] for b in arrows] for a in arrows]
        return Group(table, [str(self.arrows[a]) for a in arrows])

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components of the objects, each sorted, in order of least member."""
        parent = list(range(self.n_objects))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(self.n_arrows):
            ra, rb = find(self.dom[a]), find(self.cod[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        comps: dict[int, list[int]] = {}
        for x in range(self.n_objects):
            comps.setdefault(find(x), []).append(x)
        return tuple(tuple(c) for c in sorted(comps.values()))

    def label(self, a: int) -> str:
        return str(self.arrows[a])

    def arrow_index(self, label: Hashable) -> int:
        return self._arrow_pos[label]

    @cached_property
    def _arrow_pos(self) -> dict[Hashable, int]:
        out: dict[Hashable, int] = {}
        for i, a in enumerate(self.arrows):
            out[a] = i
            out[str(a)] = i
        return out

    def object_index(self, label: Hashable) -> int:
        for i, o in enumerate(self.objects):
            if o == label or str(o) == str(label):
                return i
        raise KeyError(label)

    @cached_property
    def is_valid(self) -> bool:
        return validate(self).passed

    def require_valid(self) -> "FinGroupoid":
        rep = validate(self)
        if not rep.passed:
            bad = rep.failures()[0]
            raise InvalidGroupoid(f"{bad.name}: {bad.detail}", witness=bad.witness)
        return self

    def __repr__(self) -> str:
        nm = f"{self.name}, " if self.name else ""
        return f"FinGroupoid({nm}{self.n_objects} objects, {self.n_arrows} arrows)"


def validate(g: FinGroupoid) -> Report:
    """Check every groupoid axiom, recording the first witness of each failure."""
    rep = Report()
    n, m = g.n_arrows, g.n_objects
    shape_ok = (
        len(g.dom) == n
        and len(g.cod) == n
        and len(g.inv) == n
        and len(g.ids) == m
        and all(0 <= x < m for x in g.dom + g.cod)
        and all(0 <= a < n for a in g.inv + g.ids)
        and all(0 <= v < n for v in g.comp_table.values())
    )
    rep.add("shape", shape_ok, detail="table sizes and index ranges")
    if not shape_ok:
        return rep

    w = next(
        (
            (g.label(a), g.label(b))
            for a, b in product(range(n), repeat=2)
            if ((a, b) in g.comp_table) != (g.dom[a] == g.cod[b])
        ),
        None,
    )
    rep.add("composition defined iff dom(g) = cod(h)", w is None, w)

    w = next(
        (
            (g.label(a), g.label(b))
            for (a, b), c in g.comp_table.items()
            if g.dom[c] != g.dom[b] or g.cod[c] != g.cod[a]
        ),
        None,
    )
    rep.add("composite has dom(h) and cod(g)", w is None, w)

    w = None
    for (a, b), ab in g.comp_table.items():
        for c in range(n):
            bc = g.comp(b, c)
            if bc is None:
                continue
            lhs, rhs = g.comp(ab, c), g.comp(a, bc)
            if lhs is None or lhs != rhs:
                w = (g.label(a), g.label(b), g.label(c))
                break
        if w:
            break
    rep.add("associativity", w is None, w)

    w = next(
        (
            g.objects[x]
            for x in range(m)
            if g.dom[g.ids[x]] != x or g.cod[g.ids[x]] != x
        ),
        None,
    )
    rep.add("identity arrows sit on their objects", w is None, w)

    w = next(
        (
            g.label(a)
            for a in range(n)
            if g.comp(g.ids[g.cod[a]], a) != a or g.comp(a, g.ids[g.dom[a]]) != a
        ),
        None,
    )
    rep.add("unit laws", w is None, w)

    w = next(
        (
            g.label(a)
            for a in range(n)
            if g.comp(a, g.inv[a]) != g.ids[g.cod[a]] or g.comp(g.inv[a], a) != g.ids[g.dom[a]]
        ),
        None,
    )
    rep.add("inverses", w is None, w)
    return rep


IsoClass = tuple[tuple[int, Table], ...]


def orbits_isotropy(g: FinGroupoid) -> IsoClass:
    """Sorted multiset of ``(orbit size, canonical isotropy table)``."""
    return tuple(
        sorted((len(c), canonical_table(g.vertex_group(c[0]).table)) for c in g.components)
    )


def orbits_isotropy_named(g: FinGroupoid) -> list[tuple[int, str]]:
    return [(size, group_name(t)) for size, t in orbits_isotropy(g)]


def groupoid_iso_class(g: FinGroupoid) -> IsoClass:
    """Complete isomorphism invariant of a finite groupoid."""
    return orbits_isotropy(g)


# ---------------------------------------------------------------------------
# actions


class GAction:
    """A left action of a groupoid on a finite set, with anchor ``p``."""

    def __init__(
        self,
        groupoid: FinGroupoid,
        carrier: Sequence[Hashable],
        anchor: Sequence[int],
        act: Mapping[tuple[int, int], int],
        check: bool = True,
    ) -> None:
        self.groupoid = groupoid
        self.carrier = tuple(carrier)
        self.anchor = tuple(anchor)
        self.table = dict(act)
        if check:
            rep = validate_action(self)
            if not rep.passed:
                bad = rep.failures()[0]
                raise InvalidAction(bad.name, witness=bad.witness)

    def act(self, g: int, x: int) -> int | None:
        return self.table.get((g, x))

    def __len__(self) -> int:
        return len(self.carrier)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        out = []
        for x in range(len(self.carrier)):
            if x in seen:
                continue
            orb = sorted({y for (g, z), y in self.table.items() if z == x})
            seen.update(orb)
            out.append(tuple(orb))
        return tuple(out)

    def stabilizer(self, x: int) -> list[int]:
        return [g for (g, z), y in self.table.items() if z == x and y == x]

    def is_free(self) -> int | None:
        """A point with nontrivial stabilizer, or None when the action is free."""
        ids = set(self.groupoid.ids)
        for (g, x), y in self.table.items():
            if x == y and g not in ids:
                return x
        return None

    @classmethod
    def regular(cls, G: FinGroupoid) -> "GAction":
        """``G`` acting on its own arrows by composition, anchored by ``cod``."""
        act = {(k, g): G.comp(k, g) for k in range(G.n_arrows) for g in range(G.n_arrows)
               if G.dom[k] == G.cod[g]}
        return cls(G, G.arrows, G.cod, act, check=False)

    @classmethod
    def tautological(cls, G: FinGroupoid) -> "GAction":
        """``G`` acting on its objects: ``g·dom(g) = cod(g)``."""
        act = {(g, G.dom[g]): G.cod[g] for g in range(G.n_arrows)}
        return cls(G, G.objects, range(G.n_objects), act, check=False)

    @classmethod
    def trivial_on(cls, G: FinGroupoid, anchor: Sequence[int], carrier=None) -> "GAction":
        """Identities acting on a set; only valid for discrete groupoids."""
        carrier = carrier if carrier is not None else list(range(len(anchor)))
        act = {(G.ids[p], x): x for x, p in enumerate(anchor)}
        return cls(G, carrier, anchor, act)


def validate_action(a: GAction) -> Report:
    G = a.groupoid
    rep = Report()
    n = len(a.carrier)
    ok = len(a.anchor) == n and all(0 <= p < G.n_objects for p in a.anchor)
    rep.add("anchor is a map to objects", ok)
    if not ok:
        return rep
    w = next(
        (
            (G.label(g), a.carrier[x])
            for g in range(G.n_arrows)
            for x in range(n)
            if ((g, x) in a.table) != (G.dom[g] == a.anchor[x])
        ),
        None,
    )
    rep.add("g·x defined iff dom(g) = p(x)", w is None, w)
    w = next(
        (
            (G.label(g), a.carrier[x])
            for (g, x), y in a.table.items()
            if not 0 <= y < n or a.anchor[y] != G.cod[g]
        ),
        None,
    )
    rep.add("p(g·x) = cod(g)", w is None, w)
    if w is not None:
        return rep
    w = next((a.carrier[x] for x in range(n) if a.act(G.ids[a.anchor[x]], x) != x), None)
    rep.add("identities act trivially", w is None, w)
    w = None
    for (g, h), gh in G.comp_table.items():
        for x in range(n):
            hx = a.act(h, x)
            if hx is not None and a.act(g, hx) != a.act(gh, x):
                w = (G.label(g), G.label(h), a.carrier[x])
                break
        if w:
            break
    rep.add("(gh)·x = g·(h·x)", w is None, w)
    return rep


class BiAction:
    """Commuting left ``G`` and right ``H`` actions on one finite set.

    ``right`` is the right action stored as a left ``H``-action:
    ``right.act(h, x) = x·h⁻¹``.
    """

    def __init__(self, left: GAction, right: GAction, check: bool = True) -> None:
        if left.carrier != right.carrier:
            raise InvalidBiAction("left and right actions have different carriers")
        self.left = left
        self.right = right
        if check:
            rep = validate_biaction(self)
            if not rep.passed:
                bad = rep.failures()[0]
                raise InvalidBiAction(bad.name, witness=bad.witness)

    @classmethod
    def from_right_table(
        cls,
        left: GAction,
        H: FinGroupoid,
        q: Sequence[int],
        right: Mapping[tuple[int, int], int],
        check: bool = True,
    ) -> "BiAction":
        """Build from a right-action table ``(x, h) -> x·h``."""
        stored = {(H.inv[h], x): y for (x, h), y in right.items()}
        return cls(left, GAction(H, left.carrier, q, stored, check=check), check=check)

    @property
    def G(self) -> FinGroupoid:
        return self.left.groupoid

    @property
    def H(self) -> FinGroupoid:
        return self.right.groupoid

    @property
    def carrier(self) -> tuple[Hashable, ...]:
        return self.left.carrier

    @property
    def p(self) -> tuple[int, ...]:
        return self.left.anchor

    @property
    def q(self) -> tuple[int, ...]:
        return self.right.anchor

    def __len__(self) -> int:
        return len(self.left.carrier)

    def lact(self, g: int, x: int) -> int | None:
        return self.left.act(g, x)

    def ract(self, x: int, h: int) -> int | None:
        return self.right.act(self.H.inv[h], x)

    @classmethod
    def unit(cls, G: FinGroupoid) -> "BiAction":
        """``G`` acting on its arrows on both sides."""
        left = GAction.regular(G)
        stored = {
            (h, g): G.comp(g, G.inv[h])
            for h in range(G.n_arrows)
            for g in range(G.n_arrows)
            if G.dom[h] == G.dom[g]
        }
        return cls(left, GAction(G, G.arrows, G.dom, stored, check=False), check=False)

    @classmethod
    def tautological(cls, G: FinGroupoid) -> "BiAction":
        """``G`` acting on its objects, with the discrete groupoid of orbits on the right."""
        left = GAction.tautological(G)
        comps = G.components
        H = FinGroupoid.discrete(len(comps))
        which = {x: c for c, comp in enumerate(comps) for x in comp}
        q = [which[x] for x in range(G.n_objects)]
        right = GAction(H, left.carrier, q, {(H.ids[q[x]], x): x for x in range(G.n_objects)})
        return cls(left, right, check=False)

    def __repr__(self) -> str:
        return f"BiAction({self.G.name or 'G'}-{self.H.name or 'H'}, {len(self)} points)"


def validate_biaction(b: BiAction) -> Report:
    rep = Report()
    rep.extend(validate_action(b.left), "left: ")
    rep.extend(validate_action(b.right), "right: ")
    if not rep.passed:
        return rep
    G, H = b.G, b.H
    w = next(
        ((G.label(g), b.carrier[x]) for (g, x), y in b.left.table.items() if b.q[y] != b.q[x]),
        None,
    )
    rep.add("q(gx) = q(x)", w is None, w)
    w = next(
        ((H.label(h), b.carrier[x]) for (h, x), y in b.right.table.items() if b.p[y] != b.p[x]),
        None,
    )
    rep.add("p(xh) = p(x)", w is None, w)
    w = None
    for (g, x), gx in b.left.table.items():
        for h in range(H.n_arrows):
            xh = b.ract(x, h)
            if xh is None:
                continue
            if b.ract(gx, h) != b.lact(g, xh):
                w = (G.label(g), b.carrier[x], H.label(h))
                break
        if w:
            break
    rep.add("(gx)h = g(xh)", w is None, w)
    return rep


def dual_biaction(b: BiAction) -> BiAction:
    """The ``H``-``G`` bi-action on the same set: ``h∙x = x·h⁻¹``, ``x∙g = g⁻¹·x``.

    With right actions stored through inverses this is just a swap.
    """
    return BiAction(b.right, b.left, check=False)


def is_principal_bundle(b: BiAction, side: str = "left") -> Report:
    """Set-level principality of the left (or right) action over the other anchor."""
    rep = Report()
    act, other = (b.left, b.right) if side == "left" else (b.right, b.left)
    base = other.groupoid
    w = act.is_free()
    rep.add("action is free", w is None, None if w is None else b.carrier[w])
    fibers: dict[int, list[int]] = {}
    for x, o in enumerate(other.anchor):
        fibers.setdefault(o, []).append(x)
    w = None
    for pts in fibers.values():
        orb = {y for (g, z), y in act.table.items() if z == pts[0]}
        if not set(pts) <= orb:
            w = [b.carrier[x] for x in pts]
            break
    rep.add("transitive on anchor fibers", w is None, w)
    missing = [base.objects[o] for o in range(base.n_objects) if o not in fibers]
    rep.add("anchor is surjective", not missing, missing)
    return rep


def translation(b: BiAction, x: int, y: int) -> int | None:
    """The arrow ``θ(x, y)`` with ``θ·y = x``; unique in a free action."""
    hits = [g for (g, z), w in b.left.table.items() if z == y and w == x]
    if len(hits) > 1:
        raise InvalidBiAction("left action is not free", witness=(x, y))
    return hits[0] if hits else None


# ---------------------------------------------------------------------------
# functors


class GroupoidFunctor:
    """A functor ``φ: H → G`` given by object and arrow maps."""

    def __init__(
        self,
        source: FinGroupoid,
        target: FinGroupoid,
        on_objects: Sequence[int],
        on_arrows: Sequence[int],
        check: bool = True,
    ) -> None:
        self.source = source
        self.target = target
        self.obj = tuple(on_objects)
        self.arr = tuple(on_arrows)
        if check:
            rep = validate_functor(self)
            if not rep.passed:
                bad = rep.failures()[0]
                raise InvalidFunctor(bad.name, witness=bad.witness)

    @classmethod
    def identity(cls, G: FinGroupoid) -> "GroupoidFunctor":
        return cls(G, G, range(G.n_objects), range(G.n_arrows), check=False)

    def compose(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """``self ∘ other``."""
        if other.target is not self.source:
            raise InvalidFunctor("functors are not composable")
        return GroupoidFunctor(
            other.source,
            self.target,
            [self.obj[o] for o in other.obj],
            [self.arr[a] for a in other.arr],
            check=False,
        )

    def __repr__(self) -> str:
        return f"GroupoidFunctor({self.source.name} → {self.target.name})"


def validate_functor(f: GroupoidFunctor) -> Report:
    H, G = f.source, f.target
    rep = Report()
    ok = (
        len(f.obj) == H.n_objects
        and len(f.arr) == H.n_arrows
        and all(0 <= o < G.n_objects for o in f.obj)
        and all(0 <= a < G.n_arrows for a in f.arr)
    )
    rep.add("maps are total", ok)
    if not ok:
        return rep
    w = next(
        (
            H.label(h)
            for h in range(H.n_arrows)
            if G.dom[f.arr[h]] != f.obj[H.dom[h]] or G.cod[f.arr[h]] != f.obj[H.cod[h]]
        ),
        None,
    )
    rep.add("preserves dom and cod", w is None, w)
    w = next((H.objects[x] for x in range(H.n_objects) if f.arr[H.ids[x]] != G.ids[f.obj[x]]), None)
    rep.add("preserves identities", w is None, w)
    w = next(
        (
            (H.label(a), H.label(b))
            for (a, b), ab in H.comp_table.items()
            if G.comp(f.arr[a], f.arr[b]) != f.arr[ab]
        ),
        None,
    )
    rep.add("preserves composition", w is None, w)
    w = next((H.label(h) for h in range(H.n_arrows) if f.arr[H.inv[h]] != G.inv[f.arr[h]]), None)
    rep.add("preserves inverses", w is None, w)
    return rep


def bundle_of_functor(phi: GroupoidFunctor) -> BiAction:
    """The ``G``-``H`` bibundle ``⟨φ⟩`` of a functor ``φ: H → G``.

    Points are pairs ``(g, b)`` with ``dom(g) = φ0(b)``; ``p = cod(g)``,
    ``q = b``.  ``k·(g,b) = (k∘g, b)`` and ``(g,b)·h = (g∘φ1(h), dom h)``.
    """
    if not validate_functor(phi).passed:
        raise InvalidFunctor("invalid functor", witness=validate_functor(phi).failures()[0].name)
    H, G = phi.source, phi.target
    pts = [(g, b) for b in range(H.n_objects) for g in range(G.n_arrows) if G.dom[g] == phi.obj[b]]
    index = {pt: i for i, pt in enumerate(pts)}
    labels = [(G.label(g), str(H.objects[b])) for g, b in pts]
    left = {
        (k, i): index[(G.comp(k, g), b)]
        for i, (g, b) in enumerate(pts)
        for k in range(G.n_arrows)
        if G.dom[k] == G.cod[g]
    }
    right = {
        (i, h): index[(G.comp(g, phi.arr[h]), H.dom[h])]
        for i, (g, b) in enumerate(pts)
        for h in range(H.n_arrows)
        if H.cod[h] == b
    }
    la = GAction(G, labels, [G.cod[g] for g, _ in pts], left, check=False)
    return BiAction.from_right_table(la, H, [b for _, b in pts], right, check=False)


def global_section_of_bundle(phi: GroupoidFunctor) -> list[int]:
    """The section ``b ↦ (id_{φ0(b)}, b)`` of ``q`` on ``⟨φ⟩``, as point indices."""
    H, G = phi.source, phi.target
    pts = [(g, b) for b in range(H.n_objects) for g in range(G.n_arrows) if G.dom[g] == phi.obj[b]]
    index = {pt: i for i, pt in enumerate(pts)}
    return [index[(G.ids[phi.obj[b]], b)] for b in range(H.n_objects)]


def functor_from_section(b: BiAction, section: Sequence[int]) -> GroupoidFunctor:
    """Recover ``φ: H → G`` from a global section ``s`` of ``q``.

    ``φ0(y) = p(s(y))`` and ``φ1(h) = θ(s(cod h)·h, s(dom h))``.
    """
    H, G = b.H, b.G
    if any(b.q[section[y]] != y for y in range(H.n_objects)):
        raise InvalidBiAction("not a section of q", witness=list(section))
    obj = [b.p[section[y]] for y in range(H.n_objects)]
    arr = []
    for h in range(H.n_arrows):
        moved = b.ract(section[H.cod[h]], h)
        g = translation(b, moved, section[H.dom[h]])
        if g is None:
            raise InvalidBiAction("no translating arrow: bundle is not principal", witness=h)
        arr.append(g)
    return GroupoidFunctor(H, G, obj, arr)


def section_isomorphism(b: BiAction, section: Sequence[int]) -> dict[int, int]:
    """The map ``⟨φ⟩ → X``, ``(g, y) ↦ g·s(y)``, as point indices."""
    phi = functor_from_section(b, section)
    H, G = b.H, b.G
    pts = [(g, y) for y in range(H.n_objects) for g in range(G.n_arrows) if G.dom[g] == phi.obj[y]]
    return {i: b.lact(g, section[y]) for i, (g, y) in enumerate(pts)}


def is_essential_equivalence(phi: GroupoidFunctor) -> tuple[bool, Report]:
    """Essentially surjective and fully faithful."""
    H, G = phi.source, phi.target
    rep = Report()
    image = set(phi.obj)
    missing = [
        G.objects[y]
        for y in range(G.n_objects)
        if not any(G.dom[g] in image for g in range(G.n_arrows) if G.cod[g] == y)
    ]
    rep.add("essentially surjective", not missing, missing)
    w = None
    for x, y in product(range(H.n_objects), repeat=2):
        src = H.hom(x, y)
        tgt = G.hom(phi.obj[x], phi.obj[y])
        img = {phi.arr[h] for h in src}
        if len(img) != len(src) or img != set(tgt):
            w = (H.objects[x], H.objects[y], len(src), len(tgt))
            break
    rep.add("fully faithful", w is None, w)
    return rep.passed, rep


def iter_functors(H: FinGroupoid, G: FinGroupoid) -> Iterable[GroupoidFunctor]:
    """Every functor ``H → G`` by backtracking over generators of each component."""
    # pick for each connected component of H a root and spanning arrows
    comps = H.components
    choices_per_comp = []
    for comp in comps:
        root = comp[0]
        spanning = {root: H.ids[root]}
        for x in comp[1:]:
            spanning[x] = H.hom(root, x)[0]
        vgroup = H.hom(root, root)
        options = []
        for r in range(G.n_objects):
            # images of spanning arrows: any arrow out of r
            outs = [g for g in range(G.n_arrows) if G.dom[g] == r]
            for imgs in product(outs, repeat=len(comp) - 1):
                sp = {root: G.ids[r]}
                for x, g in zip(comp[1:], imgs):
                    sp[x] = g
                for hom in _group_homs(H, vgroup, G, G.hom(r, r)):
                    options.append((sp, hom))
        choices_per_comp.append((comp, spanning, options))
    for combo in product(*(opts for _, _, opts in choices_per_comp)):
        obj = [0] * H.n_objects
        arr = [0] * H.n_arrows
        for (comp, spanning, _), (sp, hom) in zip(choices_per_comp, combo):
            root = comp[0]
            for x in comp:
                obj[x] = G.cod[sp[x]]
            for a in range(H.n_arrows):
                if H.dom[a] not in comp:
                    continue
                x, y = H.dom[a], H.cod[a]
                # a = spanning[y] ∘ k ∘ spanning[x]⁻¹ with k in the root group
                k = H.comp(H.inv[spanning[y]], H.comp(a, spanning[x]))
                arr[a] = G.comp(sp[y], G.comp(hom[k], G.inv[sp[x]]))
        yield GroupoidFunctor(H, G, obj, arr, check=False)


def _group_homs(H: FinGroupoid, hs: list[int], G: FinGroupoid, gs: list[int]) -> list[dict[int, int]]:
    """All homomorphisms between vertex groups given as arrow lists.

    A homomorphism is fixed by the images of a generating set; each choice
    is extended along words and kept when consistent.
    """
    ident = next(a for a in hs if H.comp(a, a) == a)
    gens: list[int] = []
    span = {ident}
    for a in hs:
        if a not in span:
            gens.append(a)
            span = _closure(H, span | {a})
    g_ident = next(a for a in gs if G.comp(a, a) == a)
    out = []
    for images in product(gs, repeat=len(gens)):
        m = {ident: g_ident}
        frontier = [ident]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for gen, img in zip(gens, images):
                y = H.comp(x, gen)
                fy = G.comp(m[x], img)
                if y in m:
                    if m[y] != fy:
                        ok = False
                        break
                else:
                    m[y] = fy
                    frontier.append(y)
        if ok and all(G.comp(m[a], m[b]) == m[H.comp(a, b)] for a in hs for b in hs):
            out.append(m)
    return out


def _closure(H: FinGroupoid, elems: set[int]) -> set[int]:
    out = set(elems)
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                c = H.comp(a, b)
                if c is not None and c not in out:
                    out.add(c)
                    changed = True
    return out
