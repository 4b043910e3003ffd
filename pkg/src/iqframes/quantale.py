"""Unital involutive quantales, the quantale of a groupoid, and the axiom battery."""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import InvalidGroupoid, NoStableSupport, QuantaleMismatch
from .groupoid import FinGroupoid, validate
from .report import Report
from .suplat import FinSupLattice, bits

# full product tables are kept for carriers with at most this many atoms
TABLE_LIMIT = 10


class Quantale:
    """A finite unital involutive quantale on a sup-lattice of bitmasks."""

    def __init__(
        self,
        lattice: FinSupLattice,
        mul: Callable[[int, int], int],
        star: Callable[[int], int],
        e: int,
        name: str | None = None,
    ) -> None:
        self.lattice = lattice
        self._mul = mul
        self._star = star
        self.e = e
        self.name = name

    def mul(self, a: int, b: int) -> int:
        return self._mul(a, b)

    def star(self, a: int) -> int:
        return self._star(a)

    def prod(self, *xs: int) -> int:
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def elements(self) -> tuple[int, ...]:
        return self.lattice.elements

    def join(self, *xs: int) -> int:
        return self.lattice.join(*xs)

    def join_all(self, xs) -> int:
        return self.lattice.join_all(xs)

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return a & ~b == 0

    def spp(self, a: int) -> int:
        """``a1 ∧ e``; a support only when :func:`support` accepts it."""
        return self.mul(a, self.top) & self.e

    @cached_property
    def base_elements(self) -> tuple[int, ...]:
        """``Q_0 = ↓e``."""
        return tuple(a for a in self.elements if self.leq(a, self.e))

    @cached_property
    def partial_units(self) -> tuple[int, ...]:
        return partial_units(self)

    def render(self, a: int) -> str:
        return self.lattice.render(a)

    def __repr__(self) -> str:
        return f"Quantale({self.name or ''}, {len(self.elements)} elements)"


class GroupoidQuantale(Quantale):
    """``O(G)``: the powerset of arrows with pointwise product and inverse."""

    def __init__(self, groupoid: FinGroupoid) -> None:
        G = groupoid
        n = G.n_arrows
        self.groupoid = G
        self.n = n
        self.atom_prod = [
            [(1 << G.comp(g, h)) if G.dom[g] == G.cod[h] else 0 for h in range(n)]
            for g in range(n)
        ]
        # arrows composable on the right of g, i.e. h with cod(h) = dom(g)
        self.right_ok = [sum(1 << h for h in range(n) if G.cod[h] == G.dom[g]) for g in range(n)]
        e = sum(1 << i for i in G.ids)
        lattice = FinSupLattice(n, None, G.arrows)
        super().__init__(lattice, self._mul_loop, self._star_loop, e, name=G.name)
        self.table: np.ndarray | None = None
        self.star_table: np.ndarray | None = None
        if n <= TABLE_LIMIT:
            self.table, self.star_table = self._build_tables()

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        rows = []
        for g in range(n):
            r = np.zeros(1, dtype=np.int64)
            for k in range(n):
                r = np.concatenate([r, r | self.atom_prod[g][k]])
            rows.append(r)
        M = np.zeros((1, 1 << n), dtype=np.int64)
        for k in range(n):
            M = np.vstack([M, M | rows[k]])
        S = np.zeros(1, dtype=np.int64)
        for k in range(n):
            S = np.concatenate([S, S | (1 << self.groupoid.inv[k])])
        return M, S

    def _mul_loop(self, a: int, b: int) -> int:
        out = 0
        for g in bits(a):
            row = self.atom_prod[g]
            for h in bits(b & self.right_ok[g]):
                out |= row[h]
        return out

    def _star_loop(self, a: int) -> int:
        inv = self.groupoid.inv
        out = 0
        for g in bits(a):
            out |= 1 << inv[g]
        return out

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return self._mul_loop(a, b)

    def star(self, a: int) -> int:
        if self.star_table is not None:
            return int(self.star_table[a])
        return self._star_loop(a)

    def spp(self, a: int) -> int:
        """``{id_cod(g) : g ∈ a}``."""
        G = self.groupoid
        out = 0
        for g in bits(a):
            out |= 1 << G.ids[G.cod[g]]
        return out

    def atom(self, label: Hashable) -> int:
        return 1 << self.groupoid.arrow_index(label)

    def element(self, labels) -> int:
        return sum(1 << self.groupoid.arrow_index(x) for x in labels)

    @cached_property
    def partial_units(self) -> tuple[int, ...]:
        # a set of arrows is a partial unit iff cod and dom are injective on it
        G = self.groupoid
        out = []
        for a in range(1 << self.n):
            cods = [G.cod[g] for g in bits(a)]
            doms = [G.dom[g] for g in bits(a)]
            if len(set(cods)) == len(cods) and len(set(doms)) == len(doms):
                out.append(a)
        return tuple(out)


_SHARED: "weakref.WeakKeyDictionary[FinGroupoid, GroupoidQuantale]" = weakref.WeakKeyDictionary()


def shared_quantale(g: FinGroupoid) -> GroupoidQuantale:
    """``O(g)`` built once per groupoid object and reused."""
    q = _SHARED.get(g)
    if q is None:
        q = _SHARED[g] = GroupoidQuantale(g)
    return q


def quantale_of_groupoid(g: FinGroupoid) -> GroupoidQuantale:
    rep = validate(g)
    if not rep.passed:
        bad = rep.failures()[0]
        raise InvalidGroupoid(bad.name, witness=bad.witness)
    return GroupoidQuantale(g)


def partial_units(q: Quantale) -> tuple[int, ...]:
    """``Q_I = {s : ss* ∨ s*s ≤ e}`` by direct filtering."""
    out = []
    for s in q.elements:
        t = q.star(s)
        if q.leq(q.join(q.mul(s, t), q.mul(t, s)), q.e):
            out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# axiom battery


class _Tables:
    """Index-space tables of a quantale for vectorized checks."""

    def __init__(self, q: Quantale) -> None:
        self.q = q
        if isinstance(q, GroupoidQuantale) and q.table is not None:
            self.linear = True
            self.E = np.arange(1 << q.n, dtype=np.int64)
            self.M, self.S = q.table, q.star_table
            self.e, self.top, self.bot = q.e, q.top, 0
            self.powerset = True
        else:
            self.linear = False
            self.powerset = False
            els = list(q.elements)
            idx = {x: i for i, x in enumerate(els)}
            N = len(els)
            self.els = els
            self.E = np.arange(N, dtype=np.int64)
            self.M = np.array([[idx[q.mul(a, b)] for b in els] for a in els], dtype=np.int64)
            self.S = np.array([idx[q.star(a)] for a in els], dtype=np.int64)
            self.J = np.array([[idx[q.join(a, b)] for b in els] for a in els], dtype=np.int64)
            self.Mt = np.array([[idx[a & b] for b in els] for a in els], dtype=np.int64)
            self.L = np.array([[a & ~b == 0 for b in els] for a in els], dtype=bool)
            self.e, self.top, self.bot = idx[q.e], idx[q.top], idx[q.bottom]
            self.masks = np.array(els, dtype=object)

    def join(self, a, b):
        return a | b if self.powerset else self.J[a, b]

    def meet(self, a, b):
        return a & b if self.powerset else self.Mt[a, b]

    def leq(self, a, b):
        return (a & ~b) == 0 if self.powerset else self.L[a, b]

    def show(self, i) -> str:
        i = int(i)
        return self.q.render(i if self.powerset else self.els[i])


def _first(mask: np.ndarray) -> tuple | None:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def validate_iqf(q: Quantale) -> Report:
    """Inverse-quantal-frame axiom battery with one witness per failed check."""
    t = _Tables(q)
    rep = Report()
    M, S, E = t.M, t.S, t.E

    def add(name: str, bad: np.ndarray, fmt=None) -> None:
        w = _first(bad)
        if w is not None:
            w = [t.show(v) for v in w] if fmt is None else fmt(w)
        rep.add(name, w is None, w)

    # quantale laws
    if t.linear:
        G = q.groupoid
        n = q.n
        w = None
        for a in range(n):
            for b in range(n):
                ab = q.atom_prod[a][b]
                for c in range(n):
                    lhs = q.mul(ab, 1 << c)
                    rhs = q.mul(1 << a, q.atom_prod[b][c])
                    if lhs != rhs:
                        w = [G.label(a), G.label(b), G.label(c)]
        rep.add("associativity", w is None, w)
        low = E & -E
        nz = E[1:]
        add("join-preserving (left)", M[nz] != (M[nz & (nz - 1)] | M[low[1:]]),
            lambda w: [t.show(nz[w[0]]), t.show(w[1])])
        add("join-preserving (right)", M[:, nz] != (M[:, nz & (nz - 1)] | M[:, low[1:]]),
            lambda w: [t.show(w[0]), t.show(nz[w[1]])])
        rep.add("bottom absorbs", bool(np.all(M[0] == 0) and np.all(M[:, 0] == 0)))
    else:
        A = M[M[:, :, None], E[None, None, :]]
        B = M[E[:, None, None], M[None, :, :]]
        add("associativity", A != B)
        JL = M[E[:, None, None], t.J[None, :, :]]
        JR = t.J[M[:, :, None], M[:, None, :]]
        add("join-preserving (left)", JL != JR)
        JL = M[t.J[:, :, None], E[None, None, :]]
        JR = t.J[M[:, None, :], M[None, :, :]]
        add("join-preserving (right)", JL != JR)
        rep.add("bottom absorbs", bool(np.all(M[t.bot] == t.bot) and np.all(M[:, t.bot] == t.bot)))
    add("unit: ea = a = ae", (M[t.e] != E) | (M[:, t.e] != E))
    add("involution: a** = a", S[S] != E)
    add("involution: (ab)* = b*a*", S[M] != M[S][:, S].T)
    if t.powerset:
        nz = E[1:]
        add("involution preserves joins", S[nz] != (S[nz & (nz - 1)] | S[nz & -nz]))
    else:
        add("involution preserves joins", S[t.J] != t.J[S][:, S])

    # frame law
    if t.powerset:
        rep.add("frame law", True)
    else:
        w = q.lattice.is_distributive()
        rep.add("frame law", w is None, None if w is None else [q.render(x) for x in w])

    # support a ↦ a1 ∧ e
    spp = t.meet(M[:, t.top], t.e)
    aas = M[E, S[E]]
    add("support: spp(a) ≤ e", ~t.leq(spp, t.e))
    add("support: spp(a) ≤ aa*", ~t.leq(spp, aas))
    add("support: a ≤ spp(a)a", ~t.leq(E, M[spp, E]))
    add("support: a1 ∧ e = aa* ∧ e", spp != t.meet(aas, t.e))
    add("stability: spp(ab) = spp(a spp(b))", spp[M] != spp[M[:, spp]])
    q0 = E[t.leq(E, t.e)]
    add("stability: spp(ba) = b spp(a) for b ≤ e",
        spp[M[q0]] != M[q0][:, spp], lambda w: [t.show(q0[w[0]]), t.show(w[1])])
    add("ba = b1 ∧ a for b ≤ e",
        M[q0] != t.meet(M[q0, t.top][:, None], E[None, :]),
        lambda w: [t.show(q0[w[0]]), t.show(w[1])])
    add("spp(a)1 = a1", M[spp, t.top] != M[:, t.top])
    add("spp(b) = b for b ≤ e", spp[q0] != q0, lambda w: [t.show(q0[w[0]])])
    add("Q0 is a locale with meet = product",
        M[q0][:, q0] != t.meet(q0[:, None], q0[None, :]),
        lambda w: [t.show(q0[w[0]]), t.show(q0[w[1]])])

    # partial units
    pu = t.leq(t.join(M[E, S[E]], M[S[E], E]), t.e)
    cover = t.bot
    for i in E[pu]:
        cover = t.join(cover, i)
    rep.add("partial units cover: ⋁Q_I = 1", int(cover) == int(t.top),
            None if int(cover) == int(t.top) else t.show(cover))
    aasa = M[aas, E]
    add("a ≤ aa*a", ~t.leq(E, aasa))
    add("stably Gelfand: aa*a ≤ a ⟹ aa*a = a", t.leq(aasa, E) & (aasa != E))
    return rep


@dataclass(frozen=True)
class SupportOp:
    owner: Quantale
    table: dict[int, int]

    def __call__(self, a: int) -> int:
        return self.table[a]


def support(q: Quantale) -> SupportOp:
    """The stable support ``a ↦ a1 ∧ e`` after checking it is one."""
    rep = validate_iqf(q)
    for c in rep.checks:
        if (c.name.startswith("support") or c.name.startswith("stability")
                or c.name.startswith("spp")) and not c.passed:
            raise NoStableSupport(c.name, witness=c.witness)
    return SupportOp(q, {a: q.mul(a, q.top) & q.e for a in q.elements})


def groupoid_of_quantale(q: Quantale) -> FinGroupoid:
    """Rebuild the groupoid of an inverse quantal frame on a powerset.

    Arrows are the atoms, objects the atoms below ``e``; ``cod = spp`` and
    ``dom = spp∘(-)*``; composition is the product of atoms.
    """
    if not q.lattice.is_powerset:
        raise QuantaleMismatch("groupoid reconstruction needs a powerset carrier")
    n = q.lattice.size
    atoms = [1 << i for i in range(n)]
    objs = [i for i in range(n) if atoms[i] & ~q.e == 0]
    obj_pos = {atoms[i]: k for k, i in enumerate(objs)}
    dom, cod, inv = [], [], []
    for a in atoms:
        s, d = q.spp(a), q.spp(q.star(a))
        if s not in obj_pos or d not in obj_pos:
            raise QuantaleMismatch("atom is not a partial unit between points", witness=a)
        cod.append(obj_pos[s])
        dom.append(obj_pos[d])
        inv.append(q.star(a).bit_length() - 1)
    comp = {}
    for g in range(n):
        for h in range(n):
            if dom[g] == cod[h]:
                gh = q.mul(atoms[g], atoms[h])
                if gh == 0 or gh & (gh - 1):
                    raise QuantaleMismatch("product of composable atoms is not an atom",
                                           witness=(g, h))
                comp[(g, h)] = gh.bit_length() - 1
    labels = q.lattice.labels
    return FinGroupoid(
        [labels[i] for i in objs],
        list(labels),
        dom,
        cod,
        comp,
        inv,
        [i for i in objs],
        name=q.name,
    )


def quantale_from_tables(
    elements: Sequence[Hashable],
    join_irreducibles: Sequence[Hashable] | None,
    product: dict[tuple[Hashable, Hashable], Hashable],
    involution: dict[Hashable, Hashable],
    unit: Hashable,
    leq: Sequence[tuple[Hashable, Hashable]],
    name: str | None = None,
) -> Quantale:
    """A quantale from explicit finite tables over named elements.

    The order is given by ``leq`` pairs and must be a complete lattice.
    """
    els = list(elements)
    idx = {x: i for i, x in enumerate(els)}
    n = len(els)
    mat = [[i == j for j in range(n)] for i in range(n)]
    for a, b in leq:
        mat[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if mat[i][k]:
                for j in range(n):
                    if mat[k][j]:
                        mat[i][j] = True
    lat = FinSupLattice.from_order(mat)
    lat.labels = tuple(els)
    mask_of = {x: lat.principal[idx[x]] for x in els}
    name_of = {m: x for x, m in mask_of.items()}
    mul_t = {(mask_of[a], mask_of[b]): mask_of[c] for (a, b), c in product.items()}
    star_t = {mask_of[a]: mask_of[b] for a, b in involution.items()}
    q = Quantale(lat, lambda a, b: mul_t[(a, b)], lambda a: star_t[a], mask_of[unit], name=name)
    q.render = lambda a: str(name_of[a])  # type: ignore[method-assign]
    return q


def chain3() -> Quantale:
    """The chain ``0 < e < 1`` with ``1·1 = 1`` and trivial involution."""
    els = ["0", "e", "1"]
    prod = {}
    for a in els:
        for b in els:
            if "0" in (a, b):
                prod[(a, b)] = "0"
            elif a == "e":
                prod[(a, b)] = b
            elif b == "e":
                prod[(a, b)] = a
            else:
                prod[(a, b)] = "1"
    return quantale_from_tables(
        els, None, prod, {x: x for x in els}, "e", [("0", "e"), ("e", "1")], name="C3"
    )
