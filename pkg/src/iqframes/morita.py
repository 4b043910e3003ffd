"""Hilsum–Skandalis maps between groupoid quantales and the Morita decision.

The search for a biprincipal bisheaf runs over disjoint unions of
transitive bi-actions.  A transitive ``G``-``H`` bi-action is ``(g, h)``
modulo ``(g·a, h) ~ (g, φ(a)·h)`` for a homomorphism ``φ: A → K_H`` on a
subgroup ``A`` of a root vertex group; freeness on both sides forces ``φ``
to be injective, which is the pruning applied before validation.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any

from .bimodule import (
    QRBisheaf,
    bimodule_iso,
    canonical_form,
    dual,
    is_biprincipal,
    is_principal,
    same_groupoid,
    tensor_compose,
    unit_bisheaf,
)
from .errors import Inconclusive, InvalidGroupoid, NotPrincipal, QuantaleMismatch
from .groupoid import (
    BiAction,
    FinGroupoid,
    GAction,
    GroupoidFunctor,
    bundle_of_functor,
    orbits_isotropy,
    validate,
)
from .groups import canonical_table, group_name
from .quantale import GroupoidQuantale, shared_quantale
from .report import Report


@dataclass
class HSMap:
    """The isomorphism class of a principal ``O(G)``-``O(H)``-bisheaf, ``H → G``."""

    rep: QRBisheaf
    canon: tuple = field(init=False)

    def __post_init__(self) -> None:
        if not is_principal(self.rep).principal:
            raise NotPrincipal("representative is not a principal bisheaf")
        self.canon = canonical_form(self.rep)

    @property
    def source(self) -> FinGroupoid:
        return self.rep.H

    @property
    def target(self) -> FinGroupoid:
        return self.rep.G

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HSMap)
            and same_groupoid(self.source, other.source)
            and same_groupoid(self.target, other.target)
            and self.canon == other.canon
        )

    def __hash__(self) -> int:
        return hash(self.canon)


def hs_identity(G: FinGroupoid, Q: GroupoidQuantale | None = None) -> HSMap:
    return HSMap(unit_bisheaf(G, Q))


def hs_of_functor(phi: GroupoidFunctor) -> HSMap:
    return HSMap(QRBisheaf(bundle_of_functor(phi)))


def hs_compose(f: HSMap, g: HSMap) -> HSMap:
    """``f ∘ g`` represented by ``X_f ⊗ X_g``; raises QuantaleMismatch."""
    if not same_groupoid(f.source, g.target):
        raise QuantaleMismatch("HS maps are not composable", witness=(f.source.name, g.target.name))
    return HSMap(tensor_compose(f.rep, g.rep))


@dataclass
class Invertibility:
    invertible: bool
    inverse: HSMap | None
    report: Report


def is_hs_invertible(f: HSMap) -> Invertibility:
    """Biprincipality of the representative, with the inverse ``X*`` and unit isos."""
    X = f.rep
    bp = is_biprincipal(X)
    rep = Report()
    rep.add("biprincipal", bool(bp.biprincipal))
    if not bp.biprincipal:
        return Invertibility(False, None, rep)
    D = dual(X)
    inv = HSMap(D)
    rep.add("X ⊗ X* ≅ unit", bool(bimodule_iso(tensor_compose(X, D), unit_bisheaf(X.G, X.Q))))
    rep.add("X* ⊗ X ≅ unit", bool(bimodule_iso(tensor_compose(D, X), unit_bisheaf(X.H, X.R))))
    return Invertibility(rep.passed, inv, rep)


# ---------------------------------------------------------------------------
# oracle


def morita_invariant(G: FinGroupoid) -> tuple:
    """Sorted isotropy classes, one per connected component."""
    return tuple(sorted(t for _, t in orbits_isotropy(G)))


def morita_oracle(g1: FinGroupoid, g2: FinGroupoid) -> bool:
    return morita_invariant(g1) == morita_invariant(g2)


def minimal_witness_size(g1: FinGroupoid, g2: FinGroupoid) -> int | None:
    """Size of the smallest biprincipal bisheaf when the oracle says equivalent.

    Matched components with ``n`` and ``m`` objects and isotropy ``K``
    contribute ``n·m·|K|`` points; an optimal matching pairs sizes in order.
    """
    if not morita_oracle(g1, g2):
        return None
    def comps(G):
        return sorted(
            (canonical_table(G.vertex_group(c[0]).table), len(c)) for c in G.components
        )
    total = 0
    a, b = comps(g1), comps(g2)
    i = 0
    while i < len(a):
        j = i
        while j < len(a) and a[j][0] == a[i][0]:
            j += 1
        sizes1 = sorted(n for _, n in a[i:j])
        sizes2 = sorted(n for _, n in b[i:j])
        k = len(a[i][0])
        # rearrangement inequality: pairing ascending with descending is minimal
        total += sum(x * y * k for x, y in zip(sizes1, reversed(sizes2)))
        i = j
    return total


# ---------------------------------------------------------------------------
# search


def _subgroups_as_arrows(G: FinGroupoid, root: int) -> list[list[int]]:
    vg = G.hom(root, root)
    vg.remove(G.ids[root])
    vg.insert(0, G.ids[root])
    group = G.vertex_group(root)
    return [[vg[i] for i in sorted(s)] for s in group.subgroups()]


def _injective_homs(G: FinGroupoid, A: list[int], H: FinGroupoid, KH: list[int]) -> list[dict[int, int]]:
    """Injective homomorphisms from the arrow subgroup ``A`` into ``KH``."""
    ident = A[0]
    gens: list[int] = []
    span = {ident}
    for a in A:
        if a not in span:
            gens.append(a)
            span = _close(G, span | {a})
    out = []
    h_ident = next(h for h in KH if H.comp(h, h) == h)
    for images in product(KH, repeat=len(gens)):
        m = {ident: h_ident}
        frontier = [ident]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for gen, img in zip(gens, images):
                y = G.comp(x, gen)
                fy = H.comp(m[x], img)
                if y in m:
                    if m[y] != fy:
                        ok = False
                        break
                else:
                    m[y] = fy
                    frontier.append(y)
        if ok and len(set(m.values())) == len(m):
            if all(H.comp(m[a], m[b]) == m[G.comp(a, b)] for a in A for b in A):
                out.append(m)
    return out


def _close(G: FinGroupoid, s: set[int]) -> set[int]:
    s = set(s)
    while True:
        new = {G.comp(a, b) for a in s for b in s} - s
        if not new:
            return s
        s |= new


def transitive_biaction(
    G: FinGroupoid, H: FinGroupoid, rg: int, rh: int, phi: dict[int, int]
) -> BiAction:
    """Points ``g·x0·h`` with ``a·x0 = x0·φ(a)`` for ``a`` in the domain of ``φ``."""
    outs = [g for g in range(G.n_arrows) if G.dom[g] == rg]
    ins = [h for h in range(H.n_arrows) if H.cod[h] == rh]
    pairs = [(g, h) for g in outs for h in ins]
    idx = {pr: k for k, pr in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for (g, h), k in idx.items():
        for a, b in phi.items():
            j = idx[(G.comp(g, a), h)]
            i = idx[(g, H.comp(b, h))]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(k) for k in range(len(pairs))})
    cls = {r: i for i, r in enumerate(roots)}
    of = [cls[find(k)] for k in range(len(pairs))]
    carrier = [f"{G.label(pairs[r][0])}·x·{H.label(pairs[r][1])}" for r in roots]
    p = [G.cod[pairs[r][0]] for r in roots]
    q = [H.dom[pairs[r][1]] for r in roots]
    lt, rt = {}, {}
    for i, r in enumerate(roots):
        g, h = pairs[r]
        for k in range(G.n_arrows):
            if G.dom[k] == G.cod[g]:
                lt[(k, i)] = of[idx[(G.comp(k, g), h)]]
        for k in range(H.n_arrows):
            # stored right action: k acts as x·k⁻¹
            if H.dom[k] == H.dom[h]:
                rt[(k, i)] = of[idx[(g, H.comp(h, H.inv[k]))]]
    left = GAction(G, carrier, p, lt, check=False)
    right = GAction(H, carrier, q, rt, check=False)
    return BiAction(left, right, check=False)


def union_biactions(parts: list[BiAction]) -> BiAction:
    G, H = parts[0].G, parts[0].H
    carrier: list = []
    p: list[int] = []
    q: list[int] = []
    lt: dict = {}
    rt: dict = {}
    for c, b in enumerate(parts):
        off = len(carrier)
        carrier += [f"{c}:{x}" for x in b.carrier] if len(parts) > 1 else list(b.carrier)
        p += list(b.p)
        q += list(b.q)
        for (g, x), y in b.left.table.items():
            lt[(g, x + off)] = y + off
        for (h, x), y in b.right.table.items():
            rt[(h, x + off)] = y + off
    return BiAction(GAction(G, carrier, p, lt, check=False), GAction(H, carrier, q, rt, check=False),
                    check=False)


def _graph_key(G: FinGroupoid, H: FinGroupoid, rg: int, rh: int, phi: dict[int, int]) -> tuple:
    """The stabilizer graph ``{(a, φ(a))}`` up to conjugation in ``K_G × K_H``.

    Two transitive bi-actions on the same roots are isomorphic exactly when
    their stabilizer graphs are conjugate.
    """
    best = None
    for k in G.hom(rg, rg):
        ki = G.inv[k]
        for l in H.hom(rh, rh):
            li = H.inv[l]
            conj = tuple(sorted(
                (G.comp(G.comp(k, a), ki), H.comp(H.comp(l, b), li)) for a, b in phi.items()
            ))
            if best is None or conj < best:
                best = conj
    return (rg, rh, best)


@lru_cache(maxsize=256)
def orbit_types(G: FinGroupoid, H: FinGroupoid) -> tuple[BiAction, ...]:
    """Transitive bi-actions with free stabilizer data, one per isomorphism class."""
    found: dict[tuple, tuple[int, int, dict[int, int]]] = {}
    for cg in G.components:
        rg = cg[0]
        for ch in H.components:
            rh = ch[0]
            KH = H.hom(rh, rh)
            for A in _subgroups_as_arrows(G, rg):
                for phi in _injective_homs(G, A, H, KH):
                    key = _graph_key(G, H, rg, rh, phi)
                    found.setdefault(key, (rg, rh, phi))
    built = [transitive_biaction(G, H, *found[k]) for k in sorted(found)]
    return tuple(sorted(built, key=len))


@dataclass
class MoritaVerdict:
    equivalent: bool
    witness: Any
    oracle_agrees: bool
    candidates: int = 0
    report: Report = field(default_factory=Report)

    def to_json(self) -> dict:
        out = {
            "equivalent": self.equivalent,
            "oracle_agrees": self.oracle_agrees,
            "candidates_examined": self.candidates,
            "checks": self.report.to_json(),
        }
        if isinstance(self.witness, QRBisheaf):
            out["witness"] = {
                "points": [str(x) for x in self.witness.carrier],
                "p": [str(self.witness.G.objects[i]) for i in self.witness.p],
                "q": [str(self.witness.H.objects[i]) for i in self.witness.q],
            }
        else:
            out["witness"] = self.witness
        return out


def _candidates(G: FinGroupoid, H: FinGroupoid, bound: int, prune: bool = True) -> list[tuple[int, ...]]:
    """Multisets of orbit types with at most ``bound`` points and surjective anchors.

    With ``prune`` the anchor images must also be pairwise disjoint, which any
    bisheaf that is a principal bundle on both sides satisfies; every
    candidate is still decided by ``is_biprincipal``.
    """
    types = orbit_types(G, H)
    sizes = [len(t) for t in types]
    pcover = [frozenset(t.p) for t in types]
    qcover = [frozenset(t.q) for t in types]
    allp, allq = frozenset(range(G.n_objects)), frozenset(range(H.n_objects))
    out: list[tuple[int, ...]] = []

    def grow(combo: list[int], first: int, room: int, ps: frozenset, qs: frozenset) -> None:
        if combo and ps == allp and qs == allq:
            out.append(tuple(combo))
            if prune:
                return
        for i in range(first, len(types)):
            if sizes[i] > room:
                continue
            if prune and (ps & pcover[i] or qs & qcover[i]):
                continue
            combo.append(i)
            grow(combo, i, room - sizes[i], ps | pcover[i], qs | qcover[i])
            combo.pop()

    grow([], 0, bound, frozenset(), frozenset())
    out.sort(key=lambda c: (len(c), c))
    return out


def _test_chunk(args) -> int | None:
    G, H, combos = args
    types = orbit_types(G, H)
    Q, R = shared_quantale(G), shared_quantale(H)
    for k, combo in enumerate(combos):
        b = union_biactions([types[i] for i in combo])
        if is_biprincipal(QRBisheaf(b, Q, R)).biprincipal:
            return k
    return None


def decide_morita(
    g1: FinGroupoid,
    g2: FinGroupoid,
    bound: int | None = None,
    threads: int = 1,
    prune: bool = True,
) -> MoritaVerdict:
    """Search for a biprincipal ``O(g1)``-``O(g2)``-bisheaf with at most ``bound`` points.

    Raises Inconclusive when no witness exists within the bound although the
    oracle reports equivalence.
    """
    for G in (g1, g2):
        rep = validate(G)
        if not rep.passed:
            raise InvalidGroupoid(rep.failures()[0].name)
    if bound is None:
        bound = max(g1.n_arrows, g2.n_arrows)
    combos = _candidates(g1, g2, bound, prune)
    hit: int | None = None
    if threads > 1 and len(combos) > 1:
        n = threads
        chunks = [(g1, g2, combos[i::n]) for i in range(n)]
        with ProcessPoolExecutor(max_workers=n) as ex:
            results = list(ex.map(_test_chunk, chunks))
        # chunk i holds combos i, i+n, ...; the first witness in global order wins
        found = [i + r * n for i, r in enumerate(results) if r is not None]
        hit = min(found) if found else None
    else:
        hit = _test_chunk((g1, g2, combos))
    oracle = morita_oracle(g1, g2)
    if hit is None:
        minimal = minimal_witness_size(g1, g2)
        if oracle:
            raise Inconclusive(bound, minimal)
        return MoritaVerdict(False, {"invariant_1": _named(g1), "invariant_2": _named(g2)},
                             True, len(combos))
    types = orbit_types(g1, g2)
    X = QRBisheaf(union_biactions([types[i] for i in combos[hit]]))
    rep = Report()
    inv = is_hs_invertible(HSMap(X))
    rep.extend(inv.report)
    D = dual(X)
    rep.add("X* is a principal bisheaf", is_principal(D).principal)
    return MoritaVerdict(True, X, oracle, hit + 1, rep)


def _named(G: FinGroupoid) -> list[str]:
    return sorted(group_name(t) for t in morita_invariant(G))
