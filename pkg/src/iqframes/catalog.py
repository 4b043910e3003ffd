"""Deterministic catalogs of small groupoids, actions, functors and bisheaves.

Groupoids are enumerated up to isomorphism as multisets of connected
components ``(n objects, vertex group K)``; a component has ``n²|K|`` arrows.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from .bimodule import QRBisheaf, orbit_bisheaf, unit_bisheaf
from .groupoid import (
    BiAction,
    FinGroupoid,
    GAction,
    GroupoidFunctor,
    bundle_of_functor,
    groupoid_iso_class,
    iter_functors,
)
from .groups import small_groups, subgroup_classes
from .locale import BLocale, FinLocale

_ORDER = ["Z1", "Z2", "Z3", "V4", "Z4", "Z5", "S3", "Z6", "Z7", "D4", "Q8", "Z2^3", "Z2xZ4", "Z8"]


def _component(n: int, gname: str) -> FinGroupoid:
    K = small_groups()[gname]
    if n == 1:
        G = FinGroupoid.from_group(K, name="T" if gname == "Z1" else gname)
    elif gname == "Z1":
        G = FinGroupoid.pair(n)
    else:
        G = FinGroupoid.connected(n, K, name=f"P{n}({gname})")
    return G


def _component_types(max_objects: int, max_arrows: int) -> list[tuple[int, str]]:
    groups = small_groups()
    out = []
    for n in range(1, max_objects + 1):
        for gname in _ORDER:
            if n * n * groups[gname].order <= max_arrows:
                out.append((n, gname))
    return out


def build_groupoid(parts: tuple[tuple[int, str], ...]) -> FinGroupoid:
    comps = [_component(n, g) for n, g in parts]
    if len(comps) == 1:
        return comps[0]
    # relabel objects consecutively so that names never clash
    G = FinGroupoid.disjoint_union(*comps, name="+".join(c.name for c in comps))
    return G


@lru_cache(maxsize=None)
def catalog_groupoids(
    max_objects: int = 3, max_arrows: int = 8, include_pairs: bool = True
) -> tuple[FinGroupoid, ...]:
    """Every groupoid with at most ``max_objects`` objects and ``max_arrows`` arrows.

    With ``include_pairs`` the pair groupoids ``P_n`` for ``n ≤ max_objects``
    are added even when they exceed the arrow bound.
    """
    types = _component_types(max_objects, max_arrows)
    groups = small_groups()
    found: list[FinGroupoid] = []
    seen = set()
    for k in range(1, max_objects + 1):
        for parts in combinations_with_replacement(types, k):
            if sum(n for n, _ in parts) > max_objects:
                continue
            if sum(n * n * groups[g].order for n, g in parts) > max_arrows:
                continue
            G = build_groupoid(parts)
            key = groupoid_iso_class(G)
            if key not in seen:
                seen.add(key)
                found.append(G)
    if include_pairs:
        for n in range(2, max_objects + 1):
            G = FinGroupoid.pair(n)
            key = groupoid_iso_class(G)
            if key not in seen:
                seen.add(key)
                found.append(G)
    found.sort(key=lambda G: (G.n_arrows, G.n_objects, G.name))
    return tuple(found)


def groupoid_by_name(name: str) -> FinGroupoid:
    for G in catalog_groupoids():
        if G.name == name:
            return G
    raise KeyError(name)


# ---------------------------------------------------------------------------
# actions


def transitive_action(G: FinGroupoid, component: tuple[int, ...], subgroup: frozenset[int]) -> GAction:
    """``G`` acting on the cosets ``gL`` of arrows out of the component root.

    ``subgroup`` is given as positions in ``G.vertex_group(root)``.
    """
    root = component[0]
    vg_arrows = G.hom(root, root)
    vg_arrows.remove(G.ids[root])
    vg_arrows.insert(0, G.ids[root])
    L = [vg_arrows[i] for i in sorted(subgroup)]
    out_arrows = [g for g in range(G.n_arrows) if G.dom[g] == root]
    cls: dict[int, int] = {}
    reps: list[int] = []
    for g in out_arrows:
        if g in cls:
            continue
        k = len(reps)
        reps.append(g)
        for l in L:
            cls[G.comp(g, l)] = k
    carrier = [f"{G.label(g)}L" if len(L) > 1 else G.label(g) for g in reps]
    act = {}
    for k, g in enumerate(reps):
        for a in range(G.n_arrows):
            if G.dom[a] == G.cod[g]:
                act[(a, k)] = cls[G.comp(a, g)]
    return GAction(G, carrier, [G.cod[g] for g in reps], act, check=False)


def disjoint_actions(G: FinGroupoid, parts: list[GAction]) -> GAction:
    carrier: list = []
    anchor: list[int] = []
    act: dict[tuple[int, int], int] = {}
    for c, a in enumerate(parts):
        off = len(carrier)
        carrier += [f"{c}:{x}" for x in a.carrier] if len(parts) > 1 else list(a.carrier)
        anchor += list(a.anchor)
        for (g, x), y in a.table.items():
            act[(g, x + off)] = y + off
    return GAction(G, carrier, anchor, act, check=False)


@lru_cache(maxsize=None)
def _orbit_types(G: FinGroupoid) -> tuple[tuple[int, tuple[int, ...], frozenset[int]], ...]:
    out = []
    for comp in G.components:
        K = G.vertex_group(comp[0])
        for L in subgroup_classes(K):
            out.append((len(comp) * K.order // len(L), comp, L))
    return tuple(out)


def catalog_actions(G: FinGroupoid, max_points: int = 4) -> list[GAction]:
    """All nonempty ``G``-sets with at most ``max_points`` points, up to isomorphism."""
    types = _orbit_types(G)
    out = []
    for k in range(1, max_points + 1):
        for combo in combinations_with_replacement(range(len(types)), k):
            if sum(types[i][0] for i in combo) > max_points:
                continue
            parts = [transitive_action(G, types[i][1], types[i][2]) for i in combo]
            out.append(disjoint_actions(G, parts))
    return out


def catalog_sheaves(max_points: int = 4, max_objects: int = 3):
    """Pairs ``(G, action)`` over the whole groupoid catalog."""
    for G in catalog_groupoids(max_objects):
        for a in catalog_actions(G, max_points):
            yield G, a


# ---------------------------------------------------------------------------
# functors and bisheaves


def small_groupoids(max_arrows: int = 4, max_objects: int = 3) -> tuple[FinGroupoid, ...]:
    return tuple(G for G in catalog_groupoids(max_objects) if G.n_arrows <= max_arrows)


def catalog_functors(max_arrows: int = 4, max_objects: int = 3) -> list[GroupoidFunctor]:
    """Every functor between catalog groupoids with at most ``max_arrows`` arrows."""
    gs = small_groupoids(max_arrows, max_objects)
    return [f for H in gs for G in gs for f in iter_functors(H, G)]


def catalog_bisheaves(
    max_points: int = 4, functor_arrows: int = 4, max_objects: int = 3
) -> list[tuple[str, QRBisheaf]]:
    """Named bisheaves: orbit bisheaves of catalog actions, unit bisheaves,
    functor bundles and their duals."""
    from .bimodule import dual

    out: list[tuple[str, QRBisheaf]] = []
    for G in catalog_groupoids(max_objects):
        out.append((f"unit {G.name}", unit_bisheaf(G)))
    for G in small_groupoids(functor_arrows, max_objects):
        for i, a in enumerate(catalog_actions(G, max_points)):
            out.append((f"orbits {G.name}#{i}", orbit_bisheaf(a)))
    for i, f in enumerate(catalog_functors(functor_arrows, max_objects)):
        X = QRBisheaf(bundle_of_functor(f))
        tag = f"⟨φ{i}: {f.source.name}→{f.target.name}⟩"
        out.append((tag, X))
        out.append((tag + "*", dual(X)))
    return out


def tautological(G: FinGroupoid) -> BiAction:
    return BiAction.tautological(G)


# ---------------------------------------------------------------------------
# finite locales


def _relabel(order: frozenset[tuple[int, int]], perm: tuple[int, ...]) -> tuple:
    return tuple(sorted((perm[a], perm[b]) for a, b in order))


def _strict_order(L: FinLocale) -> frozenset[tuple[int, int]]:
    n = len(L)
    return frozenset((a, b) for a in range(n) for b in range(n) if a != b and L.leq_points(a, b))


@lru_cache(maxsize=None)
def catalog_posets(max_points: int = 3) -> tuple[FinLocale, ...]:
    """Finite locales on at most ``max_points`` points, one per poset isomorphism class."""
    out: list[FinLocale] = []
    for n in range(1, max_points + 1):
        seen: set[tuple] = set()
        pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        for mask in range(1 << len(pairs)):
            rel = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            try:
                L = FinLocale(n, rel)
            except ValueError:
                continue
            strict = _strict_order(L)
            if len(strict) != len(rel):
                continue  # keep transitively closed relations only
            key = min(_relabel(strict, p) for p in permutations(range(n)))
            if key not in seen:
                seen.add(key)
                out.append(FinLocale(n, key))
    return tuple(out)


def catalog_blocales(B: FinLocale, max_points: int = 3) -> list[BLocale]:
    """B-locales over ``B`` with carriers of at most ``max_points`` points, up to isomorphism over ``B``."""
    out: list[BLocale] = []
    for X in catalog_posets(max_points):
        n = len(X)
        strict = _strict_order(X)
        seen: set[tuple] = set()
        for anchor in product(range(len(B)), repeat=n):
            if any(not B.leq_points(anchor[a], anchor[b]) for a, b in strict):
                continue
            key = min(
                (_relabel(strict, p), tuple(anchor[p.index(i)] for i in range(n)))
                for p in permutations(range(n))
            )
            if key in seen:
                continue
            seen.add(key)
            out.append(BLocale(B, X, anchor))
    return out
