"""Small finite groups as multiplication tables, with canonical forms.

Element ``0`` is always the identity.  Canonical forms are exact
isomorphism invariants: relabel the group by breadth-first search from
every minimal generating tuple and keep the lexicographically least table.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

Table = tuple[tuple[int, ...], ...]


class Group:
    """A finite group on ``0..n-1`` with identity ``0``."""

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        self.table: Table = tuple(tuple(r) for r in table)
        n = len(self.table)
        self.order = n
        if names is None:
            names = ["e"] + [f"k{i}" for i in range(1, n)]
        self.names = tuple(names)
        self.inv = tuple(next(j for j in range(n) if self.table[i][j] == 0) for i in range(n))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def canon(self) -> Table:
        return canonical_table(self.table)

    @property
    def name(self) -> str:
        return group_name(self.table)

    def subgroups(self) -> list[frozenset[int]]:
        return subgroups(self.table)

    def __repr__(self) -> str:
        return f"Group({self.name})"


def is_group(table: Sequence[Sequence[int]]) -> bool:
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        return False
    if any(table[0][i] != i or table[i][0] != i for i in range(n)):
        return False
    for row in table:
        if sorted(row) != list(range(n)):
            return False
    return all(
        table[table[a][b]][c] == table[a][table[b][c]]
        for a in range(n)
        for b in range(n)
        for c in range(n)
    )


def _generated(table: Table, gens: Sequence[int]) -> list[int]:
    """BFS labelling of the subgroup generated by ``gens``."""
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        x = order[i]
        for g in gens:
            y = table[x][g]
            if y not in seen:
                seen.add(y)
                order.append(y)
        i += 1
    return order


@lru_cache(maxsize=None)
def canonical_table(table: Table) -> Table:
    n = len(table)
    if n == 1:
        return table
    for d in range(1, n):
        best = None
        for gens in product(range(1, n), repeat=d):
            order = _generated(table, gens)
            if len(order) != n:
                continue
            pos = {x: i for i, x in enumerate(order)}
            relabeled = tuple(tuple(pos[table[a][b]] for b in order) for a in order)
            if best is None or relabeled < best:
                best = relabeled
        if best is not None:
            return best
    raise ValueError("not a group")  # pragma: no cover


def cyclic(n: int) -> Group:
    names = ["e", "g"] + [f"g{i}" for i in range(2, n)]
    return Group([[(a + b) % n for b in range(n)] for a in range(n)], names[:n])


def direct_product(g: Group, h: Group) -> Group:
    m = h.order
    n = g.order * m
    table = [
        [g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(n)] for a in range(n)
    ]
    names = [f"{x}{y}" for x in g.names for y in h.names]
    return Group(table, ["e"] + names[1:])


def opposite(g: Group) -> Group:
    return Group([[g.mul(b, a) for b in range(g.order)] for a in range(g.order)], g.names)


def _perm_group(perms: list[tuple[int, ...]]) -> Group:
    ident = tuple(range(len(perms[0])))
    perms = [ident] + [p for p in perms if p != ident]
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(a[b[k]] for k in range(len(a)))] for b in perms] for a in perms]
    return Group(table)


def symmetric3() -> Group:
    return _perm_group(sorted(permutations(range(3))))


def dihedral4() -> Group:
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    elems = {tuple(range(4))}
    frontier = list(elems)
    while frontier:
        p = frontier.pop()
        for g in (r, s):
            q = tuple(p[g[k]] for k in range(4))
            if q not in elems:
                elems.add(q)
                frontier.append(q)
    return _perm_group(sorted(elems))


def quaternion() -> Group:
    # elements ±1, ±i, ±j, ±k encoded as (sign, unit) with units 1,i,j,k
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, u) for u in range(4) for s in (1, -1)]
    idx = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = unit_mul[(u1, u2)]
            row.append(idx[(s1 * s2 * s, u)])
        table.append(row)
    return Group(table)


@lru_cache(maxsize=None)
def small_groups() -> dict[str, Group]:
    """Every group of order at most 8, one per isomorphism class."""
    z2 = cyclic(2)
    out = {f"Z{n}": cyclic(n) for n in range(1, 9)}
    out["V4"] = direct_product(z2, z2)
    out["Z2xZ4"] = direct_product(z2, cyclic(4))
    out["Z2^3"] = direct_product(z2, direct_product(z2, z2))
    out["S3"] = symmetric3()
    out["D4"] = dihedral4()
    out["Q8"] = quaternion()
    return out


@lru_cache(maxsize=None)
def _names_by_canon() -> dict[Table, str]:
    return {g.canon: name for name, g in small_groups().items()}


def group_name(table: Table) -> str:
    """Standard name for groups of order ≤ 8, else ``G<order>``."""
    return _names_by_canon().get(canonical_table(tuple(map(tuple, table))), f"G{len(table)}")


@lru_cache(maxsize=None)
def subgroups(table: Table) -> list[frozenset[int]]:
    """All subgroups, sorted by size then elements."""
    n = len(table)
    found = {frozenset([0])}
    frontier = list(found)
    while frontier:
        h = frontier.pop()
        for g in range(n):
            if g in h:
                continue
            k = frozenset(_generated(table, sorted(h) + [g]))
            if k not in found:
                found.add(k)
                frontier.append(k)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def conjugate(table: Table, inv: Sequence[int], h: frozenset[int], g: int) -> frozenset[int]:
    return frozenset(table[table[g][x]][inv[g]] for x in h)


def subgroup_classes(group: Group) -> list[frozenset[int]]:
    """One representative per conjugacy class of subgroups."""
    reps: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for h in group.subgroups():
        if h in seen:
            continue
        reps.append(h)
        for g in range(group.order):
            seen.add(conjugate(group.table, group.inv, h, g))
    return reps
