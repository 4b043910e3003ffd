"""Independent reference computations used by the tests.

These work on plain Python sets and tuples read off the raw groupoid tables.
They share no code with the package beyond the table accessors.
"""

from __future__ import annotations

from itertools import combinations, permutations


def set_product(G, A, B):
    return frozenset(G.comp(g, h) for g in A for h in B if G.dom[g] == G.cod[h])


def set_star(G, A):
    return frozenset(G.inv[g] for g in A)


def identities(G):
    return frozenset(G.ids)


def is_partial_bijection(G, S):
    """Partial units of ``O(G)`` are the arrow sets on which dom and cod are injective."""
    doms = [G.dom[g] for g in S]
    cods = [G.cod[g] for g in S]
    return len(set(doms)) == len(doms) and len(set(cods)) == len(cods)


def subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, k))


def point_inner(action, U, V):
    """``{g : g·y ∈ U for some y ∈ V}`` straight from the action table."""
    return frozenset(g for (g, y), x in action.table.items() if y in V and x in U)


def mask_to_set(mask):
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def set_to_mask(s):
    return sum(1 << i for i in s)


# ---------------------------------------------------------------------------
# groupoid invariants


def components(G):
    parent = list(range(G.n_objects))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for g in range(G.n_arrows):
        a, b = find(G.dom[g]), find(G.cod[g])
        if a != b:
            parent[a] = b
    out = {}
    for x in range(G.n_objects):
        out.setdefault(find(x), []).append(x)
    return list(out.values())


def vertex_table(G, x):
    loops = [g for g in range(G.n_arrows) if G.dom[g] == x and G.cod[g] == x]
    idx = {g: i for i, g in enumerate(loops)}
    return [[idx[G.comp(a, b)] for b in loops] for a in loops]


def groups_isomorphic(t1, t2):
    n = len(t1)
    if n != len(t2):
        return False
    e1 = next(i for i in range(n) if all(t1[i][j] == j for j in range(n)))
    e2 = next(i for i in range(n) if all(t2[i][j] == j for j in range(n)))
    rest1 = [i for i in range(n) if i != e1]
    rest2 = [i for i in range(n) if i != e2]
    for perm in permutations(rest2):
        f = {e1: e2, **dict(zip(rest1, perm))}
        if all(f[t1[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n)):
            return True
    return False


def naive_morita(G1, G2):
    """Equivalence of finite groupoids as categories: match components by isotropy."""
    a = [vertex_table(G1, c[0]) for c in components(G1)]
    b = [vertex_table(G2, c[0]) for c in components(G2)]
    if len(a) != len(b):
        return False
    used = [False] * len(b)

    def match(i):
        if i == len(a):
            return True
        for j in range(len(b)):
            if not used[j] and groups_isomorphic(a[i], b[j]):
                used[j] = True
                if match(i + 1):
                    return True
                used[j] = False
        return False

    return match(0)


# ---------------------------------------------------------------------------
# lattices


def closed_subsets_of_product(xs, ys, join_x, join_y, leq_x, leq_y, bot_x, bot_y):
    """Elements of the sup-lattice tensor ``X ⊗ Y`` by brute force.

    A subset ``D ⊆ X×Y`` is an element when every row and column is a
    principal downset and it contains the bottom row and column.
    """
    forced = {(x, bot_y) for x in xs} | {(bot_x, y) for y in ys}
    free = [(x, y) for x in xs for y in ys if (x, y) not in forced]
    count = 0
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            D = forced | set(extra)
            if _rows_principal(D, xs, ys, join_x, leq_x, first=True) and _rows_principal(
                D, ys, xs, join_y, leq_y, first=False
            ):
                count += 1
    return count


def _rows_principal(D, xs, ys, join, leq, first):
    for y in ys:
        col = [x for x in xs if ((x, y) if first else (y, x)) in D]
        if not col:
            return False
        m = col[0]
        for x in col[1:]:
            m = join(m, x)
        if set(col) != {x for x in xs if leq(x, m)}:
            return False
    return True
