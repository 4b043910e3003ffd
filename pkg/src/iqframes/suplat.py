"""Finite sup-lattices as closure systems over a finite generator set.

An element is an ``int`` bitmask over the generators that is closed under
the lattice's closure operator.  Joins are closure-of-union, meets are
intersections.  Powersets take a fast path where the closure is the
identity and every bitmask is an element.
"""

from __future__ import annotations

from functools import cached_property, reduce
from itertools import product
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import NotJoinPreserving

Closure = Callable[[int], int]


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinSupLattice:
    """A finite complete lattice presented by a closure operator.

    ``closure=None`` means the powerset of ``size`` generators.
    """

    def __init__(
        self,
        size: int,
        closure: Closure | None = None,
        labels: Sequence[Hashable] | None = None,
    ) -> None:
        self.size = size
        self._closure = closure
        self.labels = tuple(labels) if labels is not None else tuple(range(size))
        if len(self.labels) != size:
            raise ValueError("labels must have one entry per generator")

    # construction helpers -------------------------------------------------

    @classmethod
    def powerset(cls, labels: int | Sequence[Hashable]) -> "FinSupLattice":
        if isinstance(labels, int):
            return cls(labels)
        return cls(len(labels), None, labels)

    @classmethod
    def downsets(cls, size: int, below: Sequence[int]) -> "FinSupLattice":
        """Downset lattice of a poset; ``below[i]`` is the mask of ``↓i``."""
        below = tuple(below)

        def close(mask: int) -> int:
            out = 0
            for i in bits(mask):
                out |= below[i]
            return out

        return cls(size, close)

    @classmethod
    def from_order(cls, leq: Sequence[Sequence[bool]]) -> "FinSupLattice":
        """A complete lattice given by its order matrix.

        Generators are the lattice elements themselves; element ``x`` is
        represented by the mask of ``↓x`` and the closure is the
        Dedekind-MacNeille cut, i.e. the principal downset of the join.
        """
        n = len(leq)
        downs = [sum(1 << i for i in range(n) if leq[i][x]) for x in range(n)]

        def close(mask: int) -> int:
            out = (1 << n) - 1
            for d in downs:
                if mask & ~d == 0:
                    out &= d
            return out

        lat = cls(n, close)
        if len(set(downs)) != n or any(close(d) != d for d in downs):
            raise ValueError("order matrix is not a partial order")
        if len(lat.elements) != n:
            raise ValueError("order is not a complete lattice")
        lat.principal = tuple(downs)
        return lat

    @classmethod
    def chain(cls, length: int) -> "FinSupLattice":
        """The chain with ``length`` elements (downsets of a chain poset)."""
        k = length - 1
        return cls.downsets(k, [(1 << (i + 1)) - 1 for i in range(k)])

    # lattice operations ---------------------------------------------------

    @property
    def is_powerset(self) -> bool:
        return self._closure is None

    def close(self, mask: int) -> int:
        if self._closure is None:
            return mask
        return self._closure(mask)

    @cached_property
    def top(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def bottom(self) -> int:
        return self.close(0)

    def join(self, *xs: int) -> int:
        return self.close(reduce(int.__or__, xs, 0))

    def join_all(self, xs: Iterable[int]) -> int:
        return self.close(reduce(int.__or__, xs, 0))

    def meet(self, *xs: int) -> int:
        return reduce(int.__and__, xs, self.top)

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return a & ~b == 0

    def __contains__(self, mask: object) -> bool:
        return isinstance(mask, int) and 0 <= mask <= self.top and self.close(mask) == mask

    @cached_property
    def elements(self) -> tuple[int, ...]:
        """All elements, in lectic order (bottom first)."""
        if self._closure is None:
            return tuple(range(1 << self.size))
        return tuple(_next_closure(self.size, self._closure))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        if self._closure is None:
            return tuple(1 << i for i in range(self.size))
        out = []
        for x in self.elements:
            if x == self.bottom:
                continue
            below = self.join_all(y for y in self.elements if y != x and self.leq(y, x))
            if below != x:
                out.append(x)
        return tuple(out)

    def down(self, x: int) -> tuple[int, ...]:
        """Join-irreducibles below ``x``."""
        return tuple(j for j in self.join_irreducibles if self.leq(j, x))

    def is_distributive(self) -> tuple[int, int, int] | None:
        """Witness ``(a, b, c)`` with ``a ∧ (b ∨ c) ≠ (a∧b) ∨ (a∧c)``, else None."""
        if self._closure is None:
            return None
        els = self.elements
        for a, b, c in product(els, repeat=3):
            if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)):
                return a, b, c
        return None

    def render(self, x: int) -> str:
        return "{" + ",".join(str(self.labels[i]) for i in bits(x)) + "}"

    def __repr__(self) -> str:
        kind = "powerset" if self.is_powerset else "closure"
        return f"FinSupLattice({kind}, generators={self.size})"


def _next_closure(n: int, close: Closure) -> Iterator[int]:
    """Ganter's NextClosure: every closed set exactly once, lectic order."""
    a = close(0)
    top = (1 << n) - 1
    yield a
    while a != top:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if a & bit:
                continue
            low = bit - 1
            b = close((a & low) | bit)
            if b & low == a & low:
                a = b
                break
        else:  # pragma: no cover - closure operators always reach top
            return
        yield a


class MonotoneMap:
    """A total map between the elements of two finite lattices."""

    def __init__(self, source: FinSupLattice, target: FinSupLattice, fn: Callable[[int], int]):
        self.source = source
        self.target = target
        self._fn = fn

    @cached_property
    def table(self) -> dict[int, int]:
        return {x: self._fn(x) for x in self.source.elements}

    def __call__(self, x: int) -> int:
        return self.table[x] if "table" in self.__dict__ else self._fn(x)

    def join_failure(self) -> tuple[int, ...] | None:
        """A witness against join preservation, or None.

        Binary joins plus the empty join cover all finite joins.
        """
        s, t = self.source, self.target
        if self(s.bottom) != t.bottom:
            return (s.bottom,)
        els = s.elements
        for i, a in enumerate(els):
            fa = self(a)
            for b in els[i + 1:]:
                if self(s.join(a, b)) != t.join(fa, self(b)):
                    return (a, b)
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.table == other.table

    __hash__ = None  # type: ignore[assignment]


class SupHom(MonotoneMap):
    """A join-preserving map; validated on construction unless ``check=False``."""

    def __init__(self, source, target, fn, check: bool = True) -> None:
        super().__init__(source, target, fn)
        if check:
            w = self.join_failure()
            if w is not None:
                raise NotJoinPreserving("map does not preserve joins", witness=w)

    @classmethod
    def identity(cls, lat: FinSupLattice) -> "SupHom":
        return cls(lat, lat, lambda x: x, check=False)


def right_adjoint(f: MonotoneMap) -> MonotoneMap:
    """The right adjoint ``g(y) = ⋁{x : f(x) ≤ y}`` of a join-preserving map.

    Right adjoints preserve meets rather than joins, so the result is
    returned as a plain monotone map.
    """
    w = f.join_failure()
    if w is not None:
        raise NotJoinPreserving("map does not preserve joins", witness=w)
    src, tgt = f.source, f.target
    table = {
        y: src.join_all(x for x in src.elements if tgt.leq(f(x), y)) for y in tgt.elements
    }
    return MonotoneMap(tgt, src, table.__getitem__)


def left_adjoint(g: MonotoneMap) -> MonotoneMap:
    """The left adjoint ``f(x) = ⋀{y : x ≤ g(y)}`` of a meet-preserving map."""
    src, tgt = g.source, g.target
    table = {
        x: src.meet(*[y for y in src.elements if tgt.leq(x, g(y))]) for x in tgt.elements
    }
    return MonotoneMap(tgt, src, table.__getitem__)


class TensorProduct(FinSupLattice):
    """``X ⊗ Y`` modulo a relation, presented over pairs of join-irreducibles.

    An element is a set of pairs ``(j, k)`` that is closed under joins in each
    coordinate separately (which includes down-closure) and respects every
    supplied relation ``x⊗y ~ x'⊗y'``.
    """

    def __init__(
        self,
        left: FinSupLattice,
        right: FinSupLattice,
        relations: Iterable[tuple[tuple[int, int], tuple[int, int]]] = (),
    ) -> None:
        self.left = left
        self.right = right
        jx, jy = left.join_irreducibles, right.join_irreducibles
        self._jx, self._jy = jx, jy
        w = len(jy)
        self._w = w
        n = len(jx) * w
        self._column = [sum(1 << (i * w + k) for i in range(len(jx))) for k in range(w)]
        self._row = [sum(1 << (i * w + k) for k in range(w)) for i in range(len(jx))]
        self._rels = [(self._rect(a, b), self._rect(c, d)) for (a, b), (c, d) in relations]
        labels = [(x, y) for x in jx for y in jy]
        super().__init__(n, self._close_tensor, labels)

    def _rect(self, x: int, y: int) -> int:
        w = self._w
        out = 0
        for i, j in enumerate(self._jx):
            if self.left.leq(j, x):
                for k, m in enumerate(self._jy):
                    if self.right.leq(m, y):
                        out |= 1 << (i * w + k)
        return out

    def _close_tensor(self, mask: int) -> int:
        X, Y, jx, jy, w = self.left, self.right, self._jx, self._jy, self._w
        while True:
            before = mask
            for k in range(w):
                col = [i for i in range(len(jx)) if mask >> (i * w + k) & 1]
                m = X.join_all(jx[i] for i in col)
                for i, j in enumerate(jx):
                    if X.leq(j, m):
                        mask |= 1 << (i * w + k)
            for i in range(len(jx)):
                row = [k for k in range(w) if mask >> (i * w + k) & 1]
                m = Y.join_all(jy[k] for k in row)
                for k, j in enumerate(jy):
                    if Y.leq(j, m):
                        mask |= 1 << (i * w + k)
            for a, b in self._rels:
                a_in = a & ~mask == 0
                b_in = b & ~mask == 0
                if a_in and not b_in:
                    mask |= b
                elif b_in and not a_in:
                    mask |= a
            if mask == before:
                return mask

    def pure(self, x: int, y: int) -> int:
        """The element ``x ⊗ y``."""
        return self.close(self._rect(x, y))

    def pairs(self, element: int) -> list[tuple[int, int]]:
        """The generator pairs ``(j, k)`` contained in an element."""
        w = self._w
        return [(self._jx[g // w], self._jy[g % w]) for g in bits(element)]


def tensor(
    X: FinSupLattice,
    Y: FinSupLattice,
    relations: Iterable[tuple[tuple[int, int], tuple[int, int]]] = (),
) -> TensorProduct:
    """Sup-lattice tensor product, optionally quotiented by ``x⊗y ~ x'⊗y'`` relations."""
    return TensorProduct(X, Y, relations)


def quotient_by_closure(
    X: FinSupLattice, pairs: Iterable[tuple[int, int]]
) -> tuple[FinSupLattice, SupHom]:
    """Largest quotient of ``X`` identifying each pair, with its quotient map.

    The quotient is the fixed-point set of the least closure ``c`` with
    ``c(a) = c(b)`` for every pair: ``z`` is fixed iff ``a ≤ z ⟺ b ≤ z``.
    """
    pairs = [(X.close(a), X.close(b)) for a, b in pairs]

    def nucleus(mask: int) -> int:
        z = X.close(mask)
        changed = True
        while changed:
            changed = False
            for a, b in pairs:
                a_in, b_in = a & ~z == 0, b & ~z == 0
                if a_in != b_in:
                    z = X.close(z | a | b)
                    changed = True
        return z

    quotient = FinSupLattice(X.size, nucleus, X.labels)
    return quotient, SupHom(X, quotient, nucleus, check=False)
