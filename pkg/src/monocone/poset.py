"""Finite posets given by their Hasse diagrams, plus the combinatorics the cones need.

Elements are string labels; the position of a label in ``Poset.elements`` is its
coordinate index everywhere else in the package.  Internally every down/up set
is an ``int`` bitmask over those indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import CycleInCovers, DuplicateLabel, SizeOutOfRange, UnknownLabel

MAX_ENUMERATION_SIZE = 7


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Poset:
    """Immutable finite partial order.

    Build with :meth:`from_covers`; the constructor trusts its arguments.
    ``up[i]`` is the bitmask of all j with i <= j, ``down[i]`` of all j <= i.
    """

    elements: tuple[str, ...]
    covers: tuple[tuple[str, str], ...]
    up: tuple[int, ...] = field(repr=False)
    down: tuple[int, ...] = field(repr=False)
    name: str = field(default="", compare=False)

    @classmethod
    def from_covers(cls, elements: Sequence[str], covers: Sequence[Sequence[str]], name: str = "") -> "Poset":
        elements = tuple(elements)
        index: dict[str, int] = {}
        for i, label in enumerate(elements):
            if label in index:
                raise DuplicateLabel(f"label {label!r} appears twice")
            index[label] = i
        n = len(elements)
        succ = [0] * n
        for pair in covers:
            if len(pair) != 2:
                raise UnknownLabel(f"cover {pair!r} is not a (lower, upper) pair")
            lo, hi = pair
            for label in (lo, hi):
                if label not in index:
                    raise UnknownLabel(f"cover ({lo!r}, {hi!r}) references unknown label {label!r}")
            if lo == hi:
                raise CycleInCovers(f"self-cover on {lo!r}")
            succ[index[lo]] |= 1 << index[hi]
        up = _reflexive_closure(succ)
        for i in range(n):
            for j in _bits(up[i] & ~(1 << i)):
                if up[j] >> i & 1:
                    raise CycleInCovers(
                        f"covers contain a directed cycle through {elements[i]!r} and {elements[j]!r}"
                    )
        return cls._from_up(elements, up, name)

    @classmethod
    def from_leq(cls, elements: Sequence[str], up: Sequence[int], name: str = "") -> "Poset":
        """Build from an already transitive, antisymmetric up-mask table."""
        return cls._from_up(tuple(elements), tuple(up), name)

    @classmethod
    def _from_up(cls, elements: tuple[str, ...], up: Sequence[int], name: str) -> "Poset":
        n = len(elements)
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        covers = []
        for i in range(n):
            strict = up[i] & ~(1 << i)
            for j in _bits(strict):
                # j covers i unless some k sits strictly between them
                between = strict & down[j] & ~(1 << j)
                if not between:
                    covers.append((elements[i], elements[j]))
        return cls(elements, tuple(covers), tuple(up), tuple(down), name)

    # -- basic queries ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise UnknownLabel(f"{label!r} is not an element of poset {self.name or self.elements}") from None

    def leq(self, x: str, y: str) -> bool:
        return bool(self.up[self.index(x)] >> self.index(y) & 1)

    def leq_index(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq_matrix(self) -> list[list[bool]]:
        n = len(self)
        return [[bool(self.up[i] >> j & 1) for j in range(n)] for i in range(n)]

    def cover_indices(self) -> list[tuple[int, int]]:
        pos = {label: i for i, label in enumerate(self.elements)}
        return [(pos[a], pos[b]) for a, b in self.covers]

    def linear_extension(self) -> list[int]:
        """Indices sorted so that every element follows everything below it."""
        return sorted(range(len(self)), key=lambda i: (self.down[i].bit_count(), i))

    def renamed(self, name: str) -> "Poset":
        return Poset(self.elements, self.covers, self.up, self.down, name)

    def to_json(self) -> dict:
        return {"name": self.name, "elements": list(self.elements), "covers": [list(c) for c in self.covers]}

    @classmethod
    def from_json(cls, data: dict) -> "Poset":
        return cls.from_covers(data["elements"], data["covers"], name=data.get("name", ""))


def _reflexive_closure(succ: Sequence[int]) -> list[int]:
    n = len(succ)
    up = [succ[i] | 1 << i for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in _bits(up[i] & ~(1 << i)):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return up


@dataclass(frozen=True)
class UpSet:
    poset: Poset = field(repr=False, compare=False)
    mask: int

    @property
    def members(self) -> frozenset[str]:
        return frozenset(self.poset.elements[i] for i in _bits(self.mask))

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.poset.index(label) & 1)

    def labels(self) -> list[str]:
        return [self.poset.elements[i] for i in _bits(self.mask)]


@dataclass(frozen=True)
class IncreasingMap:
    poset: Poset = field(repr=False, compare=False)
    table: tuple[int, ...]

    def __call__(self, label: str) -> str:
        return self.poset.elements[self.table[self.poset.index(label)]]

    def as_dict(self) -> dict[str, str]:
        els = self.poset.elements
        return {els[i]: els[j] for i, j in enumerate(self.table)}

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.table))


@dataclass(frozen=True)
class Embedding:
    pattern: Poset = field(repr=False)
    host: Poset = field(repr=False)
    table: tuple[int, ...]

    @property
    def map(self) -> dict[str, str]:
        return {self.pattern.elements[i]: self.host.elements[j] for i, j in enumerate(self.table)}


# -- enumeration ------------------------------------------------------------


def upset_masks(p: Poset) -> list[int]:
    """All up-set bitmasks, by include/exclude over a reversed linear extension."""
    order = p.linear_extension()[::-1]
    out: list[int] = []

    def rec(k: int, mask: int) -> None:
        if k == len(order):
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        strict_up = p.up[i] & ~(1 << i)
        if strict_up & mask == strict_up:
            rec(k + 1, mask | 1 << i)

    rec(0, 0)
    n = len(p)
    out.sort(key=lambda m: (m.bit_count(), [m >> i & 1 for i in range(n)]))
    return out


def enumerate_upsets(p: Poset) -> list[UpSet]:
    """Every up-set including the empty set and the whole poset.

    Ordered by size, then by the membership vector read in element order.
    """
    return [UpSet(p, m) for m in upset_masks(p)]


def downset_masks(p: Poset) -> list[int]:
    full = (1 << len(p)) - 1
    return sorted(full & ~m for m in upset_masks(p))


def increasing_tables(p: Poset) -> list[tuple[int, ...]]:
    """Tables of all order-preserving self-maps, in lexicographic order."""
    n = len(p)
    table = [0] * n
    out: list[tuple[int, ...]] = []

    def rec(i: int) -> None:
        if i == n:
            out.append(tuple(table))
            return
        below = p.down[i] & ((1 << i) - 1)
        above = p.up[i] & ((1 << i) - 1)
        allowed = (1 << n) - 1
        for j in _bits(below):
            allowed &= p.up[table[j]]
        for j in _bits(above):
            allowed &= p.down[table[j]]
        for v in _bits(allowed):
            table[i] = v
            rec(i + 1)

    rec(0)
    return out


def enumerate_increasing_maps(p: Poset) -> list[IncreasingMap]:
    return [IncreasingMap(p, t) for t in increasing_tables(p)]


def is_acyclic(p: Poset) -> bool:
    """True iff the Hasse diagram, taken as an undirected graph, is a forest."""
    n = len(p)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in p.cover_indices():
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def dual(p: Poset) -> Poset:
    return Poset(p.elements, tuple((b, a) for a, b in p.covers), p.down, p.up, p.name + "^op" if p.name else "")


def _element_keys(p: Poset) -> list[tuple]:
    n = len(p)
    base = [(p.down[i].bit_count(), p.up[i].bit_count()) for i in range(n)]
    lower = [0] * n
    upper = [0] * n
    for i, j in p.cover_indices():
        upper[i] |= 1 << j
        lower[j] |= 1 << i
    return [
        (base[i], tuple(sorted(base[j] for j in _bits(lower[i]))), tuple(sorted(base[j] for j in _bits(upper[i]))))
        for i in range(n)
    ]


def canonical_form(p: Poset) -> bytes:
    """Byte string equal for two posets iff they are order-isomorphic.

    Elements are first sorted by an isomorphism-invariant key; the form is the
    minimum strict-order encoding over all orderings that permute only within
    blocks of equal key.
    """
    n = len(p)
    keys = _element_keys(p)
    order = sorted(range(n), key=lambda i: keys[i])
    blocks = [list(g) for _, g in itertools.groupby(order, key=lambda i: keys[i])]
    width = max(1, (n + 7) // 8)
    best: bytes | None = None
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [i for block in choice for i in block]
        bits = bytearray()
        for a in range(n):
            row = 0
            up = p.up[perm[a]]
            for b in range(n):
                row = row << 1 | (up >> perm[b] & 1)
            bits += row.to_bytes(width, "big")
        enc = bytes(bits)
        if best is None or enc < best:
            best = enc
    head = bytes([n]) + repr(sorted(keys)).encode()
    return head + b"|" + (best or b"")


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return len(p) == len(q) and canonical_form(p) == canonical_form(q)


def _labels(n: int) -> tuple[str, ...]:
    return tuple("abcdefghijklmnopqrstuvwxyz"[i] for i in range(n))


def enumerate_posets(n: int) -> list[Poset]:
    """One representative per isomorphism class of n-element posets.

    Classes are grown one maximal element at a time: every (n)-poset is an
    (n-1)-poset plus a new element whose strict down-set is a down-set.
    """
    if not 1 <= n <= MAX_ENUMERATION_SIZE:
        raise SizeOutOfRange(f"poset size must be in 1..{MAX_ENUMERATION_SIZE}, got {n}")
    level: list[tuple[int, ...]] = [()]
    for k in range(n):
        seen: dict[bytes, tuple[int, ...]] = {}
        for up in level:
            prev = Poset.from_leq(_labels(k), up)
            for down in downset_masks(prev):
                new_up = [u | (1 << k if down >> i & 1 else 0) for i, u in enumerate(up)] + [1 << k]
                cand = Poset.from_leq(_labels(k + 1), new_up)
                seen.setdefault(canonical_form(cand), tuple(new_up))
        level = [seen[key] for key in sorted(seen)]
    return [Poset.from_leq(_labels(n), up, name=f"n{n}-{idx:03d}") for idx, up in enumerate(level)]


def induced_subposet_search(host: Poset, pattern: Poset) -> Embedding | None:
    """First injective map pattern -> host that both preserves and reflects order."""
    m, n = len(pattern), len(host)
    if m > n:
        return None
    table: list[int] = []
    used = 0

    def ok(i: int, v: int) -> bool:
        for j in range(i):
            w = table[j]
            if pattern.leq_index(j, i) != host.leq_index(w, v):
                return False
            if pattern.leq_index(i, j) != host.leq_index(v, w):
                return False
        return True

    def rec(i: int) -> bool:
        nonlocal used
        if i == m:
            return True
        for v in range(n):
            if used >> v & 1 or not ok(i, v):
                continue
            table.append(v)
            used |= 1 << v
            if rec(i + 1):
                return True
            table.pop()
            used &= ~(1 << v)
        return False

    if rec(0):
        return Embedding(pattern, host, tuple(table))
    return None
