"""The two generator cones of a poset.

A generator is stored by its off-diagonal rates, indexed by ordered pairs
(x, y) with x != y and sorted by (index(x), index(y)).  That single coordinate
order is shared by every vector in the package.

* monotone generators: {L >= 0 : <L, W> >= 0 for every W from
  :func:`build_monotonicity_inequalities`}
* completely monotone generators: nonnegative span of the indicator rays of
  the non-identity increasing maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import IndexMismatch, ValidationError
from .poset import IncreasingMap, Poset, UpSet, _bits, increasing_tables, upset_masks


def pair_coordinates(p: Poset) -> list[tuple[int, int]]:
    n = len(p)
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def pair_index(p: Poset) -> dict[tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(pair_coordinates(p))}


def dimension(p: Poset) -> int:
    n = len(p)
    return n * (n - 1)


@dataclass(frozen=True)
class RateVector:
    """Off-diagonal jump rates of a generator; ``rates[(x, y)]`` is the rate x -> y."""

    poset: Poset = field(repr=False, compare=False)
    values: tuple[Fraction, ...]

    @classmethod
    def from_rates(cls, p: Poset, rates: Mapping[tuple[str, str], object]) -> "RateVector":
        where = pair_index(p)
        values = [Fraction(0)] * len(where)
        pos = {label: i for i, label in enumerate(p.elements)}
        for (x, y), rate in rates.items():
            if x not in pos or y not in pos:
                raise IndexMismatch(f"rate ({x!r}, {y!r}) refers to a label outside the poset")
            if x == y:
                raise IndexMismatch(f"diagonal entry ({x!r}, {x!r}) is determined by the other rates")
            q = Fraction(rate)
            if q < 0:
                raise ValidationError(f"rate ({x!r}, {y!r}) = {q} is negative")
            values[where[pos[x], pos[y]]] += q
        return cls(p, tuple(values))

    @classmethod
    def from_vector(cls, p: Poset, values: Iterable) -> "RateVector":
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != dimension(p):
            raise IndexMismatch(f"expected {dimension(p)} coordinates, got {len(vals)}")
        if any(v < 0 for v in vals):
            raise ValidationError("rates must be nonnegative")
        return cls(p, vals)

    def rates(self) -> dict[tuple[str, str], Fraction]:
        els = self.poset.elements
        return {(els[i], els[j]): v for (i, j), v in zip(pair_coordinates(self.poset), self.values) if v}

    def diagonal(self) -> dict[str, Fraction]:
        out = {x: Fraction(0) for x in self.poset.elements}
        for (x, _), v in self.rates().items():
            out[x] -= v
        return out

    def __getitem__(self, pair: tuple[str, str]) -> Fraction:
        return self.rates().get(pair, Fraction(0))


@dataclass(frozen=True)
class InequalityVector:
    """Normal vector W of one monotonicity half-space <L, W> >= 0."""

    coefficients: tuple[int, ...]
    upset: UpSet
    x: str
    y: str

    def evaluate(self, L: RateVector) -> Fraction:
        return sum((c * v for c, v in zip(self.coefficients, L.values) if c), Fraction(0))


@dataclass(frozen=True)
class IndicatorRay:
    entries: tuple[int, ...]
    map: IncreasingMap


def w_vector(p: Poset, upset: int, x: int, y: int) -> tuple[int, ...]:
    """Coefficients of W for up-set mask ``upset`` and the pair (x, y).

    Case x <= y with y outside the up-set: +1 at (y, z), -1 at (x, z) for z inside.
    Case x >= y with y inside the up-set:  +1 at (y, z), -1 at (x, z) for z outside.
    Any other (upset, x, y) gives the zero vector.
    """
    where = pair_index(p)
    coeffs = [0] * len(where)
    y_in = upset >> y & 1
    if p.leq_index(x, y) and not y_in:
        targets = upset
    elif p.leq_index(y, x) and y_in:
        targets = ((1 << len(p)) - 1) & ~upset
    else:
        return tuple(coeffs)
    for z in _bits(targets):
        if z != y:
            coeffs[where[y, z]] += 1
        if z != x:
            coeffs[where[x, z]] -= 1
    return tuple(coeffs)


def build_monotonicity_inequalities(p: Poset) -> list[InequalityVector]:
    """Distinct nonzero W vectors over all up-sets and all ordered pairs."""
    n = len(p)
    seen: set[tuple[int, ...]] = set()
    out = []
    for mask in upset_masks(p):
        for x in range(n):
            for y in range(n):
                w = w_vector(p, mask, x, y)
                if not any(w) or w in seen:
                    continue
                seen.add(w)
                out.append(InequalityVector(w, UpSet(p, mask), p.elements[x], p.elements[y]))
    return out


def indicator_entries(p: Poset, table: tuple[int, ...]) -> tuple[int, ...]:
    where = pair_index(p)
    entries = [0] * len(where)
    for x, fx in enumerate(table):
        if fx != x:
            entries[where[x, fx]] = 1
    return tuple(entries)


def build_increasing_indicators(p: Poset) -> list[IndicatorRay]:
    """One 0/1 ray per non-identity increasing map, in lexicographic table order."""
    out = []
    for table in increasing_tables(p):
        entries = indicator_entries(p, table)
        if any(entries):
            out.append(IndicatorRay(entries, IncreasingMap(p, table)))
    return out


@dataclass(frozen=True)
class MonotonicityVerdict:
    monotone: bool
    upset: UpSet | None = None
    x: str | None = None
    y: str | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.monotone


def _check_poset(p: Poset, L: RateVector) -> None:
    if L.poset.elements != p.elements:
        raise IndexMismatch(
            f"generator is indexed by {list(L.poset.elements)}, poset has {list(p.elements)}"
        )


def monotonicity_proof(p: Poset, L: RateVector) -> list[tuple[InequalityVector, Fraction]]:
    """Every inequality together with its value at L."""
    _check_poset(p, L)
    return [(w, w.evaluate(L)) for w in build_monotonicity_inequalities(p)]


def is_monotone(p: Poset, L: RateVector) -> MonotonicityVerdict:
    _check_poset(p, L)
    for w in build_monotonicity_inequalities(p):
        value = w.evaluate(L)
        if value < 0:
            return MonotonicityVerdict(False, w.upset, w.x, w.y, value)
    return MonotonicityVerdict(True)
