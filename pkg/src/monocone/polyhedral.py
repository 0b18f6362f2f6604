"""Exact rational cone geometry.

Cones always pass through the origin.  An :class:`HCone` is ``{x : <a, x> >= 0}``
for its normals ``a``; a :class:`VCone` is the nonnegative span of its rays.
All vectors are stored as tuples of Python ints, scaled (by a positive factor)
to be primitive, so equality of tuples is equality of rays / half-spaces.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CertificateError, DimensionMismatch, NotPointed

log = logging.getLogger(__name__)

IntVec = tuple[int, ...]


def primitive(vec: Iterable) -> IntVec:
    """Scale a rational vector by a positive factor to coprime integers."""
    vals = list(vec)
    if all(type(v) is int for v in vals):
        g = math.gcd(*vals)
        return tuple(v // g for v in vals) if g > 1 else tuple(vals)
    vals = [Fraction(v) for v in vals]
    lcm = 1
    for v in vals:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vals]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b) if x and y)


def rank(rows: Sequence[Sequence]) -> int:
    return len(_row_basis([[Fraction(v) for v in r] for r in rows])[0])


def _row_basis(rows: list[list[Fraction]]) -> tuple[list[int], list[list[Fraction]]]:
    """Greedy independent subset of ``rows`` (by position) and its echelon form."""
    chosen: list[int] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    for idx, row in enumerate(rows):
        r = list(row)
        for pivot, er in echelon:
            if r[pivot]:
                f = r[pivot] / er[pivot]
                r = [a - f * b for a, b in zip(r, er)]
        lead = next((k for k, v in enumerate(r) if v), None)
        if lead is not None:
            chosen.append(idx)
            echelon.append((lead, r))
    return chosen, [r for _, r in echelon]


def null_space(rows: Sequence[Sequence], dim: int) -> list[IntVec]:
    """Integer basis of {y : <row, y> = 0 for every row}, via reduced row echelon form."""
    mat = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(dim):
        pr = next((k for k in range(r, len(mat)) if mat[k][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][c]:
                f = mat[k][c]
                mat[k] = [a - f * b for a, b in zip(mat[k], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for k, pc in enumerate(pivots):
            vec[pc] = -mat[k][fc]
        basis.append(primitive(vec))
    return basis


def _inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        pr = next(k for k in range(c, n) if aug[k][c])
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for k in range(n):
            if k != c and aug[k][c]:
                f = aug[k][c]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[c])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class HCone:
    dim: int
    normals: tuple[IntVec, ...]

    def __init__(self, dim: int, normals: Iterable[Iterable]):
        vecs = []
        for a in normals:
            v = primitive(a)
            if len(v) != dim:
                raise DimensionMismatch(f"normal of length {len(v)} in a cone of dimension {dim}")
            if not any(v):
                raise ValueError("zero normal")
            vecs.append(v)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "normals", tuple(vecs))

    def contains(self, v: Sequence) -> bool:
        return all(dot(a, v) >= 0 for a in self.normals)

    def to_json(self) -> dict:
        return {"dim": self.dim, "normals": [[str(x) for x in a] for a in self.normals]}


@dataclass(frozen=True)
class VCone:
    dim: int
    rays: tuple[IntVec, ...]

    def __init__(self, dim: int, rays: Iterable[Iterable]):
        vecs = []
        for r in rays:
            v = primitive(r)
            if len(v) != dim:
                raise DimensionMismatch(f"ray of length {len(v)} in a cone of dimension {dim}")
            if not any(v):
                raise ValueError("zero ray")
            vecs.append(v)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rays", tuple(vecs))

    def to_json(self) -> dict:
        return {"dim": self.dim, "rays": [[str(x) for x in r] for r in self.rays]}


@dataclass(frozen=True)
class ExtremalRay:
    ray: IntVec
    tight: tuple[int, ...]  # indices into HCone.normals


@dataclass(frozen=True)
class FarkasCertificate:
    """``separator`` is >= 0 on every ray of the cone and < 0 on ``target``."""

    separator: IntVec
    target: tuple[Fraction, ...]

    def check(self, rays: Iterable[Sequence]) -> bool:
        if dot(self.separator, self.target) >= 0:
            return False
        return all(dot(self.separator, r) >= 0 for r in rays)

    def to_json(self) -> dict:
        return {"separator": [str(x) for x in self.separator], "target": [str(x) for x in self.target]}


# -- double description -----------------------------------------------------


def _order_normals(normals: Sequence[IntVec]) -> list[int]:
    """Insertion order: most nonzeros first, ties broken lexicographically."""
    return sorted(range(len(normals)), key=lambda k: (-sum(1 for v in normals[k] if v), normals[k]))


def _double_description(dim: int, normals: Sequence[IntVec], check_adjacency: bool = False) -> list[tuple[IntVec, int]]:
    """Extremal rays of {x : <a, x> >= 0} with zero-set bitmasks over ``normals``.

    Requires the normals to span the whole space (pointed cone).
    """
    order = _order_normals(normals)
    basis_pos, _ = _row_basis([[Fraction(v) for v in normals[k]] for k in order])
    if len(basis_pos) < dim:
        raise NotPointed(f"normals have rank {len(basis_pos)} < dimension {dim}; the cone contains a line")
    basis = [order[k] for k in basis_pos]
    inv = _inverse([[Fraction(v) for v in normals[k]] for k in basis])
    all_basis = 0
    for k in basis:
        all_basis |= 1 << k
    rays: list[IntVec] = []
    zeros: list[int] = []
    for c in range(dim):
        rays.append(primitive(inv[r][c] for r in range(dim)))
        zeros.append(all_basis & ~(1 << basis[c]))

    in_basis = set(basis)
    for k in order:
        if k in in_basis:
            continue
        a = normals[k]
        bit = 1 << k
        vals = [dot(a, r) for r in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        if not neg:
            for i, s in enumerate(vals):
                if s == 0:
                    zeros[i] |= bit
            continue
        new_rays: list[IntVec] = []
        new_zeros: list[int] = []
        if pos:
            for p, q, common in _adjacent_pairs(zeros, pos, neg, dim - 2, len(normals)):
                sp, sq = vals[p], vals[q]
                r = primitive(sp * x - sq * y for x, y in zip(rays[q], rays[p]))
                if check_adjacency:
                    tight = [normals[j] for j in _iter_bits(common)]
                    if rank(tight) != dim - 2:
                        raise CertificateError("combinatorial and algebraic adjacency tests disagree")
                new_rays.append(r)
                new_zeros.append(common | bit)
        kept_rays = []
        kept_zeros = []
        for i, s in enumerate(vals):
            if s > 0:
                kept_rays.append(rays[i])
                kept_zeros.append(zeros[i])
            elif s == 0:
                kept_rays.append(rays[i])
                kept_zeros.append(zeros[i] | bit)
        rays = kept_rays + new_rays
        zeros = kept_zeros + new_zeros
        log.debug("dd: constraint %d, +%d -%d, %d rays", k, len(pos), len(neg), len(rays))
    return sorted(zip(rays, zeros))


_WORD = (1 << 64) - 1
_PAIR_CHUNK = 1 << 21


def _words(masks: Sequence[int], width: int) -> np.ndarray:
    return np.array([[(z >> (64 * w)) & _WORD for w in range(width)] for z in masks], dtype=np.uint64).reshape(
        len(masks), width
    )


def _unpack(words: np.ndarray) -> np.ndarray:
    """(k, W) uint64 bitmasks -> (k, 64 W) float32 0/1 matrix, bit j in column j."""
    bits = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=1, bitorder="little")
    return bits.astype(np.float32)


def _adjacent_pairs(zeros: list[int], pos: list[int], neg: list[int], need: int, nbits: int):
    """Yield (p, q, common) for adjacent rays p (positive side) and q (negative side).

    Two rays are adjacent iff the common part of their zero sets has at least
    ``need`` elements and no third ray's zero set contains it.  The containment
    count is a 0/1 matrix product; float32 is exact for these small integers.
    """
    width = max(1, (nbits + 63) // 64)
    Z = _words(zeros, width)
    Zbits_t = _unpack(Z).T.copy()
    Zp, Zn = Z[pos], Z[neg]
    rows = max(1, _PAIR_CHUNK // max(1, len(neg)))
    for start in range(0, len(pos), rows):
        C = Zp[start:start + rows, None, :] & Zn[None, :, :]
        ii, jj = np.nonzero(np.bitwise_count(C).sum(axis=-1, dtype=np.int64) >= need)
        if not len(ii):
            continue
        cand = C[ii, jj]
        step = max(1, min(4096, _PAIR_CHUNK // len(zeros)))
        for s0 in range(0, len(cand), step):
            block = cand[s0:s0 + step]
            J = _unpack(block)
            shared = J @ Zbits_t
            holders = (shared == J.sum(axis=1, keepdims=True)).sum(axis=1)
            for t in np.nonzero(holders == 2)[0]:
                a, b = ii[s0 + t], jj[s0 + t]
                common = 0
                for w, v in enumerate(block[t]):
                    common |= int(v) << (64 * w)
                yield pos[start + a], neg[b], common


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def extremal_rays(c: HCone, check_adjacency: bool = False) -> list[ExtremalRay]:
    """Extremal rays, each with the indices of its tight normals (rank dim - 1)."""
    if not c.normals:
        raise NotPointed("no constraints: the cone is the whole space")
    out = []
    for ray, zmask in _double_description(c.dim, c.normals, check_adjacency):
        tight = tuple(j for j, a in enumerate(c.normals) if dot(a, ray) == 0)
        out.append(ExtremalRay(ray, tight))
    return out


def verify_extremality(c: HCone, er: ExtremalRay) -> bool:
    """Re-check an extremality proof from scratch."""
    if not c.contains(er.ray) or not any(er.ray):
        return False
    if any(dot(c.normals[j], er.ray) != 0 for j in er.tight):
        return False
    return rank([c.normals[j] for j in er.tight]) == c.dim - 1


def dd_h_to_v(c: HCone) -> VCone:
    return VCone(c.dim, [er.ray for er in extremal_rays(c)])


def dd_v_to_h(c: VCone) -> HCone:
    """Minimal facet description of the span of the rays.

    The facet normals are the extremal rays of the dual cone {y : <y, r> >= 0}.
    When the rays do not span the space, the dual cone contains the orthogonal
    complement of their span; that part is emitted as a pair of opposite normals
    per basis vector and the rest is computed inside the span.
    """
    if not c.rays:
        raise ValueError("dd_v_to_h needs at least one ray")
    lines = null_space(c.rays, c.dim)
    constraints = list(dict.fromkeys(c.rays))
    for b in lines:
        constraints.append(b)
        constraints.append(tuple(-x for x in b))
    facets = [ray for ray, _ in _double_description(c.dim, constraints)]
    normals = sorted(facets)
    for b in lines:
        normals.append(b)
        normals.append(tuple(-x for x in b))
    return HCone(c.dim, normals)


# -- membership -------------------------------------------------------------


def _phase_one(columns: Sequence[Sequence[int]], target: Sequence[Fraction]):
    """Solve sum_j lam_j columns[j] = target, lam >= 0, by phase-one simplex with Bland's rule.

    Returns ``(lam, None)`` when feasible, else ``(None, y)`` with
    <y, column> >= 0 for every column and <y, target> < 0.
    """
    m = len(target)
    k = len(columns)
    sign = [(-1 if t < 0 else 1) for t in target]
    width = k + m
    rows = []
    for i in range(m):
        row = [Fraction(sign[i] * columns[j][i]) for j in range(k)]
        row += [Fraction(int(i == a)) for a in range(m)]
        row.append(Fraction(sign[i]) * target[i])
        rows.append(row)
    basis = [k + i for i in range(m)]
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(k):
            cost[j] -= row[j]
        cost[width] -= row[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][width] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # cannot happen: phase one is bounded below by zero
            raise CertificateError("unbounded phase-one problem")
        r = best[1]
        piv = rows[r][enter]
        prow = [v / piv for v in rows[r]]
        rows[r] = prow
        for i in range(m):
            if i != r and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        if cost[enter]:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, prow)]
        basis[r] = enter
    if cost[width] == 0:
        lam = [Fraction(0)] * k
        for i, b in enumerate(basis):
            if b < k:
                lam[b] = rows[i][width]
        return lam, None
    # artificial reduced cost is 1 - y_i, where y is the phase-one dual
    y = [sign[i] * (cost[k + i] - 1) for i in range(m)]
    return None, y


def membership(c: VCone, v: Sequence) -> dict[int, Fraction] | FarkasCertificate:
    """Decide whether ``v`` lies in the cone.

    Returns nonnegative coefficients keyed by ray index (only nonzero ones) whose
    combination reproduces ``v`` exactly, or a :class:`FarkasCertificate`.
    Both outcomes are re-verified before returning.
    """
    target = tuple(Fraction(x) for x in v)
    if len(target) != c.dim:
        raise DimensionMismatch(f"vector of length {len(target)} against a cone of dimension {c.dim}")
    if not any(target):
        return {}
    rays = c.rays
    idx = list(range(len(rays)))
    support = list(range(c.dim))
    nonneg = all(x >= 0 for r in rays for x in r)
    if nonneg:
        bad = next((i for i, t in enumerate(target) if t < 0), None)
        if bad is not None:
            sep = tuple(int(i == bad) for i in range(c.dim))
            return _checked_certificate(sep, target, rays)
        # nonnegative rays outside the target's support cannot appear with positive weight
        # and the rows off the support are then identically zero
        zero = [i for i, t in enumerate(target) if not t]
        idx = [j for j in idx if not any(rays[j][i] for i in zero)]
        support = [i for i, t in enumerate(target) if t]
    columns = [[rays[j][i] for i in support] for j in idx]
    lam, y = _phase_one(columns, [target[i] for i in support])
    if lam is not None:
        coeffs = {idx[j]: val for j, val in enumerate(lam) if val}
        total = [sum((coeffs[j] * rays[j][i] for j in coeffs), Fraction(0)) for i in range(c.dim)]
        if tuple(total) != target:
            raise CertificateError("simplex solution does not reproduce the target")
        return coeffs
    sep = [Fraction(0)] * c.dim
    for i, yi in zip(support, y):
        sep[i] = yi
    if nonneg and len(support) < c.dim:
        # lift: a large weight off the support keeps excluded rays on the right side
        lift = Fraction(0)
        for r in rays:
            off = sum(r[i] for i in range(c.dim) if not target[i])
            if off:
                inner = sum((sep[i] * r[i] for i in support), Fraction(0))
                if inner < 0:
                    lift = max(lift, -inner / off)
        for i in range(c.dim):
            if not target[i]:
                sep[i] = lift
    return _checked_certificate(primitive(sep), target, rays)


def _checked_certificate(sep: IntVec, target, rays) -> FarkasCertificate:
    cert = FarkasCertificate(sep, tuple(target))
    if not cert.check(rays):
        raise CertificateError("Farkas certificate failed its own check")
    return cert
