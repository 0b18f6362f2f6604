"""Deciding whether every monotone generator on a poset is completely monotone."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cones import (
    IndicatorRay,
    InequalityVector,
    RateVector,
    _check_poset,
    build_increasing_indicators,
    build_monotonicity_inequalities,
    dimension,
    is_monotone,
)
from .errors import CertificateError, SizeOutOfRange
from .polyhedral import (
    FarkasCertificate,
    HCone,
    VCone,
    dd_v_to_h,
    dot,
    extremal_rays,
    membership,
)
from .poset import (
    MAX_ENUMERATION_SIZE,
    Embedding,
    IncreasingMap,
    Poset,
    canonical_form,
    enumerate_posets,
    enumerate_upsets,
    induced_subposet_search,
    is_acyclic,
)

log = logging.getLogger(__name__)

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"


def monotone_cone(p: Poset) -> tuple[HCone, list[InequalityVector]]:
    """H-description of the monotone generators: every W plus coordinate nonnegativity."""
    d = dimension(p)
    ws = build_monotonicity_inequalities(p)
    normals = [tuple(int(i == k) for i in range(d)) for k in range(d)]
    normals += [w.coefficients for w in ws]
    return HCone(d, normals), ws


def completely_monotone_cone(p: Poset) -> tuple[VCone, list[IndicatorRay]]:
    rays = build_increasing_indicators(p)
    return VCone(dimension(p), [r.entries for r in rays]), rays


@dataclass(frozen=True)
class CouplingDecomposition:
    """Rates of a grand coupling: L = sum of rate * indicator(f) over the terms."""

    terms: tuple[tuple[IncreasingMap, Fraction], ...]

    def total(self, p: Poset) -> RateVector:
        from .cones import indicator_entries

        acc = [Fraction(0)] * dimension(p)
        for f, lam in self.terms:
            for k, e in enumerate(indicator_entries(p, f.table)):
                if e:
                    acc[k] += lam
        return RateVector(p, tuple(acc))


@dataclass
class EquivalenceReport:
    poset: Poset
    verdict: str
    witness: RateVector | None = None
    farkas: FarkasCertificate | None = None
    monotonicity_proof: list[tuple[InequalityVector, Fraction]] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT


@dataclass
class CounterexampleCheck:
    confirmed: bool
    reason: str
    monotonicity_proof: list[tuple[InequalityVector, Fraction]]
    farkas: FarkasCertificate | None = None
    decomposition: CouplingDecomposition | None = None


def coupling_decomposition(p: Poset, L: RateVector) -> CouplingDecomposition | FarkasCertificate:
    """Write L as a nonnegative combination of indicator rays, or prove it cannot be."""
    _check_poset(p, L)
    cone, indicators = completely_monotone_cone(p)
    result = membership(cone, L.values)
    if isinstance(result, FarkasCertificate):
        return result
    terms = tuple((indicators[j].map, lam) for j, lam in sorted(result.items()) if lam > 0)
    dec = CouplingDecomposition(terms)
    if dec.total(p).values != L.values:
        raise CertificateError("coupling decomposition does not sum to the generator")
    return dec


def verify_counterexample(p: Poset, L: RateVector) -> CounterexampleCheck:
    """Confirm that L is monotone but not completely monotone on p."""
    _check_poset(p, L)
    proof = [(w, w.evaluate(L)) for w in build_monotonicity_inequalities(p)]
    bad = next(((w, v) for w, v in proof if v < 0), None)
    if bad is not None:
        w, v = bad
        reason = f"not monotone: inequality for up-set {sorted(w.upset.labels())}, x={w.x}, y={w.y} evaluates to {v}"
        return CounterexampleCheck(False, reason, proof)
    result = coupling_decomposition(p, L)
    if isinstance(result, CouplingDecomposition):
        return CounterexampleCheck(False, "completely monotone: a coupling decomposition exists", proof, decomposition=result)
    return CounterexampleCheck(True, "monotone and outside the completely monotone cone", proof, farkas=result)


def check_equivalence(p: Poset, facet_cross_check: bool = False) -> EquivalenceReport:
    """Decide whether the monotone and completely monotone cones of p coincide.

    Every extremal ray of the monotone cone is tested for membership in the
    completely monotone cone, in lexicographic order; the first failure becomes
    the witness.  ``facet_cross_check`` also compares against the facets of the
    completely monotone cone (slow; for tests).
    """
    if not 1 <= len(p) <= MAX_ENUMERATION_SIZE:
        raise SizeOutOfRange(f"check_equivalence supports 1..{MAX_ENUMERATION_SIZE} elements, got {len(p)}")
    n = len(p)
    stats = {"elements": n, "dimension": dimension(p), "upsets": len(enumerate_upsets(p))}
    if n == 1:
        stats.update(increasing_maps=1, inequalities=0, extremal_rays=0)
        return EquivalenceReport(p, EQUIVALENT, stats=stats)
    hcone, ws = monotone_cone(p)
    vcone, indicators = completely_monotone_cone(p)
    rays = extremal_rays(hcone)
    stats.update(increasing_maps=len(indicators) + 1, inequalities=len(ws), extremal_rays=len(rays))
    failing = None
    for er in rays:
        result = membership(vcone, er.ray)
        if isinstance(result, FarkasCertificate):
            failing = (er.ray, result)
            break
    if facet_cross_check:
        facets = dd_v_to_h(vcone).normals
        by_facets = all(dot(a, er.ray) >= 0 for a in facets for er in rays)
        if by_facets != (failing is None):
            raise CertificateError("ray-membership and facet comparison disagree")
    if failing is None:
        return EquivalenceReport(p, EQUIVALENT, stats=stats)
    ray, cert = failing
    witness = RateVector(p, tuple(Fraction(v) for v in ray))
    proof = [(w, w.evaluate(witness)) for w in ws]
    if any(v < 0 for _, v in proof) or not cert.check(vcone.rays):
        raise CertificateError(f"witness for {p.name} failed re-verification")
    return EquivalenceReport(p, NOT_EQUIVALENT, witness, cert, proof, stats)


def discrete_time_equivalence(p: Poset) -> bool:
    """Monotone equals completely monotone for discrete time iff the Hasse diagram is a forest."""
    return is_acyclic(p)


def _check_one(p: Poset) -> EquivalenceReport:
    return check_equivalence(p)


def classify(n: int, jobs: int = 1) -> list[tuple[Poset, EquivalenceReport]]:
    """Verdicts for every isomorphism class of n-element posets (2 <= n <= 6)."""
    if not 2 <= n <= 6:
        raise SizeOutOfRange(f"classify supports sizes 2..6, got {n}")
    posets = enumerate_posets(n)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_check_one, posets, chunksize=1))
    else:
        reports = [check_equivalence(p) for p in posets]
    pairs = list(zip(posets, reports))
    pairs.sort(key=lambda pr: canonical_form(pr[0]))
    return pairs


def subposet_propagation(host: Poset, failing_catalog: Sequence[Poset]) -> tuple[Poset, Embedding] | None:
    """First catalog poset that embeds in ``host`` as an induced subposet."""
    for pattern in failing_catalog:
        emb = induced_subposet_search(host, pattern)
        if emb is not None:
            return pattern, emb
    return None
