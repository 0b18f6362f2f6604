"""One-shot check of the known classification results against the catalog.

Every check is a :class:`SuiteItem` with a stable id, a pass flag and a JSON
detail payload.  The counterexample block always runs first: it validates the
catalog transcriptions, and nothing else runs if it fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .cones import build_increasing_indicators, build_monotonicity_inequalities
from .equivalence import (
    EquivalenceReport,
    check_equivalence,
    classify,
    discrete_time_equivalence,
    subposet_propagation,
    verify_counterexample,
)
from .io import Catalog, check_to_json, generator_to_json, poset_to_json
from .poset import Poset, canonical_form, dual, enumerate_posets, is_acyclic, is_isomorphic

BLOCKS = (
    "counterexamples",
    "four-point",
    "five-point",
    "six-point",
    "acyclic",
    "subposet",
    "inclusion",
    "dual",
)

# catalog groups: the minimal five-point failures, the minimal six-point
# failures, and a six-point host that fails through an embedded pattern
MINIMAL_5 = "minimal-5"
MINIMAL_6 = "minimal-6"
HOST_6 = "host-6"


@dataclass
class SuiteItem:
    block: str
    id: str
    passed: bool
    summary: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"block": self.block, "id": self.id, "passed": self.passed, "summary": self.summary, "detail": self.detail}


@dataclass
class SuiteReport:
    items: list[SuiteItem]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def to_json(self) -> dict:
        return {
            "suite": "verify-paper",
            "passed": self.passed,
            "counts": {
                "items": len(self.items),
                "failed": sum(not i.passed for i in self.items),
            },
            "items": [i.to_json() for i in self.items],
        }

    def to_text(self) -> str:
        lines = [f"{'PASS' if i.passed else 'FAIL'} {i.id}: {i.summary}" for i in self.items]
        failed = sum(not i.passed for i in self.items)
        lines.append(f"{len(self.items) - failed}/{len(self.items)} items passed")
        return "\n".join(lines) + "\n"


class _Cache:
    """Classification results shared between blocks of one run."""

    def __init__(self, jobs: int):
        self.jobs = jobs
        self.classes: dict[int, list[tuple[Poset, EquivalenceReport]]] = {}

    def classify(self, n: int) -> list[tuple[Poset, EquivalenceReport]]:
        if n not in self.classes:
            if n == 1:
                self.classes[n] = [(p, check_equivalence(p)) for p in enumerate_posets(1)]
            else:
                self.classes[n] = classify(n, jobs=self.jobs)
        return self.classes[n]


def _failing(pairs) -> list[Poset]:
    return [p for p, r in pairs if not r.equivalent]


def _match(p: Poset, patterns: Iterable[Poset]) -> str | None:
    for q in patterns:
        if is_isomorphic(p, q):
            return q.name
    return None


def _counterexamples(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    items = []
    for name, L in cat.generators.items():
        p = L.poset
        chk = verify_counterexample(p, L)
        items.append(SuiteItem(
            "counterexamples", f"counterexamples/{name}", chk.confirmed,
            f"{name} on {p.name}: {'confirmed' if chk.confirmed else 'refuted'} ({chk.reason})",
            {"generator": generator_to_json(L, p.name), **check_to_json(chk, p)},
        ))
    return items


def _four_point(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    items = []
    for name in ("diamond", "bowtie"):
        rep = check_equivalence(cat.poset(name))
        items.append(SuiteItem("four-point", f"four-point/{name}", rep.equivalent,
                               f"{name}: {rep.verdict}", {"stats": rep.stats}))
    pairs = cache.classify(4)
    fails = _failing(pairs)
    items.append(SuiteItem("four-point", "four-point/classify", not fails and len(pairs) == 16,
                           f"{len(fails)} failing classes out of {len(pairs)}",
                           {"classes": len(pairs), "failing": [poset_to_json(p) for p in fails]}))
    return items


def _five_point(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    pat5 = cat.by_group(MINIMAL_5)
    pat5_dual = pat5 + [dual(q) for q in pat5]
    pairs = cache.classify(5)
    fails = _failing(pairs)
    smaller = [p for n in (1, 2, 3, 4) for p in _failing(cache.classify(n))]
    matches = {p.name: _match(p, pat5) for p in fails}
    matches_dual = {p.name: _match(p, pat5_dual) for p in fails}
    all_pat_fail = all(any(is_isomorphic(q, p) for p in fails) for q in pat5)
    detail = {
        "classes": len(pairs),
        "failing": [
            {"poset": poset_to_json(p), "matches": matches[p.name], "matches_up_to_duality": matches_dual[p.name]}
            for p in fails
        ],
    }
    return [
        SuiteItem("five-point", "five-point/count", len(fails) == len(pat5) and len(pairs) == 63 and not smaller,
                  f"{len(fails)} failing classes out of {len(pairs)} (expected {len(pat5)}), "
                  f"{len(smaller)} failing below 5 points",
                  detail),
        SuiteItem("five-point", "five-point/catalog-match", all(matches.values()) and all_pat_fail,
                  f"{sum(1 for v in matches.values() if v)}/{len(fails)} failing classes isomorphic to a catalog pattern",
                  {}),
        SuiteItem("five-point", "five-point/catalog-match-up-to-duality",
                  all(matches_dual.values()) and all_pat_fail,
                  f"{sum(1 for v in matches_dual.values() if v)}/{len(fails)} failing classes isomorphic to a "
                  "catalog pattern or its order dual",
                  {}),
    ]


def _six_point(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    pat5 = cat.by_group(MINIMAL_5)
    pat6 = cat.by_group(MINIMAL_6)
    pairs = cache.classify(6)
    failing = {canonical_form(p): p for p in _failing(pairs)}

    def compare(patterns: list[Poset], exact: list[Poset]) -> tuple[list[Poset], list[Poset], int]:
        forms = {canonical_form(q) for q in exact}
        predicted = {}
        for p, _ in pairs:
            if canonical_form(p) in forms or subposet_propagation(p, patterns) is not None:
                predicted[canonical_form(p)] = p
        unexpected = [failing[k] for k in sorted(failing.keys() - predicted.keys())]
        missing = [predicted[k] for k in sorted(predicted.keys() - failing.keys())]
        return unexpected, missing, len(predicted)

    unexpected, missing, n_pred = compare(pat5, pat6)
    unexpected_d, missing_d, n_pred_d = compare(pat5 + [dual(q) for q in pat5], pat6 + [dual(q) for q in pat6])
    pat6_fail = [q.name for q in pat6 if canonical_form(q) in failing]
    return [
        SuiteItem("six-point", "six-point/prediction",
                  not unexpected and not missing and len(pairs) == 318,
                  f"{len(failing)} failing of {len(pairs)}; predicted {n_pred}; "
                  f"{len(unexpected)} unexpected failures, {len(missing)} predicted but equivalent",
                  {"unexpected": [poset_to_json(p) for p in unexpected],
                   "missing": [poset_to_json(p) for p in missing]}),
        SuiteItem("six-point", "six-point/prediction-up-to-duality", not unexpected_d and not missing_d,
                  f"patterns closed under duality predict {n_pred_d}; "
                  f"{len(unexpected_d)} unexpected failures, {len(missing_d)} predicted but equivalent",
                  {"unexpected": [poset_to_json(p) for p in unexpected_d],
                   "missing": [poset_to_json(p) for p in missing_d]}),
        SuiteItem("six-point", "six-point/minimal-fail", len(pat6_fail) == len(pat6),
                  f"{len(pat6_fail)}/{len(pat6)} catalog six-point patterns fail directly", {"failing": pat6_fail}),
    ]


def _acyclic(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    violations = []
    total = 0
    for n in range(2, 6):
        for p, rep in cache.classify(n):
            total += 1
            if is_acyclic(p) and not rep.equivalent:
                violations.append(poset_to_json(p))
    spots = {
        "diamond": (cat.poset("diamond"), False),
        "P4": (cat.poset("P4"), False),
        "chain5": (cat.poset("chain5"), True),
    }
    items = [SuiteItem("acyclic", "acyclic/implies-equivalent", not violations,
                       f"{len(violations)} acyclic posets with a non-equivalent verdict over {total} classes",
                       {"violations": violations})]
    for name, (p, expected) in spots.items():
        got = discrete_time_equivalence(p)
        items.append(SuiteItem("acyclic", f"acyclic/{name}", got == expected,
                               f"{name}: discrete-time equivalence {got} (expected {expected})", {}))
    return items


def _subposet(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    items = []
    for host in cat.by_group(HOST_6):
        via_p4 = subposet_propagation(host, [cat.poset("P4")])
        direct = check_equivalence(host)
        items.append(SuiteItem("subposet", f"subposet/{host.name}-admits-P4", via_p4 is not None,
                               f"P4 embeds in {host.name}: {via_p4[1].map if via_p4 else None}",
                               {"embedding": via_p4[1].map if via_p4 else None}))
        items.append(SuiteItem("subposet", f"subposet/{host.name}-direct", not direct.equivalent,
                               f"direct verdict on {host.name}: {direct.verdict}", {"stats": direct.stats}))
    return items


def _inclusion(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    checked = 0
    violations = []
    for n in range(1, 6):
        for p in enumerate_posets(n):
            ws = build_monotonicity_inequalities(p)
            for ray in build_increasing_indicators(p):
                for w in ws:
                    checked += 1
                    if sum(a * b for a, b in zip(ray.entries, w.coefficients)) < 0:
                        violations.append({"poset": poset_to_json(p), "map": ray.map.as_dict(),
                                           "upset": w.upset.labels(), "x": w.x, "y": w.y})
    return [SuiteItem("inclusion", "inclusion/indicators-satisfy-inequalities", not violations,
                      f"{len(violations)} violations over {checked} (indicator, inequality) pairs",
                      {"violations": violations[:10]})]


def _dual(cat: Catalog, cache: _Cache) -> list[SuiteItem]:
    mismatches = []
    total = 0
    for n in range(2, 6):
        for p, rep in cache.classify(n):
            total += 1
            if check_equivalence(dual(p)).verdict != rep.verdict:
                mismatches.append(poset_to_json(p))
    return [SuiteItem("dual", "dual/verdict-invariance", not mismatches,
                      f"{len(mismatches)} verdict changes under dualization over {total} classes",
                      {"mismatches": mismatches})]


_RUNNERS: dict[str, Callable[[Catalog, _Cache], list[SuiteItem]]] = {
    "counterexamples": _counterexamples,
    "four-point": _four_point,
    "five-point": _five_point,
    "six-point": _six_point,
    "acyclic": _acyclic,
    "subposet": _subposet,
    "inclusion": _inclusion,
    "dual": _dual,
}


def verify_paper_suite(catalog: Catalog | None = None, only: Iterable[str] | None = None, jobs: int = 1) -> SuiteReport:
    """Run the selected blocks (all by default) and collect pass/fail items."""
    cat = catalog or Catalog.embedded()
    selected = list(BLOCKS) if not only else [b for b in BLOCKS if b in set(only)]
    unknown = set(only or ()) - set(BLOCKS)
    if unknown:
        raise ValueError(f"unknown suite block(s): {', '.join(sorted(unknown))}")
    cache = _Cache(jobs)
    # the transcriptions are validated before anything else runs
    items = _counterexamples(cat, cache)
    if not all(i.passed for i in items):
        for block in selected:
            if block != "counterexamples":
                items.append(SuiteItem(block, f"{block}/skipped", False,
                                       "skipped: catalog transcriptions failed validation", {}))
        return SuiteReport(items)
    if "counterexamples" not in selected:
        items = []
    for block in selected:
        if block != "counterexamples":
            items.extend(_RUNNERS[block](cat, cache))
    return SuiteReport(items)
