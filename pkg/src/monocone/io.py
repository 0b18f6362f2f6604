"""JSON interchange: posets, generators, cones, reports, and input resolution."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .cones import RateVector, pair_coordinates
from .equivalence import CouplingDecomposition, CounterexampleCheck, EquivalenceReport
from .errors import InputError, MonoconeError, ParseError, ValidationError
from .polyhedral import FarkasCertificate
from .poset import Poset

_RATIONAL = re.compile(r"-?\d+(?:/\d+)?\Z")


def parse_rational(text: str, where: str = "rate") -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` exactly; q must be a positive integer."""
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ParseError(f"{where}: {text!r} is not of the form 'p' or 'p/q'")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"{where}: {text!r} has a zero denominator")
    return Fraction(int(num), int(den or 1))


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- posets and generators ---------------------------------------------------


def poset_from_json(data: Any, source: str = "poset") -> Poset:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: expected a JSON object")
    for key in ("elements", "covers"):
        if key not in data:
            raise ParseError(f"{source}: missing field {key!r}")
    elements = data["elements"]
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise ParseError(f"{source}: field 'elements' must be a list of strings")
    covers = data["covers"]
    if not isinstance(covers, list):
        raise ParseError(f"{source}: field 'covers' must be a list")
    for k, pair in enumerate(covers):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise ParseError(f"{source}: covers[{k}] must be a [lower, upper] pair of labels")
    return Poset.from_covers(elements, [tuple(c) for c in covers], name=str(data.get("name", "")))


def poset_to_json(p: Poset) -> dict:
    return p.to_json()


def generator_from_json(data: Any, p: Poset, source: str = "generator") -> RateVector:
    if not isinstance(data, dict) or not isinstance(data.get("rates"), list):
        raise ParseError(f"{source}: expected an object with a 'rates' list")
    rates: dict[tuple[str, str], Fraction] = {}
    for k, entry in enumerate(data["rates"]):
        where = f"{source}: rates[{k}]"
        if not isinstance(entry, dict) or not {"from", "to", "rate"} <= entry.keys():
            raise ParseError(f"{where} needs 'from', 'to' and 'rate'")
        key = (entry["from"], entry["to"])
        q = parse_rational(entry["rate"], f"{where}.rate")
        if q < 0:
            raise ValidationError(f"{where}: rate {entry['rate']} is negative")
        rates[key] = rates.get(key, Fraction(0)) + q
    return RateVector.from_rates(p, rates)


def generator_to_json(L: RateVector, poset_name: str | None = None) -> dict:
    return {
        "poset": poset_name if poset_name is not None else L.poset.name,
        "rates": [{"from": x, "to": y, "rate": fmt_rational(v)} for (x, y), v in L.rates().items()],
    }


# -- certificates and reports -------------------------------------------------


def farkas_to_json(cert: FarkasCertificate, p: Poset | None = None) -> dict:
    out = cert.to_json()
    if p is not None:
        els = p.elements
        out["coordinates"] = [[els[i], els[j]] for i, j in pair_coordinates(p)]
    return out


def farkas_from_json(data: dict) -> FarkasCertificate:
    return FarkasCertificate(
        tuple(int(parse_rational(s, "separator")) for s in data["separator"]),
        tuple(parse_rational(s, "target") for s in data["target"]),
    )


def proof_to_json(proof) -> list[dict]:
    return [
        {"upset": w.upset.labels(), "x": w.x, "y": w.y, "value": fmt_rational(v)}
        for w, v in proof
    ]


def report_to_json(rep: EquivalenceReport) -> dict:
    p = rep.poset
    return {
        "poset": p.name,
        "structure": poset_to_json(p),
        "verdict": rep.verdict,
        "witness": generator_to_json(rep.witness) if rep.witness is not None else None,
        "farkas": farkas_to_json(rep.farkas, p) if rep.farkas is not None else None,
        "monotonicity_proof": proof_to_json(rep.monotonicity_proof),
        "stats": dict(rep.stats),
    }


def decomposition_to_json(dec: CouplingDecomposition) -> list[dict]:
    return [{"map": f.as_dict(), "rate": fmt_rational(lam)} for f, lam in dec.terms]


def check_to_json(chk: CounterexampleCheck, p: Poset) -> dict:
    return {
        "poset": p.name,
        "status": "confirmed" if chk.confirmed else "refuted",
        "reason": chk.reason,
        "monotonicity_proof": proof_to_json(chk.monotonicity_proof),
        "farkas": farkas_to_json(chk.farkas, p) if chk.farkas is not None else None,
        "decomposition": decomposition_to_json(chk.decomposition) if chk.decomposition is not None else None,
    }


def cone_from_json(data: dict):
    from .polyhedral import HCone, VCone

    dim = int(data["dim"])
    if "normals" in data:
        return HCone(dim, [[parse_rational(s, "normal") for s in a] for a in data["normals"]])
    return VCone(dim, [[parse_rational(s, "ray") for s in r] for r in data["rays"]])


# -- catalog and input resolution ----------------------------------------------


class Catalog:
    """Named posets and generators, loaded from JSON."""

    def __init__(self, data: dict):
        self.data = data
        self.posets: dict[str, Poset] = {}
        self.groups: dict[str, str] = {}
        for entry in data.get("posets", []):
            p = poset_from_json(entry, f"catalog poset {entry.get('name')!r}")
            self.posets[p.name] = p
            self.groups[p.name] = entry.get("group", "")
        self.generators: dict[str, RateVector] = {}
        for entry in data.get("generators", []):
            name = entry["name"]
            if entry["poset"] not in self.posets:
                raise ValidationError(f"catalog generator {name!r} references unknown poset {entry['poset']!r}")
            self.generators[name] = generator_from_json(entry, self.posets[entry["poset"]], f"catalog generator {name!r}")

    @classmethod
    def embedded(cls) -> "Catalog":
        text = resources.files("monocone").joinpath("data/catalog.json").read_text(encoding="utf-8")
        return cls(json.loads(text))

    @classmethod
    def from_path(cls, path: str | Path) -> "Catalog":
        return cls(read_json(path))

    def poset(self, name: str) -> Poset:
        try:
            return self.posets[name]
        except KeyError:
            raise InputError(f"no catalog poset named {name!r}") from None

    def generator(self, name: str) -> RateVector:
        try:
            return self.generators[name]
        except KeyError:
            raise InputError(f"no catalog generator named {name!r}") from None

    def by_group(self, group: str) -> list[Poset]:
        return [p for name, p in self.posets.items() if self.groups[name] == group]


class FileNotFound(InputError):
    pass


def read_json(path: str | Path) -> Any:
    path = Path(path)
    if not path.is_file():
        raise FileNotFound(f"{path}: no such file")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_poset(ref: str, catalog: Catalog) -> Poset:
    if ref.startswith("catalog:"):
        return catalog.poset(ref[len("catalog:"):])
    p = poset_from_json(read_json(ref), ref)
    return p if p.name else p.renamed(Path(ref).stem)


def load_generator(ref: str, catalog: Catalog, p: Poset | None = None) -> tuple[RateVector, Poset]:
    """Resolve a generator reference; the poset defaults to the one it names."""
    if ref.startswith("catalog:"):
        L = catalog.generator(ref[len("catalog:"):])
        if p is not None and p.elements != L.poset.elements:
            raise ValidationError(f"{ref} is indexed by {list(L.poset.elements)}, poset has {list(p.elements)}")
        if p is not None:
            L = RateVector(p, L.values)
        return L, p or L.poset
    data = read_json(ref)
    if p is None:
        name = data.get("poset") if isinstance(data, dict) else None
        if not isinstance(name, str):
            raise ParseError(f"{ref}: missing field 'poset' and no --poset given")
        p = catalog.poset(name)
    return generator_from_json(data, p, ref), p


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


__all__ = [
    "Catalog",
    "FileNotFound",
    "MonoconeError",
    "dumps",
    "load_generator",
    "load_poset",
    "parse_rational",
]
