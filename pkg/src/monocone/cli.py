"""Command-line front end: ``monocone <command> [options]``.

Exit status is 0 whenever a verdict was computed (whatever it says), 1 for bad
input, and 2 when an internal check fails or a ``verify-paper`` item fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable

from .cones import is_monotone, monotonicity_proof
from .equivalence import (
    CouplingDecomposition,
    check_equivalence,
    classify,
    completely_monotone_cone,
    coupling_decomposition,
    discrete_time_equivalence,
    monotone_cone,
    verify_counterexample,
)
from .errors import InputError, MonoconeError
from .io import (
    Catalog,
    check_to_json,
    decomposition_to_json,
    dumps,
    farkas_to_json,
    fmt_rational,
    generator_to_json,
    load_generator,
    load_poset,
    poset_to_json,
    proof_to_json,
    report_to_json,
)
from .poset import dual, induced_subposet_search, is_acyclic
from .suite import BLOCKS, verify_paper_suite

log = logging.getLogger("monocone")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    output: str | None = None
    format: str = "json"
    jobs: int = 1
    dump_cones: bool = False
    catalog: str | None = None


@dataclass
class Result:
    """What a command produced: a JSON payload, its text rendering, an exit code."""

    payload: Any
    text: str
    status: int = EXIT_OK


# -- text rendering -------------------------------------------------------------


def _rates_text(rates: list[dict]) -> str:
    if not rates:
        return "  (zero generator)"
    return "\n".join(f"  L[{r['from']},{r['to']}] = {r['rate']}" for r in rates)


def _farkas_text(cert: dict) -> str:
    pairs = zip(cert["coordinates"], cert["separator"])
    nz = [f"  y[{x},{y}] = {v}" for (x, y), v in pairs if v != "0"]
    return "\n".join(nz)


def _report_text(rep: dict) -> str:
    lines = [f"poset {rep['poset']}: {rep['verdict']}"]
    stats = rep["stats"]
    lines.append("  " + ", ".join(f"{k}={v}" for k, v in stats.items()))
    if rep["witness"] is not None:
        lines.append("witness (monotone, not completely monotone):")
        lines.append(_rates_text(rep["witness"]["rates"]))
        lines.append("separator (nonnegative on every indicator ray, negative on the witness):")
        lines.append(_farkas_text(rep["farkas"]))
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------


def _catalog(cfg: RunConfig) -> Catalog:
    return Catalog.from_path(cfg.catalog) if cfg.catalog else Catalog.embedded()


def _poset_and_generator(cfg: RunConfig):
    cat = _catalog(cfg)
    p = load_poset(cfg.args.poset, cat) if cfg.args.poset else None
    L, p = load_generator(cfg.args.generator, cat, p)
    return p, L


def cmd_check_monotone(cfg: RunConfig) -> Result:
    p, L = _poset_and_generator(cfg)
    verdict = is_monotone(p, L)
    payload = {
        "poset": p.name,
        "generator": generator_to_json(L, p.name),
        "monotone": verdict.monotone,
        "violation": None if verdict.monotone else {
            "upset": verdict.upset.labels(), "x": verdict.x, "y": verdict.y, "value": fmt_rational(verdict.value),
        },
        "monotonicity_proof": proof_to_json(monotonicity_proof(p, L)),
    }
    if verdict.monotone:
        text = f"{p.name}: monotone ({len(payload['monotonicity_proof'])} inequalities hold)"
    else:
        v = payload["violation"]
        text = f"{p.name}: not monotone; up-set {v['upset']}, x={v['x']}, y={v['y']} gives {v['value']}"
    return Result(payload, text)


def cmd_check_cmon(cfg: RunConfig) -> Result:
    p, L = _poset_and_generator(cfg)
    result = coupling_decomposition(p, L)
    if isinstance(result, CouplingDecomposition):
        terms = decomposition_to_json(result)
        payload = {"poset": p.name, "completely_monotone": True, "decomposition": terms, "farkas": None}
        lines = [f"{p.name}: completely monotone, {len(terms)} coupling terms"]
        lines += [f"  {t['rate']} x {t['map']}" for t in terms]
    else:
        cert = farkas_to_json(result, p)
        payload = {"poset": p.name, "completely_monotone": False, "decomposition": None, "farkas": cert}
        lines = [f"{p.name}: not completely monotone; separator:", _farkas_text(cert)]
    return Result(payload, "\n".join(lines))


def _cones_json(p) -> dict:
    h, _ = monotone_cone(p)
    v, _ = completely_monotone_cone(p)
    return {"monotone": h.to_json(), "completely_monotone": v.to_json()}


def cmd_equivalence(cfg: RunConfig) -> Result:
    p = load_poset(cfg.args.poset, _catalog(cfg))
    payload = report_to_json(check_equivalence(p))
    if cfg.dump_cones:
        payload["cones"] = _cones_json(p)
    return Result(payload, _report_text(payload))


def cmd_verify(cfg: RunConfig) -> Result:
    p, L = _poset_and_generator(cfg)
    chk = verify_counterexample(p, L)
    payload = {"generator": generator_to_json(L, p.name), **check_to_json(chk, p)}
    lines = [f"{p.name}: {payload['status']} ({chk.reason})"]
    if payload["farkas"] is not None:
        lines += ["separator:", _farkas_text(payload["farkas"])]
    return Result(payload, "\n".join(lines))


def cmd_classify(cfg: RunConfig) -> Result:
    pairs = classify(cfg.args.size, jobs=cfg.jobs)
    failing = sum(not r.equivalent for _, r in pairs)
    shown = [(p, r) for p, r in pairs if not (cfg.args.only_failing and r.equivalent)]
    reports = []
    for p, r in shown:
        rep = report_to_json(r)
        if cfg.dump_cones:
            rep["cones"] = _cones_json(p)
        reports.append(rep)
    payload = {"size": cfg.args.size, "classes": len(pairs), "failing": failing, "reports": reports}
    lines = [f"size {cfg.args.size}: {failing} failing classes out of {len(pairs)}"]
    for rep in reports:
        covers = ", ".join(f"{a}<{b}" for a, b in rep["structure"]["covers"]) or "(no covers)"
        lines.append(f"  {rep['poset']} [{covers}]: {rep['verdict']}")
    return Result(payload, "\n".join(lines))


def cmd_subposet(cfg: RunConfig) -> Result:
    cat = _catalog(cfg)
    pattern = load_poset(cfg.args.pattern, cat)
    host = load_poset(cfg.args.host, cat)
    emb = induced_subposet_search(host, pattern) if len(pattern) <= len(host) else None
    payload = {"pattern": pattern.name, "host": host.name, "embedding": emb.map if emb else None}
    if emb is None:
        text = f"{pattern.name} is not an induced subposet of {host.name}"
    else:
        text = f"{pattern.name} embeds in {host.name}: " + ", ".join(f"{a}->{b}" for a, b in emb.map.items())
    return Result(payload, text)


def cmd_acyclic(cfg: RunConfig) -> Result:
    p = load_poset(cfg.args.poset, _catalog(cfg))
    acyclic = is_acyclic(p)
    payload = {"poset": p.name, "acyclic": acyclic, "discrete_time_equivalent": discrete_time_equivalence(p)}
    text = f"{p.name}: Hasse diagram is {'a forest' if acyclic else 'not a forest'}; " \
           f"discrete-time equivalence {'holds' if acyclic else 'fails'}"
    return Result(payload, text)


def cmd_verify_paper(cfg: RunConfig) -> Result:
    report = verify_paper_suite(_catalog(cfg), only=cfg.args.only, jobs=cfg.jobs)
    return Result(report.to_json(), report.to_text().rstrip("\n"), EXIT_OK if report.passed else EXIT_INTERNAL)


def cmd_dual(cfg: RunConfig) -> Result:
    q = dual(load_poset(cfg.args.poset, _catalog(cfg)))
    payload = poset_to_json(q)
    text = f"{q.name}: " + (", ".join(f"{a}<{b}" for a, b in payload["covers"]) or "(no covers)")
    return Result(payload, text)


COMMANDS: dict[str, Callable[[RunConfig], Result]] = {
    "check-monotone": cmd_check_monotone,
    "check-cmon": cmd_check_cmon,
    "equivalence": cmd_equivalence,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "subposet": cmd_subposet,
    "acyclic": cmd_acyclic,
    "verify-paper": cmd_verify_paper,
    "dual": cmd_dual,
}


# -- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # a malformed command line is bad input, so it exits 1 like any other
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # registered on the main parser and on every subcommand, so the flags may
    # appear on either side of the command name
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("json", "text"), default=d("json"), help="report format")
    parser.add_argument("--output", "-o", default=d(None), help="write the report here instead of stdout")
    parser.add_argument("--jobs", type=_positive_int, default=d(1), help="worker processes for classification")
    parser.add_argument("--dump-cones", action="store_true", default=d(False),
                        help="embed both cones (H and V form) in equivalence reports")
    parser.add_argument("--catalog", default=d(None), help="catalog JSON replacing the embedded one")
    parser.add_argument("--verbose", "-v", action="store_true", default=d(False), help="debug logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="monocone",
        description="Monotone vs completely monotone Markov generators on finite posets.",
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=_Parser)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, description=help)
        _global_flags(sp, suppress=True)
        return sp

    for name, help in (
        ("check-monotone", "test a generator against every monotonicity inequality"),
        ("check-cmon", "decompose a generator into coupling terms, or separate it from that cone"),
        ("verify", "confirm a generator is monotone but not completely monotone"),
    ):
        sp = add(name, help)
        sp.add_argument("--poset", help="poset file or catalog:NAME (default: the poset the generator names)")
        sp.add_argument("--generator", required=True, help="generator file or catalog:NAME")

    add("equivalence", "decide whether both cones coincide").add_argument("--poset", required=True)
    sp = add("classify", "decide every isomorphism class of a given size")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--only-failing", action="store_true", help="list only the classes where equivalence fails")
    sp = add("subposet", "search for an induced subposet embedding")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--host", required=True)
    add("acyclic", "discrete-time criterion: is the Hasse diagram a forest").add_argument("--poset", required=True)
    sp = add("verify-paper", "run the reproduction suite")
    sp.add_argument("--only", action="append", choices=BLOCKS, metavar="BLOCK",
                    help=f"run only this block (repeatable): {', '.join(BLOCKS)}")
    add("dual", "print the order dual of a poset").add_argument("--poset", required=True)
    return parser


def execute(cfg: RunConfig) -> tuple[int, str]:
    """Run one command; returns the exit status and the rendered report."""
    result = COMMANDS[cfg.command](cfg)
    rendered = dumps(result.payload) if cfg.format == "json" else result.text + "\n"
    return result.status, rendered


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig(args.command, args, args.output, args.format, args.jobs, args.dump_cones, args.catalog)
    try:
        status, rendered = execute(cfg)
    except InputError as exc:
        print(f"monocone: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MonoconeError as exc:
        print(f"monocone: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(rendered)
        except OSError as exc:
            print(f"monocone: error: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(rendered)
    return status


if __name__ == "__main__":
    sys.exit(main())
