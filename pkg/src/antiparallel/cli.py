"""
Command-line front end.

Every subcommand reads a vector-set document (``INPUT`` path) or a built-in
``--fixture``, except ``flip``, which takes its circle normal directly.
Exit status is 0 whenever a report is produced, including impossible or
infeasible verdicts; 2 signals unreadable or malformed input and 3 an input
that parses but is invalid.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bloch import GEOM_TOL, BlochVector, GreatCircle, great_circle_fit, qubit_from_bloch
from .errors import AntiparallelError
from .fixtures import FIXTURES
from .machines import flipper_for_circle, machine_fidelity
from .protrans import compare_sets, max_uniform_gamma, rank_obstruction, usd_max_success
from .report import (
    DocumentError,
    VectorSet,
    circle_dict,
    fmt,
    format_matrix,
    load_document,
    report_dict,
    report_text,
    usd_dict,
    verdict_dict,
    verdict_text,
)
from .linalg import DEFAULT_RANK_TOL
from .states import antiparallel, exact_transformability, parallel, span_dimension

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise DocumentError(message)


def _triple(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.replace(" ", "").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 comma-separated numbers, got {text!r}")
    return np.array(parts)


def _reals(text: str) -> list[float]:
    try:
        return [float(p) for p in text.replace(" ", "").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    # Global flags may come before or after the subcommand; the subcommand
    # copies default to SUPPRESS so they do not clobber values given earlier.
    parser = _Parser(prog="antiparallel", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--tol", type=float, default=GEOM_TOL, help="geometric/phase tolerance")
    parser.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    parser.add_argument("--fixture", choices=sorted(FIXTURES), help="use a built-in vector set")
    parser.add_argument("-v", "--verbose", action="store_true")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--fixture", choices=sorted(FIXTURES), default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("flip", parents=[common], help="print the flip machine for a great circle")
    p.add_argument("--normal", type=_triple, required=True, help="circle normal x,y,z")
    p.add_argument("--probe", type=_triple, help="Bloch vector x,y,z to evaluate")

    def with_input(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("input", nargs="?", help="vector-set JSON document")
        return p

    with_input("circle-fit", "fit a great circle through the vectors")
    with_input("span", "span dimensions of the parallel and anti-parallel sets")
    for name, what in (("exact", "exact"), ("protrans", "probabilistic exact")):
        p = with_input(name, f"{what} transformability of P <-> A")
        p.add_argument("--direction", choices=("pa", "ap", "both"), default="both")
    p = with_input("usd", "optimal unambiguous discrimination")
    p.add_argument("--priors", type=_reals, help="comma-separated priors (default: uniform)")
    p.add_argument(
        "--states",
        choices=("parallel", "antiparallel", "both", "qubit"),
        default="both",
        help="which state family to discriminate",
    )
    with_input("analyze", "full parallel vs anti-parallel report")
    return parser


def _load(args) -> VectorSet:
    if args.fixture and args.input:
        raise DocumentError("give either INPUT or --fixture, not both")
    if args.fixture:
        return VectorSet(FIXTURES[args.fixture]())
    if not args.input:
        raise DocumentError("an INPUT document or --fixture is required")
    return load_document(args.input)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_flip(args) -> dict:
    circle = GreatCircle.from_normal(args.normal)
    m = flipper_for_circle(circle)
    payload = {
        "normal": circle.normal.as_array().tolist(),
        "u2": [[[z.real, z.imag] for z in row] for row in m.u2],
        "u4": [[[z.real, z.imag] for z in row] for row in m.u4],
    }
    lines = [
        "circle normal: (" + ", ".join(fmt(c) for c in circle.normal.as_array()) + ")",
        "u2 =",
        format_matrix(m.u2),
        "u4 = I (x) u2 =",
        format_matrix(m.u4),
    ]
    if args.probe is not None:
        probe = BlochVector.from_array(args.probe, normalize=True)
        fid = machine_fidelity(m, probe)
        payload["probe"] = probe.as_array().tolist()
        payload["fidelity"] = fid
        lines.append(f"fidelity at probe: {fmt(fid)}")
    _emit(args, payload, "\n".join(lines))
    return payload


def cmd_circle_fit(args) -> dict:
    vs = _load(args)
    circle = great_circle_fit(vs.vectors, args.tol)
    payload = {"circle": circle_dict(circle)}
    if isinstance(circle, GreatCircle):
        text = "great circle: normal (" + ", ".join(fmt(c) for c in circle.normal.as_array()) + ")"
    else:
        text = f"no great circle (residual {fmt(circle.residual)})"
    _emit(args, payload, text)
    return payload


def _families(vs: VectorSet):
    return [parallel(v) for v in vs.vectors], [antiparallel(v) for v in vs.vectors]


def cmd_span(args) -> dict:
    vs = _load(args)
    par, anti = _families(vs)
    rank_tol = max(args.tol, DEFAULT_RANK_TOL)
    payload = {
        "dims": {
            "parallel": span_dimension(par, rank_tol),
            "antiparallel": span_dimension(anti, rank_tol),
        }
    }
    text = f"span dims: parallel {payload['dims']['parallel']}, anti-parallel {payload['dims']['antiparallel']}"
    _emit(args, payload, text)
    return payload


def _directional(args, fn) -> dict:
    vs = _load(args)
    par, anti = _families(vs)
    payload, lines = {}, []
    if args.direction in ("pa", "both"):
        r = fn(par, anti, args.tol)
        payload["pa"] = verdict_dict(r)
        lines.append(f"P -> A: {verdict_text(r)}")
    if args.direction in ("ap", "both"):
        r = fn(anti, par, args.tol)
        payload["ap"] = verdict_dict(r)
        lines.append(f"A -> P: {verdict_text(r)}")
    _emit(args, payload, "\n".join(lines))
    return payload


def cmd_exact(args) -> dict:
    return _directional(args, exact_transformability)


def cmd_protrans(args) -> dict:
    payload = _directional(args, max_uniform_gamma)
    return payload


def cmd_usd(args) -> dict:
    vs = _load(args)
    priors = args.priors if args.priors is not None else vs.priors
    families = {
        "qubit": lambda: [qubit_from_bloch(v) for v in vs.vectors],
        "parallel": lambda: _families(vs)[0],
        "antiparallel": lambda: _families(vs)[1],
    }
    wanted = ("parallel", "antiparallel") if args.states == "both" else (args.states,)
    rank_tol = max(args.tol, DEFAULT_RANK_TOL)
    payload, blocks = {}, []
    for name in wanted:
        res = usd_max_success(families[name](), priors, tol=rank_tol)
        payload[name] = usd_dict(res)
        rows = [f"{name} states"]
        rows += [f"  {vs.label(i):<10} gamma = {fmt(g)}" for i, g in enumerate(res.gammas)]
        rows.append(f"  total success = {fmt(res.value)}")
        blocks.append("\n".join(rows))
    _emit(args, payload, "\n".join(blocks))
    return payload


def cmd_analyze(args) -> dict:
    vs = _load(args)
    report = compare_sets(vs.vectors, args.tol)
    payload = report_dict(report, vs.labels)
    _emit(args, payload, report_text(report))
    return payload


COMMANDS = {
    "flip": cmd_flip,
    "circle-fit": cmd_circle_fit,
    "span": cmd_span,
    "exact": cmd_exact,
    "protrans": cmd_protrans,
    "usd": cmd_usd,
    "analyze": cmd_analyze,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_PARSE
    if args.command == "flip" and np.linalg.norm(args.normal) == 0:
        print("error: --normal must be nonzero", file=sys.stderr)
        return EXIT_PARSE
    try:
        COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AntiparallelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
