"""Deterministic command-line front end for the evidence calculus.

Every verb reads its inputs from files, runs one analysis, and prints a
single report to standard output.  JSON is the machine contract
(``--format json``, the default); ``--format table`` renders the same payload
for humans.  Exit status: 0 for completed analyses (including negative
answers such as "not combinable"), 1 for usage errors and unreadable or
malformed inputs, 2 for domain errors raised by the analysis itself.

Examples::

    evicomb summarize emp.csv --attr Age --frame Age=20..35
    evicomb summarize-where emp.csv --attr Sex --where Dept=Acct --frames frames.json
    evicomb bel delta.json --set "[20..24]"
    evicomb combine m1.json m2.json --format table
    evicomb combinable m1.json m2.json --model zadeh --witness
    evicomb parent cond1.json cond2.json --out parent.csv
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Mapping

from .combination import dempster_combine
from .conditional import (
    MultivaluedMapping,
    build_conflict_free_parent,
    conditional_combinable,
    propagate,
    summarize_where,
)
from .errors import EvidenceError
from .frames import Frame, build_frame, parse_set_expr
from .masses import MassDistribution
from .probability import ProbabilityDistribution, joint_satisfiable, satisfies
from .relations import (
    check_envelope,
    combine_relations,
    relation_from_csv,
    summarize,
    zadeh_combinable,
)


class _InputError(Exception):
    """Anything that prevents assembling the requested operation's inputs."""


# --- input loading -----------------------------------------------------------

_RANGE_SPEC_RE = re.compile(r"(-?[0-9]+)\.\.(-?[0-9]+)\Z")


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc


def _load_json(path: str) -> object:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path}: invalid JSON: {exc}") from exc


def _load_mass(path: str) -> MassDistribution:
    data = _load_json(path)
    try:
        return MassDistribution.from_json_dict(data)
    except (ValueError, EvidenceError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _load_gamma(path: str) -> MultivaluedMapping:
    data = _load_json(path)
    try:
        return MultivaluedMapping.from_json_dict(data)
    except (ValueError, EvidenceError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _load_probability(path: str, frame: Frame) -> ProbabilityDistribution:
    data = _load_json(path)
    try:
        return ProbabilityDistribution.from_json_dict(data, frame)
    except (ValueError, EvidenceError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _frame_from_spec(spec: str) -> Frame:
    """Build a frame from ``lo..hi`` (integer range) or ``a|b|c`` (label list)."""
    spec = spec.strip()
    ranged = _RANGE_SPEC_RE.fullmatch(spec)
    try:
        if ranged:
            lo, hi = int(ranged.group(1)), int(ranged.group(2))
            if lo > hi:
                raise _InputError(f"empty frame range {spec!r}")
            return build_frame(str(value) for value in range(lo, hi + 1))
        return build_frame(part.strip() for part in spec.split("|"))
    except (ValueError, EvidenceError) as exc:
        raise _InputError(f"bad frame spec {spec!r}: {exc}") from exc


def _collect_frames(args: argparse.Namespace) -> dict[str, Frame]:
    frames: dict[str, Frame] = {}
    if getattr(args, "frames", None):
        data = _load_json(args.frames)
        if not isinstance(data, dict):
            raise _InputError(f"{args.frames}: expected an object mapping attribute to frame")
        for attr, value in data.items():
            if isinstance(value, str):
                frames[attr] = _frame_from_spec(value)
            elif isinstance(value, list):
                try:
                    frames[attr] = build_frame(str(label) for label in value)
                except (ValueError, EvidenceError) as exc:
                    raise _InputError(f"{args.frames}: bad frame for {attr!r}: {exc}") from exc
            else:
                raise _InputError(f"{args.frames}: frame for {attr!r} must be a list or a spec string")
    for item in getattr(args, "frame", None) or []:
        attr, sep, spec = item.partition("=")
        if not sep or not attr:
            raise _InputError(f"--frame expects ATTR=SPEC, got {item!r}")
        frames[attr] = _frame_from_spec(spec)
    return frames


def _load_relation(path: str, frames: Mapping[str, Frame]):
    text = _read_text(path)
    try:
        return relation_from_csv(text, frames, name=path)
    except (ValueError, EvidenceError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _parse_set_arg(frame: Frame, expr: str):
    try:
        return parse_set_expr(frame, expr)
    except EvidenceError as exc:
        raise _InputError(f"bad set expression {expr!r}: {exc}") from exc


def _parse_where(clause: str) -> list[tuple[str, str]]:
    pairs = []
    for part in clause.split(","):
        attr, sep, value = part.partition("=")
        if not sep or not attr or not value:
            raise _InputError(f"--where expects ATTR=VALUE[,ATTR=VALUE], got {part!r}")
        pairs.append((attr.strip(), value.strip()))
    return pairs


# --- verb handlers -----------------------------------------------------------

def _ratio(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def _cmd_summarize(args: argparse.Namespace) -> object:
    relation = _load_relation(args.relation, _collect_frames(args))
    return summarize(relation, args.attr).distribution.to_json_dict()


def _cmd_summarize_where(args: argparse.Namespace) -> object:
    relation = _load_relation(args.relation, _collect_frames(args))
    conditions = _parse_where(args.where)
    return summarize_where(relation, args.attr, conditions).to_json_dict()


def _cmd_bel(args: argparse.Namespace) -> object:
    mass = _load_mass(args.mass)
    event = _parse_set_arg(mass.frame, args.set)
    return _ratio(mass.belief(event))


def _cmd_pls(args: argparse.Namespace) -> object:
    mass = _load_mass(args.mass)
    event = _parse_set_arg(mass.frame, args.set)
    return _ratio(mass.plausibility(event))


def _cmd_combine(args: argparse.Namespace) -> object:
    m1 = _load_mass(args.mass1)
    m2 = _load_mass(args.mass2)
    return dempster_combine(m1, m2).to_json_dict()


def _cmd_combinable(args: argparse.Namespace) -> object:
    m1 = _load_mass(args.mass1)
    m2 = _load_mass(args.mass2)
    if args.model == "conditional":
        if args.witness:
            raise _InputError("--witness applies only to --model zadeh")
        return conditional_combinable(m1, m2)
    witness = zadeh_combinable(m1, m2)
    if not args.witness:
        return witness.feasible
    return {
        "feasible": witness.feasible,
        "joint_weights": None
        if witness.joint_weights is None
        else [
            {"a": a.render(), "b": b.render(), "num": w.numerator, "den": w.denominator}
            for a, b, w in witness.joint_weights
        ],
        "blocking_focal": None
        if witness.blocking_focal is None
        else witness.blocking_focal.render(),
    }


def _cmd_parent(args: argparse.Namespace) -> object:
    m1 = _load_mass(args.mass1)
    m2 = _load_mass(args.mass2)
    parent = build_conflict_free_parent(m1, m2)
    try:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(parent.to_csv())
    except OSError as exc:
        raise _InputError(f"cannot write {args.out}: {exc}") from exc
    return {"out": args.out, "rows": parent.row_count}


def _cmd_propagate(args: argparse.Namespace) -> object:
    mass = _load_mass(args.mass)
    gamma = _load_gamma(args.map)
    return propagate(mass, gamma).to_json_dict()


def _cmd_relcombine(args: argparse.Namespace) -> object:
    frames = _collect_frames(args)
    r1 = _load_relation(args.relation1, frames)
    r2 = _load_relation(args.relation2, frames)
    combined = combine_relations(r1, r2, args.attr)
    return {
        "name": combined.name,
        "attribute": args.attr,
        "rows": [
            {"name": row.row_id, "set": row.cells[0].render()} for row in combined.rows
        ],
    }


def _cmd_satisfies(args: argparse.Namespace) -> object:
    mass = _load_mass(args.mass)
    point = _load_probability(args.prob, mass.frame)
    return satisfies(point, mass)


def _cmd_satisfiable(args: argparse.Namespace) -> object:
    m1 = _load_mass(args.mass1)
    m2 = _load_mass(args.mass2)
    witness = joint_satisfiable(m1, m2)
    return {
        "satisfiable": witness is not None,
        "witness": None if witness is None else witness.to_json_dict(),
    }


def _cmd_check_envelope(args: argparse.Namespace) -> object:
    frames = _collect_frames(args)
    ra = _load_relation(args.relation1, frames)
    rb = _load_relation(args.relation2, frames)
    return check_envelope(ra, rb, args.attr)


# --- output ------------------------------------------------------------------

def _table_lines(payload: object) -> list[str]:
    if isinstance(payload, bool):
        return ["true" if payload else "false"]
    assert isinstance(payload, dict)
    if "focal" in payload:
        lines = []
        if payload.get("conditions"):
            lines.append("conditions: " + ", ".join(payload["conditions"]))
        width = max(len(entry["set"]) for entry in payload["focal"])
        for entry in payload["focal"]:
            weight = Fraction(entry["num"], entry["den"])
            lines.append(f"{entry['set']:<{width}}  {weight}")
        return lines
    if set(payload) == {"num", "den"}:
        return [str(Fraction(payload["num"], payload["den"]))]
    if set(payload) == {"p"}:
        width = max(len(entry["label"]) for entry in payload["p"])
        return [
            f"{entry['label']:<{width}}  {Fraction(entry['num'], entry['den'])}"
            for entry in payload["p"]
        ]
    if "satisfiable" in payload:
        lines = ["satisfiable: " + ("true" if payload["satisfiable"] else "false")]
        if payload["witness"] is not None:
            lines.extend(_table_lines(payload["witness"]))
        return lines
    if "feasible" in payload:
        lines = ["feasible: " + ("true" if payload["feasible"] else "false")]
        if payload["blocking_focal"] is not None:
            lines.append(f"blocking focal: {payload['blocking_focal']}")
        for entry in payload["joint_weights"] or []:
            weight = Fraction(entry["num"], entry["den"])
            lines.append(f"{entry['a']}  {entry['b']}  {weight}")
        return lines
    if "out" in payload:
        return [f"rows: {payload['rows']}", f"out: {payload['out']}"]
    if "attribute" in payload:
        width = max((len(str(row["name"])) for row in payload["rows"]), default=4)
        width = max(width, len("Name"))
        lines = [f"{'Name':<{width}}  {payload['attribute']}"]
        for row in payload["rows"]:
            lines.append(f"{row['name']:<{width}}  {row['set']}")
        return lines
    raise AssertionError(f"unrenderable payload: {payload!r}")


def _emit(verb: str, payload: object, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps({"verb": verb, "result": payload}, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_table_lines(payload)) + "\n")


# --- argument grammar --------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evicomb",
        description="Exact evidence-combination analyses over mass distributions and set-valued relations.",
    )
    parser.add_argument("--format", choices=("json", "table"), default="json",
                        help="output format (default: json)")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS,
                     help="output format (default: json)")
    framed = argparse.ArgumentParser(add_help=False)
    framed.add_argument("--frame", action="append", metavar="ATTR=SPEC",
                        help="declare an attribute frame: lo..hi or a|b|c (repeatable)")
    framed.add_argument("--frames", metavar="FILE",
                        help="JSON file mapping attribute names to frames")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("summarize", parents=[fmt, framed],
                       help="summarize a relation column into a granular distribution")
    p.add_argument("relation", help="relation CSV file")
    p.add_argument("--attr", required=True, help="attribute to summarize")
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("summarize-where", parents=[fmt, framed],
                       help="summarize rows matching ATTR=VALUE conditions")
    p.add_argument("relation", help="relation CSV file")
    p.add_argument("--attr", required=True, help="attribute to summarize")
    p.add_argument("--where", required=True, metavar="ATTR=VALUE[,ATTR=VALUE]",
                   help="row-selection conditions")
    p.set_defaults(func=_cmd_summarize_where)

    p = sub.add_parser("bel", parents=[fmt], help="belief of a set")
    p.add_argument("mass", help="mass distribution JSON file")
    p.add_argument("--set", required=True, help="set expression, e.g. '{a|b}' or '[20..24]'")
    p.set_defaults(func=_cmd_bel)

    p = sub.add_parser("pls", parents=[fmt], help="plausibility of a set")
    p.add_argument("mass", help="mass distribution JSON file")
    p.add_argument("--set", required=True, help="set expression, e.g. '{a|b}' or '[20..24]'")
    p.set_defaults(func=_cmd_pls)

    p = sub.add_parser("combine", parents=[fmt], help="combine two distributions by Dempster's rule")
    p.add_argument("mass1", help="first mass distribution JSON file")
    p.add_argument("mass2", help="second mass distribution JSON file")
    p.set_defaults(func=_cmd_combine)

    p = sub.add_parser("combinable", parents=[fmt], help="decide combinability of two distributions")
    p.add_argument("mass1", help="first mass distribution JSON file")
    p.add_argument("mass2", help="second mass distribution JSON file")
    p.add_argument("--model", choices=("zadeh", "conditional"), default="conditional",
                   help="combinability criterion (default: conditional)")
    p.add_argument("--witness", action="store_true",
                   help="with --model zadeh, include joint weights or the blocking focal element")
    p.set_defaults(func=_cmd_combinable)

    p = sub.add_parser("parent", parents=[fmt],
                       help="construct a conflict-free parent relation of two conditional distributions")
    p.add_argument("mass1", help="first mass distribution JSON file")
    p.add_argument("mass2", help="second mass distribution JSON file")
    p.add_argument("--out", required=True, help="output CSV path for the parent relation")
    p.set_defaults(func=_cmd_parent)

    p = sub.add_parser("propagate", parents=[fmt],
                       help="push a distribution through a multivalued mapping")
    p.add_argument("mass", help="mass distribution JSON file (singleton focal elements)")
    p.add_argument("--map", required=True, help="multivalued mapping JSON file")
    p.set_defaults(func=_cmd_propagate)

    p = sub.add_parser("relcombine", parents=[fmt, framed],
                       help="combine two relations entrywise on one attribute")
    p.add_argument("relation1", help="first relation CSV file")
    p.add_argument("relation2", help="second relation CSV file")
    p.add_argument("--attr", required=True, help="attribute to combine on")
    p.set_defaults(func=_cmd_relcombine)

    p = sub.add_parser("satisfies", parents=[fmt],
                       help="check a probability distribution against a constraint set")
    p.add_argument("prob", help="probability distribution JSON file")
    p.add_argument("mass", help="mass distribution JSON file")
    p.set_defaults(func=_cmd_satisfies)

    p = sub.add_parser("satisfiable", parents=[fmt],
                       help="find a probability distribution satisfying both constraint sets")
    p.add_argument("mass1", help="first mass distribution JSON file")
    p.add_argument("mass2", help="second mass distribution JSON file")
    p.set_defaults(func=_cmd_satisfiable)

    p = sub.add_parser("check-envelope", parents=[fmt, framed],
                       help="verify the belief/plausibility envelope of entrywise-contained relations")
    p.add_argument("relation1", help="outer (containing) relation CSV file")
    p.add_argument("relation2", help="inner (contained) relation CSV file")
    p.add_argument("--attr", required=True, help="attribute to check")
    p.set_defaults(func=_cmd_check_envelope)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        payload = args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EvidenceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit(args.verb, payload, args.format)
    return 0


run = main


if __name__ == "__main__":
    raise SystemExit(main())
