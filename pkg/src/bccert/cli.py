"""Command-line front end.

Exit codes: 0 established/primitive, 10 not established, 11 abstained
(weight cap exceeded), 2 input error.  Reports go to stdout, diagnostics to
stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .certify import (
    CertReport, DescriptorError, PrimitivityVerdict, Reason, certify_iterated,
    check_one_relator, validate,
)
from .linkdiag import LinkVerdict, is_primitive_link
from .magnus import DEFAULT_WEIGHT_CAP
from .schema import (
    SchemaError, decode_diagram, dumps, link_verdict_to_json, load_jobs,
    primitivity_to_json, report_to_json,
)
from .words import Presentation, PresentationSyntaxError, TrivialRelatorError, parse_presentation

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_ESTABLISHED = 10
EXIT_ABSTAINED = 11

ENV_CAP = "BCC_WEIGHT_CAP"


class InputError(Exception):
    pass


def default_cap() -> int:
    raw = os.environ.get(ENV_CAP)
    if raw is None:
        return DEFAULT_WEIGHT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{ENV_CAP}={raw!r} is not an integer") from None
    if cap < 1:
        raise InputError(f"{ENV_CAP} must be >= 1")
    return cap


def _cap(args) -> int:
    if args.weight_cap is not None:
        if args.weight_cap < 1:
            raise InputError("--weight-cap must be >= 1")
        return args.weight_cap
    return default_cap()


def _read_source(inline: str | None, path: str | None, what: str) -> str:
    if inline is not None and path is not None:
        raise InputError(f"give either --{what} or --file, not both")
    if inline is not None:
        return inline
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
    return sys.stdin.read()


# -- text rendering ----------------------------------------------------------


def format_primitivity(p: Presentation, v: PrimitivityVerdict) -> str:
    lines = [f"presentation: {p}"]
    if v.reason is Reason.WEIGHT_CAP_EXCEEDED:
        lines.append("verdict: ABSTAINED (weight cap exceeded)")
    else:
        lines.append(f"weight: {v.weight}")
        lines.append("lyndon coordinates:")
        for w, c in zip(v.basis, v.coords):
            if c:
                lines.append(f"  [{' '.join(p.names[i - 1] for i in w.letters)}]: {c}")
        lines.append(f"gcd: {v.coords_gcd}")
        lines.append(f"verdict: {'primitive' if v.primitive else 'not primitive'} ({v.reason.value})")
    lines.extend(f"note: {n}" for n in v.notes)
    return "\n".join(lines)


def format_link(v: LinkVerdict) -> str:
    if v.primitive:
        lines = ["verdict: primitive"]
        for p, edges in v.witness.items():
            tree = " ".join(f"{i}-{j}" for i, j in edges)
            lines.append(f"  p={p}: spanning tree {tree}")
        return "\n".join(lines)
    inside, outside = v.disconnected
    return "\n".join([
        f"verdict: not primitive at p={v.failing_prime}",
        f"  disconnected: {list(inside)} | {list(outside)}",
    ])


def format_report(job_id: str, r: CertReport) -> str:
    lines = [f"job {job_id}: {r.verdict.value} (in F+: {'yes' if r.in_f_plus else 'no'})"]
    for s in r.chain:
        lines.append(f"  {s.rule} [{s.subject}] {s.justification}  <{s.anchor}>")
    for a in r.assertions:
        lines.append(f"  ASSERTED {a.subject} {a.flag}={str(a.value).lower()} ({a.source})")
    for n in r.notes:
        lines.append(f"  note: {n}")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------


def cmd_primitive_relator(args) -> int:
    text = args.presentation if args.presentation is not None else sys.stdin.read()
    try:
        p = parse_presentation(text)
    except (PresentationSyntaxError, TrivialRelatorError) as exc:
        raise InputError(str(exc)) from None
    v = check_one_relator(p, _cap(args))
    if args.output == "json":
        print(dumps({"presentation": str(p), **primitivity_to_json(v)}))
    else:
        print(format_primitivity(p, v))
    if v.reason is Reason.WEIGHT_CAP_EXCEEDED:
        return EXIT_ABSTAINED
    return EXIT_OK if v.primitive else EXIT_NOT_ESTABLISHED


def cmd_primitive_link(args) -> int:
    raw = _read_source(args.matrix, args.file, "matrix")
    try:
        diagram = decode_diagram(json.loads(raw))
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix is not valid JSON: {exc}") from None
    except SchemaError as exc:
        raise InputError(str(exc)) from None
    v = is_primitive_link(diagram)
    if args.output == "json":
        print(dumps(link_verdict_to_json(v)))
    else:
        print(format_link(v))
    return EXIT_OK if v.primitive else EXIT_NOT_ESTABLISHED


def cmd_certify(args) -> int:
    raw = _read_source(None, args.file, "file")
    try:
        jobs = load_jobs(json.loads(raw))
        for job_id, descriptor, _ in jobs:
            try:
                validate(descriptor)
            except DescriptorError as exc:
                raise SchemaError(f"job {job_id!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"job file is not valid JSON: {exc}") from None
    except SchemaError as exc:
        raise InputError(str(exc)) from None
    cap = _cap(args)
    status = EXIT_OK
    for job_id, descriptor, opts in jobs:
        report = certify_iterated(descriptor, opts.get("weight_cap", cap))
        output = args.output or opts.get("output", "json")
        if output == "json":
            print(dumps(report_to_json(report, job_id)))
        else:
            print(format_report(job_id, report))
        if not report.established:
            status = EXIT_NOT_ESTABLISHED
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bccert",
        description="Primitivity checks and Baum-Connes certification for group descriptions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_output):
        p.add_argument("--weight-cap", type=int, default=None,
                       help=f"maximum lower central series degree to probe "
                            f"(default {DEFAULT_WEIGHT_CAP}, or ${ENV_CAP})")
        p.add_argument("--output", choices=("json", "text"), default=default_output)

    p = sub.add_parser("primitive-relator", help="check a one-relator presentation")
    p.add_argument("--presentation", help="e.g. '< x, y | [x,y] >'; read from stdin if omitted")
    common(p, "text")
    p.set_defaults(func=cmd_primitive_relator)

    p = sub.add_parser("primitive-link", help="check a linking-number matrix")
    p.add_argument("--matrix", help="inline JSON matrix, e.g. '[[0,1],[1,0]]'")
    p.add_argument("--file", help="file containing the JSON matrix")
    common(p, "text")
    p.set_defaults(func=cmd_primitive_link)

    p = sub.add_parser("certify", help="certify a batch of group descriptors")
    p.add_argument("--file", help="JSON job file; read from stdin if omitted")
    common(p, None)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"bccert: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
