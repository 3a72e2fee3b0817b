"""JSON encoding of descriptors, verdicts and reports.

Integers above 2**53 in magnitude travel as decimal strings so that no JSON
consumer loses precision.  Dictionaries are built in a fixed key order and
dumped without sorting, which keeps output byte-stable.
"""
from __future__ import annotations

import json
import re
from typing import Any

from .certify import (
    AssertedGroup, Assertion, CertReport, ChainStep, Descriptor, DescriptorError,
    Evidence, Extension, FiberType, FreeProduct, FullBraid, H1TrivialSemidirect,
    Link, OneRelator, PrimitivityVerdict, PureBraid, Reason, Verdict,
)
from .lie import LyndonWord
from .linkdiag import INF, LinkingDiagram, LinkVerdict
from .words import PresentationSyntaxError, TrivialRelatorError, parse_presentation

FORMAT_VERSION = 1
SAFE_INT = 2**53
_INT_STR = re.compile(r"-?\d+\Z")

KINDS = (
    "one_relator", "link", "pure_braid", "full_braid", "fiber_type",
    "h1_trivial_semidirect", "extension", "free_product", "asserted",
)


class SchemaError(ValueError):
    pass


def encode_int(n: int) -> int | str:
    return n if -SAFE_INT <= n <= SAFE_INT else str(n)


def decode_int(x: Any, what: str = "value") -> int:
    if isinstance(x, bool):
        raise SchemaError(f"{what}: expected integer, got boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and _INT_STR.match(x):
        return int(x)
    raise SchemaError(f"{what}: expected integer or decimal string, got {x!r}")


def dumps(obj: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, indent=2, ensure_ascii=False)
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


# -- matrices ----------------------------------------------------------------


def decode_matrix(x: Any, what: str = "matrix") -> tuple[tuple[int, ...], ...]:
    if not isinstance(x, list) or not all(isinstance(row, list) for row in x):
        raise SchemaError(f"{what}: expected a list of lists")
    return tuple(
        tuple(decode_int(v, f"{what}[{i}][{j}]") for j, v in enumerate(row))
        for i, row in enumerate(x)
    )


def encode_matrix(m) -> list[list[int | str]]:
    return [[encode_int(v) for v in row] for row in m]


def decode_diagram(x: Any, what: str = "linking matrix") -> LinkingDiagram:
    m = decode_matrix(x, what)
    try:
        return LinkingDiagram(m)
    except ValueError as exc:
        raise SchemaError(f"{what}: {exc}") from None


# -- descriptors -------------------------------------------------------------

_FIELDS = {
    "one_relator": ({"presentation"}, set()),
    "link": ({"matrix"}, set()),
    "pure_braid": ({"n"}, set()),
    "full_braid": ({"n"}, set()),
    "fiber_type": ({"name", "asserted"}, {"h1_rank"}),
    "h1_trivial_semidirect": ({"factors", "actions"}, set()),
    "extension": ({"base", "quotient_bc", "torsion_free"}, {"quotient_label", "h1_rank"}),
    "free_product": ({"factors"}, set()),
    "asserted": ({"label", "asserted"}, {"h1_rank"}),
}


def _bool(x: Any, what: str) -> bool:
    if not isinstance(x, bool):
        raise SchemaError(f"{what}: expected boolean, got {x!r}")
    return x


def _str(x: Any, what: str) -> str:
    if not isinstance(x, str):
        raise SchemaError(f"{what}: expected string, got {x!r}")
    return x


def _opt_rank(obj: dict, what: str) -> int | None:
    if "h1_rank" not in obj:
        return None
    r = decode_int(obj["h1_rank"], f"{what}.h1_rank")
    if r < 0:
        raise SchemaError(f"{what}.h1_rank: must be nonnegative")
    return r


def _list(x: Any, what: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(f"{what}: expected a list")
    return x


def descriptor_from_json(obj: Any, what: str = "descriptor") -> Descriptor:
    """Build a descriptor from its JSON form; raises :class:`SchemaError`."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{what}: expected an object")
    kind = obj.get("kind")
    if kind not in _FIELDS:
        raise SchemaError(f"{what}: unknown descriptor kind {kind!r}")
    required, optional = _FIELDS[kind]
    missing = required - obj.keys()
    if missing:
        raise SchemaError(f"{what}: missing field(s) {sorted(missing)}")
    extra = obj.keys() - required - optional - {"kind"}
    if extra:
        raise SchemaError(f"{what}: unknown field(s) {sorted(extra)}")

    if kind == "one_relator":
        text = _str(obj["presentation"], f"{what}.presentation")
        try:
            return OneRelator(parse_presentation(text))
        except (PresentationSyntaxError, TrivialRelatorError) as exc:
            raise SchemaError(f"{what}.presentation: {exc}") from None
    if kind == "link":
        return Link(decode_diagram(obj["matrix"], f"{what}.matrix"))
    if kind in ("pure_braid", "full_braid"):
        n = decode_int(obj["n"], f"{what}.n")
        if n < 2:
            raise SchemaError(f"{what}.n: braid groups need n >= 2")
        return PureBraid(n) if kind == "pure_braid" else FullBraid(n)
    if kind == "fiber_type":
        return FiberType(
            _str(obj["name"], f"{what}.name"),
            _bool(obj["asserted"], f"{what}.asserted"),
            _opt_rank(obj, what),
        )
    if kind == "h1_trivial_semidirect":
        factors = tuple(
            descriptor_from_json(f, f"{what}.factors[{i}]")
            for i, f in enumerate(_list(obj["factors"], f"{what}.factors"))
        )
        actions = tuple(
            decode_matrix(a, f"{what}.actions[{i}]")
            for i, a in enumerate(_list(obj["actions"], f"{what}.actions"))
        )
        return H1TrivialSemidirect(factors, actions)
    if kind == "extension":
        return Extension(
            descriptor_from_json(obj["base"], f"{what}.base"),
            quotient_bc=_bool(obj["quotient_bc"], f"{what}.quotient_bc"),
            torsion_free=_bool(obj["torsion_free"], f"{what}.torsion_free"),
            quotient_label=_str(obj.get("quotient_label", ""), f"{what}.quotient_label"),
            h1_rank=_opt_rank(obj, what),
        )
    if kind == "free_product":
        return FreeProduct(tuple(
            descriptor_from_json(f, f"{what}.factors[{i}]")
            for i, f in enumerate(_list(obj["factors"], f"{what}.factors"))
        ))
    return AssertedGroup(
        _str(obj["label"], f"{what}.label"),
        _bool(obj["asserted"], f"{what}.asserted"),
        _opt_rank(obj, what),
    )


def descriptor_to_json(g: Descriptor) -> dict:
    if isinstance(g, OneRelator):
        return {"kind": "one_relator", "presentation": str(g.presentation)}
    if isinstance(g, Link):
        return {"kind": "link", "matrix": encode_matrix(g.diagram.linking)}
    if isinstance(g, PureBraid):
        return {"kind": "pure_braid", "n": encode_int(g.n)}
    if isinstance(g, FullBraid):
        return {"kind": "full_braid", "n": encode_int(g.n)}
    if isinstance(g, H1TrivialSemidirect):
        return {
            "kind": "h1_trivial_semidirect",
            "factors": [descriptor_to_json(f) for f in g.factors],
            "actions": [encode_matrix(a) for a in g.actions],
        }
    if isinstance(g, FreeProduct):
        return {"kind": "free_product", "factors": [descriptor_to_json(f) for f in g.factors]}
    if isinstance(g, FiberType):
        out = {"kind": "fiber_type", "name": g.name, "asserted": g.asserted}
    elif isinstance(g, Extension):
        out = {
            "kind": "extension",
            "base": descriptor_to_json(g.base),
            "quotient_bc": g.quotient_bc,
            "torsion_free": g.torsion_free,
            "quotient_label": g.quotient_label,
        }
    elif isinstance(g, AssertedGroup):
        out = {"kind": "asserted", "label": g.label, "asserted": g.asserted}
    else:
        raise DescriptorError(f"not a descriptor: {g!r}")
    if g.h1_rank is not None:
        out["h1_rank"] = encode_int(g.h1_rank)
    return out


# -- verdicts and reports ----------------------------------------------------


def _prime_key(p):
    return p if p == INF or p is None else encode_int(p)


def _decode_prime_key(x):
    return x if x == INF or x is None else decode_int(x)


def primitivity_to_json(v: PrimitivityVerdict) -> dict:
    return {
        "primitive": v.primitive,
        "reason": v.reason.value,
        "weight": v.weight,
        "coords": None if v.coords is None else [encode_int(c) for c in v.coords],
        "basis": None if v.basis is None else [list(w.letters) for w in v.basis],
        "coords_gcd": None if v.coords_gcd is None else encode_int(v.coords_gcd),
        "notes": list(v.notes),
    }


def primitivity_from_json(obj: dict) -> PrimitivityVerdict:
    return PrimitivityVerdict(
        obj["primitive"],
        Reason(obj["reason"]),
        obj["weight"],
        None if obj["coords"] is None else tuple(decode_int(c) for c in obj["coords"]),
        None if obj["basis"] is None else tuple(LyndonWord(tuple(w)) for w in obj["basis"]),
        None if obj["coords_gcd"] is None else decode_int(obj["coords_gcd"]),
        tuple(obj["notes"]),
    )


def link_verdict_to_json(v: LinkVerdict) -> dict:
    return {
        "primitive": v.primitive,
        "failing_prime": _prime_key(v.failing_prime),
        "witness": [
            {"prime": _prime_key(p), "edges": [list(e) for e in edges]}
            for p, edges in v.witness.items()
        ],
        "disconnected": None if v.disconnected is None else [list(s) for s in v.disconnected],
    }


def link_verdict_from_json(obj: dict) -> LinkVerdict:
    return LinkVerdict(
        obj["primitive"],
        _decode_prime_key(obj["failing_prime"]),
        {_decode_prime_key(w["prime"]): [tuple(e) for e in w["edges"]] for w in obj["witness"]},
        None if obj["disconnected"] is None else tuple(tuple(s) for s in obj["disconnected"]),
    )


def evidence_to_json(e: Evidence) -> dict:
    if isinstance(e.verdict, PrimitivityVerdict):
        return {"subject": e.subject, "kind": "one_relator", **primitivity_to_json(e.verdict)}
    return {"subject": e.subject, "kind": "link", **link_verdict_to_json(e.verdict)}


def report_to_json(r: CertReport, job_id: str | None = None) -> dict:
    out: dict[str, Any] = {} if job_id is None else {"job_id": job_id}
    out.update({
        "verdict": r.verdict.value,
        "in_f_plus": r.in_f_plus,
        "chain": [
            {
                "rule": s.rule,
                "subject": s.subject,
                "justification": s.justification,
                "anchor": s.anchor,
                "asserted": list(s.asserted),
            }
            for s in r.chain
        ],
        "assertions": [
            {"subject": a.subject, "flag": a.flag, "value": a.value, "source": a.source}
            for a in r.assertions
        ],
        "evidence": [evidence_to_json(e) for e in r.evidence],
        "notes": list(r.notes),
    })
    return out


def report_from_json(obj: dict) -> CertReport:
    evidence = []
    for e in obj["evidence"]:
        body = {k: v for k, v in e.items() if k not in ("subject", "kind")}
        v = primitivity_from_json(body) if e["kind"] == "one_relator" else link_verdict_from_json(body)
        evidence.append(Evidence(e["subject"], v))
    return CertReport(
        Verdict(obj["verdict"]),
        obj["in_f_plus"],
        tuple(
            ChainStep(s["rule"], s["subject"], s["justification"], s["anchor"], tuple(s["asserted"]))
            for s in obj["chain"]
        ),
        tuple(Assertion(a["subject"], a["flag"], a["value"], a["source"]) for a in obj["assertions"]),
        tuple(evidence),
        tuple(obj["notes"]),
    )


# -- job files ---------------------------------------------------------------


def load_jobs(obj: Any) -> list[tuple[str, Descriptor, dict]]:
    """Validate a job file and return ``(job_id, descriptor, options)`` triples."""
    if not isinstance(obj, dict):
        raise SchemaError("job file: expected an object")
    extra = obj.keys() - {"format_version", "jobs"}
    if extra:
        raise SchemaError(f"job file: unknown field(s) {sorted(extra)}")
    version = decode_int(obj.get("format_version"), "format_version")
    if version != FORMAT_VERSION:
        raise SchemaError(f"format_version: unsupported version {version}")
    jobs = []
    seen = set()
    for i, job in enumerate(_list(obj.get("jobs"), "jobs")):
        where = f"jobs[{i}]"
        if not isinstance(job, dict):
            raise SchemaError(f"{where}: expected an object")
        extra = job.keys() - {"job_id", "descriptor", "options"}
        if extra:
            raise SchemaError(f"{where}: unknown field(s) {sorted(extra)}")
        job_id = _str(job.get("job_id"), f"{where}.job_id")
        if job_id in seen:
            raise SchemaError(f"{where}.job_id: duplicate id {job_id!r}")
        seen.add(job_id)
        descriptor = descriptor_from_json(job.get("descriptor"), f"{where}.descriptor")
        options = job.get("options", {})
        if not isinstance(options, dict):
            raise SchemaError(f"{where}.options: expected an object")
        extra = options.keys() - {"weight_cap", "output"}
        if extra:
            raise SchemaError(f"{where}.options: unknown field(s) {sorted(extra)}")
        opts: dict[str, Any] = {}
        if "weight_cap" in options:
            cap = decode_int(options["weight_cap"], f"{where}.options.weight_cap")
            if cap < 1:
                raise SchemaError(f"{where}.options.weight_cap: must be >= 1")
            opts["weight_cap"] = cap
        if "output" in options:
            if options["output"] not in ("json", "text"):
                raise SchemaError(f"{where}.options.output: expected 'json' or 'text'")
            opts["output"] = options["output"]
        jobs.append((job_id, descriptor, opts))
    return jobs
