"""Job specs and reports: schema validation, dispatch and JSON shaping."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Optional

import jsonschema

from . import classifier
from .entropy import EntropyValue
from .errors import (
    ComputeError,
    MalformedDescriptor,
    NotStabilized,
    PadicEntropyError,
    ScalarParseError,
    SchemaError,
)
from .finite_groups import CyclicGroup, HeisenbergModGroup, frattini_and_rank
from .heisenberg import GradedEndo, center_and_quotient_entropies, heisenberg_cotrajectory_oracle, heisenberg_entropy
from .lattice import DEFAULT_HORIZON, DEFAULT_SWEEP, DEFAULT_WINDOW, cotrajectory_entropy
from .matrix import PadicMatrix
from .newton import char_poly_rational, newton_polygon, yuzvinski_entropy
from .scalars import PadicScalar

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_SCHEMA = 2
EXIT_COMPUTE = 3
EXIT_NOT_STABILIZED = 4

TASKS = (
    "entropy-matrix",
    "entropy-oracle",
    "entropy-heisenberg",
    "oracle-heisenberg",
    "classify",
    "rank",
    "dual",
    "frattini",
    "verify-addition",
)

# -- schemas -------------------------------------------------------------------

_SCALAR = {"oneOf": [{"type": "string", "minLength": 1}, {"type": "integer"}]}
_GRID = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _SCALAR}}
_PRIME = {"type": "integer", "minimum": 2}
_SWEEP = {
    "sweep": {"type": "integer", "minimum": 0},
    "horizon": {"type": "integer", "minimum": 1},
    "window": {"type": "integer", "minimum": 1},
}
_ENDO = {
    "type": "object",
    "properties": {"n": {"type": "integer", "minimum": 1}, "p": _PRIME, "delta": _SCALAR, "L": _GRID, "Q": _GRID},
    "required": ["n", "p", "delta", "L"],
    "additionalProperties": False,
}
_DESCRIPTOR = {"type": "object", "required": ["kind"]}


def _task_schema(task: str, props: dict, required: list) -> dict:
    return {
        "type": "object",
        "properties": {"task": {"const": task}, **props},
        "required": ["task", *required],
        "additionalProperties": False,
    }


TASK_SCHEMAS = {
    "entropy-matrix": _task_schema("entropy-matrix", {"prime": _PRIME, "matrix": _GRID}, ["prime", "matrix"]),
    "entropy-oracle": _task_schema("entropy-oracle", {"prime": _PRIME, "matrix": _GRID, **_SWEEP}, ["prime", "matrix"]),
    "entropy-heisenberg": _task_schema("entropy-heisenberg", {"endo": _ENDO}, ["endo"]),
    "oracle-heisenberg": _task_schema("oracle-heisenberg", {"endo": _ENDO, **_SWEEP}, ["endo"]),
    "verify-addition": _task_schema("verify-addition", {"endo": _ENDO, **_SWEEP}, ["endo"]),
    "classify": _task_schema("classify", {"descriptor": _DESCRIPTOR}, ["descriptor"]),
    "rank": _task_schema("rank", {"descriptor": _DESCRIPTOR}, ["descriptor"]),
    "dual": _task_schema("dual", {"descriptor": _DESCRIPTOR}, ["descriptor"]),
    "frattini": _task_schema(
        "frattini",
        {
            "group": {"enum": ["heisenberg", "cyclic"]},
            "p": _PRIME,
            "k": {"type": "integer", "minimum": 1},
            "n": {"type": "integer", "minimum": 1},
        },
        ["p", "k"],
    ),
}

JOB_SCHEMA = {
    "type": "object",
    "properties": {"task": {"enum": list(TASKS)}},
    "required": ["task"],
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "job": {},
        "status": {"enum": ["ok", "not-stabilized", "rejected"]},
        "result": {"type": ["object", "null"]},
        "citations": {"type": "array", "items": {"type": "string"}},
        "diagnostic": {"type": ["string", "null"]},
        "timestamp": {"type": "string"},
    },
    "required": ["job", "status", "result", "citations", "diagnostic"],
    "additionalProperties": False,
}


def validate_job(job: Any) -> dict:
    """Schema-check a job; raises SchemaError naming the first problem."""
    try:
        jsonschema.validate(job, JOB_SCHEMA)
        jsonschema.validate(job, TASK_SCHEMAS[job["task"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<job>"
        raise SchemaError(f"{where}: {exc.message}") from None
    return job


def validate_report(report: dict) -> dict:
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


# -- dispatch ---------------------------------------------------------------------


@dataclass
class Outcome:
    status: str
    result: Optional[dict]
    citations: list[str] = field(default_factory=list)
    diagnostic: Optional[str] = None
    exit_code: int = EXIT_OK


def _sweep_args(job: dict) -> tuple[int, int, int]:
    return (
        job.get("sweep", DEFAULT_SWEEP),
        job.get("horizon", DEFAULT_HORIZON),
        job.get("window", DEFAULT_WINDOW),
    )


def _endo(job: dict) -> GradedEndo:
    try:
        return GradedEndo.from_json(job["endo"])
    except (ValueError, PadicEntropyError) as exc:
        if isinstance(exc, ComputeError):
            raise
        raise SchemaError(f"endo: {exc}") from None


def _matrix(job: dict) -> PadicMatrix:
    try:
        return PadicMatrix.from_rows(job["matrix"], job["prime"])
    except ScalarParseError as exc:
        raise SchemaError(f"matrix: {exc}") from None


def _descriptor(job: dict):
    try:
        return classifier.parse_descriptor(job["descriptor"])
    except MalformedDescriptor as exc:
        raise SchemaError(f"descriptor: {exc}") from None


def _polygon_json(m: PadicMatrix) -> dict:
    coeffs = char_poly_rational(m)
    poly = newton_polygon([PadicScalar.from_rational(c, m.prime) for c in coeffs])
    return {
        "charpoly": [str(c) for c in coeffs],
        "segments": [{"slope": str(s), "length": n} for s, n in poly.segments],
        "zero_roots": poly.zero_roots,
    }


def _entropy_matrix(job: dict) -> Outcome:
    m = _matrix(job)
    h = yuzvinski_entropy(m)
    return Outcome("ok", {"entropy": h.to_json(), "newton_polygon": _polygon_json(m)})


def _entropy_oracle(job: dict) -> Outcome:
    h, table = cotrajectory_entropy(_matrix(job), *_sweep_args(job))
    return Outcome("ok", {"entropy": h.to_json(), "evidence": table})


def _entropy_heisenberg(job: dict) -> Outcome:
    e = _endo(job)
    center, quotient = center_and_quotient_entropies(e)
    return Outcome(
        "ok",
        {"entropy": heisenberg_entropy(e).to_json(), "center": center.to_json(), "quotient": quotient.to_json()},
    )


def _oracle_heisenberg(job: dict) -> Outcome:
    h, evidence = heisenberg_cotrajectory_oracle(_endo(job), *_sweep_args(job))
    return Outcome("ok", {"entropy": h.to_json(), "evidence": evidence})


def _verify_addition(job: dict) -> Outcome:
    e = _endo(job)
    formula = heisenberg_entropy(e)
    center, quotient = center_and_quotient_entropies(e)
    oracle, evidence = heisenberg_cotrajectory_oracle(e, *_sweep_args(job))
    equal = formula == oracle
    return Outcome(
        "ok",
        {
            "formula": formula.to_json(),
            "oracle": oracle.to_json(),
            "center": center.to_json(),
            "quotient": quotient.to_json(),
            "equal": equal,
            "evidence": evidence,
        },
        diagnostic=None if equal else f"formula {formula} differs from oracle {oracle}",
    )


def _classify(job: dict) -> Outcome:
    res = classifier.classify(_descriptor(job))
    return Outcome("ok", res.to_json(), [c for _, c in res.trace])


def _rank(job: dict) -> Outcome:
    g = _descriptor(job)
    rank = classifier.p_rank(g)
    rule = "thm-3.6" if isinstance(g, classifier.PadicLCA) else "lem-4.3"
    return Outcome("ok", {"p_rank": rank}, [classifier.CITATIONS[rule]])


def _dual(job: dict) -> Outcome:
    g = _descriptor(job)
    if not isinstance(g, classifier.PadicLCA):
        raise SchemaError("descriptor: dual needs a PadicLCA descriptor")
    d = classifier.pontryagin_dual(g)
    return Outcome(
        "ok",
        {"dual": classifier.descriptor_to_json(d), "p_rank": classifier.p_rank(d)},
        [classifier.CITATIONS["thm-3.6-dual"]],
    )


def _frattini(job: dict) -> Outcome:
    kind = job.get("group", "heisenberg")
    p, k = job["p"], job["k"]
    g = HeisenbergModGroup(p, k, job.get("n", 1)) if kind == "heisenberg" else CyclicGroup(p, k)
    frat, rank = frattini_and_rank(g)
    return Outcome(
        "ok",
        {
            "group": g.name,
            "order": g.order,
            "frattini_order": frat.order,
            "rank": rank,
            "frattini_is_center": frat == g.center(),
        },
    )


_HANDLERS = {
    "entropy-matrix": _entropy_matrix,
    "entropy-oracle": _entropy_oracle,
    "entropy-heisenberg": _entropy_heisenberg,
    "oracle-heisenberg": _oracle_heisenberg,
    "verify-addition": _verify_addition,
    "classify": _classify,
    "rank": _rank,
    "dual": _dual,
    "frattini": _frattini,
}


def execute(job: Any) -> Outcome:
    """Validate and run one job, mapping failures onto report statuses."""
    try:
        validate_job(job)
        return _HANDLERS[job["task"]](job)
    except SchemaError as exc:
        return Outcome("rejected", None, diagnostic=f"schema: {exc}", exit_code=EXIT_SCHEMA)
    except NotStabilized as exc:
        return Outcome(
            "not-stabilized",
            {"evidence": exc.table},
            diagnostic=str(exc),
            exit_code=EXIT_NOT_STABILIZED,
        )
    except (ComputeError, ArithmeticError) as exc:
        return Outcome("rejected", None, diagnostic=f"{type(exc).__name__}: {exc}", exit_code=EXIT_COMPUTE)
    except ValueError as exc:
        # parameter combinations the schema cannot express, e.g. horizon < 2*window
        return Outcome("rejected", None, diagnostic=f"schema: {exc}", exit_code=EXIT_SCHEMA)


def make_report(job: Any, outcome: Outcome, timestamp: bool = True) -> dict:
    report = {
        "job": job,
        "status": outcome.status,
        "result": outcome.result,
        "citations": outcome.citations,
        "diagnostic": outcome.diagnostic,
    }
    if timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return validate_report(report)


def dumps(report: Any) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)


def entropy_from_report(report: dict, key: str = "entropy") -> EntropyValue:
    return EntropyValue.from_json(report["result"][key])
