"""Command-line front end: JSON job files in, JSON (or table) reports out."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import jobs
from .entropy import EntropyValue
from .suites import SUITES

COMMAND_TASKS = {
    "entropy": "entropy-matrix",
    "oracle": "entropy-oracle",
    "heisenberg": "entropy-heisenberg",
    "classify": "classify",
    "rank": "rank",
    "dual": "dual",
    "frattini": "frattini",
    "verify-at": "verify-addition",
}


def load_jobs(source: str) -> tuple[list, bool]:
    """Jobs from inline JSON, a file path or '-' (stdin); second item flags a batch."""
    text = source
    if source == "-":
        text = sys.stdin.read()
    elif not source.lstrip().startswith(("{", "[")):
        text = Path(source).read_text()
    data = json.loads(text)
    if isinstance(data, list):
        return data, True
    return [data], False


def _apply_defaults(job, command: str, args: argparse.Namespace, oracle: bool = False):
    """Fill the task from the command and sweep parameters from flags; job fields win."""
    if not isinstance(job, dict):
        return job
    job = dict(job)
    if command != "run" and "task" not in job:
        job["task"] = "oracle-heisenberg" if oracle else COMMAND_TASKS[command]
    if job.get("task") in ("entropy-oracle", "oracle-heisenberg", "verify-addition"):
        for key in ("sweep", "horizon", "window"):
            value = getattr(args, key, None)
            if value is not None and key not in job:
                job[key] = value
    return job


def render_table(report: dict) -> str:
    lines = [f"task: {report['job'].get('task') if isinstance(report['job'], dict) else '?'}", f"status: {report['status']}"]
    result = report["result"] or {}
    for key, value in result.items():
        if isinstance(value, dict) and "terms" in value:
            lines.append(f"{key}: {EntropyValue.from_json(value)}  (~ {value['decimal']})")
        elif key == "evidence":
            lines.extend(_evidence_lines(value))
        elif key == "trace":
            lines.extend(f"  [{t['rule']}] {t['citation']}" for t in value)
        else:
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    if report["diagnostic"]:
        lines.append(f"diagnostic: {report['diagnostic']}")
    return "\n".join(lines)


def _evidence_lines(evidence) -> list[str]:
    rows = evidence["combined"] if isinstance(evidence, dict) else evidence
    out = ["  m  rate  stable  log-indices"]
    for row in rows or []:
        idx = row["log_indices"]
        shown = " ".join(map(str, idx[:12])) + (" ..." if len(idx) > 12 else "")
        out.append(f"  {row['m']:<2} {str(row.get('rate')):<5} {str(row.get('stabilized')):<7} {shown}")
    return out


def run_jobs(source: str, command: str, args: argparse.Namespace) -> int:
    try:
        raw, batch = load_jobs(source)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read job: {exc}", file=sys.stderr)
        return jobs.EXIT_SCHEMA
    reports, code = [], jobs.EXIT_OK
    for job in raw:
        job = _apply_defaults(job, command, args, oracle=getattr(args, "oracle", False))
        outcome = jobs.execute(job)
        if code == jobs.EXIT_OK:
            code = outcome.exit_code
        reports.append(jobs.make_report(job, outcome, timestamp=not args.no_timestamp))
    if args.format == "table":
        print("\n\n".join(render_table(r) for r in reports))
    else:
        print(jobs.dumps(reports if batch else reports[0]))
    return code


def run_suite(args: argparse.Namespace) -> int:
    fn = SUITES[args.name]
    kwargs = {}
    if args.name in ("oracle-vs-formula", "heisenberg"):
        kwargs["seed"] = args.seed
        for key in ("sweep", "horizon", "window"):
            if getattr(args, key) is not None:
                kwargs[key] = getattr(args, key)
        if args.count is not None:
            kwargs["count"] = args.count
    rep = fn(**kwargs)
    if args.format == "table":
        print(rep.table())
    else:
        print(jobs.dumps(rep.to_json()))
    return jobs.EXIT_OK if rep.passed else jobs.EXIT_SUITE_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--sweep", type=int, default=None, help="largest window exponent M (default 6)")
    common.add_argument("--horizon", type=int, default=None, help="cotrajectory length N (default 40)")
    common.add_argument("--window", type=int, default=None, help="stabilization window w (default 8)")
    common.add_argument("--no-timestamp", action="store_true", help="omit the report timestamp")

    parser = argparse.ArgumentParser(prog="padic-entropy", description="Exact topological entropy of p-adic endomorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "run": "run jobs of any task",
        "entropy": "Newton-polygon entropy of a matrix",
        "oracle": "cotrajectory entropy of a matrix with evidence",
        "heisenberg": "entropy of a graded Heisenberg endomorphism",
        "classify": "classify a group descriptor",
        "rank": "p-rank of a descriptor",
        "dual": "Pontryagin dual of a p-adic descriptor",
        "frattini": "Frattini subgroup and rank of a finite Heisenberg group",
        "verify-at": "compare decomposition formula and oracle on a Heisenberg endomorphism",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("job", help="job file, inline JSON object/array, or '-' for stdin")
        if name == "heisenberg":
            p.add_argument("--oracle", action="store_true", help="use the cotrajectory oracle")
    s = sub.add_parser("suite", parents=[common], help="run a named check suite")
    s.add_argument("name", choices=sorted(SUITES))
    s.add_argument("--count", type=int, default=None, help="instances per cell for randomized suites")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "suite":
        return run_suite(args)
    return run_jobs(args.job, args.command, args)


if __name__ == "__main__":
    sys.exit(main())
