"""``linode check``: parse an ODE, run the linearizability pipeline and
report the verdict.

Exit codes: 0 Linearizable, 1 NotLinearizable, 2 Inconclusive, 3 and up for
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .candidate import determining_system
from .diffdec import Budget, thomas_decompose
from .diffdec.core import INCONCLUSIVE, INCONSISTENT
from .errors import LinodeError, UnknownsPresent
from .heuristics import solve_simple_system
from .jetode import RationalODE, parse_ode, pretty_print
from .lie2 import LINEARIZABLE, NOT_LINEARIZABLE, lie_linearizable_2nd
from .symmetry import prefilter

EXIT = {LINEARIZABLE: 0, NOT_LINEARIZABLE: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3
EXIT_INPUT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linode", description="Linearizability of ODEs by point transformations.")
    p.add_argument("--version", action="version", version=f"linode {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("check", help="decide whether an ODE is linearizable")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help="file with one equation in the input grammar")
    src.add_argument("--expr", help="the equation as a string")
    c.add_argument("--solve", action="store_true", help="also look for an explicit transformation")
    pf = c.add_mutually_exclusive_group()
    pf.add_argument("--no-prefilter", action="store_true", help="skip the symmetry prefilter")
    pf.add_argument("--prefilter-only", action="store_true", help="run only the symmetry prefilter")
    c.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    c.add_argument("--trace", metavar="PATH", help="write the decomposition trace here")
    c.add_argument("--threads", type=_positive, default=1, metavar="N",
                   help="worker count (accepted; work runs on one thread)")
    c.add_argument("--max-splits", type=_positive, default=64)
    c.add_argument("--max-order", type=_positive, default=12)
    c.add_argument("--max-size", type=_positive, default=200000)
    c.add_argument("--timeout", type=float, default=600.0, help="seconds per decomposition")
    c.add_argument("--quiet", action="store_true", help="print only the verdict line")
    return p


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


@dataclass
class Report:
    source: str
    file: str | None = None
    monic_form: str = ""
    stages: list = field(default_factory=list)
    verdict: str = INCONCLUSIVE
    evidence: dict = field(default_factory=dict)
    transformation: dict | None = None
    verified: bool | None = None
    budgets: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        out = {
            "input": {"source": self.source, "file": self.file},
            "monic_form": self.monic_form,
            "stages": self.stages,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "budgets": self.budgets,
            "timing": self.timing,
        }
        if self.transformation is not None:
            out["transformation"] = self.transformation
            out["verified"] = bool(self.verified)
        return out


class _Clock:
    def __init__(self, report: Report):
        self.report = report
        self.start = time.monotonic()

    def stage(self, name: str, outcome: str, t0: float):
        self.report.stages.append({"name": name, "outcome": outcome})
        self.report.timing.setdefault("stages", {})[name] = round(time.monotonic() - t0, 4)


def _systems_json(systems) -> list:
    return [{"branch": s.branch, "equations": [p.format() for p in s.equations],
             "inequations": [p.format() for p in s.inequations]} for s in systems]


def run_check(ode: RationalODE, args, report: Report, trace=None) -> Report:
    budget = Budget(args.max_splits, args.max_order, args.max_size, args.timeout)
    report.budgets = {"max_splits": budget.max_splits, "max_order": budget.max_order,
                      "max_size": budget.max_size, "timeout": budget.timeout, "threads": args.threads}
    clock = _Clock(report)
    n = ode.order

    if n == 2 and not args.prefilter_only:
        t0 = time.monotonic()
        try:
            lie = lie_linearizable_2nd(ode)
        except UnknownsPresent:
            lie = None
            clock.stage("lie2", "skipped: unknown functions", t0)
        if lie is not None:
            clock.stage("lie2", lie.verdict, t0)
            report.verdict = lie.verdict
            if lie.residuals is None:
                report.evidence = {"kind": "not_candidate_form", "reason": lie.reason}
            else:
                report.evidence = {"kind": "lie_residuals", "R1": str(lie.residuals[0]),
                                   "R2": str(lie.residuals[1]), "reason": lie.reason}
            if lie.linearizable and args.solve:
                _solve(ode, budget, report, clock, trace, first_only=False)
            return report

    use_prefilter = not args.no_prefilter and ode.explicit()
    if args.prefilter_only or use_prefilter:
        t0 = time.monotonic()
        if not ode.explicit():
            clock.stage("prefilter", "skipped: unknown functions", t0)
            report.verdict = INCONCLUSIVE
            report.evidence = {"kind": "none", "reason": "prefilter needs explicit coefficients"}
            return report
        pre = prefilter(ode, budget)
        clock.stage("prefilter", pre.verdict, t0)
        report.evidence = {"kind": "symmetry_dimension", "dimension": pre.dimension, "order": n}
        if pre.rejected:
            report.verdict = NOT_LINEARIZABLE
            return report
        if args.prefilter_only:
            report.verdict = INCONCLUSIVE
            return report
    elif not ode.explicit() and not args.no_prefilter:
        report.stages.append({"name": "prefilter", "outcome": "skipped: unknown functions"})

    _decide(ode, budget, report, clock, trace, args.solve)
    return report


def _decompose(ode, budget, report, clock, trace, first_only):
    t0 = time.monotonic()
    system = determining_system(ode)
    clock.stage("determining_system", f"{len(system)} equations", t0)
    t0 = time.monotonic()
    res = thomas_decompose(system, budget, trace=trace, first_only=first_only)
    clock.stage("decomposition", res.status, t0)
    used = {k: v for k, v in res.stats.items() if k != "seconds"}
    report.budgets["used"] = used
    return res


def _decide(ode, budget, report, clock, trace, solve):
    res = _decompose(ode, budget, report, clock, trace, first_only=False)
    if res.systems:
        report.verdict = LINEARIZABLE
        report.evidence = {"kind": "simple_systems", "status": res.status,
                           "systems": _systems_json(res.systems),
                           "note": "determining system consistent"}
        if res.frontier:
            report.evidence["frontier"] = res.frontier
        if solve:
            _heuristic(ode, res.systems, report, clock)
    elif res.status == INCONSISTENT:
        report.verdict = NOT_LINEARIZABLE
        report.evidence = {
            "kind": "emptiness_certificate",
            "message": "decomposition empty",
            "certificates": [{"branch": c.branch, "kind": c.kind, "reduced": c.reduced.format()}
                             for c in res.certificates],
        }
    else:
        report.verdict = INCONCLUSIVE
        report.evidence = {"kind": "budget", "frontier": res.frontier}


def _solve(ode, budget, report, clock, trace, first_only):
    res = _decompose(ode, budget, report, clock, trace, first_only)
    if res.systems:
        _heuristic(ode, res.systems, report, clock)


def _heuristic(ode, systems, report, clock):
    t0 = time.monotonic()
    for s in systems:
        out = solve_simple_system(s, ode)
        if out is not None:
            pt, target = out
            report.transformation = {"u": str(pt.f), "t": str(pt.g), "target": str(target), "branch": s.branch}
            report.verified = True
            clock.stage("heuristics", "transformation found", t0)
            return
    clock.stage("heuristics", "explicit transformation not found", t0)


def _print_human(report: Report, out):
    print(f"equation:  {report.monic_form}", file=out)
    for st in report.stages:
        print(f"  {st['name']}: {st['outcome']}", file=out)
    ev = report.evidence
    kind = ev.get("kind")
    if kind == "lie_residuals":
        print(f"  residuals: R1 = {ev['R1']}, R2 = {ev['R2']}", file=out)
    elif kind == "symmetry_dimension":
        print(f"  symmetry algebra dimension: {ev['dimension']} (order {ev['order']})", file=out)
    elif kind == "simple_systems":
        print(f"  consistent simple systems: {len(ev['systems'])}", file=out)
    elif kind == "emptiness_certificate":
        print(f"  decomposition empty ({len(ev['certificates'])} branches closed)", file=out)
    elif kind == "not_candidate_form":
        print(f"  {ev['reason']}", file=out)
    elif kind == "budget":
        print(f"  budget exhausted on {len(ev['frontier'])} branches", file=out)
    if report.transformation:
        tr = report.transformation
        flag = "verified" if report.verified else "unverified"
        print(f"  transformation: u = {tr['u']}, t = {tr['t']} -> {tr['target']} ({flag})", file=out)
    print(f"verdict:   {report.verdict}", file=out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t_start = time.monotonic()
    if args.expr is not None:
        text, path = args.expr, None
    else:
        path = args.file
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"linode: cannot read {path}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    report = Report(source=text.strip(), file=path)
    try:
        ode = parse_ode(text)
    except LinodeError as exc:
        print(f"linode: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.monic_form = pretty_print(ode)
    report.stages.append({"name": "parse", "outcome": f"order {ode.order}"})
    lines = [] if args.trace else None
    run_check(ode, args, report, trace=lines.append if lines is not None else None)
    report.timing["total"] = round(time.monotonic() - t_start, 4)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    if args.json:
        payload = json.dumps(report.as_json(), indent=2, sort_keys=True)
        if args.json == "-":
            print(payload)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
    if args.quiet:
        print(report.verdict)
    elif args.json != "-":
        _print_human(report, sys.stdout)
    return EXIT[report.verdict]


if __name__ == "__main__":
    sys.exit(main())
