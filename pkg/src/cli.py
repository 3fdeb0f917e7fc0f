# ---------------------------------------------------------------------------
# File    : cli.py
# Purpose : Scenario-driven command line: order | sing | diff | nash | persist |
#           compare | zariski | selftest, rendered as tables or JSON lines.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
"""
Usage::

    python -m src.cli persist scenarios/cusp.json
    python -m src.cli nash scenarios/cusp.json --max-steps 2 --output json
    python -m src.cli selftest

Exit codes: 0 success, 1 mathematical mismatch, 2 usage or parse error,
3 inconclusive at the given precision.
"""

from __future__ import annotations
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence
import argparse
import logging
import sys

from . import config
from .algebra import Inconclusive, RationalPoint
from .arcs import (
    nu_t, ord_rees_along_arc, persistence_invariants, persistence_sweep, require_on_variety,
)
from .errors import ArcPersistError, ParseError, PrecisionExhausted
from .hickel import DidNotDrop, nash_sequence_hypersurface, oracle_trace
from .morphisms import (
    arcwise_order_equality, generic_rank, persistence_compare, transversality_check,
    zariski_fiber_check, zariski_sweep,
)
from .rees import (
    canonical_generators, diff_saturate, generator_orders, in_singular_locus, order_at_point,
    singular_locus_enumerate,
)
from .report import ExitStatus, Report, emit
from .scenario import Scenario, parse_scenario
from .suite import SUITE_NS, run_suite

logger = logging.getLogger(__name__)

COMMANDS = ("order", "sing", "diff", "nash", "persist", "compare", "zariski", "selftest")


@dataclass(frozen=True)
class RunFlags:
    precision: Optional[int] = None
    max_steps: Optional[int] = None
    output: str = "table"
    oracle: bool = False
    characteristic: Optional[int] = None


def _max_steps(scenario: Optional[Scenario], flags: RunFlags) -> int:
    if flags.max_steps is not None:
        return flags.max_steps
    return scenario.defaults.max_steps if scenario else config.DEFAULT_MAX_STEPS


def _require(scenario: Optional[Scenario], section: str, command: str):
    value = getattr(scenario, section, None) if scenario else None
    if value is None:
        raise ParseError(f"`{command}` needs a scenario with a `{section}` section")
    return value


def _points(scenario: Scenario) -> Dict[str, RationalPoint]:
    points = dict(scenario.points)
    if scenario.variety is not None and scenario.variety.point not in points.values():
        points["variety"] = scenario.variety.point
    return points


# ============================================================================
# COMMANDS
# ============================================================================

def _order(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    for name, G in scenario.algebras.items():
        for pname, xi in _points(scenario).items():
            report.add(f"{name} @ {pname}", "ord", order_at_point(G, xi))
            report.add(f"{name} @ {pname}", "nu per generator", generator_orders(G, xi))
        for aname, phi in scenario.arcs.items():
            value = ord_rees_along_arc(phi, G)
            report.add(f"{name} along {aname}", "ord_t", value)
            if isinstance(value, Inconclusive):
                report.escalate(ExitStatus.INCONCLUSIVE)
    for aname, phi in scenario.arcs.items():
        report.add(aname, "nu_t", nu_t(phi, phi.center))
    if scenario.arcwise is not None:
        section = scenario.arcwise
        arcs = {a: scenario.arcs[a] for a in section.arcs}
        result = arcwise_order_equality(scenario.algebras[section.small],
                                        scenario.algebras[section.large], arcs)
        for row in result.rows:
            item = f"{section.small} vs {section.large} along {row.arc}"
            report.add(item, "ord_t small", row.order_small)
            report.add(item, "ord_t large", row.order_large)
            report.add(item, "relation", row.relation)
            if row.relation == "inconclusive":
                report.escalate(ExitStatus.INCONCLUSIVE)
        report.add("arcwise", "consistent", result.consistent)
        report.add("arcwise", "note", result.note, "input")
        if not result.consistent:
            report.escalate(ExitStatus.MISMATCH)


def _sing(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    for name, G in scenario.algebras.items():
        for pname, xi in _points(scenario).items():
            report.add(f"{name} @ {pname}", "in Sing", in_singular_locus(G, xi))
        if scenario.field.characteristic:
            locus = sorted(singular_locus_enumerate(G), key=lambda pt: pt.coordinates)
            report.add(name, "|Sing(F_p)|", len(locus), "brute-force")
            report.add(name, "Sing(F_p)", [str(pt) for pt in locus], "brute-force")


def _diff(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    for name, G in scenario.algebras.items():
        saturated = diff_saturate(G)
        report.add(name, "generators", len(G.generators))
        report.add(name, "Diff generators", len(saturated.generators))
        for f, n in canonical_generators(saturated):
            report.add(name, "Diff generator", f"({f}, {n})")
        if scenario.field.characteristic:
            same = singular_locus_enumerate(G) == singular_locus_enumerate(saturated)
            report.add(name, "Sing(G) = Sing(Diff G)", same, "brute-force")
            if not same:
                report.escalate(ExitStatus.MISMATCH)


def _trace_cells(report: Report, item: str, trace, quantity: str) -> None:
    for record in trace:
        label = f"{item} step {record.step}"
        report.add(label, "chart", record.chart or "-", "oracle")
        report.add(label, "center", record.center, "oracle")
        report.add(label, quantity, list(record.orders), "oracle")


def _nash(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    variety = _require(scenario, "variety", "nash")
    max_steps = _max_steps(scenario, flags)
    hypersurface = len(variety.equations) == 1
    G = diff_saturate(variety.algebra)
    for aname, phi in scenario.arcs.items():
        try:
            if hypersurface:
                result = nash_sequence_hypersurface(phi, variety.equations[0], variety.point,
                                                    max_steps)
                report.add(aname, "nash sequence", list(result.multiplicities), "oracle")
                drop, trace, quantity = result.drop, result.trace, "multiplicity"
            else:
                require_on_variety(phi, variety.equations)
                drop, trace = oracle_trace(phi, G, variety.point, max_steps)
                quantity = "nu per generator"
        except PrecisionExhausted as exc:
            report.add(aname, "first drop", Inconclusive(phi.precision), "oracle")
            report.add(aname, "retry precision", exc.retry_precision, "oracle")
            report.escalate(ExitStatus.INCONCLUSIVE)
            continue
        report.add(aname, "first drop", drop, "oracle")
        _trace_cells(report, aname, trace, quantity)
        if isinstance(drop, DidNotDrop):
            report.escalate(ExitStatus.INCONCLUSIVE)


def _persist(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    variety = _require(scenario, "variety", "persist")
    G = diff_saturate(variety.algebra)
    xi = variety.point
    for aname, phi in scenario.arcs.items():
        require_on_variety(phi, variety.equations)
        result = persistence_invariants(phi, G, xi)
        for key in ("r", "rho", "r_bar", "rho_bar", "nu_t"):
            report.add(aname, key, result[key])
        if not result.conclusive:
            report.add(aname, "retry precision", result.retry_precision)
            report.add(aname, "note", result.note, "input")
            report.escalate(ExitStatus.INCONCLUSIVE)
            continue
        for row in persistence_sweep(phi, G, xi, scenario.defaults.reparametrize):
            report.add(f"{aname} n={row.n}", "rho(phi_n)/n", row.ratio)
            report.add(f"{aname} n={row.n}", "|rho(phi_n)/n - r| < 1/n", row.within_bound)
            if row.within_bound is False:
                report.escalate(ExitStatus.MISMATCH)
        if flags.oracle:
            try:
                value, trace = oracle_trace(phi, G, xi, _max_steps(scenario, flags))
            except PrecisionExhausted as exc:
                report.add(aname, "rho", Inconclusive(phi.precision), "oracle")
                report.add(aname, "retry precision", exc.retry_precision, "oracle")
                report.escalate(ExitStatus.INCONCLUSIVE)
                continue
            report.add(aname, "rho", value, "oracle")
            _trace_cells(report, aname, trace, "nu per generator")
            if isinstance(value, DidNotDrop):
                report.escalate(ExitStatus.INCONCLUSIVE)
            elif value != result.rho:
                report.escalate(ExitStatus.MISMATCH)


def _compare(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    section = _require(scenario, "morphism", "compare")
    spec = section.spec
    report.add("morphism", "generic rank", generic_rank(spec))
    check = transversality_check(spec, section.top_points, section.arcs)
    for item in check.items:
        provenance = "brute-force" if item.name.startswith("brute-force") else "formula"
        report.add(item.name, "check", item.passed, provenance)
        if item.detail:
            report.add(item.name, "detail", item.detail, provenance)
    if not check.passed:
        report.escalate(ExitStatus.MISMATCH)

    result = persistence_compare(spec, section.arcs, precision=flags.precision,
                                 max_steps=_max_steps(scenario, flags), oracle=flags.oracle)
    for row in result.rows:
        for key in ("rho_source", "rho_target", "r_source", "r_target", "nu_source", "nu_target"):
            report.add(row.arc, key, getattr(row, key))
        if flags.oracle:
            report.add(row.arc, "rho_source", row.oracle_source, "oracle")
            report.add(row.arc, "rho_target", row.oracle_target, "oracle")
        report.add(row.arc, "verdict", row.verdict)
        if row.note:
            report.add(row.arc, "note", row.note, "input")
    report.add("compare", "summary", result.summary)
    if result.witness:
        report.add("compare", "witness", result.witness)
    if result.summary == "Mismatch":
        report.escalate(ExitStatus.MISMATCH)
    elif result.summary == "Inconclusive" or any(r.verdict == "inconclusive" for r in result.rows):
        report.escalate(ExitStatus.INCONCLUSIVE)


def _zariski(report: Report, scenario: Scenario, flags: RunFlags) -> None:
    section = _require(scenario, "zariski", "zariski")
    p = scenario.field.characteristic
    fibers = section.fibers
    if not fibers:
        if not p:
            raise ParseError("characteristic 0 zariski sections must list their fibers")
        fibers = tuple(range(p))
    provenance = "brute-force" if p else "formula"
    for a in fibers:
        result = zariski_fiber_check(section.poly, a, x=section.x, y=section.y)
        item = f"{section.x} = {a}"
        report.add(item, "factors", [f"({g})^{e}" for g, e, _ in result.factors], provenance)
        report.add(item, "sum e*deg", result.total, provenance)
        report.add(item, f"deg_{section.y}", result.degree, "input")
        report.add(item, "formula holds", result.passed, provenance)
        if not result.passed:
            report.escalate(ExitStatus.MISMATCH)
    if section.sweep_degree is not None:
        if not p:
            raise ParseError("the exhaustive sweep needs a finite field")
        sweep = zariski_sweep(p, section.sweep_degree)
        report.add(f"sweep F_{p} deg <= {section.sweep_degree}", "fibers checked", sweep.checked,
                   "brute-force")
        report.add(f"sweep F_{p} deg <= {section.sweep_degree}", "formula holds", sweep.passed,
                   "brute-force")
        if not sweep.passed:
            report.escalate(ExitStatus.MISMATCH)


def _selftest(report: Report, scenario: Optional[Scenario], flags: RunFlags) -> None:
    results = run_suite(SUITE_NS, _max_steps(None, flags))
    by_arc: Dict[tuple, list] = {}
    for result in results:
        by_arc.setdefault((result.case, result.arc), []).append(result)
    for (case, arc), rows in by_arc.items():
        item = f"{case} {arc}"
        report.add(item, "r", rows[0].r)
        report.add(item, "floor(n r)", [row.floor_r for row in rows])
        report.add(item, "rho(phi_n)", [row.oracle for row in rows], "oracle")
        if any(row.agrees is False for row in rows):
            report.escalate(ExitStatus.MISMATCH)
        elif any(row.agrees is None for row in rows):
            report.escalate(ExitStatus.INCONCLUSIVE)
    report.add("suite", "agreements", sum(1 for r in results if r.agrees), "oracle")
    report.add("suite", "checks", len(results), "oracle")


HANDLERS: Dict[str, Callable[[Report, Optional[Scenario], RunFlags], None]] = {
    "order": _order,
    "sing": _sing,
    "diff": _diff,
    "nash": _nash,
    "persist": _persist,
    "compare": _compare,
    "zariski": _zariski,
    "selftest": _selftest,
}


def run(command: str, scenario: Optional[Scenario], flags: Optional[RunFlags] = None) -> Report:
    """Dispatch one command; the returned report carries its exit status."""
    flags = flags or RunFlags()
    if command not in HANDLERS:
        raise ParseError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    if scenario is None and command != "selftest":
        raise ParseError(f"`{command}` needs a scenario file")
    shown = {k: v for k, v in asdict(flags).items() if k != "output"}
    report = Report(command, scenario.name if scenario else "suite", shown)
    HANDLERS[command](report, scenario, flags)
    return report


# ============================================================================
# ENTRY POINT
# ============================================================================

def _parse_args(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="arcpersist",
                                     description="Arc-space persistence invariants of singular varieties.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("scenario", nargs="?", help="scenario JSON file")
    parser.add_argument("--precision", type=int, help="arc precision N (overrides the scenario)")
    parser.add_argument("--max-steps", type=int, help="maximum directed blow-ups")
    parser.add_argument("--output", choices=("table", "json"), default="table")
    parser.add_argument("--oracle", action="store_true", help="cross-check with the blow-up oracle")
    parser.add_argument("--char", type=int, dest="characteristic", help="override the field characteristic")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return ExitStatus.USAGE if exc.code else ExitStatus.OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    flags = RunFlags(args.precision, args.max_steps, args.output, args.oracle, args.characteristic)
    try:
        if args.precision is not None and args.precision < 1:
            raise ParseError("--precision must be >= 1")
        if args.max_steps is not None and args.max_steps < 0:
            raise ParseError("--max-steps must be >= 0")
        scenario = None
        if args.scenario is not None:
            scenario = parse_scenario(args.scenario, characteristic=args.characteristic,
                                      precision=args.precision)
        report = run(args.command, scenario, flags)
    except PrecisionExhausted as exc:
        retry = f" (retry with --precision {exc.retry_precision})" if exc.retry_precision else ""
        print(f"inconclusive: {exc}{retry}", file=sys.stderr)
        return ExitStatus.INCONCLUSIVE
    except ArcPersistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.USAGE
    sys.stdout.write(emit(report, args.output))
    return int(report.status)


if __name__ == "__main__":
    raise SystemExit(main())
