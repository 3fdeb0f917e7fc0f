#!/usr/bin/env python3
"""
Scenario files, report rendering and the command line exit-code contract
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, '.')
from src.algebra import INFINITY, Inconclusive
from src.cli import RunFlags, main, run
from src.errors import ParseError
from src.hickel import DidNotDrop
from src.report import ExitStatus, Report, emit, render_json, render_text
from src.scenario import parse_scenario, scenario_from_dict

SCENARIOS = Path(__file__).parent / "scenarios"


def scenario_path(name):
    return str(SCENARIOS / f"{name}.json")


def run_json(capsys, *argv):
    status = main([*argv, "--output", "json"])
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    return status, lines


def cell(lines, item, quantity, provenance=None):
    found = [l["value"] for l in lines if l.get("item") == item and l.get("quantity") == quantity
             and (provenance is None or l["provenance"] == provenance)]
    assert found, f"no cell {item!r} / {quantity!r}"
    return found[0]


# ============================================================================
# SCENARIO FILES
# ============================================================================

def test_parse_cusp_scenario():
    scenario = parse_scenario(scenario_path("cusp"))
    assert scenario.variables == ("x", "y")
    assert scenario.variety.point == scenario.points["origin"]
    assert scenario.arcs["phi"].precision == 16
    assert scenario.defaults.reparametrize == (2, 3)
    assert scenario.algebras["G"].generators[0][0] == scenario.polynomials["F"]


def test_overrides():
    scenario = parse_scenario(scenario_path("cusp"), characteristic=3, precision=10)
    assert scenario.field.characteristic == 3
    assert all(phi.precision == 10 for phi in scenario.arcs.values())


def test_lowering_the_precision_truncates_with_a_warning(caplog):
    with caplog.at_level("WARNING", logger="src.scenario"):
        scenario = parse_scenario(scenario_path("cusp"), precision=4)
    assert scenario.arcs["tau"].precision == 4
    assert list(scenario.arcs["tau"]["x"].coefficients) == [0, 0, 0, 1]
    assert any("tau" in record.getMessage() for record in caplog.records)


def test_every_shipped_scenario_parses():
    for path in sorted(SCENARIOS.glob("*.json")):
        assert parse_scenario(path).name


BASE = {"name": "t", "variables": ["x", "y"]}


@pytest.mark.parametrize("extra", [
    {"unknown_section": {}},
    {"arcs": {"phi": {"z": [0, 1]}}},
    {"algebras": {"G": [{"poly": "x", "weight": 0}]}},
    {"algebras": {"G": [{"poly": "x + w", "weight": 1}]}},
    {"points": {"x": [0, 0]}},
    {"points": {"p": [0]}},
    {"arcs": {"phi": {"x": [0.5]}}},
    {"variety": {"equations": ["x", "y"]}},
    {"field": {"characteristic": 6}},
    {"arcs": {"phi": {"x": [0, 1, 0, 2], "precision": 3}}},
])
def test_invalid_scenarios_are_parse_errors(extra):
    with pytest.raises(ParseError):
        scenario_from_dict({**BASE, **extra})


def test_parse_errors_carry_a_location(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "name": "t",\n  "variables": ["x"\n}\n', encoding="utf-8")
    with pytest.raises(ParseError) as info:
        parse_scenario(broken)
    assert info.value.line is not None
    duplicate = tmp_path / "duplicate.json"
    duplicate.write_text('{"name": "a", "name": "b"}', encoding="utf-8")
    with pytest.raises(ParseError):
        parse_scenario(duplicate)


# ============================================================================
# REPORT RENDERING
# ============================================================================

def test_render_values():
    assert render_text(Fraction(3, 2)) == "3/2"
    assert render_text(INFINITY) == "inf"
    assert render_text(Inconclusive(12)) == "≥12?"
    assert render_text(None) == "-"
    assert render_json(Fraction(3, 2)) == "3/2"
    assert render_json(Fraction(4, 2)) == 2
    assert render_json(Inconclusive(12)) == {"inconclusive": 12}
    assert render_json(DidNotDrop(2)) == {"did_not_drop": 2}


def test_table_and_json_carry_the_same_cells():
    report = Report("persist", "cusp", {"precision": 16})
    report.add("phi", "r_bar", Fraction(3, 2))
    report.add("phi", "rho", 3, "oracle")
    table = emit(report, "table")
    assert table.splitlines()[0] == "# persist cusp --precision 16"
    assert "3/2" in table and table.rstrip().endswith("status: 0")
    lines = [json.loads(l) for l in emit(report, "json").splitlines()]
    assert lines[1] == {"item": "phi", "quantity": "r_bar", "value": "3/2", "provenance": "formula"}
    assert lines[-1] == {"status": 0}


def test_escalation_order():
    report = Report("x", "y")
    report.escalate(ExitStatus.MISMATCH)
    report.escalate(ExitStatus.INCONCLUSIVE)
    assert report.status == ExitStatus.MISMATCH


# ============================================================================
# COMMANDS
# ============================================================================

def test_persist_cusp_anchor(capsys):
    status, lines = run_json(capsys, "persist", scenario_path("cusp"), "--oracle")
    assert status == 0
    assert cell(lines, "phi", "r") == 3
    assert cell(lines, "phi", "rho", "formula") == 3
    assert cell(lines, "phi", "rho", "oracle") == 3
    assert cell(lines, "phi", "nu_t") == 2
    assert cell(lines, "phi", "r_bar") == "3/2"
    assert cell(lines, "phi_2", "rho") == 6
    assert cell(lines, "phi n=2", "rho(phi_n)/n") == 3


def test_run_returns_a_report():
    report = run("persist", parse_scenario(scenario_path("cusp")))
    assert report.values("rho", "tau") == [3]
    assert report.status == ExitStatus.OK


def test_order_at_points(capsys):
    status, lines = run_json(capsys, "order", scenario_path("umbrella"))
    assert cell(lines, "G @ origin", "ord") == 1
    assert cell(lines, "G @ on_axis", "ord") == 1
    assert cell(lines, "phi", "nu_t") == 2
    # the defining generator vanishes along arcs on the variety: only a bound survives
    assert cell(lines, "G along phi", "ord_t") == {"inconclusive": 8}
    assert status == 3


def test_order_reports_the_arcwise_witness(capsys):
    status, lines = run_json(capsys, "order", scenario_path("arcwise"))
    assert status == 1
    assert cell(lines, "small vs large along c", "relation") == "strict"
    assert cell(lines, "arcwise", "consistent") is False


def test_sing_enumerates_in_positive_characteristic(capsys):
    status, lines = run_json(capsys, "sing", scenario_path("cusp"), "--char", "5")
    assert status == 0
    assert cell(lines, "G", "|Sing(F_p)|", "brute-force") == 1
    assert cell(lines, "G @ origin", "in Sing") is True


def test_diff_in_characteristic_2(capsys):
    status, lines = run_json(capsys, "diff", scenario_path("cusp"), "--char", "2")
    assert status == 0
    assert cell(lines, "G", "Diff generators") == 2
    assert cell(lines, "G", "Sing(G) = Sing(Diff G)") is True


def test_nash_cusp(capsys):
    status, lines = run_json(capsys, "nash", scenario_path("cusp"))
    assert status == 0
    assert cell(lines, "phi", "nash sequence") == [2, 2, 2, 1]
    assert cell(lines, "phi", "first drop") == 3


def test_nash_with_too_few_steps_is_inconclusive(capsys):
    status, lines = run_json(capsys, "nash", scenario_path("cusp"), "--max-steps", "2")
    assert status == 3
    assert cell(lines, "phi", "first drop") == {"did_not_drop": 2}


def test_top_stratum_is_never_finite(capsys):
    status, lines = run_json(capsys, "persist", scenario_path("top_stratum"))
    assert status == 3
    assert cell(lines, "inside", "rho") is None
    assert cell(lines, "inside", "retry precision") == 24
    status, lines = run_json(capsys, "nash", scenario_path("top_stratum"))
    assert status == 3
    assert cell(lines, "inside", "first drop") == {"did_not_drop": 5}


@pytest.mark.parametrize("name, expected", [
    ("morphism_identity", 0),
    ("morphism_redundant", 0),
    ("morphism_cusp_line", 1),
    ("morphism_nontransversal", 1),
])
def test_compare_exit_codes(capsys, name, expected):
    status, lines = run_json(capsys, "compare", scenario_path(name))
    assert status == expected


def test_compare_witness(capsys):
    status, lines = run_json(capsys, "compare", scenario_path("morphism_cusp_line"), "--oracle")
    assert status == 1
    assert cell(lines, "compare", "summary") == "Mismatch"
    assert cell(lines, "compare", "witness") == "phi"
    assert cell(lines, "phi", "rho_source") == 1
    assert cell(lines, "phi", "rho_target") == 3


@pytest.mark.parametrize("name", ["zariski", "zariski_qq"])
def test_zariski(capsys, name):
    status, lines = run_json(capsys, "zariski", scenario_path(name))
    assert status == 0
    assert all(l["value"] is True for l in lines if l.get("quantity") == "formula holds")


def test_selftest(capsys):
    status, lines = run_json(capsys, "selftest")
    assert status == 0
    assert cell(lines, "suite", "agreements") == cell(lines, "suite", "checks")


# ============================================================================
# USAGE ERRORS
# ============================================================================

def test_usage_errors(capsys, tmp_path):
    assert main(["frobnicate"]) == 2
    assert main(["persist"]) == 2
    assert main(["persist", str(tmp_path / "missing.json")]) == 2
    assert main(["persist", scenario_path("cusp"), "--precision", "0"]) == 2
    assert main(["compare", scenario_path("cusp")]) == 2
    assert "error:" in capsys.readouterr().err
