#!/usr/bin/env python3
"""
Directed blow-ups: the persistence oracle, Nash multiplicity sequences and
the curated suite where the oracle must equal floor(n * r) exactly
"""
import sys

import pytest

sys.path.insert(0, '.')
from src.algebra import QQ, RationalPoint, TruncatedSeries, parse_polynomial
from src.arcs import Arc, persistence_invariants, reparametrize
from src.errors import CenterMismatch, NotSingular, PrecisionExhausted
from src.hickel import (
    DidNotDrop, directed_sequence, fresh_name, lift_arc, nash_sequence_hypersurface,
    oracle_trace, persistence_oracle, select_chart, strict_transform,
)
from src.rees import generator_orders, hypersurface_algebra, in_singular_locus
from src.suite import SUITE, run_case

XY = ("x", "y")
CUSP = parse_polynomial("x^2 - y^3", QQ, XY)
CUSP_G = hypersurface_algebra(CUSP, (0, 0))


def arc(precision=12, variables=XY, **coefficients):
    return Arc.from_coefficients(QQ, variables, coefficients, precision)


PHI = arc(x=[0, 0, 0, 1], y=[0, 0, 1])


# ============================================================================
# SINGLE STEPS
# ============================================================================

def test_fresh_name():
    assert fresh_name(("x", "y")) == "s"
    assert fresh_name(("s", "s1", "u")) == "s2"


def test_select_chart_prefers_least_order_then_lowest_index():
    gamma = arc(variables=("x", "y", "s"), x=[0, 0, 1], y=[0, 1], s=[0, 1])
    assert select_chart(gamma, (0, 0, 0)) == 1
    degenerate = arc(variables=("x", "y", "s"), y=[0, 0, 1], s=[1])
    assert select_chart(degenerate, (0, 0, 1)) == 1


def test_lift_arc():
    gamma = arc(variables=("x", "y", "s"), x=[0, 0, 0, 1], y=[0, 0, 1], s=[0, 1])
    lifted = lift_arc(gamma, (0, 0, 0), 2)
    assert lifted.precision == 11
    assert lifted["x"].order() == 2 and lifted["y"].order() == 1
    assert lifted["s"] == TruncatedSeries.parameter(QQ, 11)
    with pytest.raises(PrecisionExhausted):
        lift_arc(gamma.truncate(5), (0, 0, 0), 2, floor=5)


def test_strict_transform():
    assert strict_transform(CUSP, (0, 0), 1) == parse_polynomial("x^2 - y", QQ, XY)
    assert strict_transform(CUSP, (0, 0), 0) == parse_polynomial("1 - x*y^3", QQ, XY)


# ============================================================================
# THE ORACLE
# ============================================================================

def test_cusp_oracle_matches_the_formula():
    assert persistence_oracle(PHI, CUSP_G, (0, 0)) == 3
    assert persistence_invariants(PHI, CUSP_G, (0, 0)).rho == 3


def test_cusp_trace():
    value, trace = oracle_trace(PHI, CUSP_G, (0, 0))
    assert value == 3
    assert [record.chart for record in trace] == [None, "s", "y", "x"]
    assert trace[2].center == RationalPoint((0, 0, 1))
    states = list(directed_sequence(PHI, CUSP_G, (0, 0)))
    assert [state.at_max_multiplicity for state in states] == [True, True, True, False]


def test_oracle_stops_at_max_steps():
    assert persistence_oracle(PHI, CUSP_G, (0, 0), max_steps=2) == DidNotDrop(2)
    assert str(DidNotDrop(2)) == "DidNotDrop(2)"


def test_arc_inside_the_top_stratum_never_drops():
    double_line = hypersurface_algebra(parse_polynomial("x^2", QQ, XY), (0, 0))
    inside = arc(y=[0, 1])
    assert persistence_oracle(inside, double_line, (0, 0), max_steps=5) == DidNotDrop(5)
    with pytest.raises(PrecisionExhausted) as info:
        persistence_oracle(inside, double_line, (0, 0), max_steps=64)
    assert info.value.retry_precision == 24


def test_oracle_input_checks():
    with pytest.raises(CenterMismatch):
        persistence_oracle(PHI, CUSP_G, (0, 1))
    # x^2 - y^3 vanishes to order 1 only at (1, 1)
    with pytest.raises(NotSingular):
        persistence_oracle(arc(x=[1, 1], y=[1]), CUSP_G, (1, 1))


def test_a1_drops_after_one_step():
    node = hypersurface_algebra(parse_polynomial("x^2 - y^2", QQ, XY), (0, 0))
    assert persistence_oracle(arc(x=[0, 1], y=[0, 1]), node, (0, 0)) == 1


def test_reparametrized_cusp():
    for n in (2, 3, 8):
        assert persistence_oracle(reparametrize(PHI, n), CUSP_G, (0, 0)) == 3 * n


def test_recorded_orders_decide_the_next_step():
    for state in directed_sequence(reparametrize(PHI, 4), CUSP_G, (0, 0)):
        assert state.orders == tuple(generator_orders(state.algebra, state.center))
        assert state.at_max_multiplicity == in_singular_locus(state.algebra, state.center)
    assert state.step == 12
    assert not state.at_max_multiplicity


# ============================================================================
# NASH MULTIPLICITY SEQUENCE
# ============================================================================

def test_cusp_nash_sequence():
    result = nash_sequence_hypersurface(PHI, CUSP, (0, 0))
    assert list(result) == [2, 2, 2, 1]
    assert result.drop == 3
    assert result.drop == persistence_oracle(PHI, CUSP_G, (0, 0))


def test_nash_sequence_truncated():
    result = nash_sequence_hypersurface(PHI, CUSP, (0, 0), max_steps=2)
    assert result.multiplicities == (2, 2, 2)
    assert result.drop == DidNotDrop(2)


def test_nash_needs_a_singular_point():
    smooth = parse_polynomial("x - y^2", QQ, XY)
    with pytest.raises(NotSingular):
        nash_sequence_hypersurface(arc(x=[0, 0, 1], y=[0, 1]), smooth, (0, 0))


# ============================================================================
# CURATED SUITE
# ============================================================================

@pytest.mark.parametrize("case", SUITE, ids=[case.name for case in SUITE])
def test_oracle_equals_floor_of_order(case):
    results = list(run_case(case))
    assert len({r.arc for r in results}) >= 3
    for result in results:
        assert result.agrees, (f"{result.case} {result.arc} n={result.n}: "
                               f"r={result.r}, oracle={result.oracle}")
