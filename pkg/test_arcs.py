#!/usr/bin/env python3
"""
Arcs: validation on a variety, nu_t, orders along arcs, persistence by formula
"""
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, '.')
from src.algebra import INFINITY, QQ, CoefficientField, Inconclusive, parse_polynomial
from src.arcs import (
    Arc, TOP_STRATUM_NOTE, nu_t, ord_rees_along_arc, persistence_invariants, persistence_sweep,
    reparametrize, require_on_variety, validate_on_variety,
)
from src.errors import BudgetExceeded, CenterMismatch, InvalidArc, NotSingular
from src.rees import ReesAlgebra, diff_saturate, hypersurface_algebra
from src.suite import SUITE

XY = ("x", "y")
XYZ = ("x", "y", "z")


def arc(variables=XY, precision=12, field=QQ, **coefficients):
    return Arc.from_coefficients(field, variables, coefficients, precision)


def F(text, variables=XY, field=QQ):
    return parse_polynomial(text, field, variables)


PHI = arc(x=[0, 0, 0, 1], y=[0, 0, 1])
CUSP_G = diff_saturate(ReesAlgebra(QQ, XY, ((F("x^2 - y^3"), 2),)))


# ============================================================================
# ARC VALIDATION
# ============================================================================

def test_validate_on_variety():
    assert validate_on_variety(PHI, [F("x^2 - y^3")])
    bad = validate_on_variety(arc(x=[0, 0, 0, 1], y=[0, 0, 0, 1]), [F("x^2 - y^3")])
    assert not bad
    assert bad.index == 6
    umbrella = arc(XYZ, x=[0, 0, 0, 1], y=[0, 0, 1], z=[0, 0, 1])
    assert validate_on_variety(umbrella, [F("x^2 - z*y^2", XYZ)])


def test_require_on_variety_reports_the_polynomial():
    with pytest.raises(InvalidArc) as info:
        require_on_variety(arc(x=[0, 0, 0, 1], y=[0, 0, 0, 1]), [F("x^2 - y^3")])
    assert info.value.index == 6


def test_arc_rejects_unknown_coordinates():
    with pytest.raises(ValueError):
        arc(w=[0, 1])


# ============================================================================
# ORDERS ALONG ARCS
# ============================================================================

def test_nu_t():
    assert nu_t(PHI, (0, 0)) == 2
    assert nu_t(arc(XYZ, x=[0, 0, 0, 1], y=[0, 0, 1], z=[0, 0, 1]), (0, 0, 0)) == 2
    assert nu_t(reparametrize(PHI, 2), (0, 0)) == 4
    with pytest.raises(CenterMismatch):
        nu_t(PHI, (1, 0))


def test_ord_rees_along_arc():
    assert ord_rees_along_arc(PHI, CUSP_G) == 3
    line = ReesAlgebra(QQ, ("x",), ((F("x", ("x",)), 1),))
    t = arc(("x",), x=[0, 1])
    assert ord_rees_along_arc(t, line) == 1
    assert ord_rees_along_arc(reparametrize(t, 5), line) == 5


def test_ord_rees_in_characteristic_2():
    F2 = CoefficientField(2)
    G = diff_saturate(ReesAlgebra(F2, XY, ((F("x^2 - y^3", field=F2), 2),)))
    assert ord_rees_along_arc(arc(field=F2, x=[0, 0, 0, 1], y=[0, 0, 1]), G) == 4


def test_ord_rees_inconclusive_inside_the_top_stratum():
    G = hypersurface_algebra(F("x^2"), (0, 0))
    value = ord_rees_along_arc(arc(y=[0, 1]), G)
    assert isinstance(value, Inconclusive)
    assert value.bound == 6


def test_ord_rees_conclusive_below_the_precision_bound():
    # x vanishes to precision 12 (bound 12/2 = 6) but y witnesses 1
    G = ReesAlgebra(QQ, XY, ((F("x"), 2), (F("y"), 1)))
    assert ord_rees_along_arc(arc(y=[0, 1]), G) == 1
    # a witnessed 7 cannot beat the bound 6
    assert isinstance(ord_rees_along_arc(arc(y=[0] * 7 + [1]), G), Inconclusive)


def test_empty_algebra_has_infinite_order():
    assert ord_rees_along_arc(PHI, ReesAlgebra(QQ, XY, ())) is INFINITY


def test_reparametrize():
    phi_2 = reparametrize(PHI, 2)
    assert phi_2.precision == 23
    assert phi_2["x"].order() == 6 and phi_2["y"].order() == 4
    assert reparametrize(PHI, 1) == PHI
    with pytest.raises(BudgetExceeded):
        reparametrize(PHI, 8, budget=50)


# ============================================================================
# PERSISTENCE BY FORMULA
# ============================================================================

def test_cusp_anchor():
    report = persistence_invariants(PHI, CUSP_G, (0, 0))
    assert report.r == 3
    assert report.rho == 3
    assert report.nu_t == 2
    assert report.r_bar == Fraction(3, 2)
    assert report.rho_bar == Fraction(3, 2)
    assert report.conclusive


def test_line_persistence():
    line = ReesAlgebra(QQ, ("x",), ((F("x", ("x",)), 1),))
    report = persistence_invariants(arc(("x",), x=[0, 1]), line, (0,))
    assert (report.r, report.rho, report.r_bar, report.rho_bar) == (1, 1, 1, 1)


def test_degenerate_arc_is_inconclusive():
    report = persistence_invariants(arc(), CUSP_G, (0, 0))
    assert report.rho is None
    assert not report.conclusive
    assert report.retry_precision == 24
    assert report.note == TOP_STRATUM_NOTE


def test_persistence_needs_a_singular_point():
    with pytest.raises(NotSingular):
        persistence_invariants(arc(x=[1, 1]), CUSP_G, (1, 0))


def test_sweep_bounds():
    rows = persistence_sweep(PHI, CUSP_G, (0, 0), range(1, 6))
    assert [row.rho_n for row in rows] == [3, 6, 9, 12, 15]
    assert all(row.within_bound for row in rows)


def test_sweep_on_a_fractional_order():
    G = ReesAlgebra(QQ, XY, ((F("x^3"), 2),))
    phi = arc(x=[0, 1], y=[0, 1])
    report = persistence_invariants(phi, G, (0, 0))
    assert (report.r, report.rho, report.nu_t) == (Fraction(3, 2), 1, 1)
    rows = persistence_sweep(phi, G, (0, 0), [2, 3])
    assert [row.rho_n for row in rows] == [3, 4]
    assert [row.ratio for row in rows] == [Fraction(3, 2), Fraction(4, 3)]
    assert all(row.within_bound for row in rows)


# ============================================================================
# REPARAMETRIZATION ACROSS THE SUITE
# ============================================================================

@pytest.mark.parametrize("case", SUITE, ids=[case.name for case in SUITE])
def test_orders_scale_under_reparametrization(case):
    G = case.algebra()
    for name, phi in case.build_arcs().items():
        base = persistence_invariants(phi, G, case.point)
        assert base.conclusive, f"{case.name} {name}"
        for row in persistence_sweep(phi, G, case.point, range(1, 17)):
            assert row.r_n == row.n * base.r, f"{case.name} {name} n={row.n}"
            assert row.within_bound, f"{case.name} {name} n={row.n}: {row.ratio} vs {base.r}"
