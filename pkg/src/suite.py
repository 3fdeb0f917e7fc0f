# ---------------------------------------------------------------------------
# File    : suite.py
# Purpose : Curated example suite: plane curve singularities, the Whitney
#           umbrella and two triangular towers, each with arcs through the
#           singular point.  Drives `selftest` and the property tests.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
from __future__ import annotations
from dataclasses import dataclass
from math import floor
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union
import logging

from .algebra import CoefficientField, Inconclusive, parse_polynomial
from .arcs import Arc, ord_rees_along_arc, reparametrize
from .hickel import persistence_oracle
from .morphisms import TriangularPresentation, local_presentation
from .rees import ReesAlgebra, hypersurface_algebra

logger = logging.getLogger(__name__)

SUITE_PRECISION = 20
SUITE_NS = tuple(range(1, 9))

ArcData = Dict[str, List[Union[int, str]]]

# tau = t + t^2 and its powers
_T1_2 = [0, 0, 1, 2, 1]
_T1_3 = [0, 0, 0, 1, 3, 3, 1]
_T1_5 = [0, 0, 0, 0, 0, 1, 5, 10, 10, 5, 1]

_CUSP_ARCS: Dict[str, ArcData] = {
    "t": {"x": [0, 0, 0, 1], "y": [0, 0, 1]},
    "t+t^2": {"x": _T1_3, "y": _T1_2},
    "t^2": {"x": [0] * 6 + [1], "y": [0] * 4 + [1]},
}


@dataclass(frozen=True)
class SuiteCase:
    name: str
    characteristic: int
    variables: Tuple[str, ...]
    point: Tuple[int, ...]
    arcs: Dict[str, ArcData]
    equation: Optional[str] = None
    base_vars: Tuple[str, ...] = ()
    tower: Tuple[Tuple[str, str], ...] = ()
    precision: int = SUITE_PRECISION

    @property
    def field(self) -> CoefficientField:
        return CoefficientField(self.characteristic)

    def algebra(self) -> ReesAlgebra:
        if self.equation is not None:
            F = parse_polynomial(self.equation, self.field, self.variables)
            return hypersurface_algebra(F, self.point)
        return local_presentation(TriangularPresentation.from_strings(self.field, self.base_vars,
                                                                      self.tower))

    def build_arcs(self) -> Dict[str, Arc]:
        return {name: Arc.from_coefficients(self.field, self.variables, data, self.precision)
                for name, data in self.arcs.items()}


def _a_k(k: int) -> SuiteCase:
    m = k + 1
    if m % 2 == 0:
        # branch x = y^{m/2}
        h = m // 2
        arcs = {
            "t": {"x": [0] * h + [1], "y": [0, 1]},
            "2t": {"x": [0] * h + [2 ** h], "y": [0, 2]},
            "-branch": {"x": [0] * h + [-1], "y": [0, 1]},
        }
    else:
        # x = tau^m, y = tau^2
        arcs = {
            "t": {"x": [0] * m + [1], "y": [0, 0, 1]},
            "2t": {"x": [0] * m + [2 ** m], "y": [0, 0, 4]},
            "-t": {"x": [0] * m + [(-1) ** m], "y": [0, 0, 1]},
        }
    return SuiteCase(f"A{k}", 0, ("x", "y"), (0, 0), arcs, equation=f"x^2 - y^{m}")


SUITE: Tuple[SuiteCase, ...] = (
    SuiteCase("cusp/QQ", 0, ("x", "y"), (0, 0), _CUSP_ARCS, equation="x^2 - y^3"),
    SuiteCase("cusp/GF(2)", 2, ("x", "y"), (0, 0), _CUSP_ARCS, equation="x^2 - y^3"),
    SuiteCase("cusp/GF(3)", 3, ("x", "y"), (0, 0), _CUSP_ARCS, equation="x^2 - y^3"),
    *(_a_k(k) for k in range(1, 6)),
    SuiteCase("umbrella", 0, ("x", "y", "z"), (0, 0, 0), {
        "(t^3,t^2,t^2)": {"x": [0, 0, 0, 1], "y": [0, 0, 1], "z": [0, 0, 1]},
        "(t^2,t,t^2)": {"x": [0, 0, 1], "y": [0, 1], "z": [0, 0, 1]},
        "(t^3,t,t^4)": {"x": [0, 0, 0, 1], "y": [0, 1], "z": [0, 0, 0, 0, 1]},
    }, equation="x^2 - z*y^2"),
    SuiteCase("umbrella/axis", 0, ("x", "y", "z"), (0, 0, 1), {
        "(t,t,1)": {"x": [0, 1], "y": [0, 1], "z": [1]},
        "(t+t^2,t,(1+t)^2)": {"x": [0, 1, 1], "y": [0, 1], "z": [1, 2, 1]},
        "(t^2,t^2,1)": {"x": [0, 0, 1], "y": [0, 0, 1], "z": [1]},
    }, equation="x^2 - z*y^2"),
    SuiteCase("tower/s", 0, ("s", "x", "z"), (0, 0, 0), {
        "(t^2,t^3,t^5)": {"s": [0, 0, 1], "x": [0, 0, 0, 1], "z": [0] * 5 + [1]},
        "(t^2,t^3,-t^5)": {"s": [0, 0, 1], "x": [0, 0, 0, 1], "z": [0] * 5 + [-1]},
        "tau=t+t^2": {"s": _T1_2, "x": _T1_3, "z": _T1_5},
    }, base_vars=("s",), tower=(("x", "x^2 - s^3"), ("z", "z^2 - s^5"))),
    SuiteCase("tower/su", 0, ("s", "u", "x", "z"), (0, 0, 0, 0), {
        "(t^2,0,t^3,0)": {"s": [0, 0, 1], "x": [0, 0, 0, 1]},
        "(0,t^2,t^2,t^3)": {"u": [0, 0, 1], "x": [0, 0, 1], "z": [0, 0, 0, 1]},
        "tau=t+t^2": {"u": _T1_2, "x": _T1_2, "z": _T1_3},
    }, base_vars=("s", "u"), tower=(("x", "x^2 - s^3 - u^2"), ("z", "z^2 - u^3"))),
)


@dataclass(frozen=True)
class SuiteResult:
    case: str
    arc: str
    n: int
    r: object
    floor_r: Optional[int]
    oracle: object

    @property
    def agrees(self) -> Optional[bool]:
        if self.floor_r is None or not isinstance(self.oracle, int):
            return None
        return self.floor_r == self.oracle


def run_case(case: SuiteCase, ns: Sequence[int] = SUITE_NS,
             max_steps: Optional[int] = None) -> Iterator[SuiteResult]:
    G = case.algebra()
    for name, phi in case.build_arcs().items():
        for n in ns:
            phi_n = reparametrize(phi, n) if n > 1 else phi
            r = ord_rees_along_arc(phi_n, G)
            floor_r = None if isinstance(r, Inconclusive) else floor(r)
            oracle = persistence_oracle(phi_n, G, case.point, max_steps)
            logger.debug("%s %s n=%d: r=%s oracle=%s", case.name, name, n, r, oracle)
            yield SuiteResult(case.name, name, n, r, floor_r, oracle)


def run_suite(ns: Sequence[int] = SUITE_NS, max_steps: Optional[int] = None,
              cases: Sequence[SuiteCase] = SUITE) -> List[SuiteResult]:
    return [result for case in cases for result in run_case(case, ns, max_steps)]
