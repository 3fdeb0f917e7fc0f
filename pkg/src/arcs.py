# ---------------------------------------------------------------------------
# File    : arcs.py
# Purpose : Arcs on presented varieties, orders along arcs, reparametrization
#           and the closed-formula persistence invariants.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
from __future__ import annotations
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import floor
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import config
from .algebra import (
    INFINITY, CoefficientField, Inconclusive, Infinity, OrderValue, Polynomial,
    RationalPoint, TruncatedSeries, series_eval,
)
from .errors import (
    ArcPersistError, BudgetExceeded, CenterMismatch, DimensionMismatch, FieldMismatch,
    InvalidArc, NotSingular, PrecisionMismatch,
)
from .rees import ReesAlgebra, in_singular_locus

ReesOrder = Union[Fraction, Infinity, Inconclusive]


@dataclass(frozen=True)
class Arc:
    """One truncated series per ambient coordinate, all of the same precision."""
    variables: Tuple[str, ...]
    series: Tuple[TruncatedSeries, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "series", tuple(self.series))
        if len(self.variables) != len(self.series):
            raise DimensionMismatch(f"{len(self.series)} series for {len(self.variables)} variables")
        if not self.series:
            raise DimensionMismatch("an arc needs at least one coordinate")
        if len({s.precision for s in self.series}) != 1:
            raise PrecisionMismatch("all coordinate series of an arc share one precision")
        if len({s.field for s in self.series}) != 1:
            raise FieldMismatch("all coordinate series of an arc share one field")

    @classmethod
    def from_coefficients(cls, field: CoefficientField, variables: Sequence[str],
                          coefficients: Mapping[str, Sequence], precision: int, *,
                          truncate: bool = False) -> "Arc":
        """Missing variables get the zero series."""
        unknown = set(coefficients) - set(variables)
        if unknown:
            raise DimensionMismatch(f"arc names undeclared variables {sorted(unknown)}")
        return cls(tuple(variables), tuple(
            TruncatedSeries.of(field, coefficients.get(v, []), precision, truncate=truncate)
            for v in variables))

    @property
    def precision(self) -> int:
        return self.series[0].precision

    @property
    def field(self) -> CoefficientField:
        return self.series[0].field

    @property
    def center(self) -> RationalPoint:
        return RationalPoint(tuple(s.constant_term() for s in self.series))

    def __getitem__(self, name: str) -> TruncatedSeries:
        return self.series[self.variables.index(name)]

    def truncate(self, precision: int) -> "Arc":
        return Arc(self.variables, tuple(s.truncate(precision) for s in self.series))

    def restrict(self, variables: Sequence[str]) -> "Arc":
        missing = [v for v in variables if v not in self.variables]
        if missing:
            raise DimensionMismatch(f"arc has no coordinate {missing[0]!r}")
        return Arc(tuple(variables), tuple(self[v] for v in variables))

    def extend(self, name: str, series: TruncatedSeries) -> "Arc":
        if name in self.variables:
            raise ArcPersistError(f"arc already has coordinate {name!r}")
        return Arc(self.variables + (name,), self.series + (series,))

    def __str__(self):
        return "(" + ", ".join(f"{v}: {s}" for v, s in zip(self.variables, self.series)) + ")"


@dataclass(frozen=True)
class ArcValidation:
    valid: bool
    polynomial: Optional[Polynomial] = None
    index: Optional[int] = None

    def __bool__(self):
        return self.valid


def validate_on_variety(phi: Arc, defining: Sequence[Polynomial]) -> ArcValidation:
    """Every defining polynomial must vanish along phi to its precision."""
    for f in defining:
        if f.variables != phi.variables:
            raise DimensionMismatch(f"{f} lives over {f.variables}, arc over {phi.variables}")
        value = series_eval(f, phi.series)
        for i, c in enumerate(value.coefficients):
            if c:
                return ArcValidation(False, f, i)
    return ArcValidation(True)


def require_on_variety(phi: Arc, defining: Sequence[Polynomial]) -> None:
    check = validate_on_variety(phi, defining)
    if not check:
        raise InvalidArc(f"arc does not lie on the variety: {check.polynomial} has a nonzero "
                         f"coefficient at t^{check.index}",
                         polynomial=str(check.polynomial), index=check.index)


def nu_t(phi: Arc, xi: Sequence) -> Union[int, Inconclusive]:
    """Order of the image of the maximal ideal of xi: min_i ord_t(phi_i - xi_i)."""
    xi = tuple(xi)
    if tuple(phi.center) != xi:
        raise CenterMismatch(f"arc centered at {phi.center}, expected {RationalPoint(xi)}")
    orders = [(s - c).order() for s, c in zip(phi.series, xi)]
    finite = [o for o in orders if not isinstance(o, Inconclusive)]
    return min(finite) if finite else Inconclusive(phi.precision)


def ord_rees_along_arc(phi: Arc, G: ReesAlgebra) -> ReesOrder:
    """
    ord_t(phi(G)) = min_i ord_t(phi(g_i)) / b_i.

    A generator vanishing to precision N only bounds its ratio below by N/b;
    the minimum is conclusive when no such bound undercuts a witnessed ratio.
    """
    if G.variables != phi.variables:
        raise DimensionMismatch(f"algebra over {G.variables}, arc over {phi.variables}")
    if not G.generators:
        return INFINITY
    witnessed: List[Fraction] = []
    bounds: List[Fraction] = []
    for g, b in G.generators:
        order = series_eval(g, phi.series).order()
        if isinstance(order, Inconclusive):
            bounds.append(Fraction(order.bound, b))
        else:
            witnessed.append(Fraction(order, b))
    if witnessed and (not bounds or min(witnessed) <= min(bounds)):
        return min(witnessed)
    return Inconclusive(min(bounds))


def reparametrize(phi: Arc, n: int, *, budget: Optional[int] = None) -> Arc:
    """phi_n = phi o (t -> t^n), precision n(N-1)+1."""
    budget = config.PRECISION_BUDGET if budget is None else budget
    if n < 1:
        raise ArcPersistError("reparametrization exponent must be >= 1")
    if n * (phi.precision - 1) + 1 > budget:
        raise BudgetExceeded(f"reparametrizing precision {phi.precision} by {n} exceeds {budget}")
    return Arc(phi.variables, tuple(s.compose_power(n) for s in phi.series))


# ============================================================================
# PERSISTENCE BY THE CLOSED FORMULA
# ============================================================================

TOP_STRATUM_NOTE = ("all evaluations vanish to precision: the generic point of the arc "
                    "may lie in the top multiplicity stratum")


@dataclass(frozen=True)
class PersistenceReport:
    r: ReesOrder
    rho: Optional[int]
    r_bar: Optional[Fraction]
    rho_bar: Optional[Fraction]
    nu_t: OrderValue
    inconclusive: Optional[int] = None
    retry_precision: Optional[int] = None
    note: str = ""

    @property
    def conclusive(self) -> bool:
        return self.inconclusive is None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    # allow dict-style access too: report['rho']
    def __getitem__(self, key: str) -> Any:
        return getattr(self, key)


def persistence_invariants(phi: Arc, G: ReesAlgebra, xi: Sequence) -> PersistenceReport:
    """
    r = ord_t(phi(G)), rho = floor(r) and their normalizations by nu_t(phi).

    G must already be differentially saturated; this function never saturates.
    """
    xi = tuple(xi)
    if not in_singular_locus(G, xi):
        raise NotSingular(f"{RationalPoint(xi)} is not in Sing(G); persistence is defined "
                          f"at points of maximal multiplicity only")
    nu = nu_t(phi, xi)
    r = ord_rees_along_arc(phi, G)
    if isinstance(r, Inconclusive) or isinstance(nu, Inconclusive):
        return PersistenceReport(r=r, rho=None, r_bar=None, rho_bar=None, nu_t=nu,
                                 inconclusive=phi.precision,
                                 retry_precision=2 * phi.precision, note=TOP_STRATUM_NOTE)
    if r is INFINITY:
        return PersistenceReport(r=r, rho=None, r_bar=None, rho_bar=None, nu_t=nu,
                                 note="algebra without generators")
    rho = floor(r)
    return PersistenceReport(r=r, rho=rho, r_bar=r / nu, rho_bar=Fraction(rho, nu), nu_t=nu)


@dataclass(frozen=True)
class SweepRow:
    n: int
    r_n: ReesOrder
    rho_n: Optional[int]
    ratio: Optional[Fraction]
    within_bound: Optional[bool]


def persistence_sweep(phi: Arc, G: ReesAlgebra, xi: Sequence,
                      ns: Sequence[int]) -> List[SweepRow]:
    """rho(phi_n)/n against r: |rho(phi_n)/n - r| < 1/n for every conclusive n."""
    base = persistence_invariants(phi, G, xi)
    rows = []
    for n in ns:
        report = persistence_invariants(reparametrize(phi, n), G, xi)
        if report.rho is None or base.rho is None:
            rows.append(SweepRow(n, report.r, report.rho, None, None))
            continue
        ratio = Fraction(report.rho, n)
        rows.append(SweepRow(n, report.r, report.rho, ratio, abs(ratio - base.r) < Fraction(1, n)))
    return rows


# ============================================================================
# PUSHFORWARD
# ============================================================================

def pushforward(phi: Arc, spec) -> Arc:
    """beta_inf(phi'): validate on X' and drop the coordinates beyond the target tower."""
    require_on_variety(phi, spec.source.defining_polynomials())
    return phi.restrict(spec.target.ambient)
