# ---------------------------------------------------------------------------
# File    : morphisms.py
# Purpose : Triangular finite-morphism presentations, local presentations of
#           the maximum multiplicity, transversality and multiplicity-formula
#           checks, and the persistence comparison harness.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
"""
A presentation is declared, not discovered: X lives in A^{d+n} with
coordinates (base variables, x_1, ..., x_n) and is cut out by a tower of
polynomials f_i monic in x_i with coefficients in the base ring.  The finite
morphism X' -> X is the projection forgetting the extra tower variables.

Nothing here decides finiteness of an extension of Rees algebras: arc
samples only ever produce evidence or a witness against it.
"""

from __future__ import annotations
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union
import logging

from sympy import Poly, Symbol

from . import config
from .algebra import (
    CoefficientField, Inconclusive, Polynomial, RationalPoint, parse_polynomial,
)
from .arcs import (
    Arc, ReesOrder, nu_t, ord_rees_along_arc, persistence_invariants, pushforward,
    require_on_variety,
)
from .errors import (
    ArcPersistError, BudgetExceeded, NotSingular, PrecisionExhausted, PresentationError,
)
from .hickel import DidNotDrop, persistence_oracle
from .rees import ReesAlgebra, diff_saturate, in_singular_locus, singular_locus_enumerate

logger = logging.getLogger(__name__)

SAMPLED_NOTE = ("arc-sampled necessary condition for an integral/finite extension; "
                "not a decision procedure")


# ============================================================================
# PRESENTATIONS
# ============================================================================

@dataclass(frozen=True)
class TowerLayer:
    var: str
    poly: Polynomial

    @property
    def degree(self) -> int:
        return self.poly.degree_in(self.poly.variables.index(self.var))


@dataclass(frozen=True)
class TriangularPresentation:
    field: CoefficientField
    base_vars: Tuple[str, ...]
    tower: Tuple[TowerLayer, ...]
    extra_relations: Tuple[Polynomial, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base_vars", tuple(self.base_vars))
        object.__setattr__(self, "tower", tuple(self.tower))
        object.__setattr__(self, "extra_relations", tuple(self.extra_relations))
        ambient = self.ambient
        if len(set(ambient)) != len(ambient):
            raise PresentationError(f"repeated variable in {ambient}")
        # triangular: layer i may use the base variables and x_1, ..., x_i
        allowed = set(self.base_vars)
        for layer in self.tower:
            f = layer.poly
            if f.variables != ambient or f.field != self.field:
                raise PresentationError(f"layer {layer.var}: {f} is not over {ambient}/{self.field}")
            own = ambient.index(layer.var)
            allowed.add(layer.var)
            stray = [v for i, v in enumerate(ambient) if v not in allowed and f.involves(i)]
            if stray:
                raise PresentationError(f"layer {layer.var}: {f} involves the later variable "
                                        f"{stray[0]}")
            l = f.degree_in(own)
            if l < 1:
                raise PresentationError(f"layer {layer.var}: {f} has degree {l} in {layer.var}")
            leading = {e: c for e, c in f.terms.items() if e[own] == l}
            unit = tuple(l if i == own else 0 for i in range(len(ambient)))
            if leading != {unit: self.field.one}:
                raise PresentationError(f"layer {layer.var}: {f} is not monic in {layer.var}")
        for g in self.extra_relations:
            if g.variables != ambient or g.field != self.field:
                raise PresentationError(f"extra relation {g} is not over {ambient}")

    @classmethod
    def from_strings(cls, field: CoefficientField, base_vars: Sequence[str],
                     layers: Sequence[Tuple[str, str]],
                     extra_relations: Sequence[str] = ()) -> "TriangularPresentation":
        ambient = tuple(base_vars) + tuple(v for v, _ in layers)
        tower = tuple(TowerLayer(v, parse_polynomial(text, field, ambient)) for v, text in layers)
        extras = tuple(parse_polynomial(text, field, ambient) for text in extra_relations)
        return cls(field, tuple(base_vars), tower, extras)

    @property
    def ambient(self) -> Tuple[str, ...]:
        return self.base_vars + tuple(layer.var for layer in self.tower)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(layer.degree for layer in self.tower)

    def defining_polynomials(self) -> Tuple[Polynomial, ...]:
        return tuple(layer.poly for layer in self.tower) + self.extra_relations

    def algebra(self) -> ReesAlgebra:
        return ReesAlgebra(self.field, self.ambient,
                           tuple((layer.poly, layer.degree) for layer in self.tower))


def local_presentation(p: TriangularPresentation) -> ReesAlgebra:
    """Diff(R[f_1 W^{l_1}, ..., f_n W^{l_n}]) over (base variables, x_1, ..., x_n)."""
    return diff_saturate(p.algebra())


@dataclass(frozen=True)
class FiniteMorphismSpec:
    target: TriangularPresentation
    source: TriangularPresentation
    declared_rank: Optional[int] = None

    def __post_init__(self):
        t, s = self.target, self.source
        if t.field != s.field:
            raise PresentationError(f"target over {t.field}, source over {s.field}")
        if t.base_vars != s.base_vars:
            raise PresentationError(f"base variables differ: {t.base_vars} vs {s.base_vars}")
        n = len(t.tower)
        if len(s.tower) < n:
            raise PresentationError("the source tower must extend the target tower")
        for mine, theirs in zip(s.tower[:n], t.tower):
            if mine.var != theirs.var or mine.poly != theirs.poly.reembed(s.ambient):
                raise PresentationError(f"source layer {mine.var} differs from the target layer "
                                        f"{theirs.var}")

    @classmethod
    def from_layers(cls, field: CoefficientField, base_vars: Sequence[str],
                    tower: Sequence[Tuple[str, str]], extra_tower: Sequence[Tuple[str, str]] = (),
                    extra_relations: Sequence[str] = (),
                    declared_rank: Optional[int] = None) -> "FiniteMorphismSpec":
        target = TriangularPresentation.from_strings(field, base_vars, tower)
        source = TriangularPresentation.from_strings(field, base_vars, list(tower) + list(extra_tower),
                                                     extra_relations)
        return cls(target, source, declared_rank)

    @property
    def extra_layers(self) -> Tuple[TowerLayer, ...]:
        return self.source.tower[len(self.target.tower):]

    def beta(self, point: Sequence) -> RationalPoint:
        """The coordinate projection A^{d+n'} -> A^{d+n}."""
        if len(point) != len(self.source.ambient):
            raise PresentationError(f"point of length {len(point)} for {self.source.ambient}")
        return RationalPoint(tuple(point)[:len(self.target.ambient)])


def generic_rank(spec: FiniteMorphismSpec) -> int:
    """Product of the degrees of the layers beyond the shared tower."""
    rank = prod(layer.degree for layer in spec.extra_layers)
    if spec.declared_rank is not None and spec.declared_rank != rank:
        raise PresentationError(f"declared generic rank {spec.declared_rank} but the extra "
                                f"layers have degrees {[l.degree for l in spec.extra_layers]}")
    return rank


# ============================================================================
# TRANSVERSALITY
# ============================================================================

@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: Optional[bool]
    detail: str = ""


@dataclass(frozen=True)
class TransversalityReport:
    items: Tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed is not False for item in self.items)

    @property
    def mismatches(self) -> Tuple[CheckItem, ...]:
        return tuple(item for item in self.items if item.passed is False)


def _points_of(field: CoefficientField, variables: Tuple[str, ...],
               defining: Sequence[Polynomial]) -> frozenset:
    # f(xi) = 0 is nu_xi(f) >= 1, so X(F_p) is Sing of the weight-one algebra
    return singular_locus_enumerate(ReesAlgebra(field, variables,
                                                tuple((f, 1) for f in defining if not f.is_zero())))


def brute_force_loci(spec: FiniteMorphismSpec) -> Tuple[frozenset, frozenset]:
    """Sing(G_X')(F_p) and beta^{-1}(Sing(G_X)(F_p)) restricted to X'(F_p)."""
    top_source = singular_locus_enumerate(local_presentation(spec.source))
    top_target = singular_locus_enumerate(local_presentation(spec.target))
    points = _points_of(spec.source.field, spec.source.ambient, spec.source.defining_polynomials())
    preimage = frozenset(pt for pt in points if spec.beta(pt) in top_target)
    return top_source, preimage


def transversality_check(spec: FiniteMorphismSpec, test_points: Sequence[Sequence],
                         arcs: Mapping[str, Arc]) -> TransversalityReport:
    G_source = local_presentation(spec.source)
    G_target = local_presentation(spec.target)
    items: List[CheckItem] = []

    for xi in test_points:
        xi = RationalPoint(tuple(xi))
        items.append(CheckItem(f"{xi} in Sing(G_X')", in_singular_locus(G_source, xi)))
        image = spec.beta(xi)
        items.append(CheckItem(f"beta{xi} = {image} in Sing(G_X)", in_singular_locus(G_target, image)))
        for g in spec.source.extra_relations:
            items.append(CheckItem(f"extra relation {g} vanishes at {xi}", g.evaluate(xi) == 0))

    for name, phi in arcs.items():
        require_on_variety(phi, spec.source.defining_polynomials())
        image = pushforward(phi, spec)
        mine = nu_t(phi, phi.center)
        theirs = nu_t(image, image.center)
        if isinstance(mine, Inconclusive) or isinstance(theirs, Inconclusive):
            items.append(CheckItem(f"nu_t preserved along {name}", None, f"{mine} vs {theirs}"))
        else:
            items.append(CheckItem(f"nu_t preserved along {name}", mine == theirs, f"{mine} vs {theirs}"))

    if spec.source.field.characteristic:
        try:
            top_source, preimage = brute_force_loci(spec)
        except BudgetExceeded as exc:
            items.append(CheckItem("brute-force top loci", None, f"skipped: {exc}"))
        else:
            detail = (f"{len(top_source)} points in Sing(G_X'), "
                      f"{len(preimage)} in the preimage of Sing(G_X)")
            items.append(CheckItem("brute-force top loci", top_source == preimage, detail))
    else:
        items.append(CheckItem("brute-force top loci", None, "skipped: characteristic 0"))
    return TransversalityReport(tuple(items))


# ============================================================================
# MULTIPLICITY FORMULA ON PLANE CURVES OVER A LINE
# ============================================================================

Univariate = Tuple[int, ...]


def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _divmod_mod_p(a: Univariate, b: Univariate, p: int) -> Tuple[List[int], List[int]]:
    """Division with remainder of coefficient lists (low to high) over F_p; b monic."""
    rem = list(a)
    quo = [0] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + db] % p
        if c:
            quo[k] = c
            for j, bj in enumerate(b):
                rem[k + j] = (rem[k + j] - c * bj) % p
    return _trim(quo), _trim([r % p for r in rem[:db]])


@lru_cache(maxsize=None)
def monic_irreducibles(p: int, degree: int) -> Tuple[Univariate, ...]:
    """All monic irreducible polynomials of the given degree over F_p."""
    smaller = [f for d in range(1, degree // 2 + 1) for f in monic_irreducibles(p, d)]
    found = []
    for low in product(range(p), repeat=degree):
        candidate = tuple(low) + (1,)
        if all(_divmod_mod_p(candidate, f, p)[1] for f in smaller):
            found.append(candidate)
    return tuple(found)


@dataclass(frozen=True)
class FiberReport:
    fiber: object
    factors: Tuple[Tuple[str, int, int], ...]
    total: int
    degree: int

    @property
    def passed(self) -> bool:
        return self.total == self.degree


def _render_univariate(coefficients: Sequence, field: CoefficientField, name: str) -> str:
    return str(Polynomial(field, (name,), {(i,): c for i, c in enumerate(coefficients) if c}))


def _factor_mod_p(coefficients: List[int], p: int, budget: int) -> List[Tuple[Univariate, int]]:
    degree = len(coefficients) - 1
    candidates = sum(p ** d for d in range(1, degree + 1))
    if p > config.MAX_FACTOR_PRIME:
        raise BudgetExceeded(f"brute-force factorization is limited to p <= {config.MAX_FACTOR_PRIME}")
    if candidates > budget:
        raise BudgetExceeded(f"{candidates} candidate factors exceed the budget {budget}")
    rest = list(coefficients)
    factors = []
    for d in range(1, degree + 1):
        if len(rest) - 1 < d:
            break
        for f in monic_irreducibles(p, d):
            e = 0
            while len(rest) - 1 >= d:
                q, r = _divmod_mod_p(tuple(rest), f, p)
                if r:
                    break
                rest, e = q, e + 1
            if e:
                factors.append((f, e))
    if len(rest) != 1:
        raise ArcPersistError(f"factorization left a nonconstant cofactor {rest}")
    return factors


def zariski_fiber_check(f: Polynomial, a, *, x: Optional[str] = None, y: Optional[str] = None,
                        budget: Optional[int] = None) -> FiberReport:
    """
    Sum of e_i * deg(k_i) over the fiber x = a equals deg_y f, for f monic in y
    (so that the curve is finite over the x-line).
    """
    budget = config.FACTOR_BUDGET if budget is None else budget
    if f.nvars != 2:
        raise PresentationError(f"{f} is not a plane curve")
    x = x or f.variables[0]
    y = y or f.variables[1]
    ix, iy = f.variables.index(x), f.variables.index(y)
    field = f.field
    d = f.degree_in(iy)
    leading = {e: c for e, c in f.terms.items() if e[iy] == d}
    if d < 1 or leading != {tuple(d if i == iy else 0 for i in range(2)): field.one}:
        raise PresentationError(f"{f} is not monic in {y}")
    a = field.element(a)
    fiber = [field.zero] * (d + 1)
    for e, c in f.terms.items():
        fiber[e[iy]] = field.reduce(fiber[e[iy]] + c * a ** e[ix])

    if field.characteristic:
        found = _factor_mod_p(fiber, field.characteristic, budget)
        factors = tuple((_render_univariate(g, field, y), e, len(g) - 1) for g, e in found)
    else:
        sym = Symbol(y)
        _, pieces = Poly(list(reversed(fiber)), sym, domain="QQ").factor_list()
        factors = tuple((str(g.as_expr()).replace("**", "^"), int(e), int(g.degree()))
                        for g, e in pieces)
    total = sum(e * deg for _, e, deg in factors)
    return FiberReport(a, factors, total, d)


@dataclass(frozen=True)
class SweepResult:
    characteristic: int
    max_degree: int
    checked: int
    failures: Tuple[Tuple[str, int], ...] = dc_field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures


def zariski_sweep(p: int, max_degree: int = 4) -> SweepResult:
    """
    The curves y^d + c_{d-1} y^{d-1} + ... + c_0 - x over F_p, d <= max_degree, at every fiber.

    Exhaustive on fiber polynomials: the fiber over x = a is the monic polynomial with constant
    term c_0 - a, so every monic polynomial in y of degree <= max_degree is factored p times.
    Curves whose other coefficients depend on x are not enumerated.
    """
    field = CoefficientField(p)
    variables = ("x", "y")
    checked = 0
    failures = []
    for d in range(1, max_degree + 1):
        for low in product(range(p), repeat=d):
            terms: Dict[Tuple[int, int], int] = {(0, d): 1, (1, 0): p - 1}
            for i, c in enumerate(low):
                if c:
                    terms[(0, i)] = (terms.get((0, i), 0) + c) % p
            f = Polynomial(field, variables, terms)
            for a in range(p):
                report = zariski_fiber_check(f, a)
                checked += 1
                if not report.passed:
                    failures.append((str(f), a))
    logger.info("zariski sweep over F_%d up to degree %d: %d fibers", p, max_degree, checked)
    return SweepResult(p, max_degree, checked, tuple(failures))


# ============================================================================
# PERSISTENCE COMPARISON
# ============================================================================

@dataclass(frozen=True)
class ComparisonRow:
    arc: str
    rho_source: Optional[int]
    rho_target: Optional[int]
    r_source: ReesOrder
    r_target: Optional[ReesOrder]
    nu_source: object
    nu_target: object
    verdict: str
    oracle_source: Optional[object] = None
    oracle_target: Optional[object] = None
    note: str = ""


@dataclass(frozen=True)
class ComparisonReport:
    rows: Tuple[ComparisonRow, ...]
    summary: str
    witness: Optional[str] = None


def _oracle_value(phi: Arc, G: ReesAlgebra, xi, max_steps):
    try:
        return persistence_oracle(phi, G, xi, max_steps)
    except PrecisionExhausted:
        return Inconclusive(phi.precision)


def persistence_compare(spec: FiniteMorphismSpec, arcs: Mapping[str, Arc], *,
                        precision: Optional[int] = None, max_steps: Optional[int] = None,
                        oracle: bool = False) -> ComparisonReport:
    """
    rho on X' against rho on X for the pushed-forward arc, row by row.

    Inconclusive rows are listed but never decide the summary.
    """
    G_source = local_presentation(spec.source)
    G_target = local_presentation(spec.target)
    rows: List[ComparisonRow] = []
    for name, phi in arcs.items():
        if precision is not None:
            phi = phi.truncate(min(precision, phi.precision))
        xi = phi.center
        image = pushforward(phi, spec)
        mine = persistence_invariants(phi, G_source, xi)
        try:
            theirs = persistence_invariants(image, G_target, image.center)
        except NotSingular:
            rows.append(ComparisonRow(name, mine.rho, None, mine.r, None, mine.nu_t,
                                      nu_t(image, image.center), "mismatch",
                                      note=f"beta{xi} = {image.center} is not in Sing(G_X)"))
            continue

        oracle_source = oracle_target = None
        note = ""
        if not (mine.conclusive and theirs.conclusive):
            verdict = "inconclusive"
            note = f"retry at precision {2 * phi.precision}"
        else:
            verdict = "equal" if mine.rho == theirs.rho else "mismatch"
        if oracle:
            oracle_source = _oracle_value(phi, G_source, xi, max_steps)
            oracle_target = _oracle_value(image, G_target, image.center, max_steps)
            for value, formula in ((oracle_source, mine.rho), (oracle_target, theirs.rho)):
                if formula is not None and isinstance(value, int) and value != formula:
                    verdict, note = "mismatch", "oracle disagrees with the closed formula"
        rows.append(ComparisonRow(name, mine.rho, theirs.rho, mine.r, theirs.r, mine.nu_t,
                                  theirs.nu_t, verdict, oracle_source, oracle_target, note))

    mismatched = [row for row in rows if row.verdict == "mismatch"]
    if mismatched:
        return ComparisonReport(tuple(rows), "Mismatch", mismatched[0].arc)
    if not any(row.verdict == "equal" for row in rows):
        return ComparisonReport(tuple(rows), "Inconclusive")
    return ComparisonReport(tuple(rows), "AllEqual")


@dataclass(frozen=True)
class ArcwiseRow:
    arc: str
    order_small: ReesOrder
    order_large: ReesOrder
    relation: str


@dataclass(frozen=True)
class ArcwiseReport:
    rows: Tuple[ArcwiseRow, ...]
    note: str = SAMPLED_NOTE

    @property
    def consistent(self) -> bool:
        return not any(row.relation == "strict" for row in self.rows)

    @property
    def witnesses(self) -> Tuple[str, ...]:
        return tuple(row.arc for row in self.rows if row.relation == "strict")


def arcwise_order_equality(G1: ReesAlgebra, G2: ReesAlgebra,
                           arcs: Mapping[str, Arc]) -> ArcwiseReport:
    """ord_t(phi(G1)) against ord_t(phi(G2)) for G1 contained in G2, arc by arc."""
    larger = set(G2.generators)
    if G1.variables != G2.variables or any(g not in larger for g in G1.generators):
        raise ArcPersistError("the generators of the first algebra must be among the second's")
    rows = []
    for name, phi in arcs.items():
        small = ord_rees_along_arc(phi, G1)
        large = ord_rees_along_arc(phi, G2)
        if isinstance(small, Inconclusive) or isinstance(large, Inconclusive):
            relation = "inconclusive"
        else:
            relation = "equal" if small == large else "strict"
        rows.append(ArcwiseRow(name, small, large, relation))
    return ArcwiseReport(tuple(rows))
