# ---------------------------------------------------------------------------
# File    : rees.py
# Purpose : Rees algebras on affine space: Hironaka's order, singular locus,
#           differential saturation, product with a line, point blow-ups.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
"""
A Rees algebra G = R[f_1 W^{n_1}, ..., f_r W^{n_r}] is stored as its finite
list of weighted generators.  Every quantity used downstream (order at a
point, singular locus, order along an arc) is generator-determined, so the
graded pieces are never materialized.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from . import config
from .algebra import (
    INFINITY, CoefficientField, Infinity, Polynomial, RationalPoint, poly_order_at,
)
from .errors import ArcPersistError, BudgetExceeded, DimensionMismatch, NotExact, NotSingular

logger = logging.getLogger(__name__)

Generator = Tuple[Polynomial, int]
RationalOrInfinity = Union[Fraction, Infinity]


@dataclass(frozen=True)
class ReesAlgebra:
    field: CoefficientField
    variables: Tuple[str, ...]
    generators: Tuple[Generator, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "generators", tuple((f, int(n)) for f, n in self.generators))
        for f, n in self.generators:
            if n < 1:
                raise ArcPersistError(f"generator weight must be >= 1, got {n} for {f}")
            if f.is_zero():
                raise ArcPersistError("the zero polynomial is not a generator")
            if f.field != self.field or f.variables != self.variables:
                raise DimensionMismatch(f"generator {f} lives over {f.variables}/{f.field}, "
                                        f"algebra over {self.variables}/{self.field}")

    @classmethod
    def of(cls, generators: Sequence[Generator], *, field: Optional[CoefficientField] = None,
           variables: Optional[Sequence[str]] = None) -> "ReesAlgebra":
        """Build from (poly, weight) pairs; the ambient is read off the first generator."""
        if generators:
            field = field or generators[0][0].field
            variables = variables if variables is not None else generators[0][0].variables
        if field is None or variables is None:
            raise ArcPersistError("an empty algebra needs an explicit ambient")
        return cls(field, tuple(variables), tuple(generators))

    @property
    def max_weight(self) -> int:
        return max((n for _, n in self.generators), default=0)

    def __str__(self):
        return "<" + ", ".join(f"({f}, {n})" for f, n in self.generators) + ">"


# ============================================================================
# ORDER & SINGULAR LOCUS
# ============================================================================

def generator_orders(G: ReesAlgebra, xi: Sequence) -> List[Union[int, Infinity]]:
    return [poly_order_at(f, tuple(xi)) for f, _ in G.generators]


def order_at_point(G: ReesAlgebra, xi: Sequence) -> RationalOrInfinity:
    """Hironaka's order ord_xi(G) = min_i nu_xi(f_i) / n_i."""
    if len(xi) != len(G.variables):
        raise DimensionMismatch(f"point of length {len(xi)} for {len(G.variables)} variables")
    best: RationalOrInfinity = INFINITY
    for (f, n), nu in zip(G.generators, generator_orders(G, xi)):
        if nu is INFINITY:
            continue
        best = min(best, Fraction(nu, n))
    return best


def in_singular_locus(G: ReesAlgebra, xi: Sequence) -> bool:
    """nu_xi(f_i) >= n_i for every generator."""
    if len(xi) != len(G.variables):
        raise DimensionMismatch(f"point of length {len(xi)} for {len(G.variables)} variables")
    return all(poly_order_at(f, tuple(xi)) >= n for f, n in G.generators)


def _multi_indices(dim: int, total: int) -> Iterable[Tuple[int, ...]]:
    """All alpha in N^dim with |alpha| = total, in lexicographic order."""
    if dim == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _multi_indices(dim - 1, total - first):
            yield (first,) + rest


def _grid(p: int, dim: int) -> np.ndarray:
    return np.indices((p,) * dim, dtype=np.int64).reshape(dim, -1).T


def _evaluate_on_grid(f: Polynomial, grid: np.ndarray, p: int,
                      powers: Dict[Tuple[int, int], np.ndarray]) -> np.ndarray:
    def power(j: int, k: int) -> np.ndarray:
        if (j, k) not in powers:
            powers[(j, k)] = grid[:, j] % p if k == 1 else (power(j, k - 1) * grid[:, j]) % p
        return powers[(j, k)]

    acc = np.zeros(len(grid), dtype=np.int64)
    for exp, c in f.terms.items():
        term = np.full(len(grid), int(c) % p, dtype=np.int64)
        for j, k in enumerate(exp):
            if k:
                term = (term * power(j, k)) % p
        acc = (acc + term) % p
    return acc


def singular_locus_enumerate(G: ReesAlgebra, *, budget: Optional[int] = None,
                             max_dim: Optional[int] = None) -> FrozenSet[RationalPoint]:
    """
    All F_p-rational points of Sing(G).

    Uses the divided-power Taylor expansion f(xi + x) = sum_alpha (D^alpha f)(xi) x^alpha:
    nu_xi(f) >= n exactly when every D^alpha f with |alpha| < n vanishes at xi,
    so the whole grid is tested with vectorized evaluations.
    """
    p = G.field.characteristic
    if p == 0:
        raise ArcPersistError("grid enumeration needs a finite prime field")
    budget = config.GRID_BUDGET if budget is None else budget
    max_dim = config.MAX_GRID_DIM if max_dim is None else max_dim
    dim = len(G.variables)
    if dim > max_dim:
        raise BudgetExceeded(f"ambient dimension {dim} exceeds the grid bound {max_dim}")
    if p ** dim > budget:
        raise BudgetExceeded(f"grid of {p}^{dim} points exceeds the budget {budget}")

    grid = _grid(p, dim)
    logger.info("enumerating Sing over %d points of F_%d^%d", len(grid), p, dim)
    powers: Dict[Tuple[int, int], np.ndarray] = {}
    mask = np.ones(len(grid), dtype=bool)
    for f, n in G.generators:
        for a in range(n):
            for alpha in _multi_indices(dim, a):
                derivative = f.hasse_multi(alpha)
                if derivative.is_zero():
                    continue
                mask &= _evaluate_on_grid(derivative, grid, p, powers) == 0
                if not mask.any():
                    return frozenset()
    return frozenset(RationalPoint(tuple(int(c) for c in row)) for row in grid[mask])


def singular_locus_pointwise(G: ReesAlgebra) -> FrozenSet[RationalPoint]:
    """Reference enumeration through in_singular_locus at every grid point."""
    p = G.field.characteristic
    if p == 0:
        raise ArcPersistError("grid enumeration needs a finite prime field")
    return frozenset(RationalPoint(pt) for pt in product(range(p), repeat=len(G.variables))
                     if in_singular_locus(G, pt))


# ============================================================================
# SATURATION & CONSTRUCTIONS
# ============================================================================

def diff_saturate(G: ReesAlgebra) -> ReesAlgebra:
    """
    Adjoin (D^alpha f, n - |alpha|) for every generator (f, n) and |alpha| < n.

    Hasse operators make this correct in positive characteristic.  Zero
    derivatives are dropped; only exact duplicates are removed.
    """
    dim = len(G.variables)
    seen = set()
    out: List[Generator] = []
    for f, n in G.generators:
        for a in range(n):
            for alpha in _multi_indices(dim, a):
                g = f.hasse_multi(alpha)
                if g.is_zero() or (g, n - a) in seen:
                    continue
                seen.add((g, n - a))
                out.append((g, n - a))
    return ReesAlgebra(G.field, G.variables, tuple(out))


def canonical_generators(G: ReesAlgebra) -> Tuple[Tuple[str, int], ...]:
    """Monic-normalized, deduplicated, sorted generators (for comparing algebras)."""
    return tuple(sorted({(str(f.monic()), n) for f, n in G.generators}))


def extend_with_line(G: ReesAlgebra, name: str) -> ReesAlgebra:
    """The same generators over the ambient extended by one variable (V x A^1)."""
    if name in G.variables:
        raise ArcPersistError(f"variable {name!r} already in {G.variables}")
    variables = G.variables + (name,)
    return ReesAlgebra(G.field, variables,
                       tuple((f.reembed(variables), n) for f, n in G.generators))


def add_integral_products(G: ReesAlgebra, pairs: Iterable[Tuple[int, int]]) -> ReesAlgebra:
    """Adjoin (f_i f_j, n_i + n_j) for the given index pairs; the integral closure is unchanged."""
    extra = []
    for i, j in pairs:
        (f, n), (g, m) = G.generators[i], G.generators[j]
        extra.append((f * g, n + m))
    return ReesAlgebra(G.field, G.variables, G.generators + tuple(extra))


def blowup_pullback(f: Polynomial, center: Sequence, chart: int) -> Polynomial:
    """Translate the center to the origin and substitute x_i = x_chart * x_i' (i != chart)."""
    if not 0 <= chart < f.nvars:
        raise DimensionMismatch(f"chart index {chart} out of range")
    return f.translate(tuple(center)).chart_pullback(chart)


def transform_blowup(G: ReesAlgebra, center: Sequence, chart: int) -> ReesAlgebra:
    """
    Weighted transform of G under the blow-up of ``center`` in the given chart:
    (f, n) -> (pullback(f) / x_chart^n, n).  Chart coordinates reuse the names.
    """
    if not 0 <= chart < len(G.variables):
        raise DimensionMismatch(f"chart index {chart} out of range")
    moved = [(f, f.translate(tuple(center)), n) for f, n in G.generators]
    if any(g.order_at_origin() < n for _, g, n in moved):
        raise NotSingular(f"center {tuple(center)} is not in Sing({G})")
    out = []
    for f, g, n in moved:
        pulled = g.chart_pullback(chart)
        try:
            out.append((pulled.divide_by_variable_power(chart, n), n))
        except NotExact as exc:
            raise NotExact(f"weighted transform of ({f}, {n}) is not exact: {exc}") from exc
    return ReesAlgebra(G.field, G.variables, tuple(out))


def hypersurface_algebra(F: Polynomial, point: Sequence) -> ReesAlgebra:
    """Diff(<(F, m)>) with m the multiplicity of F at the point: Sing is the top multiplicity locus."""
    m = poly_order_at(F, tuple(point))
    if m is INFINITY or m < 1:
        raise NotSingular(f"{F} does not pass through {RationalPoint(tuple(point))}")
    return diff_saturate(ReesAlgebra(F.field, F.variables, ((F, m),)))
