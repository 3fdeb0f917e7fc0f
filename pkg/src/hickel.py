# ---------------------------------------------------------------------------
# File    : hickel.py
# Purpose : Sequences of point blow-ups directed by an arc: the persistence
#           oracle at Rees-algebra level and Nash multiplicity sequences of
#           hypersurfaces.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
"""
The arc phi on X is first turned into the arc (phi, t) on X x A^1 centered at
(xi, 0).  Each step blows up the current center, follows the unique lift of
the arc into one affine chart and recenters.  Persistence is the number of
steps after which the center leaves the singular locus of the transformed
algebra.

All states are immutable; every step returns a fresh state.
"""

from __future__ import annotations
from dataclasses import dataclass, field as dc_field
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging

from . import config
from .algebra import (
    Inconclusive, Infinity, Polynomial, RationalPoint, TruncatedSeries, poly_order_at,
)
from .arcs import Arc, require_on_variety
from .errors import ArcPersistError, CenterMismatch, NotSingular, PrecisionExhausted
from .rees import ReesAlgebra, extend_with_line, generator_orders, in_singular_locus, transform_blowup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DidNotDrop:
    """The multiplicity stayed maximal for ``max_steps`` blow-ups."""
    max_steps: int

    def __str__(self):
        return f"DidNotDrop({self.max_steps})"


@dataclass(frozen=True)
class StepRecord:
    step: int
    chart: Optional[str]
    center: RationalPoint
    orders: Tuple[Union[int, Infinity], ...]
    precision: int


@dataclass(frozen=True)
class DirectedBlowupState:
    algebra: ReesAlgebra
    arc: Arc
    center: RationalPoint
    step: int = 0
    trace: Tuple[StepRecord, ...] = ()

    @property
    def orders(self) -> Tuple[Union[int, Infinity], ...]:
        return self.trace[-1].orders

    @property
    def at_max_multiplicity(self) -> bool:
        # nu_center(f_i) >= n_i for every generator, read off the recorded orders
        return all(nu >= n for (_, n), nu in zip(self.algebra.generators, self.orders))


def fresh_name(taken: Sequence[str], base: str = "s") -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _record(algebra: ReesAlgebra, arc: Arc, center: RationalPoint, step: int,
            chart: Optional[str]) -> StepRecord:
    return StepRecord(step, chart, center, tuple(generator_orders(algebra, center)), arc.precision)


def init_state(phi: Arc, G: ReesAlgebra, xi: Sequence) -> DirectedBlowupState:
    """Gamma_0 = (phi, t) on V x A^1, centered at (xi, 0)."""
    xi = tuple(xi)
    if tuple(phi.center) != xi:
        raise CenterMismatch(f"arc centered at {phi.center}, expected {RationalPoint(xi)}")
    if not in_singular_locus(G, xi):
        raise NotSingular(f"{RationalPoint(xi)} is not in Sing(G)")
    name = fresh_name(G.variables)
    algebra = extend_with_line(G, name)
    arc = phi.extend(name, TruncatedSeries.parameter(phi.field, phi.precision))
    center = RationalPoint(xi + (phi.field.zero,))
    return DirectedBlowupState(algebra, arc, center, 0, (_record(algebra, arc, center, 0, None),))


def select_chart(arc: Arc, center: Sequence) -> int:
    """Coordinate of least positive order of the recentered arc; lowest index on ties."""
    best: Optional[Tuple[int, int]] = None
    for i, (s, c) in enumerate(zip(arc.series, center)):
        order = (s - c).order()
        if isinstance(order, Inconclusive):
            continue
        if best is None or order < best[0]:
            best = (order, i)
    if best is None:
        raise PrecisionExhausted(f"every recentered coordinate vanishes to precision {arc.precision}",
                                 retry_precision=2 * arc.precision)
    return best[1]


def lift_arc(arc: Arc, center: Sequence, chart: int, *,
             floor: Optional[int] = None) -> Arc:
    """
    Lift of the arc to the chart of the blow-up at ``center``:
    (a_i - c_i) / (a_chart - c_chart) for i != chart, a_chart - c_chart for the chart.
    """
    floor = config.PRECISION_FLOOR if floor is None else floor
    b = arc.series[chart] - center[chart]
    k = b.order()
    if isinstance(k, Inconclusive):
        raise PrecisionExhausted(f"chart coordinate {arc.variables[chart]} vanishes to precision",
                                 retry_precision=2 * arc.precision)
    precision = arc.precision - k
    if precision < floor:
        raise PrecisionExhausted(f"lifted arc precision {precision} below floor {floor}",
                                 retry_precision=2 * arc.precision)
    lifted: List[TruncatedSeries] = []
    for i, (a, c) in enumerate(zip(arc.series, center)):
        lifted.append(b.truncate(precision) if i == chart else (a - c).divide(b))
    return Arc(arc.variables, tuple(lifted))


def directed_step(state: DirectedBlowupState, *, floor: Optional[int] = None) -> DirectedBlowupState:
    if not state.at_max_multiplicity:
        raise NotSingular(f"step {state.step}: center {state.center} already left Sing")
    step = state.step + 1
    try:
        chart = select_chart(state.arc, state.center)
        arc = lift_arc(state.arc, state.center, chart, floor=floor)
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(f"step {step}: {exc}", step=step,
                                 retry_precision=exc.retry_precision) from exc
    algebra = transform_blowup(state.algebra, state.center, chart)
    center = arc.center
    name = arc.variables[chart]
    logger.debug("step %d: chart %s, center %s, precision %d", step, name, center, arc.precision)
    record = _record(algebra, arc, center, step, name)
    return DirectedBlowupState(algebra, arc, center, step, state.trace + (record,))


def directed_sequence(phi: Arc, G: ReesAlgebra, xi: Sequence, max_steps: Optional[int] = None, *,
                      floor: Optional[int] = None) -> Iterator[DirectedBlowupState]:
    """Yield state_0, state_1, ... until the center leaves Sing or max_steps is reached."""
    max_steps = config.DEFAULT_MAX_STEPS if max_steps is None else max_steps
    state = init_state(phi, G, xi)
    yield state
    while state.step < max_steps and state.at_max_multiplicity:
        state = directed_step(state, floor=floor)
        yield state


def persistence_oracle(phi: Arc, G: ReesAlgebra, xi: Sequence, max_steps: Optional[int] = None, *,
                       floor: Optional[int] = None) -> Union[int, DidNotDrop]:
    """Least i >= 1 whose center is outside Sing of the i-th transform."""
    return oracle_trace(phi, G, xi, max_steps, floor=floor)[0]


def oracle_trace(phi: Arc, G: ReesAlgebra, xi: Sequence, max_steps: Optional[int] = None, *,
                 floor: Optional[int] = None) -> Tuple[Union[int, DidNotDrop], Tuple[StepRecord, ...]]:
    """persistence_oracle together with the per-step trace (for reports)."""
    max_steps = config.DEFAULT_MAX_STEPS if max_steps is None else max_steps
    last = None
    try:
        for last in directed_sequence(phi, G, xi, max_steps, floor=floor):
            pass
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(str(exc), step=exc.step,
                                 retry_precision=2 * phi.precision) from exc
    if last.step >= 1 and not last.at_max_multiplicity:
        return last.step, last.trace
    return DidNotDrop(max_steps), last.trace


# ============================================================================
# NASH MULTIPLICITY SEQUENCE (HYPERSURFACES)
# ============================================================================

@dataclass(frozen=True)
class NashSequence:
    multiplicities: Tuple[int, ...]
    drop: Union[int, DidNotDrop]
    trace: Tuple[StepRecord, ...] = dc_field(default=())

    def __iter__(self):
        return iter(self.multiplicities)

    def __len__(self):
        return len(self.multiplicities)


def strict_transform(F: Polynomial, center: Sequence, chart: int) -> Polynomial:
    """Pull back through the chart and remove the full power of the exceptional coordinate."""
    pulled = F.translate(tuple(center)).chart_pullback(chart)
    return pulled.divide_by_variable_power(chart, pulled.variable_valuation(chart))


def nash_sequence_hypersurface(phi: Arc, F: Polynomial, xi: Sequence,
                               max_steps: Optional[int] = None, *,
                               floor: Optional[int] = None) -> NashSequence:
    """m_0 >= m_1 >= ... along the directed sequence, stopping after the first drop."""
    max_steps = config.DEFAULT_MAX_STEPS if max_steps is None else max_steps
    xi = tuple(xi)
    require_on_variety(phi, [F])
    if tuple(phi.center) != xi:
        raise CenterMismatch(f"arc centered at {phi.center}, expected {RationalPoint(xi)}")
    m0 = poly_order_at(F, xi)
    if isinstance(m0, Infinity) or m0 < 2:
        raise NotSingular(f"multiplicity of {F} at {RationalPoint(xi)} is {m0}; need >= 2")

    name = fresh_name(phi.variables)
    variables = phi.variables + (name,)
    Fi = F.reembed(variables)
    arc = phi.extend(name, TruncatedSeries.parameter(phi.field, phi.precision))
    center = RationalPoint(xi + (phi.field.zero,))
    sequence = [m0]
    trace = [StepRecord(0, None, center, (m0,), arc.precision)]

    for step in range(1, max_steps + 1):
        try:
            chart = select_chart(arc, center)
            lifted = lift_arc(arc, center, chart, floor=floor)
        except PrecisionExhausted as exc:
            raise PrecisionExhausted(f"step {step}: {exc}", step=step,
                                     retry_precision=2 * phi.precision) from exc
        Fi = strict_transform(Fi, center, chart)
        arc, center = lifted, lifted.center
        m = poly_order_at(Fi, center)
        if isinstance(m, Infinity) or m > sequence[-1]:
            raise ArcPersistError(f"multiplicity increased at step {step}: {sequence[-1]} -> {m}")
        sequence.append(m)
        trace.append(StepRecord(step, variables[chart], center, (m,), arc.precision))
        logger.debug("nash step %d: chart %s, center %s, multiplicity %d",
                     step, variables[chart], center, m)
        if m < m0:
            return NashSequence(tuple(sequence), step, tuple(trace))
    return NashSequence(tuple(sequence), DidNotDrop(max_steps), tuple(trace))
