# ---------------------------------------------------------------------------
# File    : scenario.py
# Purpose : Scenario files: strict JSON validated with pydantic, resolved into
#           polynomials, points, Rees algebras, arcs and morphism presentations.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
from __future__ import annotations
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import json
import keyword
import logging
import re

from pydantic import (
    BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError, field_validator,
    model_validator,
)

from . import config
from .algebra import CoefficientField, Polynomial, RationalPoint, parse_polynomial
from .arcs import Arc
from .errors import ArcPersistError, ParseError
from .morphisms import FiniteMorphismSpec
from .rees import ReesAlgebra, hypersurface_algebra

Coefficient = Union[StrictInt, StrictStr]
_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

logger = logging.getLogger(__name__)


# ============================================================================
# FILE SCHEMA
# ============================================================================

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FieldModel(_Strict):
    characteristic: StrictInt = 0


class GeneratorModel(_Strict):
    poly: StrictStr
    weight: StrictInt

    @field_validator("weight")
    @classmethod
    def _positive_weight(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"generator weight must be >= 1, got {v}")
        return v


class ArcModel(_Strict):
    """``{"x": [0, 0, 1], "y": [0, 1], "precision": 12}``: every key but precision is a variable."""
    precision: Optional[StrictInt] = Field(None, ge=1)
    coefficients: Dict[str, List[Coefficient]] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def _split_variables(cls, data: Any) -> Any:
        if isinstance(data, dict) and "coefficients" not in data:
            data = dict(data)
            precision = data.pop("precision", None)
            return {"precision": precision, "coefficients": data}
        return data


class VarietyModel(_Strict):
    equations: List[StrictStr] = Field(..., min_length=1)
    algebra: Optional[StrictStr] = None
    point: Optional[Union[StrictStr, List[Coefficient]]] = None


class LayerModel(_Strict):
    var: StrictStr
    poly: StrictStr


class MorphismModel(_Strict):
    base_vars: List[StrictStr] = Field(..., min_length=1)
    tower: List[LayerModel] = Field(default_factory=list)
    extra_tower: List[LayerModel] = Field(default_factory=list)
    extra_relations: List[StrictStr] = Field(default_factory=list)
    declared_rank: Optional[StrictInt] = None
    top_points: List[List[Coefficient]] = Field(default_factory=list)
    arcs: Dict[str, ArcModel] = Field(default_factory=dict)


class ZariskiModel(_Strict):
    poly: StrictStr
    x: StrictStr = "x"
    y: StrictStr = "y"
    fibers: List[Coefficient] = Field(default_factory=list)
    sweep_degree: Optional[StrictInt] = Field(None, ge=1, le=6)


class ArcwiseModel(_Strict):
    small: StrictStr
    large: StrictStr
    arcs: List[StrictStr] = Field(default_factory=list)


class DefaultsModel(_Strict):
    precision: Optional[StrictInt] = Field(None, ge=1)
    max_steps: Optional[StrictInt] = Field(None, ge=0)
    reparametrize: List[StrictInt] = Field(default_factory=list)


class ScenarioModel(_Strict):
    name: StrictStr
    field: FieldModel = Field(default_factory=FieldModel)
    variables: List[StrictStr] = Field(default_factory=list)
    polynomials: Dict[str, StrictStr] = Field(default_factory=dict)
    points: Dict[str, List[Coefficient]] = Field(default_factory=dict)
    algebras: Dict[str, List[GeneratorModel]] = Field(default_factory=dict)
    arcs: Dict[str, ArcModel] = Field(default_factory=dict)
    variety: Optional[VarietyModel] = None
    morphism: Optional[MorphismModel] = None
    zariski: Optional[ZariskiModel] = None
    arcwise: Optional[ArcwiseModel] = None
    defaults: DefaultsModel = Field(default_factory=DefaultsModel)


# ============================================================================
# RESOLVED SCENARIO
# ============================================================================

@dataclass(frozen=True)
class Variety:
    equations: Tuple[Polynomial, ...]
    point: RationalPoint
    algebra: ReesAlgebra


@dataclass(frozen=True)
class MorphismSection:
    spec: FiniteMorphismSpec
    top_points: Tuple[RationalPoint, ...]
    arcs: Dict[str, Arc]


@dataclass(frozen=True)
class ZariskiSection:
    poly: Polynomial
    x: str
    y: str
    fibers: Tuple[Any, ...]
    sweep_degree: Optional[int] = None


@dataclass(frozen=True)
class ArcwiseSection:
    small: str
    large: str
    arcs: Tuple[str, ...]


@dataclass(frozen=True)
class Defaults:
    precision: int
    max_steps: int
    reparametrize: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Scenario:
    name: str
    field: CoefficientField
    variables: Tuple[str, ...]
    polynomials: Dict[str, Polynomial] = dc_field(default_factory=dict)
    points: Dict[str, RationalPoint] = dc_field(default_factory=dict)
    algebras: Dict[str, ReesAlgebra] = dc_field(default_factory=dict)
    arcs: Dict[str, Arc] = dc_field(default_factory=dict)
    variety: Optional[Variety] = None
    morphism: Optional[MorphismSection] = None
    zariski: Optional[ZariskiSection] = None
    arcwise: Optional[ArcwiseSection] = None
    defaults: Defaults = dc_field(default_factory=lambda: Defaults(config.DEFAULT_PRECISION,
                                                                  config.DEFAULT_MAX_STEPS))


# ============================================================================
# PARSING
# ============================================================================

def _reject_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ParseError(f"duplicate key {key!r}")
        seen[key] = value
    return seen


def _locate(text: Optional[str], loc: Tuple) -> Tuple[Optional[int], Optional[int]]:
    """Best-effort line/column of the innermost string key of a validation error."""
    keys = [k for k in loc if isinstance(k, str)]
    if not text or not keys:
        return None, None
    offset = 0
    for key in keys:
        hit = text.find(f'"{key}"', offset)
        if hit < 0:
            break
        offset = hit
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _check_name(name: str, what: str) -> None:
    if not _NAME_RE.match(name) or keyword.iskeyword(name):
        raise ParseError(f"invalid {what} name {name!r}")


class _Resolver:
    """Turns a validated ScenarioModel into domain objects, one section at a time."""

    def __init__(self, model: ScenarioModel, characteristic: Optional[int], precision: Optional[int]):
        self.model = model
        p = model.field.characteristic if characteristic is None else characteristic
        try:
            self.field = CoefficientField(p)
        except ArcPersistError as exc:
            raise ParseError(f"invalid field characteristic: {exc}") from exc
        self.precision_override = precision
        d = model.defaults
        self.defaults = Defaults(
            precision if precision is not None else (d.precision or config.DEFAULT_PRECISION),
            d.max_steps if d.max_steps is not None else config.DEFAULT_MAX_STEPS,
            tuple(d.reparametrize),
        )
        self.variables = tuple(model.variables)
        self.polynomials: Dict[str, Polynomial] = {}
        self.points: Dict[str, RationalPoint] = {}

    def _names(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ParseError(f"repeated variable in {list(self.variables)}")
        for v in self.variables:
            _check_name(v, "variable")
        owners: Dict[str, str] = {}
        for section in ("polynomials", "points", "algebras", "arcs"):
            for name in getattr(self.model, section):
                _check_name(name, section[:-1])
                if name in owners or name in self.variables:
                    raise ParseError(f"name {name!r} in {section} is already used "
                                     f"{'as a variable' if name in self.variables else 'in ' + owners[name]}")
                owners[name] = section

    def poly(self, text: str, variables: Optional[Tuple[str, ...]] = None) -> Polynomial:
        variables = self.variables if variables is None else variables
        if text in self.polynomials and variables == self.variables:
            return self.polynomials[text]
        return parse_polynomial(text, self.field, variables)

    def point(self, value, variables: Optional[Tuple[str, ...]] = None) -> RationalPoint:
        variables = self.variables if variables is None else variables
        if isinstance(value, str):
            if value not in self.points:
                raise ParseError(f"unknown point {value!r}")
            return self.points[value]
        if len(value) != len(variables):
            raise ParseError(f"point {value} has {len(value)} coordinates for {list(variables)}")
        return RationalPoint.of(self.field, value)

    def arc(self, name: str, model: ArcModel, variables: Tuple[str, ...]) -> Arc:
        unknown = sorted(set(model.coefficients) - set(variables))
        if unknown:
            raise ParseError(f"arc {name!r} names undeclared variable {unknown[0]!r}")
        if self.precision_override is None:
            precision = model.precision or self.defaults.precision
            return Arc.from_coefficients(self.field, variables, model.coefficients, precision)
        precision = self.precision_override
        longest = max((len(c) for c in model.coefficients.values()), default=0)
        if longest > precision:
            logger.warning("arc %s: --precision %d drops coefficients beyond t^%d", name, precision,
                           precision - 1)
        return Arc.from_coefficients(self.field, variables, model.coefficients, precision,
                                     truncate=True)

    def resolve(self) -> Scenario:
        m = self.model
        self._names()
        self.polynomials = {name: parse_polynomial(text, self.field, self.variables)
                            for name, text in m.polynomials.items()}
        self.points = {name: self.point(coords) for name, coords in m.points.items()}
        algebras = {
            name: ReesAlgebra(self.field, self.variables,
                              tuple((self.poly(g.poly), g.weight) for g in gens))
            for name, gens in m.algebras.items()
        }
        arcs = {name: self.arc(name, a, self.variables) for name, a in m.arcs.items()}

        variety = None
        if m.variety is not None:
            equations = tuple(self.poly(text) for text in m.variety.equations)
            point = (self.point(m.variety.point) if m.variety.point is not None
                     else RationalPoint.origin(self.field, len(self.variables)))
            if m.variety.algebra is not None:
                if m.variety.algebra not in algebras:
                    raise ParseError(f"unknown algebra {m.variety.algebra!r}")
                algebra = algebras[m.variety.algebra]
            elif len(equations) == 1:
                algebra = hypersurface_algebra(equations[0], point)
            else:
                raise ParseError("a variety with several equations must name its algebra")
            variety = Variety(equations, point, algebra)

        morphism = None
        if m.morphism is not None:
            mm = m.morphism
            spec = FiniteMorphismSpec.from_layers(
                self.field, tuple(mm.base_vars),
                [(layer.var, layer.poly) for layer in mm.tower],
                [(layer.var, layer.poly) for layer in mm.extra_tower],
                list(mm.extra_relations), mm.declared_rank)
            ambient = spec.source.ambient
            morphism = MorphismSection(
                spec,
                tuple(self.point(pt, ambient) for pt in mm.top_points),
                {name: self.arc(name, a, ambient) for name, a in mm.arcs.items()},
            )

        zariski = None
        if m.zariski is not None:
            z = m.zariski
            f = parse_polynomial(z.poly, self.field, (z.x, z.y))
            zariski = ZariskiSection(f, z.x, z.y, tuple(self.field.element(a) for a in z.fibers),
                                     z.sweep_degree)

        arcwise = None
        if m.arcwise is not None:
            for name in (m.arcwise.small, m.arcwise.large):
                if name not in algebras:
                    raise ParseError(f"unknown algebra {name!r}")
            missing = [a for a in m.arcwise.arcs if a not in arcs]
            if missing:
                raise ParseError(f"unknown arc {missing[0]!r}")
            arcwise = ArcwiseSection(m.arcwise.small, m.arcwise.large,
                                     tuple(m.arcwise.arcs) or tuple(arcs))

        return Scenario(m.name, self.field, self.variables, self.polynomials, self.points,
                        algebras, arcs, variety, morphism, zariski, arcwise, self.defaults)


def scenario_from_dict(data: Dict[str, Any], *, characteristic: Optional[int] = None,
                       precision: Optional[int] = None, text: Optional[str] = None) -> Scenario:
    try:
        model = ScenarioModel.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        path = ".".join(str(k) for k in first["loc"]) or "<root>"
        line, column = _locate(text, tuple(first["loc"]))
        raise ParseError(f"{path}: {first['msg']}", line=line, column=column) from exc
    try:
        return _Resolver(model, characteristic, precision).resolve()
    except ParseError:
        raise
    except ArcPersistError as exc:
        raise ParseError(str(exc)) from exc


def parse_scenario(path: Union[str, Path], *, characteristic: Optional[int] = None,
                   precision: Optional[int] = None) -> Scenario:
    """Read, validate and resolve a scenario file; every failure is a ParseError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read scenario {path}: {exc}") from exc
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise ParseError("a scenario must be a JSON object", line=1, column=1)
    return scenario_from_dict(data, characteristic=characteristic, precision=precision, text=text)
