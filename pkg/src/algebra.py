# ---------------------------------------------------------------------------
# File    : algebra.py
# Purpose : Exact coefficient fields, sparse multivariate polynomials,
#           truncated power series and the order functions built on them.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
"""
Exact arithmetic core.

Conventions:
  - Characteristic 0 coefficients are ``fractions.Fraction``; characteristic
    p coefficients are canonical residues ``0 <= c < p``.
  - Terms are ordered graded-lexicographically by the declared variable
    order (``x^2 - y^3`` prints with ``x^2`` first).
  - Orders are ``int`` when witnessed, ``INFINITY`` for the zero polynomial
    and ``Inconclusive(N)`` when truncated data vanish below precision N.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import comb
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import re

from sympy import Float, Integer, Poly, Rational, Symbol, isprime
from sympy.parsing.sympy_parser import (
    convert_xor, implicit_multiplication, parse_expr, standard_transformations,
)

from .errors import (
    ArcPersistError, DimensionMismatch, FieldMismatch, NotExact, ParseError,
    PrecisionExhausted, PrecisionMismatch,
)

Coefficient = Union[int, Fraction]
Exponent = Tuple[int, ...]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


# ============================================================================
# ORDER VALUES
# ============================================================================

@total_ordering
class Infinity:
    """Order of the zero element; compares above every number."""
    _instance: Optional["Infinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("inf")

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = Infinity()


@dataclass(frozen=True)
class Inconclusive:
    """All inspected data vanish below ``bound`` (usually the precision)."""
    bound: Union[int, Fraction]

    def __str__(self):
        return f">={self.bound}?"


OrderValue = Union[int, Infinity, Inconclusive]


def is_conclusive(value) -> bool:
    return not isinstance(value, Inconclusive)


# ============================================================================
# COEFFICIENT FIELD
# ============================================================================

@dataclass(frozen=True)
class CoefficientField:
    """Q (characteristic 0) or F_p for a prime p < 2^16."""
    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if isinstance(p, bool) or not isinstance(p, int):
            raise ArcPersistError(f"characteristic must be an integer, got {p!r}")
        if p != 0 and not (2 <= p < 2 ** 16 and isprime(p)):
            raise ArcPersistError(f"characteristic must be 0 or a prime below 2^16, got {p}")

    @property
    def zero(self) -> Coefficient:
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self) -> Coefficient:
        return 1 if self.characteristic else Fraction(1)

    def element(self, value) -> Coefficient:
        """Coerce an int, Fraction or ``"p/q"`` string into the field."""
        if isinstance(value, (bool, float)):
            raise ParseError(f"inexact coefficient {value!r}; use integers or 'p/q' strings")
        if isinstance(value, str):
            if not _RATIONAL_RE.match(value):
                raise ParseError(f"not a rational number: {value!r}")
            value = Fraction(value.replace(" ", ""))
        q = Fraction(value)
        p = self.characteristic
        if p == 0:
            return q
        den = q.denominator % p
        if den == 0:
            raise ParseError(f"{value} has no residue modulo {p}")
        return (q.numerator * pow(den, -1, p)) % p

    def reduce(self, value: Coefficient) -> Coefficient:
        p = self.characteristic
        return value % p if p else value

    def inverse(self, value: Coefficient) -> Coefficient:
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(value, -1, p) if p else 1 / value

    def binomial(self, n: int, k: int) -> Coefficient:
        return self.element(comb(n, k))

    def __str__(self):
        return f"GF({self.characteristic})" if self.characteristic else "QQ"


QQ = CoefficientField(0)


# ============================================================================
# RATIONAL POINTS
# ============================================================================

@dataclass(frozen=True)
class RationalPoint:
    coordinates: Tuple[Coefficient, ...]

    @classmethod
    def of(cls, field: CoefficientField, values: Iterable) -> "RationalPoint":
        return cls(tuple(field.element(v) for v in values))

    @classmethod
    def origin(cls, field: CoefficientField, dim: int) -> "RationalPoint":
        return cls((field.zero,) * dim)

    def __len__(self):
        return len(self.coordinates)

    def __iter__(self):
        return iter(self.coordinates)

    def __getitem__(self, i):
        return self.coordinates[i]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coordinates) + ")"


# ============================================================================
# POLYNOMIALS
# ============================================================================

def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class Polynomial:
    """
    Sparse polynomial over ``field`` in the ordered ``variables``.

    Values are immutable: every operation returns a new polynomial.
    """
    __slots__ = ("field", "variables", "_terms")

    def __init__(self, field: CoefficientField, variables: Sequence[str],
                 terms: Optional[Mapping[Exponent, Coefficient]] = None):
        self.field = field
        self.variables = tuple(variables)
        clean: Dict[Exponent, Coefficient] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(self.variables):
                raise DimensionMismatch(
                    f"exponent {exp} has {len(exp)} entries for {len(self.variables)} variables")
            if any(e < 0 for e in exp):
                raise ArcPersistError(f"negative exponent in {exp}")
            value = field.reduce(clean.get(exp, field.zero) + field.element(coeff))
            if value:
                clean[exp] = value
            else:
                clean.pop(exp, None)
        self._terms = clean

    @classmethod
    def _raw(cls, field, variables, terms: Dict[Exponent, Coefficient]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.field = field
        obj.variables = variables
        obj._terms = terms
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, variables) -> "Polynomial":
        return cls._raw(field, tuple(variables), {})

    @classmethod
    def constant(cls, field, variables, value) -> "Polynomial":
        variables = tuple(variables)
        c = field.element(value)
        return cls._raw(field, variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def variable(cls, field, variables, name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise DimensionMismatch(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(field, variables, {exp: field.one})

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Coefficient]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def sorted_terms(self) -> List[Tuple[Exponent, Coefficient]]:
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self) -> Coefficient:
        return self._terms.get((0,) * self.nvars, self.field.zero)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def involves(self, index: int) -> bool:
        return any(e[index] for e in self._terms)

    def leading_term(self) -> Tuple[Exponent, Coefficient]:
        if not self._terms:
            raise ArcPersistError("zero polynomial has no leading term")
        exp = max(self._terms, key=_grlex_key)
        return exp, self._terms[exp]

    def order_at_origin(self) -> Union[int, Infinity]:
        """Least total degree of a term; INFINITY for the zero polynomial."""
        if not self._terms:
            return INFINITY
        return min(sum(e) for e in self._terms)

    def variable_valuation(self, index: int) -> int:
        """Largest k with x_index^k dividing the polynomial."""
        if not self._terms:
            raise ArcPersistError("the zero polynomial is divisible by every power")
        return min(e[index] for e in self._terms)

    def univariate_coefficients(self, index: int) -> List[Coefficient]:
        """Coefficients low-to-high of a polynomial in the single variable ``index``."""
        out = [self.field.zero] * (self.degree_in(index) + 1)
        for exp, c in self._terms.items():
            if any(k for j, k in enumerate(exp) if j != index):
                raise DimensionMismatch(f"{self} involves more than {self.variables[index]}")
            out[exp[index]] = c
        return out

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            if other.variables != self.variables:
                raise DimensionMismatch(f"ambient {self.variables} vs {other.variables}")
            return other
        return Polynomial.constant(self.field, self.variables, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        reduce = self.field.reduce
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            value = reduce(terms.get(exp, 0) + c)
            if value:
                terms[exp] = value
            else:
                terms.pop(exp, None)
        return Polynomial._raw(self.field, self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        reduce = self.field.reduce
        return Polynomial._raw(self.field, self.variables,
                               {e: reduce(-c) for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, value) -> "Polynomial":
        c = self.field.element(value)
        if not c:
            return Polynomial.zero(self.field, self.variables)
        reduce = self.field.reduce
        return Polynomial._raw(self.field, self.variables,
                               {e: reduce(v * c) for e, v in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        reduce = self.field.reduce
        terms: Dict[Exponent, Coefficient] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, 0) + c1 * c2
        terms = {e: reduce(c) for e, c in terms.items()}
        return Polynomial._raw(self.field, self.variables, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ArcPersistError("negative powers are not polynomials")
        result = Polynomial.constant(self.field, self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self) -> "Polynomial":
        _, lead = self.leading_term()
        return self.scale(self.field.inverse(lead))

    # -- evaluation & substitution -------------------------------------------

    def evaluate(self, point: Sequence[Coefficient]) -> Coefficient:
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point of length {len(point)} for {self.nvars} variables")
        total = self.field.zero
        for exp, c in self._terms.items():
            value = c
            for v, k in zip(point, exp):
                if k:
                    value = value * v ** k
            total = total + value
        return self.field.reduce(total)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable i by ``images[i]``; the result lives in the images' ambient."""
        if len(images) != self.nvars:
            raise DimensionMismatch(f"{len(images)} images for {self.nvars} variables")
        if not images:
            return self
        target = images[0]
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        result = Polynomial.zero(target.field, target.variables)
        for exp, c in self._terms.items():
            term = Polynomial.constant(target.field, target.variables, c)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def translate(self, point: Sequence[Coefficient]) -> "Polynomial":
        """
        g(x) = f(x + point), expanded one variable at a time with the Taylor identity
        (x_i + c)^e = sum_j C(e, j) c^(e - j) x_i^j.
        """
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point of length {len(point)} for {self.nvars} variables")
        field = self.field
        reduce = field.reduce
        terms = self._terms
        for i, c in enumerate(point):
            c = field.element(c)
            if c == 0 or not terms:
                continue
            top = max(exp[i] for exp in terms)
            c_powers = [field.one]
            for _ in range(top):
                c_powers.append(reduce(c_powers[-1] * c))
            expanded: Dict[Exponent, Coefficient] = {}
            for exp, coeff in terms.items():
                e = exp[i]
                for j in range(e + 1):
                    key = exp[:i] + (j,) + exp[i + 1:]
                    expanded[key] = expanded.get(key, field.zero) + coeff * comb(e, j) * c_powers[e - j]
            terms = {exp: value for exp, value in ((k, reduce(v)) for k, v in expanded.items()) if value}
        if terms is self._terms:
            return self
        return Polynomial._raw(field, self.variables, terms)

    def chart_pullback(self, chart: int) -> "Polynomial":
        """Substitute x_i = x_chart * x_i' for i != chart (point blow-up at the origin)."""
        terms = {}
        for exp, c in self._terms.items():
            new = list(exp)
            new[chart] = sum(exp)
            terms[tuple(new)] = c
        return Polynomial._raw(self.field, self.variables, terms)

    def divide_by_variable_power(self, index: int, k: int) -> "Polynomial":
        terms = {}
        for exp, c in self._terms.items():
            if exp[index] < k:
                raise NotExact(f"{self} is not divisible by {self.variables[index]}^{k}")
            new = list(exp)
            new[index] -= k
            terms[tuple(new)] = c
        return Polynomial._raw(self.field, self.variables, terms)

    def reembed(self, variables: Sequence[str]) -> "Polynomial":
        """Same polynomial in another ambient; every used variable must survive."""
        variables = tuple(variables)
        position = {v: i for i, v in enumerate(variables)}
        terms = {}
        for exp, c in self._terms.items():
            new = [0] * len(variables)
            for v, k in zip(self.variables, exp):
                if k:
                    if v not in position:
                        raise DimensionMismatch(f"{self} uses {v!r}, absent from {variables}")
                    new[position[v]] = k
            terms[tuple(new)] = c
        return Polynomial._raw(self.field, variables, terms)

    # -- Hasse derivatives ---------------------------------------------------

    def hasse(self, index: int, order: int) -> "Polynomial":
        """Divided-power derivative D^{(order)} with respect to variable ``index``."""
        if order < 1:
            raise ArcPersistError("Hasse derivative order must be >= 1")
        reduce = self.field.reduce
        terms = {}
        for exp, c in self._terms.items():
            e = exp[index]
            if e < order:
                continue
            value = reduce(c * comb(e, order))
            if value:
                new = list(exp)
                new[index] = e - order
                terms[tuple(new)] = value
        return Polynomial._raw(self.field, self.variables, terms)

    def hasse_multi(self, alpha: Sequence[int]) -> "Polynomial":
        """Composite operator D^alpha = prod_j D_j^{(alpha_j)} (commuting variables)."""
        if len(alpha) != self.nvars:
            raise DimensionMismatch(f"multi-index {tuple(alpha)} for {self.nvars} variables")
        out = self
        for index, a in enumerate(alpha):
            if a:
                out = out.hasse(index, a)
        return out

    # -- comparison & printing -----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.field == other.field and self.variables == other.variables
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.field, self.variables, frozenset(self._terms.items())))

    def _monomial(self, exp: Exponent) -> str:
        return "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, exp) if k)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for idx, (exp, c) in enumerate(self.sorted_terms()):
            negative = (not self.field.characteristic) and c < 0
            magnitude = -c if negative else c
            mono = self._monomial(exp)
            if mono:
                body = mono if magnitude == 1 else f"{magnitude}*{mono}"
            else:
                body = str(magnitude)
            if idx == 0:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append((" - " if negative else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {self.variables}, {self.field})"


def parse_polynomial(text: str, field: CoefficientField, variables: Sequence[str]) -> Polynomial:
    """
    Parse ``text`` (integer/rational coefficients, ``^`` exponents, optional ``*``)
    over the declared ``variables``.  Undeclared identifiers and floats are errors.
    """
    variables = tuple(variables)
    symbols = {v: Symbol(v) for v in variables}
    global_dict = {"Integer": Integer, "Rational": Rational, "Symbol": Symbol, "Float": Float}
    transformations = standard_transformations + (implicit_multiplication, convert_xor)
    try:
        expr = parse_expr(text, local_dict=dict(symbols), global_dict=global_dict,
                          transformations=transformations)
    except Exception as exc:  # sympy surfaces tokenizer, syntax and name errors alike
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from exc
    if expr.has(Float):
        raise ParseError(f"floating point coefficient in {text!r}")
    unknown = sorted(str(s) for s in expr.free_symbols if str(s) not in symbols)
    if unknown:
        raise ParseError(f"undeclared variable {unknown[0]!r} in {text!r}")
    try:
        poly = Poly(expr, *[symbols[v] for v in variables], domain="QQ")
    except Exception as exc:
        raise ParseError(f"{text!r} is not a polynomial in {variables}: {exc}") from exc
    terms = {}
    for monom, coeff in poly.terms():
        terms[tuple(monom)] = Fraction(int(coeff.p), int(coeff.q))
    return Polynomial(field, variables, terms)


# ============================================================================
# TRUNCATED POWER SERIES
# ============================================================================

@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_{N-1} t^{N-1} + O(t^N); precision N = len(coefficients)."""
    field: CoefficientField
    coefficients: Tuple[Coefficient, ...]

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise PrecisionExhausted("a truncated series needs precision >= 1")

    @property
    def precision(self) -> int:
        return len(self.coefficients)

    @classmethod
    def of(cls, field: CoefficientField, coefficients: Iterable, precision: int, *,
           truncate: bool = False) -> "TruncatedSeries":
        """Pad with zeros up to ``precision``; nonzero terms beyond it need ``truncate=True``."""
        values = [field.element(c) for c in coefficients]
        dropped = [k for k in range(precision, len(values)) if values[k] != 0]
        if dropped and not truncate:
            raise PrecisionMismatch(f"coefficient of t^{dropped[0]} lies beyond precision {precision}")
        values = values[:precision]
        values += [field.zero] * (precision - len(values))
        return cls(field, tuple(values))

    @classmethod
    def constant(cls, field, value, precision: int) -> "TruncatedSeries":
        return cls.of(field, [value], precision)

    @classmethod
    def zero(cls, field, precision: int) -> "TruncatedSeries":
        return cls(field, (field.zero,) * precision)

    @classmethod
    def parameter(cls, field, precision: int) -> "TruncatedSeries":
        """The series t."""
        return cls.of(field, [0, 1], precision, truncate=True)

    def constant_term(self) -> Coefficient:
        return self.coefficients[0]

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise PrecisionMismatch(f"cannot raise precision {self.precision} to {precision}")
        return TruncatedSeries(self.field, self.coefficients[:precision])

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def order(self) -> Union[int, Inconclusive]:
        for i, c in enumerate(self.coefficients):
            if c:
                return i
        return Inconclusive(self.precision)

    def _align(self, other: "TruncatedSeries"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        n = min(self.precision, other.precision)
        return self.coefficients[:n], other.coefficients[:n], n

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.field, other, self.precision)
        a, b, _ = self._align(other)
        reduce = self.field.reduce
        return TruncatedSeries(self.field, tuple(reduce(x + y) for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        reduce = self.field.reduce
        return TruncatedSeries(self.field, tuple(reduce(-c) for c in self.coefficients))

    def __sub__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.field, other, self.precision)
        return self + (-other)

    def __mul__(self, other) -> "TruncatedSeries":
        reduce = self.field.reduce
        if not isinstance(other, TruncatedSeries):
            c = self.field.element(other)
            return TruncatedSeries(self.field, tuple(reduce(x * c) for x in self.coefficients))
        a, b, n = self._align(other)
        out = [0] * n
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
        return TruncatedSeries(self.field, tuple(reduce(self.field.zero + c) for c in out))

    __rmul__ = __mul__

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """
        Exact truncated quotient self / other.

        If other has order k the quotient is known to precision min(N) - k.
        """
        k = other.order()
        if isinstance(k, Inconclusive):
            raise PrecisionExhausted("divisor vanishes to its precision",
                                     retry_precision=2 * other.precision)
        a, b, n = self._align(other)
        if any(a[:k]):
            raise NotExact(f"dividend has order < {k}")
        m = n - k
        if m < 1:
            raise PrecisionExhausted("no coefficients survive the division",
                                     retry_precision=2 * n)
        a, b = a[k:], b[k:]
        reduce = self.field.reduce
        inv = self.field.inverse(b[0])
        q: List[Coefficient] = []
        for i in range(m):
            s = a[i]
            for j in range(1, i + 1):
                if b[j]:
                    s = s - b[j] * q[i - j]
            q.append(reduce(s * inv))
        return TruncatedSeries(self.field, tuple(q))

    def compose_power(self, n: int) -> "TruncatedSeries":
        """Substitute t -> t^n; precision becomes n(N-1)+1."""
        if n < 1:
            raise ArcPersistError("reparametrization exponent must be >= 1")
        out = [self.field.zero] * (n * (self.precision - 1) + 1)
        for k, c in enumerate(self.coefficients):
            out[n * k] = c
        return TruncatedSeries(self.field, tuple(out))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coefficients):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coeff = str(c) if (c != 1 or not mono) else ""
                parts.append(f"{coeff}*{mono}" if coeff and mono else (coeff or mono))
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.precision})"


# ============================================================================
# OPERATIONS
# ============================================================================

def poly_translate(f: Polynomial, p: Sequence[Coefficient]) -> Polynomial:
    return f.translate(tuple(p))


def poly_order_at(f: Polynomial, p: Sequence[Coefficient]) -> Union[int, Infinity]:
    """nu_p(f): least total degree of f(x + p); never inconclusive."""
    return f.translate(tuple(p)).order_at_origin()


def hasse_derivative(f: Polynomial, var: int, a: int) -> Polynomial:
    return f.hasse(var, a)


def series_eval(f: Polynomial, series: Sequence[TruncatedSeries], *,
                allow_truncation: bool = False) -> TruncatedSeries:
    """Substitute one series per variable of f; exact below the shared precision."""
    if len(series) != f.nvars:
        raise DimensionMismatch(f"{len(series)} series for {f.nvars} variables")
    if not series:
        raise DimensionMismatch("polynomial without variables")
    precisions = {s.precision for s in series}
    if len(precisions) > 1 and not allow_truncation:
        raise PrecisionMismatch(f"series precisions differ: {sorted(precisions)}")
    for s in series:
        if s.field != f.field:
            raise FieldMismatch(f"{s.field} vs {f.field}")
    n = min(precisions)
    series = [s.truncate(n) for s in series]
    powers: Dict[Tuple[int, int], TruncatedSeries] = {}

    def power(i: int, k: int) -> TruncatedSeries:
        if (i, k) not in powers:
            powers[(i, k)] = series[i] if k == 1 else power(i, k - 1) * series[i]
        return powers[(i, k)]

    acc = TruncatedSeries.zero(f.field, n)
    for exp, c in f.terms.items():
        term = TruncatedSeries.constant(f.field, c, n)
        for i, k in enumerate(exp):
            if k:
                term = term * power(i, k)
        acc = acc + term
    return acc


def series_order(s: TruncatedSeries) -> Union[int, Inconclusive]:
    return s.order()
