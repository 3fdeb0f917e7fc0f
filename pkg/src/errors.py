# ---------------------------------------------------------------------------
# File    : errors.py
# Purpose : Exception hierarchy shared by the arc-persistence kernel.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
"""
Every domain failure is a ``ValueError`` so callers (the CLI, the HTTP
layer) can treat bad input uniformly.  Inconclusive answers are *values*
(``Inconclusive``, ``DidNotDrop``) and never show up here.
"""

from __future__ import annotations
from typing import Optional


class ArcPersistError(ValueError):
    """Base class for all kernel errors."""


class DimensionMismatch(ArcPersistError):
    pass


class FieldMismatch(ArcPersistError):
    pass


class PrecisionMismatch(ArcPersistError):
    pass


class PrecisionExhausted(ArcPersistError):
    """Truncated data ran out before the computation could finish."""

    def __init__(self, message: str, *, step: Optional[int] = None,
                 retry_precision: Optional[int] = None):
        super().__init__(message)
        self.step = step
        self.retry_precision = retry_precision


class BudgetExceeded(ArcPersistError):
    pass


class NotExact(ArcPersistError):
    pass


class NotSingular(ArcPersistError):
    pass


class CenterMismatch(ArcPersistError):
    pass


class InvalidArc(ArcPersistError):
    def __init__(self, message: str, *, polynomial: Optional[str] = None,
                 index: Optional[int] = None):
        super().__init__(message)
        self.polynomial = polynomial
        self.index = index


class PresentationError(ArcPersistError):
    pass


class ParseError(ArcPersistError):
    def __init__(self, message: str, *, line: Optional[int] = None,
                 column: Optional[int] = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column
