"""
Number backends.

Every coefficient in the library is a ``Scalar``: either an exact
``fractions.Fraction`` (always in lowest terms with a positive denominator) or
a binary64 ``float``. A computation stays in the backend of its inputs; mixing
the two raises ``BackendMismatch``.
"""

import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import BackendMismatch, InvalidInput

Scalar = Union[Fraction, float]

# Negative numeric literals on a command line: -3, -1/2, -0.25, -1e-3
NEGATIVE_LITERAL = re.compile(r"^-(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(/\d+)?$")


class Backend(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


def backend_of(value: Scalar) -> Backend:
    if isinstance(value, Fraction):
        return Backend.EXACT
    if isinstance(value, float):
        return Backend.FLOAT
    raise InvalidInput(f"Not a scalar: {value!r} ({type(value).__name__})")


def common_backend(values: Iterable[Scalar], default: Backend = Backend.EXACT) -> Backend:
    """Backend shared by all values; raises BackendMismatch when they disagree."""
    found = None
    for value in values:
        current = backend_of(value)
        if found is None:
            found = current
        elif current is not found:
            raise BackendMismatch("Exact and float scalars cannot be mixed")
    return found or default


def as_scalar(value, backend: Backend) -> Scalar:
    """
    Convert a Python number or a literal string into the requested backend.

    Converting an exact value to float is allowed (rationals are rounded once);
    converting a float to exact is refused because binary fractions would
    silently stand in for the decimal the user meant.
    """
    if isinstance(value, str):
        return parse_scalar(value, backend)
    if isinstance(value, bool):
        raise InvalidInput(f"Not a scalar: {value!r}")
    if backend is Backend.EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise BackendMismatch(f"Float value {value!r} cannot enter the exact backend; pass it as a string")
    if isinstance(value, (Fraction, int, float)):
        return float(value)
    raise InvalidInput(f"Not a scalar: {value!r}")


def as_scalars(values: Iterable, backend: Backend) -> tuple:
    return tuple(as_scalar(v, backend) for v in values)


def parse_scalar(text: str, backend: Backend = Backend.EXACT) -> Scalar:
    """
    Parse a rational or decimal literal.

    Exact mode accepts "p/q", integers and decimal / scientific literals, all
    converted exactly ("0.1" is 1/10). Float mode accepts the same literals and
    rounds once to binary64.
    """
    cleaned = text.strip()
    if not cleaned:
        raise InvalidInput("Empty numeric literal")
    try:
        exact = Fraction(cleaned)
    except (ValueError, ZeroDivisionError):
        exact = None
    if backend is Backend.EXACT:
        if exact is None:
            raise InvalidInput(f"Cannot parse {text!r} as an exact rational")
        return exact
    if exact is not None:
        return float(exact)
    try:
        value = float(cleaned)
    except ValueError:
        raise InvalidInput(f"Cannot parse {text!r} as a number")
    if value != value or value in (float("inf"), float("-inf")):
        raise InvalidInput(f"Non-finite value {text!r} is not a coefficient")
    return value


def format_scalar(value: Scalar) -> str:
    """Canonical text: "p/q" (or "p") for rationals, repr for floats."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def format_scalars(values: Sequence[Scalar]) -> list[str]:
    return [format_scalar(v) for v in values]


def zero(backend: Backend) -> Scalar:
    return Fraction(0) if backend is Backend.EXACT else 0.0


def one(backend: Backend) -> Scalar:
    return Fraction(1) if backend is Backend.EXACT else 1.0
