"""
Monic and general polynomial arithmetic over the two scalar backends.

Coefficients are stored constant-term first. ``MonicPolynomial`` keeps only the
tail a_0..a_{n-1} of p(x) = x^n + a_{n-1}x^{n-1} + ... + a_0; the leading 1
is implicit.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import BackendMismatch, InvalidInput
from .scalar import Backend, Scalar, as_scalars, common_backend, format_scalar, one, zero


def _resolve_backend(coeffs: Sequence[Scalar], backend: Optional[Backend]) -> Backend:
    """Backend of the coefficients; an explicit backend must agree with them."""
    if backend is None:
        return common_backend(coeffs)
    backend = Backend(backend)
    found = common_backend(coeffs, backend)
    if found is not backend:
        raise BackendMismatch(f"{found.value} coefficients passed with backend={backend.value}")
    return backend


@dataclass(frozen=True)
class MonicPolynomial:
    coeffs: tuple
    # None infers the backend from the coefficients
    backend: Optional[Backend] = None

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if len(coeffs) < 1:
            raise InvalidInput("A monic polynomial needs degree n >= 1")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "backend", _resolve_backend(coeffs, self.backend))

    @classmethod
    def from_values(cls, values: Iterable, backend: Backend = Backend.EXACT) -> "MonicPolynomial":
        """Build from ascending a_0..a_{n-1} given as numbers or literal strings."""
        return cls(as_scalars(values, backend), backend)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> tuple:
        """Ascending coefficients including the leading 1."""
        return self.coeffs + (one(self.backend),)

    def descending(self) -> tuple:
        return tuple(reversed(self.full_coeffs()))

    def as_general(self) -> "GeneralPolynomial":
        return GeneralPolynomial(self.full_coeffs(), self.backend)

    def __str__(self) -> str:
        return format_polynomial(self.full_coeffs())


@dataclass(frozen=True)
class GeneralPolynomial:
    """Arbitrary polynomial, canonical form without stored leading zeros."""

    coeffs: tuple
    backend: Optional[Backend] = None

    def __post_init__(self):
        coeffs = list(self.coeffs)
        backend = _resolve_backend(coeffs, self.backend)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "backend", backend)

    @classmethod
    def from_values(cls, values: Iterable, backend: Backend = Backend.EXACT) -> "GeneralPolynomial":
        return cls(as_scalars(values, backend), backend)

    @classmethod
    def monomial(cls, power: int, backend: Backend = Backend.EXACT) -> "GeneralPolynomial":
        return cls((zero(backend),) * power + (one(backend),), backend)

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other: "GeneralPolynomial") -> "GeneralPolynomial":
        return mul(self, other)

    def __str__(self) -> str:
        return format_polynomial(self.coeffs)


Polynomial = Union[MonicPolynomial, GeneralPolynomial]


def normalize(coeffs: Sequence, backend: Backend = Backend.EXACT) -> MonicPolynomial:
    """
    Divide descending-degree coefficients by the leading one.

    ``[2, 1, -1]`` (2x^2 + x - 1) becomes x^2 + 1/2 x - 1/2. The root set is
    unchanged.
    """
    values = as_scalars(coeffs, backend)
    if len(values) < 2:
        raise InvalidInput("Degree-0 polynomials are not accepted; give at least two coefficients")
    leading = values[0]
    if leading == 0:
        raise InvalidInput("Leading coefficient must be nonzero")
    ascending = tuple(v / leading for v in reversed(values[1:]))
    return MonicPolynomial(ascending, backend)


def l1_norm(p: MonicPolynomial) -> Scalar:
    """||p||_1 = 1 + sum |a_j| (exact in the rational backend)."""
    total = one(p.backend)
    for a in p.coeffs:
        total += abs(a)
    return total


def _check_same_backend(p: Polynomial, q: Polynomial) -> Backend:
    if p.backend is not q.backend:
        raise BackendMismatch(f"Cannot combine {p.backend.value} and {q.backend.value} polynomials")
    return p.backend


def _general(p: Polynomial) -> GeneralPolynomial:
    return p.as_general() if isinstance(p, MonicPolynomial) else p


def mul(p: Polynomial, q: Polynomial) -> GeneralPolynomial:
    """Exact convolution of the coefficient sequences."""
    backend = _check_same_backend(p, q)
    left, right = _general(p).coeffs, _general(q).coeffs
    if not left or not right:
        return GeneralPolynomial((), backend)
    out = [zero(backend)] * (len(left) + len(right) - 1)
    for i, a in enumerate(left):
        if a == 0:
            continue
        for j, b in enumerate(right):
            out[i + j] += a * b
    return GeneralPolynomial(tuple(out), backend)


def remainder(dividend: Polynomial, p: MonicPolynomial) -> GeneralPolynomial:
    """Long-division remainder of ``dividend`` by the monic ``p``."""
    backend = _check_same_backend(dividend, p)
    work = list(_general(dividend).coeffs)
    n = p.degree
    for top in range(len(work) - 1, n - 1, -1):
        lead = work[top]
        if lead == 0:
            continue
        shift = top - n
        work[top] = zero(backend)
        for m, a in enumerate(p.coeffs):
            work[shift + m] -= lead * a
    return GeneralPolynomial(tuple(work[:n]), backend)


def mod_reduce(power: int, p: MonicPolynomial) -> GeneralPolynomial:
    """x^power mod p, by repeated multiply-by-x and reduce."""
    if power < 0:
        raise InvalidInput("power must be >= 0")
    x = GeneralPolynomial.monomial(1, p.backend)
    result = GeneralPolynomial((one(p.backend),), p.backend)
    for _ in range(power):
        result = remainder(mul(result, x), p)
    return result


def evaluate(p: Polynomial, x: Scalar) -> Scalar:
    """Horner evaluation."""
    coeffs = p.full_coeffs() if isinstance(p, MonicPolynomial) else p.coeffs
    common_backend((x,) + tuple(coeffs[:1]))
    acc = zero(p.backend)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def format_polynomial(ascending: Sequence[Scalar], variable: str = "x") -> str:
    """Descending terms, coefficient glued to the power: ``x^5 + 1/2x^4 - 1/2x - 1/2``."""
    terms = []
    for power in range(len(ascending) - 1, -1, -1):
        c = ascending[power]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        if power == 0:
            body = format_scalar(magnitude)
        else:
            monomial = variable if power == 1 else f"{variable}^{power}"
            body = monomial if magnitude == 1 else f"{format_scalar(magnitude)}{monomial}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
