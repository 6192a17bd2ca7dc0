from fractions import Fraction as F

import pytest

from schur_stability.config import get_settings
from schur_stability.poly import MonicPolynomial, normalize


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def example_quintic() -> MonicPolynomial:
    """x^5 + 1/2x^4 - 1/2x - 1/2, certified at stage 4."""
    return normalize(["1", "1/2", "0", "0", "-1/2", "-1/2"])


@pytest.fixture
def cournot_cubic() -> MonicPolynomial:
    """x^3 - 1/2x^2 + 1/2 (Cournot p3 with lambda = 1/2, k = 2)."""
    return MonicPolynomial((F(1, 2), F(0), F(-1, 2)))


def quadratic(alpha, beta) -> MonicPolynomial:
    """x^2 - alpha*x + beta."""
    return MonicPolynomial((F(beta), -F(alpha)))
