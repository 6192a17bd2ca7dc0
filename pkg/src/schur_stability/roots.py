"""
Numerical root oracle (Aberth-Ehrlich simultaneous iteration).

Independent of the l1 engine and the Jury table: every certificate can be
checked against the actual root moduli.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .config import get_settings
from .errors import InvalidInput, RootFindingError
from .poly import MonicPolynomial, l1_norm

logger = logging.getLogger(__name__)

GOLDEN_FRACTION = (math.sqrt(5) - 1) / 2
REAL_SNAP = 1e-13


class SchurClass(str, Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    NEAR_CIRCLE = "NearCircle"


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    max_modulus: float
    residual: float
    iterations: int = 0

    def as_records(self) -> list:
        return [{"re": float(z.real), "im": float(z.imag), "modulus": float(abs(z))} for z in self.roots]


def _float_coeffs(p: MonicPolynomial) -> np.ndarray:
    """Ascending float coefficients including the leading 1."""
    return np.array([float(c) for c in p.full_coeffs()], dtype=np.float64)


def _initial_guesses(degree: int, radius: float, seed: int) -> np.ndarray:
    # evenly spaced angles, rotated by an irrational offset so real inputs
    # never start on a symmetric configuration
    offset = 2 * math.pi * ((0.5 + (seed + 1) * GOLDEN_FRACTION) % 1.0) / degree
    angles = offset + 2 * math.pi * np.arange(degree) / degree
    return radius * np.exp(1j * angles)


def _scaled_residual(descending: np.ndarray, z: np.ndarray) -> float:
    """max |p(z)| / sum |c_k||z|^k (backward error per root)."""
    values = np.abs(np.polyval(descending, z))
    scale = np.polyval(np.abs(descending), np.abs(z))
    return float(np.max(values / np.maximum(scale, np.finfo(float).tiny)))


def _aberth(descending: np.ndarray, radius: float, seed: int, max_iter: int) -> tuple:
    degree = len(descending) - 1
    derivative = np.polyder(descending)
    z = _initial_guesses(degree, radius, seed)
    tol = 4 * np.finfo(float).eps
    for iteration in range(1, max_iter + 1):
        values = np.polyval(descending, z)
        slopes = np.polyval(derivative, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        repulsion = (1.0 / diff).sum(axis=1) - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = values / slopes
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            return z, iteration, True
    return z, max_iter, False


def find_roots(p: MonicPolynomial, seed: int = 0, max_iter: Optional[int] = None, radius: Optional[float] = None) -> RootSet:
    """
    All n roots of p in binary64.

    Exact inputs are rounded to float once. Zero roots are split off exactly
    before the iteration; the rest start on a circle of radius
    max(1, ||p||_1 - 1), which bounds every root.
    """
    max_iter = max_iter or get_settings().oracle_max_iter
    coeffs = _float_coeffs(p)
    norm = float(l1_norm(p))

    zeros = 0
    while zeros < len(coeffs) - 1 and coeffs[zeros] == 0.0:
        zeros += 1
    remaining = coeffs[zeros:]
    roots = [0j] * zeros
    iterations = 0

    degree = len(remaining) - 1
    if degree == 1:
        roots.append(complex(-remaining[0], 0.0))
    elif degree > 1:
        descending = remaining[::-1].copy()
        start = radius if radius is not None else max(1.0, norm - 1.0)
        found, iterations, converged = _aberth(descending, start, seed, max_iter)
        residual = _scaled_residual(descending, found)
        if not converged and residual > 1e-10 * (1.0 + norm):
            logger.error(f"Root iteration did not converge for {p} (residual {residual:.3e})")
            raise RootFindingError(
                f"Aberth iteration did not converge after {max_iter} steps (residual {residual:.3e}); "
                f"retry with a different seed or radius"
            )
        roots.extend(complex(z) for z in found)

    snapped = []
    for z in roots:
        if abs(z.imag) <= REAL_SNAP * max(1.0, abs(z)):
            z = complex(z.real, 0.0)
        snapped.append(z)
    snapped.sort(key=lambda z: (z.real, z.imag))

    array = np.array(snapped, dtype=np.complex128)
    residual = _scaled_residual(coeffs[::-1], array)
    max_modulus = float(np.max(np.abs(array)))
    return RootSet(roots=tuple(snapped), max_modulus=max_modulus, residual=residual, iterations=iterations)


def classify_roots(roots: RootSet, margin: Optional[float] = None) -> SchurClass:
    """Inside when max|z| < 1 - margin, Outside when > 1 + margin, else NearCircle."""
    margin = get_settings().oracle_margin if margin is None else margin
    if margin <= 0:
        raise InvalidInput(f"margin must be > 0, got {margin}")
    modulus = roots.max_modulus
    if modulus < 1 - margin:
        return SchurClass.INSIDE
    if modulus > 1 + margin:
        return SchurClass.OUTSIDE
    return SchurClass.NEAR_CIRCLE


def is_schur_numeric(p: MonicPolynomial, margin: Optional[float] = None, seed: int = 0) -> SchurClass:
    return classify_roots(find_roots(p, seed=seed), margin)
