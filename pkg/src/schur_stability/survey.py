"""
Randomised sweeps: soundness of the l1 certificates against Jury and the root
oracle, and the distribution of certifying stages over stable inputs.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from tqdm import tqdm

from .config import progress_disabled
from .engine import AlgoConfig, Verdict, run_algorithm
from .errors import RootFindingError
from .jury import JuryVerdict, jury_table
from .poly import GeneralPolynomial, MonicPolynomial, mul
from .regions import c2_membership
from .roots import find_roots
from .scalar import format_scalars

logger = logging.getLogger(__name__)

ORACLE_SLACK = 1e-9


def _random_fraction(rng: random.Random, bound: int, max_denominator: int) -> Fraction:
    q = rng.randint(1, max_denominator)
    return Fraction(rng.randint(-bound * q, bound * q), q)


def random_rational_polynomial(rng: random.Random, degree: int, bound: int = 2, max_denominator: int = 16) -> MonicPolynomial:
    """Monic, coefficients k/q uniformly drawn from [-bound, bound]."""
    return MonicPolynomial(tuple(_random_fraction(rng, bound, max_denominator) for _ in range(degree)))


def random_stable_polynomial(rng: random.Random, degree: int, max_denominator: int = 16) -> MonicPolynomial:
    """
    Exact product of linear factors x - r with |r| < 1 and quadratic factors
    strictly inside the degree-2 locus, so every root lies in the open disk.
    """
    product = GeneralPolynomial((Fraction(1),))
    remaining = degree
    while remaining:
        if remaining >= 2 and rng.random() < 0.5:
            while True:
                a0 = _random_fraction(rng, 1, max_denominator)
                a1 = _random_fraction(rng, 2, max_denominator)
                if c2_membership(a0, a1):
                    break
            factor = GeneralPolynomial((a0, a1, Fraction(1)))
            remaining -= 2
        else:
            q = rng.randint(2, max_denominator)
            factor = GeneralPolynomial((-Fraction(rng.randint(-(q - 1), q - 1), q), Fraction(1)))
            remaining -= 1
        product = mul(product, factor)
    return MonicPolynomial(product.coeffs[:-1])


@dataclass
class SurveyReport:
    samples: int
    seed: int
    max_stages: int
    verdict_counts: dict = field(default_factory=dict)
    certified: int = 0
    # certified polynomials that Jury or the oracle reject; must stay empty
    counterexamples: list = field(default_factory=list)
    # strict necessary-check failures whose roots all sit inside the disk
    necessary_violations: list = field(default_factory=list)
    jury_oracle_disagreements: list = field(default_factory=list)
    oracle_failures: int = 0

    @property
    def sound(self) -> bool:
        return not self.counterexamples and not self.necessary_violations


def soundness_sweep(
    samples: int,
    seed: int = 0,
    max_stages: int = 16,
    degrees: tuple = (2, 8),
    bound: int = 2,
    margin: float = 1e-7,
    progress: Optional[bool] = False,
) -> SurveyReport:
    rng = random.Random(seed)
    cfg = AlgoConfig(max_stages=max_stages)
    report = SurveyReport(samples=samples, seed=seed, max_stages=max_stages)
    verdicts = Counter()

    for _ in tqdm(range(samples), desc="soundness", unit="poly", disable=progress_disabled(progress)):
        p = random_rational_polynomial(rng, rng.randint(*degrees), bound)
        certificate = run_algorithm(p, cfg)
        verdicts[certificate.verdict.value] += 1
        table = jury_table(p)
        try:
            modulus = find_roots(p).max_modulus
        except RootFindingError:
            report.oracle_failures += 1
            modulus = None
        label = format_scalars(p.coeffs)

        if certificate.verdict is Verdict.CERTIFIED:
            report.certified += 1
            if table.verdict is not JuryVerdict.STABLE or (modulus is not None and modulus >= 1 + ORACLE_SLACK):
                logger.error(f"Certified but not stable: {p} (jury {table.verdict.value}, modulus {modulus})")
                report.counterexamples.append(label)
        elif (
            certificate.verdict is Verdict.DEFINITELY_UNSTABLE
            and certificate.deciding_stage is None
            and modulus is not None
            and modulus < 1 - ORACLE_SLACK
        ):
            report.necessary_violations.append(label)

        if modulus is not None and table.verdict is not JuryVerdict.SINGULAR:
            stable = table.verdict is JuryVerdict.STABLE
            if (stable and modulus > 1 + margin) or (not stable and modulus < 1 - margin):
                report.jury_oracle_disagreements.append(label)

    report.verdict_counts = dict(sorted(verdicts.items()))
    logger.info(
        f"Soundness sweep: {samples} samples, {report.certified} certified, "
        f"{len(report.counterexamples)} counterexamples, {report.oracle_failures} oracle failures"
    )
    return report


@dataclass
class TerminationHistogram:
    samples: int
    seed: int
    max_stages: int
    counts: dict = field(default_factory=dict)
    inconclusive: int = 0


def termination_histogram(
    samples: int,
    seed: int = 0,
    max_stages: int = 64,
    degrees: tuple = (2, 8),
    progress: Optional[bool] = False,
) -> TerminationHistogram:
    """First certifying stage over random Schur-stable inputs; reported, not asserted."""
    rng = random.Random(seed)
    cfg = AlgoConfig(max_stages=max_stages)
    stages = Counter()
    inconclusive = 0
    for _ in tqdm(range(samples), desc="termination", unit="poly", disable=progress_disabled(progress)):
        certificate = run_algorithm(random_stable_polynomial(rng, rng.randint(*degrees)), cfg)
        if certificate.verdict is Verdict.CERTIFIED:
            stages[certificate.deciding_stage] += 1
        else:
            inconclusive += 1
    logger.info(f"Termination histogram: {dict(sorted(stages.items()))}, {inconclusive} not certified")
    return TerminationHistogram(
        samples=samples, seed=seed, max_stages=max_stages, counts=dict(sorted(stages.items())), inconclusive=inconclusive
    )
