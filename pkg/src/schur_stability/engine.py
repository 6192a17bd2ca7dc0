"""
The iterated l1 stability test.

A monic p(x) = x^n + a_{n-1}x^{n-1} + ... + a_0 is Schur-stable when
||p||_1 < 2. When that fails, the associated recurrence
x_{k+1} = -a_{n-1}x_k - ... - a_0x_{k-n+1} is substituted into itself, which
raises the delay by one and yields a new characteristic polynomial

    Q_i(x) = x^(n+i) + beta_{n-1}x^{n-1} + ... + beta_0,

whose tail sum sum|beta_m| < 1 is again sufficient for stability of p. Stage
i+1 follows from stage i by Q_{i+1} = x*Q_i - beta_{n-1}*p, so

    beta'_m = beta_{m-1} - beta_{n-1}*a_m   (m >= 1)
    beta'_0 = -beta_{n-1}*a_0.

Certification at any stage suffices; stages are not nested, so a failure at a
later stage never proves instability.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .config import get_settings
from .errors import InvalidInput
from .poly import GeneralPolynomial, MonicPolynomial, evaluate, l1_norm
from .scalar import Backend, Scalar, format_scalar, one, zero

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    CERTIFIED = "Certified"
    DEFINITELY_UNSTABLE = "DefinitelyUnstable"
    INCONCLUSIVE = "Inconclusive"
    BOUNDARY = "Boundary"


class SignPattern(str, Enum):
    ALL_NEGATIVE = "all-negative"
    ALTERNATING = "alternating"
    # (-1)^(k+n) a_k > 0: reported only, the l1 test is not necessary here
    MIRRORED_ALTERNATING = "mirrored-alternating"


EXACT_PATTERNS = (SignPattern.ALL_NEGATIVE, SignPattern.ALTERNATING)


class NecessaryChecks(NamedTuple):
    """|p(0)| < 1, p(1) > 0 and (-1)^n p(-1) > 0, each strict."""

    constant_term: bool
    at_one: bool
    at_minus_one: bool


@dataclass(frozen=True)
class StageTrace:
    stage: int
    beta: tuple
    tail_sum: Scalar

    @property
    def degree(self) -> int:
        """Degree n + i of Q_i."""
        return len(self.beta) + self.stage

    def polynomial(self) -> GeneralPolynomial:
        """Q_i(x) = x^(n+i) + sum beta_m x^m."""
        backend = _backend(self.beta[0])
        filler = (zero(backend),) * self.stage
        return GeneralPolynomial(self.beta + filler + (one(backend),), backend)


@dataclass(frozen=True)
class AlgoConfig:
    max_stages: int = 64
    float_boundary_epsilon: float = 1e-9

    def __post_init__(self):
        if self.max_stages < 0:
            raise InvalidInput("max_stages must be >= 0")
        if self.float_boundary_epsilon < 0:
            raise InvalidInput("float_boundary_epsilon must be >= 0")

    @classmethod
    def from_settings(cls, max_stages: Optional[int] = None) -> "AlgoConfig":
        settings = get_settings()
        return cls(
            max_stages=settings.max_stages if max_stages is None else max_stages,
            float_boundary_epsilon=settings.float_epsilon,
        )


@dataclass(frozen=True)
class Certificate:
    polynomial: MonicPolynomial
    verdict: Verdict
    deciding_stage: Optional[int]
    trace: tuple
    necessary_checks: NecessaryChecks
    sign_pattern: Optional[SignPattern]
    sign_pattern_exact: bool
    reason: str = field(default="", compare=False)

    @property
    def tail_sums(self) -> tuple:
        return tuple(t.tail_sum for t in self.trace)


def _backend(value) -> Backend:
    return Backend.FLOAT if isinstance(value, float) else Backend.EXACT


def _tail_sum(beta) -> Scalar:
    total = zero(_backend(beta[0]))
    for b in beta:
        total += abs(b)
    return total


def check_l1(p: MonicPolynomial) -> bool:
    """||p||_1 < 2, strictly."""
    return l1_norm(p) < 2


def necessary_margins(p: MonicPolynomial) -> tuple:
    """(1 - |p(0)|, p(1), (-1)^n p(-1)); each must be > 0 for stability."""
    unit = one(p.backend)
    at_minus_one = evaluate(p, -unit)
    if p.degree % 2:
        at_minus_one = -at_minus_one
    return (unit - abs(p.coeffs[0]), evaluate(p, unit), at_minus_one)


def necessary_checks(p: MonicPolynomial) -> NecessaryChecks:
    return NecessaryChecks(*(margin > 0 for margin in necessary_margins(p)))


def sign_pattern(p: MonicPolynomial) -> Optional[SignPattern]:
    """Which strict coefficient sign pattern p matches, if any; zeros match none."""
    n = p.degree
    if all(a < 0 for a in p.coeffs):
        return SignPattern.ALL_NEGATIVE
    signed = [a if (k + n) % 2 == 0 else -a for k, a in enumerate(p.coeffs)]
    if all(s < 0 for s in signed):
        return SignPattern.ALTERNATING
    if all(s > 0 for s in signed):
        return SignPattern.MIRRORED_ALTERNATING
    return None


def sign_pattern_exact(p: MonicPolynomial) -> bool:
    """True when the l1 test is necessary as well as sufficient for p."""
    return sign_pattern(p) in EXACT_PATTERNS


def initial_stage(p: MonicPolynomial) -> StageTrace:
    return StageTrace(stage=0, beta=p.coeffs, tail_sum=_tail_sum(p.coeffs))


def iterate_stage(prev: StageTrace, p: MonicPolynomial) -> StageTrace:
    """Stage i -> i+1 via Q_{i+1} = x*Q_i - beta_{n-1}*p."""
    if len(prev.beta) != p.degree:
        raise InvalidInput(f"Stage tail has {len(prev.beta)} entries, polynomial degree is {p.degree}")
    lead = prev.beta[-1]
    a = p.coeffs
    beta = [-lead * a[0]]
    beta.extend(prev.beta[m - 1] - lead * a[m] for m in range(1, len(a)))
    beta = tuple(beta)
    return StageTrace(stage=prev.stage + 1, beta=beta, tail_sum=_tail_sum(beta))


def stage_traces(p: MonicPolynomial, stages: int) -> list:
    """Stages 0..stages, whether or not any of them certifies."""
    trace = [initial_stage(p)]
    for _ in range(stages):
        trace.append(iterate_stage(trace[-1], p))
    return trace


def substitute_general(p: MonicPolynomial) -> StageTrace:
    """
    One explicit substitution of the recurrence into its first variable of
    nonzero coefficient.

    With a_{n-j} the first nonzero coefficient, the recurrence reads
    x_{k+1} = sum_m c_m x_{k-m} with c_m = -a_{n-1-m}. Replacing x_{k-j+1} by
    the recurrence itself gives lags j..j+n-1 with coefficients
    b_L = c_{j-1}c_{L-j} + c_L (the last term only for L <= n-1). The
    returned trace is stage j, i.e. the same as j applications of
    iterate_stage. When every a_j is zero, p = x^n is certified at stage 0.
    """
    n = p.degree
    a = p.coeffs
    gap = next((j for j in range(1, n + 1) if a[n - j] != 0), None)
    if gap is None:
        logger.debug("All tail coefficients are zero; stage 0 already certifies")
        return initial_stage(p)
    c = [-a[n - 1 - m] for m in range(n)]
    b = {}
    for lag in range(gap, gap + n):
        value = c[gap - 1] * c[lag - gap]
        if lag <= n - 1:
            value += c[lag]
        b[lag] = value
    beta = tuple(-b[n + gap - 1 - m] for m in range(n))
    return StageTrace(stage=gap, beta=beta, tail_sum=_tail_sum(beta))


def degree2_st(alpha: Scalar, beta: Scalar, j: int) -> tuple:
    """
    (s_j, t_j) for x^2 - alpha*x + beta.

    s_0 = alpha, t_0 = -beta, s_j = s_0*s_{j-1} + t_{j-1}, t_j = t_0*s_{j-1}.
    Stage j of the engine has beta_1 = -s_j and beta_0 = -t_j.
    """
    if j < 0:
        raise InvalidInput("j must be >= 0")
    s0, t0 = alpha, -beta
    s, t = s0, t0
    for _ in range(j):
        s, t = s0 * s + t, t0 * s
    return s, t


def run_algorithm(p: MonicPolynomial, cfg: Optional[AlgoConfig] = None) -> Certificate:
    """
    Decide p with the necessary pre-checks followed by the staged l1 test.

    1. A strictly failed necessary check -> DefinitelyUnstable; an equality
       (root on the unit circle at 1 or -1, or |a_0| = 1) -> Boundary.
    2. Stages 0..max_stages: the first stage with tail sum < 1 -> Certified.
    3. Stage 0 failing under an exact sign pattern -> DefinitelyUnstable.
    4. Otherwise Inconclusive. In the float backend a tail sum within
       float_boundary_epsilon of 1 counts as Boundary unless a later stage
       certifies outright.
    """
    cfg = cfg or AlgoConfig.from_settings()
    is_float = p.backend is Backend.FLOAT
    eps = cfg.float_boundary_epsilon if is_float else 0
    pattern = sign_pattern(p)
    exact_pattern = pattern in EXACT_PATTERNS
    checks = necessary_checks(p)
    margins = necessary_margins(p)
    stage0 = initial_stage(p)

    def certificate(verdict, stage, trace, reason):
        logger.debug(f"{p}: {verdict.value} at stage {stage} ({reason})")
        return Certificate(
            polynomial=p,
            verdict=verdict,
            deciding_stage=stage,
            trace=tuple(trace),
            necessary_checks=checks,
            sign_pattern=pattern,
            sign_pattern_exact=exact_pattern,
            reason=reason,
        )

    names = ("|p(0)| < 1", "p(1) > 0", "(-1)^n p(-1) > 0")
    failed = [name for name, margin in zip(names, margins) if margin < -eps]
    if failed:
        return certificate(Verdict.DEFINITELY_UNSTABLE, None, [stage0], f"necessary check failed: {', '.join(failed)}")
    tight = [name for name, margin in zip(names, margins) if margin <= eps]
    if tight:
        return certificate(Verdict.BOUNDARY, None, [stage0], f"necessary check holds with equality: {', '.join(tight)}")

    trace = [stage0]
    near_boundary = None
    for stage in range(cfg.max_stages + 1):
        current = trace[-1]
        if current.tail_sum < 1 - eps:
            return certificate(
                Verdict.CERTIFIED, stage, trace, f"tail sum {format_scalar(current.tail_sum)} < 1 at stage {stage}"
            )
        if is_float and near_boundary is None and abs(current.tail_sum - 1) <= eps:
            near_boundary = stage
        if stage == 0 and exact_pattern:
            return certificate(
                Verdict.DEFINITELY_UNSTABLE,
                0,
                trace,
                f"l1 test fails under the {pattern.value} sign pattern, where it is necessary",
            )
        if stage < cfg.max_stages:
            trace.append(iterate_stage(current, p))

    if near_boundary is not None:
        return certificate(
            Verdict.BOUNDARY, near_boundary, trace, f"tail sum within {eps:g} of 1 at stage {near_boundary}"
        )
    return certificate(
        Verdict.INCONCLUSIVE, None, trace, f"no stage up to {cfg.max_stages} has tail sum < 1"
    )
