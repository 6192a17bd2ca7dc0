"""
Worked applications: the Cournot oligopoly with delay and the Ricker-type
competition model. Both go through run_algorithm unchanged, so they double as
end-to-end checks of the engine.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .engine import AlgoConfig, Certificate, Verdict, run_algorithm, stage_traces
from .errors import InvalidCell, InvalidInput
from .poly import MonicPolynomial
from .regions import Axis, GridSpec
from .scalar import Backend, Scalar, common_backend, one, zero

logger = logging.getLogger(__name__)


# ---------- Cournot ----------

@dataclass(frozen=True)
class CournotParams:
    """Adjustment speed lam in (0, 1), delay k >= 1, N competitors (2 or 3)."""

    lam: Scalar
    k: int
    N: int = 3

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise InvalidInput(f"lambda must lie in (0, 1), got {self.lam}")
        if self.k < 1:
            raise InvalidInput(f"delay k must be >= 1, got {self.k}")
        if self.N not in (2, 3):
            raise InvalidInput(f"N must be 2 or 3, got {self.N}")

    @property
    def backend(self) -> Backend:
        return common_backend((self.lam,))


def _cournot_poly(lam: Scalar, k: int, constant: Scalar) -> MonicPolynomial:
    # x^(k+1) - (1 - lam)x^k + constant
    backend = common_backend((lam,))
    coeffs = [zero(backend)] * (k + 1)
    coeffs[0] = constant
    coeffs[k] = -(one(backend) - lam)
    return MonicPolynomial(tuple(coeffs), backend)


def cournot_polys(params: CournotParams) -> list:
    """[p1, p2] for N = 2, [p1, p3] for N = 3."""
    lam, k = params.lam, params.k
    p1 = _cournot_poly(lam, k, -lam / 2)
    if params.N == 2:
        return [p1, _cournot_poly(lam, k, lam / 2)]
    return [p1, _cournot_poly(lam, k, lam)]


def cournot_closed_form(lam: Scalar, k: int) -> Scalar:
    """Stage-k tail sum of p3: |(1-lam)^(k+1) - lam| + lam * sum_{j=1..k} (1-lam)^j."""
    rest = one(common_backend((lam,))) - lam
    return abs(rest ** (k + 1) - lam) + lam * sum(rest**j for j in range(1, k + 1))


@dataclass(frozen=True)
class CournotReport:
    params: CournotParams
    polynomials: tuple
    certificates: tuple
    # the remaining fields describe p3 and stay None for N = 2
    stage_sums: Optional[tuple] = None
    stage1_sum: Optional[Scalar] = None
    stage1_identity: Optional[bool] = None
    closed_form: Optional[Scalar] = None
    closed_form_matches: Optional[bool] = None
    certified_by_k: Optional[bool] = None

    @property
    def all_certified(self) -> bool:
        return all(c.verdict is Verdict.CERTIFIED for c in self.certificates)


def cournot_verify(params: CournotParams, cfg: Optional[AlgoConfig] = None) -> CournotReport:
    """
    Certify every Cournot polynomial and, for N = 3, compare the p3 trace with
    the closed forms.

    The stage-1 sum of p3 equals exactly 1 when k >= 2. For k = 1 the two lag
    terms coincide and stage 1 is already the closed-form stage.
    """
    if params.backend is not Backend.EXACT:
        raise InvalidInput("cournot_verify needs an exact rational lambda")
    cfg = cfg or AlgoConfig.from_settings()
    polys = cournot_polys(params)
    certificates = tuple(run_algorithm(p, cfg) for p in polys)
    if params.N == 2:
        return CournotReport(params=params, polynomials=tuple(polys), certificates=certificates)

    lam, k = params.lam, params.k
    p3, cert3 = polys[1], certificates[1]
    sums = tuple(t.tail_sum for t in stage_traces(p3, k))
    closed = cournot_closed_form(lam, k)
    expected_stage1 = Fraction(1) if k >= 2 else closed
    report = CournotReport(
        params=params,
        polynomials=tuple(polys),
        certificates=certificates,
        stage_sums=sums,
        stage1_sum=sums[1],
        stage1_identity=sums[1] == expected_stage1,
        closed_form=closed,
        closed_form_matches=sums[k] == closed,
        certified_by_k=cert3.verdict is Verdict.CERTIFIED and cert3.deciding_stage <= k,
    )
    if not (report.stage1_identity and report.closed_form_matches):
        logger.warning(f"Cournot identities fail for lambda={lam}, k={k}: stage sums {sums}, closed form {closed}")
    return report


# ---------- Ricker ----------

class RickerOutcome(str, Enum):
    STABLE_SUFFICIENT = "StableSufficient"
    UNKNOWN = "Unknown"
    UNSTABLE_NECESSARY = "UnstableNecessary"


@dataclass(frozen=True)
class RickerParams:
    r: Scalar
    a: Scalar
    b: Scalar

    def __post_init__(self):
        common_backend((self.r, self.a, self.b))
        if self.a == 0:
            raise InvalidCell("a must be nonzero (t = r/a)")
        if self.r <= 0:
            raise InvalidInput(f"r must be > 0, got {self.r}")

    @property
    def backend(self) -> Backend:
        return common_backend((self.r, self.a, self.b))

    @property
    def t(self) -> Scalar:
        return self.r / self.a


def _ricker_coefficients(params: RickerParams) -> tuple:
    t = params.t
    alpha = params.r + 2 - 3 * t
    constant = 1 + (params.a - 3) * t + params.b * t * t
    return alpha, constant


def ricker_quadratic(params: RickerParams) -> MonicPolynomial:
    """x^2 - (r + 2 - 3t)x + 1 + (a - 3)t + bt^2, the factor left after 1 - r."""
    alpha, constant = _ricker_coefficients(params)
    return MonicPolynomial((constant, -alpha), params.backend)


def ricker_conditions(params: RickerParams) -> tuple:
    """
    The two sufficient conditions evaluated directly.

    (i)  |alpha| + |c| < 1
    (ii) |alpha^2 - c| + |alpha| |c| < 1
    with alpha = r + 2 - 3t and c = 1 + (a - 3)t + bt^2.
    """
    alpha, c = _ricker_coefficients(params)
    return abs(alpha) + abs(c) < 1, abs(alpha * alpha - c) + abs(alpha) * abs(c) < 1


@dataclass(frozen=True)
class RickerVerdict:
    outcome: RickerOutcome
    stage: Optional[int]
    certificate: Optional[Certificate]
    reason: str = ""


def ricker_verdict(params: RickerParams, cfg: Optional[AlgoConfig] = None) -> RickerVerdict:
    if not 0 < params.r < 2:
        return RickerVerdict(
            RickerOutcome.UNSTABLE_NECESSARY, None, None, f"eigenvalue 1 - r = {1 - params.r} is off the open disk"
        )
    certificate = run_algorithm(ricker_quadratic(params), cfg or AlgoConfig.from_settings())
    if certificate.verdict is Verdict.CERTIFIED:
        outcome, reason = RickerOutcome.STABLE_SUFFICIENT, certificate.reason
    elif certificate.verdict is Verdict.DEFINITELY_UNSTABLE:
        outcome, reason = RickerOutcome.UNSTABLE_NECESSARY, f"quadratic factor: {certificate.reason}"
    else:
        outcome, reason = RickerOutcome.UNKNOWN, certificate.reason
    return RickerVerdict(outcome, certificate.deciding_stage if outcome is RickerOutcome.STABLE_SUFFICIENT else None, certificate, reason)


def ricker_grid_spec(
    r: Scalar,
    max_stages: int = 1,
    x_axis: Optional[Axis] = None,
    y_axis: Optional[Axis] = None,
    backend: Backend = Backend.EXACT,
) -> GridSpec:
    """The (b, a) plane at fixed r."""
    return GridSpec("ricker-ba", x_axis=x_axis, y_axis=y_axis, backend=backend, max_stages=max_stages, params={"r": r})
