"""
Wire schemas. Exact values travel as canonical fraction strings ("p/q" or
"p"), floats as their repr, so a JSON document reproduces the run bit for bit.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .cases import CournotReport, RickerParams, RickerVerdict, ricker_conditions, ricker_quadratic
from .engine import AlgoConfig, Certificate, StageTrace, run_algorithm, stage_traces
from .jury import JuryTable
from .poly import MonicPolynomial
from .regions import RegionGrid, region_summary
from .roots import RootSet, SchurClass
from .scalar import Backend, as_scalars, format_scalar, format_scalars


# 🔁 Engine
class StageTraceOut(BaseModel):
    stage: int
    degree: int
    beta: List[str] = Field(..., description="Tail coefficients beta_0..beta_{n-1}")
    tail_sum: str
    polynomial: str

    @classmethod
    def from_trace(cls, trace: StageTrace) -> "StageTraceOut":
        return cls(
            stage=trace.stage,
            degree=trace.degree,
            beta=format_scalars(trace.beta),
            tail_sum=format_scalar(trace.tail_sum),
            polynomial=str(trace.polynomial()),
        )


class NecessaryChecksOut(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    constant_term: bool
    at_one: bool
    at_minus_one: bool


class CertificateOut(BaseModel):
    coefficients: List[str] = Field(..., description="a_0..a_{n-1}, constant term first")
    backend: Backend
    polynomial: str
    verdict: str
    deciding_stage: Optional[int] = None
    tail_sums: List[str]
    necessary_checks: NecessaryChecksOut
    sign_pattern: Optional[str] = None
    sign_pattern_exact: bool
    reason: str = ""
    trace: List[StageTraceOut]

    @classmethod
    def from_certificate(cls, certificate: Certificate) -> "CertificateOut":
        p = certificate.polynomial
        return cls(
            coefficients=format_scalars(p.coeffs),
            backend=p.backend,
            polynomial=str(p),
            verdict=certificate.verdict.value,
            deciding_stage=certificate.deciding_stage,
            tail_sums=format_scalars(certificate.tail_sums),
            necessary_checks=NecessaryChecksOut.model_validate(certificate.necessary_checks._asdict()),
            sign_pattern=certificate.sign_pattern.value if certificate.sign_pattern else None,
            sign_pattern_exact=certificate.sign_pattern_exact,
            reason=certificate.reason,
            trace=[StageTraceOut.from_trace(t) for t in certificate.trace],
        )

    def revalidate(self) -> bool:
        """
        Re-parse the coefficients, recompute every recorded stage and rerun the
        decision with the same stage budget. True when everything matches.
        """
        p = MonicPolynomial(as_scalars(self.coefficients, self.backend), self.backend)
        stages = len(self.trace) - 1
        recomputed = stage_traces(p, stages)
        if [StageTraceOut.from_trace(t) for t in recomputed] != self.trace:
            return False
        if format_scalars(t.tail_sum for t in recomputed) != self.tail_sums:
            return False
        rerun = run_algorithm(p, AlgoConfig.from_settings(max_stages=stages))
        return rerun.verdict.value == self.verdict and rerun.deciding_stage == self.deciding_stage


# 📋 Jury
class JuryTableOut(BaseModel):
    coefficients: List[str]
    polynomial: str
    rows: List[List[str]] = Field(..., description="Rows in ascending powers, written in pairs")
    verdict: str
    necessary_checks: NecessaryChecksOut
    on_boundary: bool = False
    deciding_row: Optional[int] = None

    @classmethod
    def from_table(cls, table: JuryTable) -> "JuryTableOut":
        return cls(
            coefficients=format_scalars(table.polynomial.coeffs),
            polynomial=str(table.polynomial),
            rows=[format_scalars(row) for row in table.rows],
            verdict=table.verdict.value,
            necessary_checks=NecessaryChecksOut.model_validate(table.necessary_checks._asdict()),
            on_boundary=table.on_boundary,
            deciding_row=table.deciding_row,
        )


# 🎯 Roots
class RootOut(BaseModel):
    re: float
    im: float
    modulus: float


class RootSetOut(BaseModel):
    polynomial: str
    roots: List[RootOut]
    max_modulus: float
    residual: float
    iterations: int
    schur_class: Optional[SchurClass] = None

    @classmethod
    def from_root_set(cls, p: MonicPolynomial, roots: RootSet, schur_class: Optional[SchurClass] = None) -> "RootSetOut":
        return cls(
            polynomial=str(p),
            roots=[RootOut(**record) for record in roots.as_records()],
            max_modulus=roots.max_modulus,
            residual=roots.residual,
            iterations=roots.iterations,
            schur_class=schur_class,
        )


# 🗺️ Regions
class AxisOut(BaseModel):
    name: str
    min: str
    max: str
    steps: int


class RegionSummaryOut(BaseModel):
    mapping: str
    backend: Backend
    max_stages: int
    params: Dict[str, str]
    x_axis: AxisOut
    y_axis: AxisOut
    cells: int
    stage_counts: Dict[str, int] = Field(..., description="Cells per first certifying stage; -1 uncertified, -2 invalid")
    truth_counts: Dict[str, int]
    certified: int
    soundness_violations: int
    stable_coverage: float

    @classmethod
    def from_grid(cls, grid: RegionGrid) -> "RegionSummaryOut":
        return cls.model_validate(region_summary(grid))


# 📈 Case studies
class CournotReportOut(BaseModel):
    lam: str
    k: int
    N: int
    polynomials: List[str]
    certificates: List[CertificateOut]
    all_certified: bool
    stage_sums: Optional[List[str]] = None
    stage1_sum: Optional[str] = None
    stage1_identity: Optional[bool] = None
    closed_form: Optional[str] = None
    closed_form_matches: Optional[bool] = None
    certified_by_k: Optional[bool] = None

    @classmethod
    def from_report(cls, report: CournotReport) -> "CournotReportOut":
        def text(value):
            return None if value is None else format_scalar(value)

        return cls(
            lam=format_scalar(report.params.lam),
            k=report.params.k,
            N=report.params.N,
            polynomials=[str(p) for p in report.polynomials],
            certificates=[CertificateOut.from_certificate(c) for c in report.certificates],
            all_certified=report.all_certified,
            stage_sums=None if report.stage_sums is None else format_scalars(report.stage_sums),
            stage1_sum=text(report.stage1_sum),
            stage1_identity=report.stage1_identity,
            closed_form=text(report.closed_form),
            closed_form_matches=report.closed_form_matches,
            certified_by_k=report.certified_by_k,
        )


class RickerVerdictOut(BaseModel):
    r: str
    a: str
    b: str
    t: str
    quadratic: str
    outcome: str
    stage: Optional[int] = None
    condition_i: bool
    condition_ii: bool
    reason: str = ""
    certificate: Optional[CertificateOut] = None

    @classmethod
    def from_verdict(cls, params: RickerParams, verdict: RickerVerdict) -> "RickerVerdictOut":
        first, second = ricker_conditions(params)
        return cls(
            r=format_scalar(params.r),
            a=format_scalar(params.a),
            b=format_scalar(params.b),
            t=format_scalar(params.t),
            quadratic=str(ricker_quadratic(params)),
            outcome=verdict.outcome.value,
            stage=verdict.stage,
            condition_i=first,
            condition_ii=second,
            reason=verdict.reason,
            certificate=CertificateOut.from_certificate(verdict.certificate) if verdict.certificate else None,
        )


# 🎲 Surveys
class SurveyReportOut(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    samples: int
    seed: int
    max_stages: int
    verdict_counts: Dict[str, int]
    certified: int
    counterexamples: List[List[str]]
    necessary_violations: List[List[str]]
    jury_oracle_disagreements: List[List[str]]
    oracle_failures: int
    sound: bool


class TerminationHistogramOut(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    samples: int
    seed: int
    max_stages: int
    counts: Dict[int, int]
    inconclusive: int
