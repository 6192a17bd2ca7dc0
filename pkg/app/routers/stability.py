import logging

from fastapi import APIRouter

from app.schemas import CheckRequest, ErrorResponse, PolynomialIn, RootsRequest, TraceOut, TraceRequest, TraceRowOut
from schur_stability.engine import AlgoConfig, Verdict, run_algorithm, stage_traces
from schur_stability.jury import jury_table
from schur_stability.poly import MonicPolynomial, normalize
from schur_stability.roots import classify_roots, find_roots
from schur_stability.scalar import as_scalars, format_scalar
from schur_stability.schemas import CertificateOut, JuryTableOut, RootSetOut

logger = logging.getLogger(__name__)

router = APIRouter(tags=["Stability"], responses={400: {"model": ErrorResponse}})

def to_polynomial(body: PolynomialIn) -> MonicPolynomial:
    values = list(as_scalars(body.coefficients, body.backend))
    if body.ascending:
        values.reverse()
    return normalize(values, body.backend)

# ✅ Staged l1 certificate
@router.post("/check", response_model=CertificateOut)
def check(body: CheckRequest):
    p = to_polynomial(body)
    certificate = run_algorithm(p, AlgoConfig.from_settings(max_stages=body.max_stages))
    logger.info(f"check {p}: {certificate.verdict.value} at stage {certificate.deciding_stage}")
    return CertificateOut.from_certificate(certificate)

# 🔁 Stage polynomials and l1 norms
@router.post("/trace", response_model=TraceOut)
def trace(body: TraceRequest):
    p = to_polynomial(body)
    certificate = run_algorithm(p, AlgoConfig.from_settings(max_stages=body.max_stages))
    stages = stage_traces(p, body.stages) if body.stages is not None else certificate.trace
    certified = certificate.deciding_stage if certificate.verdict is Verdict.CERTIFIED else None
    rows = [
        TraceRowOut(
            step=t.stage + 1,
            polynomial=str(t.polynomial()),
            l1_norm=f"1 + {format_scalar(t.tail_sum)}" + (" < 2" if t.stage == certified else ""),
        )
        for t in stages
    ]
    return TraceOut(polynomial=str(p), verdict=certificate.verdict.value, deciding_stage=certificate.deciding_stage, rows=rows)

# 📋 Jury table
@router.post("/jury", response_model=JuryTableOut)
def jury(body: PolynomialIn):
    return JuryTableOut.from_table(jury_table(to_polynomial(body)))

# 🎯 Numerical roots
@router.post("/roots", response_model=RootSetOut)
def roots(body: RootsRequest):
    p = to_polynomial(body)
    root_set = find_roots(p, seed=body.seed)
    return RootSetOut.from_root_set(p, root_set, classify_roots(root_set, margin=body.margin))
