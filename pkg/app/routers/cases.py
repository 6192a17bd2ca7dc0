from fastapi import APIRouter

from app.schemas import CournotRequest, ErrorResponse, RickerRequest
from schur_stability.cases import CournotParams, RickerParams, cournot_verify, ricker_verdict
from schur_stability.engine import AlgoConfig
from schur_stability.scalar import Backend, parse_scalar
from schur_stability.schemas import CournotReportOut, RickerVerdictOut

router = APIRouter(tags=["Case Studies"], responses={400: {"model": ErrorResponse}})

# 🏭 Cournot oligopoly with delay
@router.post("/cournot", response_model=CournotReportOut)
def cournot(body: CournotRequest):
    params = CournotParams(lam=parse_scalar(body.lam, Backend.EXACT), k=body.k, N=body.N)
    report = cournot_verify(params, AlgoConfig.from_settings(max_stages=body.max_stages))
    return CournotReportOut.from_report(report)

# 🐟 Ricker competition model
@router.post("/ricker", response_model=RickerVerdictOut)
def ricker(body: RickerRequest):
    params = RickerParams(
        r=parse_scalar(body.r, body.backend),
        a=parse_scalar(body.a, body.backend),
        b=parse_scalar(body.b, body.backend),
    )
    verdict = ricker_verdict(params, AlgoConfig.from_settings(max_stages=body.max_stages))
    return RickerVerdictOut.from_verdict(params, verdict)
