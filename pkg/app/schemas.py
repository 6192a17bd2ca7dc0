from pydantic import BaseModel, Field
from typing import List, Optional

from schur_stability.scalar import Backend

# 🧮 Polynomial input
class PolynomialIn(BaseModel):
    coefficients: List[str] = Field(
        ..., min_length=2, description="Coefficients as literals ('1/2', '-0.3'), leading coefficient first"
    )
    ascending: bool = Field(False, description="Coefficients are given constant term first")
    backend: Backend = Backend.EXACT

class CheckRequest(PolynomialIn):
    max_stages: Optional[int] = Field(None, ge=0, description="Stage budget (default SCHUR_MAX_STAGES)")

class TraceRequest(CheckRequest):
    stages: Optional[int] = Field(None, ge=0, le=512, description="Return exactly stages 0..stages")

class RootsRequest(PolynomialIn):
    seed: int = 0
    margin: Optional[float] = Field(None, gt=0)

# 📈 Case studies
class CournotRequest(BaseModel):
    lam: str = Field(..., description="Adjustment speed in (0, 1), rational literal")
    k: int = Field(..., ge=1, le=256)
    N: int = 3
    max_stages: Optional[int] = Field(None, ge=0)

class RickerRequest(BaseModel):
    r: str
    a: str
    b: str
    backend: Backend = Backend.EXACT
    max_stages: Optional[int] = Field(None, ge=0)

# 🔁 Trace response
class TraceRowOut(BaseModel):
    step: int
    polynomial: str
    l1_norm: str

class TraceOut(BaseModel):
    polynomial: str
    verdict: str
    deciding_stage: Optional[int] = None
    rows: List[TraceRowOut]

class ErrorResponse(BaseModel):
    detail: str = Field(..., description="Error message")
    error_code: Optional[str] = Field(None, description="Error code for client handling")
