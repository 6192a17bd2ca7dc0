"""
Schur Stability API

A FastAPI service exposing the iterated l1 stability test, the Jury table,
the numerical root oracle and the worked case studies.

Version: 0.1.0
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.routers import cases, stability
from app.schemas import ErrorResponse
from schur_stability import __version__
from schur_stability.config import configure_logging, get_settings
from schur_stability.errors import InvalidInput, RootFindingError

# Configure logging (SCHUR_LOG_LEVEL, SCHUR_LOG_FILE)
configure_logging()
logger = logging.getLogger(__name__)

@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager for startup and shutdown events."""
    settings = get_settings()
    logger.info(
        f"Starting Schur Stability API (max_stages={settings.max_stages}, "
        f"oracle_margin={settings.oracle_margin})"
    )
    yield
    logger.info("Shutting down Schur Stability API...")

# Initialize FastAPI app
app = FastAPI(
    title="Schur Stability API",
    description="""
    Decide whether every root of a real monic polynomial lies in the open unit disk.

    ## Features

    * **Certificates**: staged l1 test with per-stage tail sums
    * **Jury table**: exact classical baseline
    * **Roots**: Aberth-Ehrlich oracle with unit-disk classification
    * **Case studies**: Cournot oligopoly with delay, Ricker competition model

    Coefficients are literals such as `1/2` or `-0.3`; exact rationals are the default backend.
    """,
    version=__version__,
    lifespan=lifespan,
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)

# Include routers
app.include_router(stability.router, prefix="/stability", tags=["Stability"])
app.include_router(cases.router, prefix="/cases", tags=["Case Studies"])

# Request logging middleware
@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log all incoming requests and responses."""
    logger.info(f"Request: {request.method} {request.url}")

    try:
        response = await call_next(request)
        logger.info(f"Response: {request.method} {request.url} - Status: {response.status_code}")
        return response
    except Exception as e:
        logger.error(f"Request failed: {request.method} {request.url} - Error: {str(e)}")
        raise

@app.exception_handler(InvalidInput)
async def invalid_input_handler(request: Request, exc: InvalidInput):
    logger.warning(f"Invalid input on {request.url.path}: {exc}")
    return JSONResponse(
        status_code=status.HTTP_400_BAD_REQUEST,
        content=ErrorResponse(detail=str(exc), error_code=exc.error_code).model_dump(),
    )

@app.exception_handler(RootFindingError)
async def root_finding_handler(request: Request, exc: RootFindingError):
    logger.error(f"Root finding failed on {request.url.path}: {exc}")
    return JSONResponse(
        status_code=422,
        content=ErrorResponse(detail=str(exc), error_code=exc.error_code).model_dump(),
    )

# Global exception handler
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Global exception handler for unhandled errors."""
    logger.error(f"Unhandled exception: {str(exc)}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content=ErrorResponse(detail="Internal server error", error_code="INTERNAL_ERROR").model_dump()
    )

@app.get("/", tags=["Health Check"])
async def root():
    """
    Health check endpoint.

    Returns basic information about the API status.
    """
    return {
        "message": "Schur Stability API",
        "version": __version__,
        "status": "healthy",
        "docs": "/docs"
    }

@app.get("/health", tags=["Health Check"])
async def health_check():
    """Reports the active defaults; fails when the environment is misconfigured."""
    try:
        settings = get_settings()
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        return JSONResponse(status_code=503, content={"status": "unhealthy", "detail": str(e)})
    return {
        "status": "healthy",
        "components": {"engine": "healthy", "oracle": "healthy"},
        "settings": {
            "max_stages": settings.max_stages,
            "float_epsilon": settings.float_epsilon,
            "oracle_margin": settings.oracle_margin,
            "oracle_max_iter": settings.oracle_max_iter,
        },
    }
