"""FastAPI entry point for the Lambert W x F service."""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from lambertw_tails import __version__
from lambertw_tails.errors import DomainError, LambertWError
from lambertw_tails.routes import diagnostics_router, distributions_router, fit_router

app = FastAPI(
    title="lambertw-tails",
    description="Lambert W x F distributions, IGMM/MLE estimation and tail-regime diagnostics",
    version=__version__,
)

app.include_router(fit_router)
app.include_router(diagnostics_router)
app.include_router(distributions_router)


@app.exception_handler(LambertWError)
async def lambertw_error_handler(request: Request, exc: LambertWError):
    detail = {"error": type(exc).__name__, "message": exc.message}
    if isinstance(exc, DomainError) and exc.indices:
        detail["indices"] = exc.indices[:100]
    return JSONResponse(status_code=exc.status_code, content={"detail": detail})


@app.get("/")
async def root():
    """Root endpoint with API info."""
    return {
        "name": "lambertw-tails API",
        "version": __version__,
        "endpoints": {
            "igmm": "POST /api/fit/igmm",
            "mle": "POST /api/fit/mle",
            "gaussianize": "POST /api/fit/gaussianize",
            "hill": "POST /api/diagnostics/hill",
            "powerlaw": "POST /api/diagnostics/powerlaw",
            "whiteness": "POST /api/diagnostics/whiteness",
            "bootstrap": "POST /api/diagnostics/bootstrap",
            "regime": "GET /api/distributions/regime/{alpha}",
            "sample": "POST /api/distributions/sample",
        },
    }


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "healthy"}
