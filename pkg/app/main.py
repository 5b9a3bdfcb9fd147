import logging

from fastapi import FastAPI

from app.api.v1.endpoints import counting, search, theory
from app.core.config import settings
from app.core.logging import setup_logging

# Configure logging
setup_logging()
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Schur Extremal Colorings API",
    description="Exact counting of monochromatic and rainbow solutions of x+ay=z and related "
    "equations, with extremal-coloring search and closed-form predictions",
    version=settings.ARTIFACT_VERSION,
)

# Include API routers
app.include_router(counting.router, prefix="/api/v1")
app.include_router(search.router, prefix="/api/v1")
app.include_router(theory.router, prefix="/api/v1")


@app.get("/")
async def root():
    logger.info("Root endpoint accessed")
    return {
        "message": "Schur Extremal Colorings API",
        "version": settings.ARTIFACT_VERSION,
        "features": ["count", "search", "theory"],
    }
