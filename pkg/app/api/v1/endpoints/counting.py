"""
Counting API Endpoints
Exact solution-class counts for submitted colorings
"""

import logging
from typing import List

from fastapi import APIRouter, HTTPException, status

from app.schemas.counting import CountRequest, CountResponse
from app.schemas.equation import Equation
from app.services.coloring_service import ColoringService
from app.services.counting_service import CountingService

router = APIRouter(
    prefix="/count",
    tags=["counting"],
    responses={422: {"description": "Invalid equation or coloring"}},
)

logger = logging.getLogger(__name__)


def _count(request: CountRequest) -> CountResponse:
    try:
        eq = Equation.parse(request.equation)
        coloring = ColoringService.parse_runlength(request.runs, request.r)
        return CountingService.summarize(coloring, eq, stats=request.stats)
    except ValueError as e:
        logger.info(f"Rejected count request: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


@router.post("", response_model=CountResponse)
async def count_solutions(request: CountRequest):
    """Count monochromatic, rainbow and remaining solutions of one coloring"""
    return _count(request)


@router.post("/batch", response_model=List[CountResponse])
async def count_batch(requests: List[CountRequest]):
    """Count a batch of colorings; any invalid entry rejects the batch"""
    logger.info(f"Counting batch of {len(requests)} colorings")
    return [_count(request) for request in requests]
