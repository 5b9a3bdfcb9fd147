"""
Search API Endpoints
Bounded extremal-coloring searches
"""

import logging

from fastapi import APIRouter, HTTPException, status

from app.core.errors import BudgetExceededError
from app.schemas.search import ExtremumReport, SearchRequest
from app.services.search_service import run_search

router = APIRouter(prefix="/search", tags=["search"])

logger = logging.getLogger(__name__)


@router.post("", response_model=ExtremumReport)
def search(request: SearchRequest):
    """
    Run an exhaustive, local or sweep search
    Exhaustive requests larger than the budget are refused, never truncated
    """
    try:
        # searches run in one worker inside the server process
        return run_search(request, threads=1)
    except BudgetExceededError as e:
        raise HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(e))
    except ValueError as e:
        logger.info(f"Rejected search request: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
