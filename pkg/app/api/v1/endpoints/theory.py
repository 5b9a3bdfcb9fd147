"""
Theory API Endpoints
Predictions and canonical colorings
"""

import logging
from typing import Optional

from fastapi import APIRouter, HTTPException, Query, status

from app.schemas.coloring import Coloring
from app.schemas.counting import SolutionClass
from app.schemas.equation import Equation
from app.schemas.search import Direction
from app.schemas.theory import Prediction
from app.services.theory_service import TheoryService

router = APIRouter(prefix="/theory", tags=["theory"])

logger = logging.getLogger(__name__)


@router.get("/prediction", response_model=Prediction)
async def get_prediction(
    equation: str = Query("schur"),
    n: int = Query(..., ge=1),
    kind: str = Query("min", pattern="^(min|max-nonmono|max-rainbow|fixed-mu)$"),
    mu_b: Optional[int] = Query(None, ge=0),
    direction: Direction = Query(Direction.MIN),
):
    """Leading-order prediction for the requested extremal quantity"""
    try:
        eq = Equation.parse(equation)
        if kind == "max-nonmono":
            return TheoryService.predicted_max_nonmono(eq, n)
        if kind == "max-rainbow":
            return TheoryService.predicted_max_rainbow(n)
        if kind == "fixed-mu":
            if mu_b is None:
                raise ValueError("fixed-mu predictions need mu_b")
            return TheoryService.predicted_fixed_mu(n, mu_b, direction)
        return TheoryService.predicted_min(eq, n)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


@router.get("/canonical", response_model=Coloring)
async def get_canonical(
    equation: str = Query("schur"),
    n: int = Query(..., ge=1),
    mu_b: Optional[int] = Query(None, ge=0),
    direction: Direction = Query(Direction.MIN),
    klass: SolutionClass = Query(SolutionClass.MONO),
):
    """Proposed extremal coloring as run-length JSON"""
    try:
        eq = Equation.parse(equation)
        return TheoryService.canonical_coloring(eq, n, mu_b, direction, klass)
    except ValueError as e:
        logger.info(f"No canonical coloring for {equation}, n={n}: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
