"""
Theory Service
Closed-form predictions, canonical colorings and the fitted-coefficient checks
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from app.core.config import settings
from app.core.errors import BudgetExceededError
from app.schemas.coloring import BlockSpec, Color, Coloring
from app.schemas.counting import SolutionClass
from app.schemas.equation import Equation, EquationKind
from app.schemas.search import Direction, Objective
from app.schemas.theory import ClaimStatus, Prediction, VerifyReport, VerifyRow
from app.services.coloring_service import ColoringService
from app.services.counting_service import CountingService
from app.services.search_service import get_search_service

logger = logging.getLogger(__name__)

R, B, G = Color.RED, Color.BLUE, Color.GREEN


def _min_coefficient(eq: Equation) -> Optional[sympy.Expr]:
    if eq.kind == EquationKind.SCHUR_LIKE and eq.a == 1:
        return sympy.Rational(1, 22)
    if eq.kind == EquationKind.SCHUR_LIKE:
        a = eq.a
        return sympy.Rational(1, 2 * a * (a * a + 2 * a + 3))
    if eq.kind == EquationKind.FOUR_VAR:
        return 1 / (12 * (10 + sympy.sqrt(3)) ** 2)
    return None


def _prediction(
    eq: Equation,
    n: int,
    coefficient: Optional[sympy.Expr],
    power: int,
    order_term: str,
    status: ClaimStatus,
) -> Prediction:
    leading = None
    if coefficient is not None:
        leading = float(sympy.N(coefficient * sympy.Integer(n) ** power, 30))
    return Prediction(
        equation=eq.text,
        n=n,
        coefficient=None if coefficient is None else str(coefficient),
        power=power,
        leading_value=leading,
        order_term=order_term,
        status=status,
    )


class TheoryService:
    @staticmethod
    def predicted_min(eq: Equation, n: int) -> Prediction:
        """Leading term of the minimum number of monochromatic solutions"""
        coefficient = _min_coefficient(eq)
        if eq.kind == EquationKind.FOUR_VAR:
            return _prediction(eq, n, coefficient, 3, "O(n^2)", ClaimStatus.CONJECTURE)
        if eq.kind == EquationKind.TWO_COEF:
            # only the extremal coloring is conjectured, no count
            return _prediction(eq, n, None, 2, "O(n)", ClaimStatus.CONJECTURE)
        return _prediction(eq, n, coefficient, 2, "O(n)", ClaimStatus.THEOREM)

    @staticmethod
    def predicted_max_nonmono(eq: Equation, n: int) -> Prediction:
        """n^2/(2a) - n^2/(2a(a^2+2a+3)); 5n^2/22 at a = 2"""
        if eq.kind != EquationKind.SCHUR_LIKE or eq.a < 2:
            raise ValueError(f"Non-monochromatic maximum is stated for x+ay=z with a >= 2, got {eq.text}")
        coefficient = sympy.Rational(1, 2 * eq.a) - _min_coefficient(eq)
        return _prediction(eq, n, coefficient, 2, "O(n)", ClaimStatus.THEOREM)

    @staticmethod
    def predicted_max_rainbow(n: int) -> Prediction:
        """Conjectured exact rainbow maximum n(n+1)/10 for x + y = z"""
        prediction = _prediction(
            Equation.schur(), n, sympy.Rational(1, 10), 2, "O(n)", ClaimStatus.CONJECTURE
        )
        return prediction.model_copy(update={"leading_value": n * (n + 1) / 10})

    @staticmethod
    def predicted_fixed_mu(n: int, mu_b: int, direction: Direction = Direction.MIN) -> Prediction:
        """Extremal monochromatic Schur count with mu_B >= n/2 blue integers"""
        if not n <= 2 * mu_b <= 2 * n:
            raise ValueError(f"mu_B must lie in [n/2, n], got mu_B={mu_b}, n={n}")
        n_, mu_b_ = sympy.Integer(n), sympy.Integer(mu_b)
        mu_r = n_ - mu_b_
        low = 3 * mu_b <= 2 * n
        if direction == Direction.MIN:
            value = (
                n_**2 / 4 - sympy.Rational(3, 4) * mu_r * mu_b_ - mu_b_**2 / 16
                if low
                else n_**2 / 4 - mu_r * mu_b_ + mu_r**2 / 4
            )
        else:
            value = (
                n_**2 / 4 - sympy.Rational(3, 4) * mu_r * mu_b_ + mu_b_**2 / 16
                if low
                else n_**2 / 4 - mu_r * mu_b_ / 2 - mu_r**2 / 4
            )
        return _prediction(Equation.schur(), n, value / n_**2, 2, "O(n)", ClaimStatus.THEOREM)

    @staticmethod
    def canonical_spec(
        eq: Equation,
        n: int,
        fixed_mu_b: Optional[int] = None,
        direction: Direction = Direction.MIN,
        klass: SolutionClass = SolutionClass.MONO,
    ) -> BlockSpec:
        """Block recipe of the proposed extremal coloring"""
        if klass == SolutionClass.RAINBOW:
            if eq != Equation.schur() or direction != Direction.MAX:
                raise ValueError("Only the rainbow maximum for x + y = z has a recipe")
            split = 2 * n // 5
            colors = [(R, B)[i % 2] if i < split else (G, B)[(i - split) % 2] for i in range(n)]
            return BlockSpec.of(*((color, 1) for color in colors))

        if fixed_mu_b is not None:
            return TheoryService._fixed_mu_spec(eq, n, fixed_mu_b, direction)
        if direction == Direction.MAX:
            return BlockSpec.of((B, 1))

        if eq.kind == EquationKind.SCHUR_LIKE and eq.a == 1:
            return BlockSpec.of((R, 4), (B, 6), (R, 1))
        if eq.kind == EquationKind.SCHUR_LIKE:
            a = eq.a
            tail = sympy.Rational(1, a + 1)
            return BlockSpec.of((R, 1), (B, a + tail), (R, tail))
        if eq.kind == EquationKind.FOUR_VAR:
            root = 10 - sympy.sqrt(3)
            return BlockSpec.of((R, 3 * root), (B, (6 + sympy.sqrt(3)) * root), (R, root))

        a, b = eq.a, eq.b
        periodic = n if a > b else a * n // b
        blocks: List[Tuple[Color, int]] = []
        for _ in range(periodic // a):
            blocks += [(R, a - 1), (B, 1)]
        blocks.append((R, n - a * (periodic // a)))
        return BlockSpec.of(*blocks)

    @staticmethod
    def _fixed_mu_spec(eq: Equation, n: int, mu_b: int, direction: Direction) -> BlockSpec:
        if eq != Equation.schur():
            raise ValueError("Fixed mu_B recipes exist for x + y = z only")
        if not n <= 2 * mu_b <= 2 * n:
            raise ValueError(f"mu_B must lie in [n/2, n], got mu_B={mu_b}, n={n}")
        half, quarter = sympy.Rational(n, 2), sympy.Rational(mu_b, 4)
        if 3 * mu_b > 2 * n:
            if direction == Direction.MIN:
                return BlockSpec.of((R, n - mu_b), (B, mu_b))
            return BlockSpec.of((B, mu_b), (R, n - mu_b))
        if direction == Direction.MIN:
            return BlockSpec.of((R, half - quarter), (B, mu_b), (R, half - 3 * quarter))
        return BlockSpec.of((R, half - 3 * quarter), (B, mu_b), (R, half - quarter))

    @staticmethod
    def canonical_coloring(
        eq: Equation,
        n: int,
        fixed_mu_b: Optional[int] = None,
        direction: Direction = Direction.MIN,
        klass: SolutionClass = SolutionClass.MONO,
    ) -> Coloring:
        spec = TheoryService.canonical_spec(eq, n, fixed_mu_b, direction, klass)
        r = 3 if klass == SolutionClass.RAINBOW else 2
        return ColoringService.from_blocks(n, spec, r=r)

    @staticmethod
    def fit_leading_coefficient(
        ns: Sequence[int], counts: Sequence[int], power: int = 2
    ) -> Tuple[float, float]:
        """Least-squares fit count = alpha * n**power + beta * n**(power - 1)"""
        if len(ns) != len(counts) or len(ns) < 2:
            raise ValueError("Fitting needs at least two (n, count) points")
        x = np.asarray(ns, dtype=np.float64)
        design = np.column_stack([x**power, x ** (power - 1)])
        solution, *_ = np.linalg.lstsq(design, np.asarray(counts, dtype=np.float64), rcond=None)
        return float(solution[0]), float(solution[1])

    @staticmethod
    def verify(
        eq: Equation,
        n_list: Sequence[int],
        klass: SolutionClass = SolutionClass.MONO,
        exhaustive_limit: Optional[int] = None,
    ) -> VerifyReport:
        """
        Count the canonical coloring at each n, compare with the prediction, add the
        exhaustive optimum when the space is small and fit the leading coefficient
        """
        limit = settings.VERIFY_EXHAUSTIVE_LIMIT if exhaustive_limit is None else exhaustive_limit
        rainbow = klass == SolutionClass.RAINBOW
        direction = Direction.MAX if rainbow else Direction.MIN
        r = 3 if rainbow else 2
        power = eq.arity - 1
        objective = Objective(equation=eq, klass=klass, direction=direction)
        search = get_search_service(budget=limit, threads=1)

        rows: List[VerifyRow] = []
        status = ClaimStatus.THEOREM
        alpha_predicted: Optional[float] = None
        for n in n_list:
            coloring = TheoryService.canonical_coloring(eq, n, direction=direction, klass=klass)
            count = CountingService.class_value(coloring, eq, klass)
            prediction = (
                TheoryService.predicted_max_rainbow(n) if rainbow else TheoryService.predicted_min(eq, n)
            )
            status = prediction.status
            if prediction.coefficient is not None:
                alpha_predicted = float(sympy.N(sympy.sympify(prediction.coefficient)))

            exhaustive_opt = None
            try:
                exhaustive_opt = search.exhaustive(n, r, objective).best_value
            except BudgetExceededError:
                logger.debug(f"Skipping exhaustive optimum for {eq.text}, n={n}")

            gap = None
            if prediction.leading_value is not None:
                gap = count - prediction.leading_value
            rows.append(
                VerifyRow(
                    equation=eq.text,
                    n=n,
                    canonical_count=count,
                    predicted=prediction.leading_value,
                    gap=gap,
                    exhaustive_opt=exhaustive_opt,
                )
            )

        alpha_fit = beta_fit = None
        if len(set(n_list)) >= 2:
            alpha_fit, beta_fit = TheoryService.fit_leading_coefficient(
                [row.n for row in rows], [row.canonical_count for row in rows], power
            )
            rows = [row.model_copy(update={"alpha_fit": alpha_fit}) for row in rows]

        report = VerifyReport(
            equation=eq.text,
            status=status,
            rows=rows,
            alpha_fit=alpha_fit,
            beta_fit=beta_fit,
            alpha_predicted=alpha_predicted,
        )
        if report.relative_error is not None:
            logger.info(
                f"{eq.text}: fitted alpha {alpha_fit:.6g} vs predicted {alpha_predicted:.6g} "
                f"({report.relative_error:.2%})"
            )
        return report


predicted_min = TheoryService.predicted_min
predicted_max_nonmono = TheoryService.predicted_max_nonmono
predicted_max_rainbow = TheoryService.predicted_max_rainbow
predicted_fixed_mu = TheoryService.predicted_fixed_mu
canonical_coloring = TheoryService.canonical_coloring
fit_leading_coefficient = TheoryService.fit_leading_coefficient
verify = TheoryService.verify
