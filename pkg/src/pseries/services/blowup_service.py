from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.config import settings
from src.polycore.model import Poly
from src.pseries.model import BlowupDemoReport, ChartStep, PSeries
from src.pseries.services.series_service import series_service
from src.utils.exceptions import DivisionByZeroValuation, TruncationInsufficient
from src.utils.logger import logger

log = logger(__name__)

PARAM = ("e",)

# Charts of the worked projective-plane example, starting from the trajectory
# coordinates (x2, t) in the chart X1 = 1
PLANE_CHAIN: List[ChartStep] = [
    ChartStep("u", "x2", "t"),
    ChartStep("w", "t", "u", denominator_center=Fraction(2)),
    ChartStep("v", "w", "u", numerator_center=Fraction(1), denominator_center=Fraction(2)),
]


def _e() -> Poly:
    return Poly.variable(1, 0)


class BlowupService:
    """Chart limits along explicit blowup chains."""

    def chart_limits(
        self,
        chain: Sequence[ChartStep],
        trajectory: Tuple[PSeries, PSeries],
        order: Optional[int] = None,
    ) -> List[Poly]:
        """
        Write every chart coordinate of `chain` as a series in the trajectory
        parameter and return its constant term, the limit at the centre.

        `trajectory` is the pair (X2(z), T(z)); `order` bounds the infinite
        quotients that exact inputs produce.
        """
        x2, t = trajectory
        t_val = t.valuation
        if t_val is None or t_val < 1:
            raise DivisionByZeroValuation(
                f"trajectory T must vanish at the centre, got valuation {t_val}"
            )
        order = settings.series_order if order is None else order
        coords: Dict[str, PSeries] = {"x2": x2, "t": t}

        limits: List[Poly] = []
        for step in chain:
            if step.numerator not in coords or step.denominator not in coords:
                raise KeyError(f"chart {step.name} refers to an unknown coordinate")
            num = coords[step.numerator] - step.numerator_center
            den = coords[step.denominator] - step.denominator_center
            if den.is_exact and den.is_zero():
                raise DivisionByZeroValuation(
                    f"denominator of {step.name} vanishes identically"
                )
            quotient = series_service.divide(num, den, order)
            valuation = quotient.valuation
            if valuation is not None and valuation < 0:
                raise DivisionByZeroValuation(
                    f"{step.name} = {quotient} has a pole at the centre"
                )
            if quotient.trunc is not None and quotient.trunc < 0:
                raise TruncationInsufficient(
                    f"{step.name} is known only to O({quotient.variable}^{quotient.trunc + 1})"
                )
            coords[step.name] = quotient
            limits.append(quotient.coeff(0))
            log.debug(f"{step.describe()} -> {quotient}")
        return limits

    def plane_example(self, order: int) -> Tuple[PSeries, PSeries, PSeries, PSeries]:
        """
        Series of the worked example: t(s) = w(u-2) with u = 2 + s and
        w = 1 + e*s + s^2, x2(s) = u*t, the reversion s(z) of z = t(s) and the
        trajectory X2(z) = x2(s(z)).
        """
        e = _e()
        s = PSeries.monomial(1, 1, variable="s", param_names=PARAM)
        u = s + 2
        w = PSeries(1, {0: 1, 1: e, 2: 1}, None, "s", PARAM)
        t_of_s = w * (u - 2)
        x2_of_s = u * t_of_s
        s_of_z = series_service.revert(t_of_s, order, variable="z")
        x2_of_z = series_service.compose(x2_of_s, s_of_z)
        return t_of_s, x2_of_s, s_of_z, x2_of_z

    def blowup_demo(
        self,
        order: Optional[int] = None,
        truncate: bool = True,
        truncate_at: Optional[int] = None,
    ) -> BlowupDemoReport:
        """
        Walk the worked chain. With `truncate` the trajectory is cut at the
        first parameter-dependent index N (or at `truncate_at` when given);
        otherwise the full reverted series is used.
        """
        order = settings.series_order if order is None else order
        t_of_s, x2_of_s, s_of_z, x2_of_z = self.plane_example(order)
        index = series_service.first_parameter_index(x2_of_z)
        z = PSeries.monomial(1, 1, variable="z", param_names=PARAM)

        notes: List[str] = []
        kept: Optional[int] = None
        if truncate:
            kept = truncate_at if truncate_at is not None else index
            if kept is None:
                raise TruncationInsufficient("trajectory never depends on e")
            x2_traj = x2_of_z.polynomial_part(kept)
            if index is not None and kept < index:
                notes.append(
                    f"kept terms up to z^{kept}, below the first e-dependent index {index}"
                )
        else:
            x2_traj = x2_of_z
            notes.append("full reverted trajectory, no truncation")

        limits = self.chart_limits(PLANE_CHAIN, (x2_traj, z), order)
        expected = [Poly.constant(1, 2), Poly.constant(1, 1), _e()]
        report = BlowupDemoReport(
            chain=list(PLANE_CHAIN),
            t_of_s=t_of_s,
            x2_of_s=x2_of_s,
            s_of_z=s_of_z,
            x2_of_z=x2_of_z,
            parameter_index=index,
            kept_order=kept,
            trajectory=(x2_traj, z),
            limits=limits,
            expected=expected,
            notes=notes,
        )
        log.info(
            f"Blowup chain limits {[lim.format(PARAM) for lim in limits]}; match: {report.matches}"
        )
        return report


# Singleton instance
blowup_service = BlowupService()
