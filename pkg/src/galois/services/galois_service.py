from typing import Dict, List, Optional, Tuple, Union

from src.galois.model import (
    CycloLaurent,
    CycloScalar,
    CycloSeries,
    SigmaAction,
    is_exact_order,
    zeta_complex,
)
from src.jacrep.model import LaurentGamma, VerificationRecord, VerificationStatus
from src.polycore.model import Poly
from src.pseries.model import PSeries
from src.uvrep.model import ABExpansion, UVRep
from src.uvrep.services.expansion_service import expansion_service, u_power, w_power
from src.utils.exceptions import TruncationInsufficient, UnsupportedOrder
from src.utils.logger import logger

log = logger(__name__)

SeriesLike = Union[PSeries, CycloSeries]


class GaloisService:
    """The cyclic action u -> zeta^j u on a u-gamma curve and its checks."""

    def derive_sigma(self, rep: UVRep, j: int = 1) -> SigmaAction:
        """
        sigma(gamma) = zeta^(j(N-m)) gamma + Σ h_i (zeta^(j(N-m)) - zeta^(j(N-i))) u^(N-i),
        the gamma that keeps the second curve coordinate fixed when u -> zeta^j u.
        """
        m, N = rep.m, rep.N
        power = j % m
        zeta = zeta_complex(m, power)
        if not is_exact_order(m):
            log.warning(f"zeta_{m} has no exact arithmetic here; action is approximate")
            return SigmaAction(rep, m, power, None, True, zeta)

        factor = CycloScalar.zeta_power(m, power * (N - m))
        gamma = CycloSeries.from_series(m, w_power(0, Poly.variable(1, 0)))
        image = gamma.scale(factor)
        for i, h in enumerate(rep.h):
            if not h:
                continue
            coeff = factor - CycloScalar.zeta_power(m, power * (N - i))
            if not coeff.is_zero():
                image = image + CycloSeries.from_series(m, u_power(N - i, h)).scale(coeff)
        log.debug(f"sigma^{power} on m={m}, N={N}: gamma -> {image}")
        return SigmaAction(rep, m, power, image, False, zeta)

    def _exact_image(self, action: SigmaAction) -> CycloSeries:
        if action.approximate or action.gamma_image is None:
            raise UnsupportedOrder(
                f"order {action.m} has no exact action; use sigma_point instead"
            )
        return action.gamma_image

    def apply_to_series(self, action: SigmaAction, series: SeriesLike) -> CycloSeries:
        """
        Substitute w -> zeta^-j w and gamma -> sigma(gamma) into a series in
        w = 1/u. Constants in the cyclotomic field are fixed by the action.
        """
        image = self._exact_image(action)
        m = action.m
        if isinstance(series, CycloSeries):
            result: Optional[CycloSeries] = None
            for i, part in enumerate(series.parts):
                term = self.apply_to_series(action, part).scale(
                    CycloScalar.zeta_power(m, i)
                )
                result = term if result is None else result + term
            assert result is not None
            return result

        if action.is_identity:
            return CycloSeries.from_series(m, series)

        # positive powers of u that sigma(gamma) introduces
        lift = max((-k for k in image.parts[0].coeffs if k < 0), default=0)
        for part in image.parts[1:]:
            lift = max([lift] + [-k for k in part.coeffs if k < 0])
        gamma_degree = max((c.total_degree() for c in series.coeffs.values()), default=0)

        powers: Dict[int, CycloSeries] = {}

        def gamma_power(e: int) -> CycloSeries:
            if e not in powers:
                powers[e] = image**e
            return powers[e]

        zero = series.like({}, None)
        result = CycloSeries.from_series(m, zero)
        for k, c in series.items():
            substituted = CycloSeries.from_series(m, zero)
            for exps, coeff in c.terms.items():
                substituted = substituted + gamma_power(exps[0]).scale(
                    CycloScalar.rational(m, coeff)
                )
            rotation = CycloScalar.zeta_power(m, -action.j * k)
            result = result + substituted.scale(rotation).shift(k)

        if series.trunc is not None:
            trunc = series.trunc - gamma_degree * lift
            valuation = series.valuation
            if valuation is not None and trunc < valuation:
                raise TruncationInsufficient(
                    f"series known to O(w^{series.trunc + 1}) loses every term under "
                    f"sigma (gamma degree {gamma_degree}, u^{lift} in sigma(gamma))"
                )
            result = result.truncate_to(trunc)
        return result

    def apply_sigma(
        self, action: SigmaAction, expr: Union[LaurentGamma, CycloLaurent]
    ) -> CycloLaurent:
        """sigma applied to numerator and denominator."""
        denominator = None
        if expr.denominator is not None:
            denominator = self.apply_to_series(action, expr.denominator)
        return CycloLaurent(self.apply_to_series(action, expr.numerator), denominator)

    def sigma_point(
        self, action: SigmaAction, u: complex, gamma: complex
    ) -> Tuple[complex, complex]:
        """The action on a point (u, gamma), in floating point."""
        rep = action.rep
        m, N, j = rep.m, rep.N, action.j
        factor = zeta_complex(m, j * (N - m))
        image = factor * gamma
        for i, h in enumerate(rep.h):
            if h:
                image += float(h) * (factor - zeta_complex(m, j * (N - i))) * u ** (N - i)
        return action.zeta * u, image

    def verify_curve_invariance(self, action: SigmaAction) -> VerificationRecord:
        """Both curve coordinates are fixed by the action."""
        notes: List[str] = []
        failed = False
        for index, coordinate in enumerate(expansion_service.curve_series(action.rep)):
            residual = self.apply_to_series(action, coordinate) - CycloSeries.from_series(
                action.m, coordinate
            )
            notes.append(f"x{index + 1}: sigma(x) - x = {residual}")
            failed = failed or not residual.is_zero()
        status = VerificationStatus.FAIL if failed else VerificationStatus.PASS
        log.info(f"Curve invariance under sigma^{action.j}: {status.value}")
        return VerificationRecord("curve-invariance", status, None, notes)

    def check_equivariance(
        self,
        exp: ABExpansion,
        rep: UVRep,
        action: SigmaAction,
        K: Optional[int] = None,
    ) -> VerificationRecord:
        """sigma(psi1) = zeta^(-jK) psi1 with psi1 = db/dgamma."""
        K = rep.K if K is None else K
        notes = [f"m = {action.m}, j = {action.j}, K = {K}"]
        if action.approximate:
            notes.append("approximate action: no exact comparison available")
            log.warning(f"Galois check skipped for order {action.m}")
            return VerificationRecord("galois", VerificationStatus.INAPPLICABLE, None, notes)

        psi1 = exp.b.param_partial(0)
        image = self.apply_to_series(action, psi1)
        expected = CycloSeries.from_series(action.m, psi1).scale(
            CycloScalar.zeta_power(action.m, -action.j * K)
        )
        residual = image - expected
        notes += [f"psi1 = {psi1}", f"sigma(psi1) = {image}"]
        status = VerificationStatus.PASS if residual.is_zero() else VerificationStatus.FAIL
        log.info(f"Identity galois: {status.value}")
        return VerificationRecord("galois", status, residual.format(), notes)


# Singleton instance
galois_service = GaloisService()
