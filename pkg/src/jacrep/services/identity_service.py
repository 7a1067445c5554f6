from fractions import Fraction
from typing import List, Optional, Tuple

from src.jacrep.model import LaurentGamma, UVJacobian, VerificationRecord, VerificationStatus
from src.polycore.model import Poly
from src.pseries.model import PSeries
from src.uvrep.model import GAMMA, ABExpansion, UVRep
from src.uvrep.services.expansion_service import (
    expansion_service,
    u_derivative,
    u_power,
)
from src.utils.exceptions import ZeroPsi
from src.utils.logger import logger

log = logger(__name__)


def _record(
    identity: str, residual: PSeries, notes: Optional[List[str]] = None
) -> VerificationRecord:
    status = VerificationStatus.PASS if residual.is_zero() else VerificationStatus.FAIL
    record = VerificationRecord(
        identity=identity, status=status, residual=residual.format(), notes=notes or []
    )
    log.info(f"Identity {identity}: {status.value}")
    return record


class IdentityService:
    """u-gamma Jacobian entries and the identities relating them."""

    def chi_psi(self, exp: ABExpansion) -> Tuple[LaurentGamma, LaurentGamma]:
        """chi1 = da/dgamma and psi1 = db/dgamma."""
        return (
            LaurentGamma(exp.a.param_partial(0)),
            LaurentGamma(exp.b.param_partial(0)),
        )

    def partial_u(self, exp: ABExpansion) -> Tuple[PSeries, PSeries]:
        """(a_u, b_u), the u-derivatives of both image components."""
        return u_derivative(exp.a), u_derivative(exp.b)

    def r3_of(self, exp: ABExpansion, rep: UVRep) -> LaurentGamma:
        """
        r3 = (b_u - psi1 u^(N-m) dC2/du) / (sign m u^(m-1)), where C2 is the
        second curve coordinate. Division by the monomial is exact.
        """
        _, psi1 = self.chi_psi(exp)
        _, b_u = self.partial_u(exp)
        _, second = expansion_service.lead_and_second(rep)
        numerator = b_u - psi1.numerator * u_power(rep.L) * u_derivative(second)
        divisor = Fraction(1, rep.sign * rep.m)
        return LaurentGamma(numerator * u_power(1 - rep.m, divisor))

    def jdet_on_curve(self, rep: UVRep, jdet: Poly) -> PSeries:
        return expansion_service.compose_on_curve(rep, jdet)

    def uv_jacobian(self, exp: ABExpansion, rep: UVRep, jdet: Poly) -> UVJacobian:
        """
        r2 = chi1 u^(N-m), r4 = psi1 u^(N-m) and r1 = (|J| u^(m-N) + chi1 r3) / psi1,
        with |J| composed onto the curve and taken in role order.
        """
        chi1, psi1 = self.chi_psi(exp)
        if psi1.numerator.is_zero():
            raise ZeroPsi("db/dgamma vanishes, r1 is undefined")
        r3 = self.r3_of(exp, rep)
        role_sign = 1 if rep.role == (0, 1) else -1
        jdet_role = self.jdet_on_curve(rep, jdet) * role_sign
        shift = u_power(rep.L)
        r1_num = jdet_role * u_power(-rep.L) + chi1.numerator * r3.numerator
        return UVJacobian(
            r1=LaurentGamma(r1_num, psi1.numerator),
            r2=LaurentGamma(chi1.numerator * shift),
            r3=r3,
            r4=LaurentGamma(psi1.numerator * shift),
        )

    def verify_identity_hh(
        self, exp: ABExpansion, rep: UVRep, jdet: Poly
    ) -> VerificationRecord:
        """psi1 a_u - chi1 b_u = orientation (|J| o C) m u^(2m-N-1), exactly."""
        chi1, psi1 = self.chi_psi(exp)
        a_u, b_u = self.partial_u(exp)
        lhs = psi1.numerator * a_u - chi1.numerator * b_u
        rhs = self.jdet_on_curve(rep, jdet) * u_power(
            2 * rep.m - rep.N - 1, rep.orientation * rep.m
        )
        notes = [f"lhs = {lhs.format()}", f"rhs = {rhs.format()}"]
        return _record("hh", lhs - rhs, notes)

    def verify_theorem_k(
        self, exp: ABExpansion, rep: UVRep, jdet: Optional[Poly] = None
    ) -> VerificationRecord:
        """
        With k the first positive index where a or b is nonzero, the bracket
        a0' b_k - b0' a_k vanishes for k < N - 2m and equals m/k for
        k = N - 2m, provided |J| = 1. k > N - 2m contradicts the bound.
        """
        k = expansion_service.indices(rep, exp).k
        a0p = exp.a.coeff(0).partial(0)
        b0p = exp.b.coeff(0).partial(0)
        bracket = a0p * exp.b.coeff(k) - b0p * exp.a.coeff(k)
        limit = rep.N - 2 * rep.m
        notes = [f"k = {k}, N - 2m = {limit}", f"bracket = {bracket.format(GAMMA)}"]

        if jdet is not None and jdet != 1:
            notes.append(f"|J| = {jdet} is not 1; the bracket identity does not apply")
            log.info("Identity theorem-k: inapplicable")
            return VerificationRecord(
                identity="theorem-k",
                status=VerificationStatus.INAPPLICABLE,
                residual=bracket.format(GAMMA),
                notes=notes,
            )

        if k < limit:
            expected = Poly.zero(1)
        elif k == limit:
            expected = Poly.constant(1, Fraction(rep.orientation * rep.m, k))
        else:
            notes.append("k exceeds N - 2m")
            log.info("Identity theorem-k: fail")
            return VerificationRecord(
                identity="theorem-k",
                status=VerificationStatus.FAIL,
                residual=bracket.format(GAMMA),
                notes=notes,
            )
        residual = bracket - expected
        status = VerificationStatus.PASS if residual.is_zero() else VerificationStatus.FAIL
        log.info(f"Identity theorem-k: {status.value}")
        return VerificationRecord(
            identity="theorem-k",
            status=status,
            residual=residual.format(GAMMA),
            notes=notes,
        )

    def flow_rates(
        self, exp: ABExpansion, rep: UVRep
    ) -> Tuple[LaurentGamma, LaurentGamma]:
        """
        du/dr = (o/m) u^(L-m+1) psi1 and dgamma/dr = -(o/m) u^(L-m+1) b_u with
        o the rep orientation. |J| cancels, so the rates are polynomial in 1/u.
        """
        _, psi1 = self.chi_psi(exp)
        _, b_u = self.partial_u(exp)
        factor = u_power(rep.L - rep.m + 1, Fraction(rep.orientation, rep.m))
        return (
            LaurentGamma(psi1.numerator * factor),
            LaurentGamma(-(b_u * factor)),
        )

    def inverse_power_rate(self, exp: ABExpansion, rep: UVRep) -> LaurentGamma:
        """d(u^-K)/dr = -K u^(-K-1) du/dr."""
        du, _ = self.flow_rates(exp, rep)
        return LaurentGamma(du.numerator * u_power(-rep.K - 1, -rep.K))

    def verify_lemma100(
        self, exp: ABExpansion, rep: UVRep, jdet: Poly
    ) -> VerificationRecord:
        """
        Along the rates from flow_rates the image moves with db/dr = 0 and
        da/dr = |J| o C. Also reports what the unsigned dgamma/dr would do to b.
        """
        chi1, psi1 = self.chi_psi(exp)
        a_u, b_u = self.partial_u(exp)
        du, dgamma = self.flow_rates(exp, rep)
        db = b_u * du.numerator + psi1.numerator * dgamma.numerator
        da = a_u * du.numerator + chi1.numerator * dgamma.numerator
        driven = da - self.jdet_on_curve(rep, jdet)

        unsigned_db = b_u * du.numerator - psi1.numerator * dgamma.numerator
        notes = [
            f"db/dr = {db.format()}",
            f"da/dr - |J| = {driven.format()}",
            "dgamma/dr carries a minus sign; with the unsigned rate "
            f"db/dr would be {unsigned_db.format()}",
        ]
        residual = driven if db.is_zero() else db
        return _record("lemma100", residual, notes)


# Singleton instance
identity_service = IdentityService()
