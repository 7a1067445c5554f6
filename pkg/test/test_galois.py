"""Tests for cyclotomic arithmetic and the branch action on u-gamma curves."""

import cmath
from fractions import Fraction
from typing import Dict

import pytest

from src.galois.model import CycloScalar, CycloSeries, zeta_complex
from src.galois.services.galois_service import galois_service
from src.jacrep.model import VerificationStatus
from src.jacrep.services.identity_service import identity_service
from src.polycore.model import Poly, PolyMap
from src.polycore.services.jacobian_service import jacobian_service
from src.pseries.model import PSeries
from src.uvrep.model import GAMMA, INVERSE_U, ABExpansion, UVRep
from src.uvrep.services.expansion_service import expansion_service, u_power, w_power
from src.utils.exceptions import TruncationInsufficient, UnsupportedOrder

g = Poly.variable(1, 0)


def _rep(m: int) -> UVRep:
    """A rep of order m with nonzero h_0, h_1 and h_2."""
    N = m + 2
    h = (Fraction(1), Fraction(2), Fraction(-1)) + (Fraction(0),) * (N - 3)
    return UVRep(m=m, N=N, h=h)


# ============================================================================
# Cyclotomic scalars
# ============================================================================


def test_cyclotomic_reductions() -> None:
    assert CycloScalar.zeta_power(3, 2).coeffs == (-1, -1)
    assert CycloScalar.zeta_power(4, 2) == CycloScalar.rational(4, -1)
    assert CycloScalar.zeta_power(6, 3) == CycloScalar.rational(6, -1)
    assert CycloScalar.zeta_power(2, 1) == CycloScalar.rational(2, -1)
    assert CycloScalar.zeta_power(6, -1) == CycloScalar.zeta_power(6, 5)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_zeta_powers_multiply(m: int) -> None:
    zeta = CycloScalar.zeta_power(m, 1)
    product = CycloScalar.rational(m, 1)
    for k in range(1, m + 1):
        product = product * zeta
        assert product == CycloScalar.zeta_power(m, k)
        assert complex(product) == pytest.approx(zeta_complex(m, k))
    assert product == CycloScalar.rational(m, 1)


def test_scalar_arithmetic() -> None:
    a = CycloScalar(3, [1, 2])
    b = CycloScalar(3, [Fraction(1, 2), -1])
    assert (a + b) - b == a
    assert (a * b).is_rational() is False
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert (a - a).is_zero()
    with pytest.raises(ValueError):
        _ = a + CycloScalar.rational(4, 1)
    with pytest.raises(UnsupportedOrder):
        CycloScalar(5, [1])


def test_cyclo_series_multiplication_reduces() -> None:
    """(zeta w) * (zeta w) = zeta^2 w^2 = -w^2 for order 4."""
    w = PSeries.monomial(1, 1, variable=INVERSE_U, param_names=GAMMA)
    zeta_w = CycloSeries.from_series(4, w).scale(CycloScalar.zeta_power(4, 1))
    square = zeta_w * zeta_w
    assert square.rational_part() == -(w * w)
    assert (zeta_w**4).rational_part() == w**4
    assert zeta_w.evaluate(0.5, (2.0,)) == pytest.approx(0.5j)


def test_cyclo_series_evaluates_parameter_dependent_parts() -> None:
    """(1 + gamma w) + zeta^2 (gamma^2 w^2) for order 3 at w = 0.5, gamma = 1.5 - i."""
    gamma = 1.5 - 1j
    base = w_power(0, 1) + w_power(1, g)
    top = w_power(2, g**2)
    series = CycloSeries.from_series(3, base) + CycloSeries.from_series(3, top).scale(
        CycloScalar.zeta_power(3, 2)
    )
    expected = (1 + gamma * 0.5) + zeta_complex(3, 2) * gamma**2 * 0.25
    assert series.evaluate(0.5, (gamma,)) == pytest.approx(expected)
    assert series.evaluate(0.5, (2.0,)) != pytest.approx(series.evaluate(0.5, (gamma,)))


# ============================================================================
# Action on curves
# ============================================================================


def test_f1_action(reps: Dict[str, UVRep]) -> None:
    """For f1 sigma sends u to -u and gamma to gamma + 2u^3."""
    action = galois_service.derive_sigma(reps["f1"])
    assert not action.approximate
    assert action.zeta == pytest.approx(-1)
    assert action.gamma_image is not None
    assert action.gamma_image.rational_part() == w_power(0, g) + u_power(3, 2)
    assert galois_service.sigma_point(action, 2, 1) == pytest.approx((-2, 17))


def test_f1_psi_is_invariant(reps: Dict[str, UVRep], f1_expansion: ABExpansion) -> None:
    """psi1 = 2 + 6 gamma/u^3 + 3 gamma^2/u^6 is fixed by sigma."""
    action = galois_service.derive_sigma(reps["f1"])
    psi1 = f1_expansion.b.param_partial(0)
    assert psi1 == w_power(0, 2) + w_power(3, 6 * g) + w_power(6, 3 * g**2)
    assert galois_service.apply_to_series(action, psi1).rational_part() == psi1

    record = galois_service.check_equivariance(f1_expansion, reps["f1"], action)
    assert record.status == VerificationStatus.PASS
    assert record.residual == "0"


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_curve_is_fixed(m: int) -> None:
    for j in range(m):
        record = galois_service.verify_curve_invariance(galois_service.derive_sigma(_rep(m), j))
        assert record.status == VerificationStatus.PASS


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_group_law(m: int) -> None:
    """sigma^a followed by sigma^b is sigma^(a+b), and sigma^m is the identity."""
    rep = _rep(m)
    one = galois_service.derive_sigma(rep, 1)
    image = galois_service.derive_sigma(rep, 0).gamma_image
    assert image is not None
    assert image.rational_part() == w_power(0, g)
    for k in range(1, m + 1):
        image = galois_service.apply_to_series(one, image)
        expected = galois_service.derive_sigma(rep, k).gamma_image
        assert expected is not None
        assert (image - expected).is_zero()
    assert image.rational_part() == w_power(0, g)


@pytest.mark.parametrize("m", [3, 4, 6])
def test_exact_action_matches_floating_point(m: int) -> None:
    rep = _rep(m)
    action = galois_service.derive_sigma(rep, 1)
    assert action.gamma_image is not None
    u, gamma = 1.7 - 0.4j, 0.3 + 2.1j
    su, sgamma = galois_service.sigma_point(action, u, gamma)
    assert su == pytest.approx(cmath.exp(2j * cmath.pi / m) * u)
    assert action.gamma_image.evaluate(1 / u, (gamma,)) == pytest.approx(sgamma)
    assert expansion_service.curve_eval(rep, sgamma, su) == pytest.approx(
        expansion_service.curve_eval(rep, gamma, u)
    )


def test_equivariance_with_nonzero_k() -> None:
    """b = gamma/u on m = 2, N = 5: K = 1 and sigma(psi1) = -psi1."""
    rep = UVRep(m=2, N=5, h=(Fraction(0),) * 5)
    exp = ABExpansion(a=w_power(0, Poly.zero(1)), b=w_power(1, g))
    action = galois_service.derive_sigma(rep)
    assert galois_service.check_equivariance(exp, rep, action).status == VerificationStatus.PASS
    assert galois_service.check_equivariance(exp, rep, action, K=0).status == VerificationStatus.FAIL


def test_equivariance_fails_on_perturbed_f1(
    reps: Dict[str, UVRep], f1_expansion: ABExpansion
) -> None:
    exp = ABExpansion(a=f1_expansion.a, b=f1_expansion.b + w_power(1, g))
    action = galois_service.derive_sigma(reps["f1"])
    record = galois_service.check_equivariance(exp, reps["f1"], action)
    assert record.status == VerificationStatus.FAIL
    assert record.residual != "0"


def test_apply_sigma_to_rational_entry(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f1_expansion: ABExpansion
) -> None:
    jdet = jacobian_service.jacobian_determinant(maps["f1"])
    r1 = identity_service.uv_jacobian(f1_expansion, reps["f1"], jdet).r1
    action = galois_service.derive_sigma(reps["f1"])
    image = galois_service.apply_sigma(action, r1)
    assert image.denominator is not None
    u, gamma = 2.5, 0.75
    su, sgamma = galois_service.sigma_point(action, u, gamma)
    assert image.evaluate(gamma, u) == pytest.approx(r1.evaluate(sgamma, su))


def test_unsupported_order_is_approximate() -> None:
    rep = UVRep(m=5, N=6, h=(Fraction(0),) * 6)
    action = galois_service.derive_sigma(rep)
    assert action.approximate
    assert action.gamma_image is None
    with pytest.raises(UnsupportedOrder):
        galois_service.apply_to_series(action, w_power(1, g))
    exp = ABExpansion(a=w_power(0, g), b=w_power(0, g) + w_power(1, g))
    record = galois_service.check_equivariance(exp, rep, action)
    assert record.status == VerificationStatus.INAPPLICABLE
    su, sgamma = galois_service.sigma_point(action, 1.0, 2.0)
    assert su == pytest.approx(zeta_complex(5))
    assert sgamma == pytest.approx(zeta_complex(5, 1) * 2.0)


def test_truncated_series_can_lose_every_term(reps: Dict[str, UVRep]) -> None:
    action = galois_service.derive_sigma(reps["f1"])
    series = PSeries(1, {0: g**2}, 1, INVERSE_U, GAMMA)
    with pytest.raises(TruncationInsufficient):
        galois_service.apply_to_series(action, series)
