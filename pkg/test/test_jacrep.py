"""Tests for the u-gamma Jacobian entries and the identity checkers."""

from fractions import Fraction
from typing import Dict

import pytest

from src.jacrep.model import VerificationStatus
from src.jacrep.schema import VerificationRecordSchema
from src.jacrep.services.identity_service import identity_service
from src.polycore.model import Poly, PolyMap
from src.polycore.services.jacobian_service import jacobian_service
from src.uvrep.model import ABExpansion, UVRep
from src.uvrep.services.expansion_service import expansion_service, u_power, w_power
from src.utils.exceptions import ZeroPsi

g = Poly.variable(1, 0)


def _perturbed(exp: ABExpansion) -> ABExpansion:
    """b + gamma/u, which breaks every identity."""
    return ABExpansion(a=exp.a, b=exp.b + w_power(1, g))


def _jdet(maps: Dict[str, PolyMap], name: str) -> Poly:
    return jacobian_service.jacobian_determinant(maps[name])


# ============================================================================
# Jacobian entries
# ============================================================================


def test_chi_psi_f0(f0_expansion: ABExpansion) -> None:
    chi1, psi1 = identity_service.chi_psi(f0_expansion)
    assert chi1.numerator == w_power(0)
    assert psi1.numerator == w_power(0) + w_power(2, 2 * g)
    assert chi1.denominator is None


def test_uv_jacobian_f0(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f0_expansion: ABExpansion
) -> None:
    """r2 = u chi1, r4 = u psi1, r3 = gamma/u and r1 reduces to gamma/u."""
    rep = reps["f0"]
    jdet = _jdet(maps, "f0")
    jac = identity_service.uv_jacobian(f0_expansion, rep, jdet)
    assert jac.r2.numerator == u_power(1)
    assert jac.r4.numerator == u_power(1) + w_power(1, 2 * g)
    assert jac.r3.numerator == w_power(1, g)
    assert jac.r3.denominator is None

    assert jac.r1.denominator is not None
    assert jac.r1.numerator == jac.r1.denominator * w_power(1, g)
    assert jac.r1.evaluate(2.0, 4.0) == pytest.approx(0.5)

    # r1 r4 - r2 r3 = |J| o C, cleared of the r1 denominator
    lhs = jac.r1.numerator * jac.r4.numerator - (
        jac.r2.numerator * jac.r3.numerator * jac.r1.denominator
    )
    on_curve = identity_service.jdet_on_curve(rep, jdet)
    assert on_curve == w_power(2, 2 * g**2)
    assert lhs == on_curve * jac.r1.denominator


def test_uv_jacobian_determinant_f1_role_order(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f1_expansion: ABExpansion
) -> None:
    """Columns in role order swap the ambient determinant's sign for f1."""
    rep = reps["f1"]
    jdet = _jdet(maps, "f1")
    jac = identity_service.uv_jacobian(f1_expansion, rep, jdet)
    assert jac.r1.denominator is not None
    lhs = jac.r1.numerator * jac.r4.numerator - (
        jac.r2.numerator * jac.r3.numerator * jac.r1.denominator
    )
    assert lhs == -(identity_service.jdet_on_curve(rep, jdet) * jac.r1.denominator)


@pytest.mark.parametrize("name", ["f0", "f1"])
def test_uv_jacobian_entries_match_ambient_jacobian(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], name: str
) -> None:
    """[[r1, r2], [r3, r4]] is J(f) at C(gamma, u), columns in role order."""
    f, rep = maps[name], reps[name]
    exp = expansion_service.expand_image(rep, f)
    jac = identity_service.uv_jacobian(exp, rep, jacobian_service.jacobian_determinant(f))
    ambient = jacobian_service.jacobian(f)
    lead, second = rep.role
    for gamma, u in [(0.75, 2.5), (-1.3 + 0.4j, 1.7 - 0.6j), (4.0, -3.0)]:
        point = expansion_service.curve_eval(rep, gamma, u)
        entries = {
            "r1": ambient[0][lead],
            "r2": ambient[0][second],
            "r3": ambient[1][lead],
            "r4": ambient[1][second],
        }
        for entry, partial in entries.items():
            value = getattr(jac, entry).evaluate(gamma, u)
            assert value == pytest.approx(partial.evaluate(point), rel=1e-9, abs=1e-12), entry


def test_uv_jacobian_needs_psi(reps: Dict[str, UVRep]) -> None:
    exp = ABExpansion(a=w_power(0, g), b=w_power(1))
    with pytest.raises(ZeroPsi):
        identity_service.uv_jacobian(exp, reps["f0"], Poly.constant(2, 1))


# ============================================================================
# Identities
# ============================================================================


@pytest.mark.parametrize("name", ["f0", "f0-sqrt", "f1"])
def test_identity_hh_passes(
    name: str, maps: Dict[str, PolyMap], reps: Dict[str, UVRep]
) -> None:
    exp = expansion_service.expand_image(reps[name], maps[name])
    record = identity_service.verify_identity_hh(exp, reps[name], _jdet(maps, name))
    assert record.status == VerificationStatus.PASS
    assert record.residual == "0"
    assert record.passed


def test_identity_hh_fails_on_perturbed_expansion(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f0_expansion: ABExpansion
) -> None:
    record = identity_service.verify_identity_hh(
        _perturbed(f0_expansion), reps["f0"], _jdet(maps, "f0")
    )
    assert record.status == VerificationStatus.FAIL
    assert record.residual != "0"
    assert not record.passed


def test_theorem_k_bracket_on_keller_fixture() -> None:
    """a = gamma, b = gamma + 1/u with m = 1, N = 3: k = 1 and the bracket is 1."""
    rep = UVRep(m=1, N=3, h=(Fraction(0),) * 3)
    exp = ABExpansion(a=w_power(0, g), b=w_power(0, g) + w_power(1))
    record = identity_service.verify_theorem_k(exp, rep)
    assert record.status == VerificationStatus.PASS
    assert "k = 1, N - 2m = 1" in record.notes


def test_theorem_k_bracket_must_vanish_below_bound() -> None:
    rep = UVRep(m=1, N=4, h=(Fraction(0),) * 4)
    exp = ABExpansion(a=w_power(0, g), b=w_power(0, g) + w_power(1))
    record = identity_service.verify_theorem_k(exp, rep)
    assert record.status == VerificationStatus.FAIL
    assert record.residual == "1"


def test_theorem_k_inapplicable_for_non_keller(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f0_expansion: ABExpansion
) -> None:
    record = identity_service.verify_theorem_k(f0_expansion, reps["f0"], _jdet(maps, "f0"))
    assert record.status == VerificationStatus.INAPPLICABLE
    assert record.passed


def test_flow_rates_f0_sqrt(reps: Dict[str, UVRep], f0_sqrt_expansion: ABExpansion) -> None:
    """At x = (9, 3) on the u = 3 branch: u = 3, gamma = 27, du/dr = 2.5, dgamma/dr = 18."""
    du, dgamma = identity_service.flow_rates(f0_sqrt_expansion, reps["f0-sqrt"])
    assert du.numerator == u_power(1, Fraction(1, 2)) + w_power(3, g)
    assert dgamma.numerator == w_power(4, 2 * g**2)
    assert du.evaluate(27, 3) == pytest.approx(2.5)
    assert dgamma.evaluate(27, 3) == pytest.approx(18)


def test_inverse_power_rate_vanishes_for_zero_k(
    reps: Dict[str, UVRep], f0_sqrt_expansion: ABExpansion
) -> None:
    assert reps["f0-sqrt"].K == 0
    rate = identity_service.inverse_power_rate(f0_sqrt_expansion, reps["f0-sqrt"])
    assert rate.numerator.is_zero()


@pytest.mark.parametrize("name", ["f0", "f0-sqrt", "f1"])
def test_lemma100_image_rates(
    name: str, maps: Dict[str, PolyMap], reps: Dict[str, UVRep]
) -> None:
    """db/dr = 0 and da/dr = |J| along the u-gamma rates."""
    exp = expansion_service.expand_image(reps[name], maps[name])
    record = identity_service.verify_lemma100(exp, reps[name], _jdet(maps, name))
    assert record.status == VerificationStatus.PASS
    assert record.notes[0] == "db/dr = 0"


def test_lemma100_fails_on_perturbed_expansion(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f0_expansion: ABExpansion
) -> None:
    record = identity_service.verify_lemma100(
        _perturbed(f0_expansion), reps["f0"], _jdet(maps, "f0")
    )
    assert record.status == VerificationStatus.FAIL


def test_record_schema(
    maps: Dict[str, PolyMap], reps: Dict[str, UVRep], f0_expansion: ABExpansion
) -> None:
    record = identity_service.verify_identity_hh(f0_expansion, reps["f0"], _jdet(maps, "f0"))
    payload = VerificationRecordSchema.from_model(record).model_dump()
    assert payload["identity"] == "hh"
    assert payload["status"] == "pass"
    assert payload["notes"][0].startswith("lhs = ")
