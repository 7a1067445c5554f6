from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from sympy import integer_nthroot

from src.polycore.model import Poly
from src.pseries.model import PSeries, min_trunc
from src.utils.exceptions import (
    ArityMismatch,
    InnerNotPositiveValuation,
    LeadingNotPerfectPower,
    NotRevertible,
    NotUnit,
    ReversionCheckFailed,
    TruncationInsufficient,
    ValuationNotDivisible,
)
from src.utils.logger import logger

log = logger(__name__)


def _rational_constant(c: Poly, what: str) -> Optional[Fraction]:
    """The value of c when it is a nonzero constant, else None."""
    if c.is_zero() or not c.is_constant():
        log.debug(f"{what}: leading coefficient {c} is not a nonzero constant")
        return None
    return c.constant_term()


def _exact_root(value: Fraction, m: int) -> Optional[Fraction]:
    """The real m-th root of a rational when it is rational, else None."""
    if value < 0 and m % 2 == 0:
        return None
    num, num_exact = integer_nthroot(abs(value.numerator), m)
    den, den_exact = integer_nthroot(value.denominator, m)
    if not (num_exact and den_exact):
        return None
    root = Fraction(int(num), int(den))
    return -root if value < 0 else root


def _target_order(series: PSeries, order: Optional[int], op: str) -> int:
    """Truncation order of an infinite result computed from `series`."""
    target = min_trunc(series.trunc, order)
    if target is None:
        raise TruncationInsufficient(
            f"{op} of an exact series needs an explicit order"
        )
    return target


class SeriesService:
    """Composition, reversion, inversion and roots of PSeries."""

    def compose(self, outer: PSeries, inner: PSeries) -> PSeries:
        """outer(inner(z)); inner must have positive valuation."""
        outer._check_params(inner)
        v_out = outer.valuation
        if v_out is not None and v_out < 0:
            raise InnerNotPositiveValuation(
                f"outer series has negative valuation {v_out}"
            )
        if outer.is_exact and outer.is_zero():
            return inner.like({}, None)
        v_in = inner.valuation
        if v_in is None:
            # inner is exactly zero: only the constant term survives
            return inner.like({0: outer.coeff(0)}, None)
        if v_in < 1:
            raise InnerNotPositiveValuation(
                f"inner series must have valuation >= 1, got {v_in}"
            )

        from_outer = None if outer.trunc is None else (outer.trunc + 1) * v_in - 1
        positive = [k for k in outer.coeffs if k >= 1]
        from_inner = (
            None
            if inner.trunc is None or not positive
            else inner.trunc + (min(positive) - 1) * v_in
        )
        trunc = min_trunc(from_outer, from_inner)

        result = inner.like({}, None)
        power = inner.like({0: Poly.constant(inner.param_arity, 1)}, None)
        top = outer.degree() or 0
        for k in range(top + 1):
            if k:
                power = power * inner
                if trunc is not None:
                    power = power.truncate_to(trunc)
            c = outer.coeffs.get(k)
            if c is not None:
                result = result + power.scale(c)
        if trunc is not None:
            result = result.truncate_to(trunc)
        return result.like(result.coeffs, trunc)

    def revert(
        self, a: PSeries, order: Optional[int] = None, variable: str = "z"
    ) -> PSeries:
        """
        Compositional inverse b with a(b(z)) = z, by undetermined coefficients.
        The result is checked by back-substitution before it is returned.
        """
        if a.valuation != 1:
            raise NotRevertible(f"reversion needs valuation 1, got {a.valuation}")
        c1 = _rational_constant(a.leading_coefficient(), "revert")
        if c1 is None:
            raise NotRevertible(
                f"leading coefficient {a.leading_coefficient()} is not an invertible constant"
            )
        target = _target_order(a, order, "reversion")
        p = a.param_arity
        inv_c1 = Fraction(1) / c1

        coeffs: Dict[int, Poly] = {1: Poly.constant(p, inv_c1)}
        for n in range(2, target + 1):
            partial = PSeries(p, coeffs, None, variable, a.param_names)
            image = self.compose(a.polynomial_part(n), partial)
            coeffs[n] = image.coeff(n) * (-inv_c1)

        b = PSeries(p, coeffs, target, variable, a.param_names)
        check = self.compose(a, b)
        identity = b.like({1: Poly.constant(p, 1)}, None)
        if not check.agrees_with(identity):
            log.error(f"Reversion back-substitution failed: a(b(z)) = {check}")
            raise ReversionCheckFailed(f"a(b(z)) = {check}, expected {variable}")
        return b

    def invert_unit(self, a: PSeries, order: Optional[int] = None) -> PSeries:
        """Multiplicative inverse of a series with nonzero constant leading term."""
        if a.valuation != 0:
            raise NotUnit(f"unit inversion needs valuation 0, got {a.valuation}")
        c0 = _rational_constant(a.coeff(0), "invert_unit")
        if c0 is None:
            raise NotUnit(f"constant term {a.coeff(0)} is not an invertible constant")
        inv_c0 = Fraction(1) / c0
        if a.is_exact and a.degree() == 0:
            return a.like({0: Poly.constant(a.param_arity, inv_c0)}, None)

        target = _target_order(a, order, "inversion")
        b: Dict[int, Poly] = {0: Poly.constant(a.param_arity, inv_c0)}
        for n in range(1, target + 1):
            acc = Poly.zero(a.param_arity)
            for k, ak in a.coeffs.items():
                if 1 <= k <= n and (n - k) in b:
                    acc = acc + ak * b[n - k]
            b[n] = acc * (-inv_c0)
        return a.like(b, target)

    def divide(
        self, a: PSeries, b: PSeries, order: Optional[int] = None
    ) -> PSeries:
        """
        a / b when the leading coefficient of b is a nonzero rational constant.
        The result may have negative valuation. `order` bounds the inverse of
        the unit part of b when that inverse is an infinite series.
        """
        a._check_params(b)
        v = b.valuation
        if v is None or b.is_zero():
            raise TruncationInsufficient(f"divisor {b} has no known leading term")
        unit = b.shift(-v)
        inverse = self.invert_unit(unit, order)
        return a.shift(-v) * inverse

    def root(self, a: PSeries, m: int, order: Optional[int] = None) -> PSeries:
        """Principal m-th root r with r^m = a to the truncation order."""
        if m < 1:
            raise ValueError(f"root order must be positive, got {m}")
        v = a.valuation
        if v is None or a.is_zero():
            raise TruncationInsufficient("cannot take the root of a zero series")
        if v % m:
            raise ValuationNotDivisible(f"valuation {v} is not divisible by {m}")
        lead = _rational_constant(a.leading_coefficient(), "root")
        root_lead = None if lead is None else _exact_root(lead, m)
        if lead is None or root_lead is None:
            raise LeadingNotPerfectPower(
                f"leading coefficient {a.leading_coefficient()} is not a rational {m}-th power"
            )

        # a = lead * s^v * (1 + w) with val(w) >= 1
        normalized = a.shift(-v).scale(Fraction(1) / lead)
        if normalized.is_exact and normalized.degree() == 0:
            return a.like({v // m: Poly.constant(a.param_arity, root_lead)}, None)
        rel_order = _target_order(
            normalized, None if order is None else order - v // m, "root"
        )
        w = (normalized - 1).truncate_to(rel_order)

        exponent = Fraction(1, m)
        binom = Fraction(1)
        total = w.like({0: Poly.constant(a.param_arity, 1)}, None)
        power = total
        for k in range(1, rel_order + 1):
            binom = binom * (exponent - (k - 1)) / k
            power = (power * w).truncate_to(rel_order)
            if power.is_zero():
                break
            total = total + power.scale(binom)
        total = total.truncate_to(rel_order)
        return total.scale(root_lead).shift(v // m)

    def substitute(self, p: Poly, images: Sequence[PSeries]) -> PSeries:
        """p(images[0], .., images[n-1]) for a polynomial with rational coefficients."""
        if len(images) != p.arity or not images:
            raise ArityMismatch(
                f"expected {p.arity} series for substitution, got {len(images)}"
            )
        first = images[0]
        for image in images[1:]:
            first._check_params(image)
        one = first.like({0: Poly.constant(first.param_arity, 1)}, None)
        powers: List[Dict[int, PSeries]] = [{0: one} for _ in images]

        def power(i: int, e: int) -> PSeries:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        result = first.like({}, None)
        for exps, c in p.terms.items():
            term = one.scale(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def first_parameter_index(self, a: PSeries) -> Optional[int]:
        """The first exponent whose coefficient depends on the parameters."""
        for k, c in a.items():
            if not c.is_constant():
                return k
        return None


# Singleton instance
series_service = SeriesService()
