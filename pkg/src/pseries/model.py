"""Truncated Laurent series in one formal variable with polynomial coefficients."""

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.polycore.model import Poly, RatLike, default_names, to_rat
from src.utils.exceptions import ParamArityMismatch, TruncationInsufficient

Coefficient = Union[Poly, RatLike]


def min_trunc(*truncs: Optional[int]) -> Optional[int]:
    """Minimum of truncation orders where None means exact (no O-term)."""
    finite = [t for t in truncs if t is not None]
    return min(finite) if finite else None


class PSeries:
    """
    Σ c_k s^k with c_k polynomials in `param_arity` auxiliary parameters.

    `trunc` is the largest exponent whose coefficient is known; everything
    above it is O(s^(trunc+1)). trunc = None marks an exact series, i.e. a
    finite Laurent polynomial. A truncated series whose known coefficients
    all vanish has valuation trunc + 1; the exact zero series has no
    valuation.
    """

    __slots__ = ("param_arity", "trunc", "_coeffs", "variable", "param_names")

    param_arity: int
    trunc: Optional[int]
    _coeffs: Mapping[int, Poly]
    variable: str
    param_names: Tuple[str, ...]

    def __init__(
        self,
        param_arity: int,
        coeffs: Optional[Mapping[int, Coefficient]] = None,
        trunc: Optional[int] = None,
        variable: str = "s",
        param_names: Optional[Sequence[str]] = None,
    ):
        cleaned: Dict[int, Poly] = {}
        for k, c in (coeffs or {}).items():
            k = int(k)
            if trunc is not None and k > trunc:
                continue
            poly = c if isinstance(c, Poly) else Poly.constant(param_arity, to_rat(c))
            if poly.arity != param_arity:
                raise ParamArityMismatch(
                    f"coefficient of s^{k} has arity {poly.arity}, expected {param_arity}"
                )
            if not poly.is_zero():
                cleaned[k] = poly
        names = (
            tuple(param_names)
            if param_names is not None
            else default_names(param_arity, "p")
        )
        object.__setattr__(self, "param_arity", param_arity)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_coeffs", MappingProxyType(cleaned))
        object.__setattr__(self, "variable", variable)
        object.__setattr__(self, "param_names", names)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("PSeries is immutable")

    def __reduce__(self) -> Tuple[type, Tuple[object, ...]]:
        return (
            PSeries,
            (
                self.param_arity,
                dict(self._coeffs),
                self.trunc,
                self.variable,
                self.param_names,
            ),
        )

    # ------------------------------------------------------------------ #
    # Constructors
    # ------------------------------------------------------------------ #

    def like(
        self, coeffs: Mapping[int, Poly], trunc: Optional[int]
    ) -> "PSeries":
        """New series sharing this one's parameters and display names."""
        return PSeries(
            self.param_arity, coeffs, trunc, self.variable, self.param_names
        )

    @classmethod
    def constant(
        cls,
        value: Coefficient,
        param_arity: int,
        trunc: Optional[int] = None,
        variable: str = "s",
        param_names: Optional[Sequence[str]] = None,
    ) -> "PSeries":
        return cls(param_arity, {0: value}, trunc, variable, param_names)

    @classmethod
    def monomial(
        cls,
        exponent: int,
        param_arity: int,
        coeff: Coefficient = 1,
        variable: str = "s",
        param_names: Optional[Sequence[str]] = None,
    ) -> "PSeries":
        return cls(param_arity, {exponent: coeff}, None, variable, param_names)

    # ------------------------------------------------------------------ #
    # Inspection
    # ------------------------------------------------------------------ #

    @property
    def coeffs(self) -> Mapping[int, Poly]:
        return self._coeffs

    @property
    def is_exact(self) -> bool:
        return self.trunc is None

    @property
    def valuation(self) -> Optional[int]:
        if self._coeffs:
            return min(self._coeffs)
        return None if self.trunc is None else self.trunc + 1

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._coeffs

    def degree(self) -> Optional[int]:
        return max(self._coeffs) if self._coeffs else None

    def coeff(self, k: int) -> Poly:
        if self.trunc is not None and k > self.trunc:
            raise TruncationInsufficient(
                f"coefficient of {self.variable}^{k} is beyond the truncation O({self.variable}^{self.trunc + 1})"
            )
        return self._coeffs.get(k, Poly.zero(self.param_arity))

    def leading_coefficient(self) -> Poly:
        v = self.valuation
        if v is None or not self._coeffs:
            raise TruncationInsufficient("series has no known nonzero coefficient")
        return self._coeffs[v]

    def items(self) -> Iterator[Tuple[int, Poly]]:
        return iter(sorted(self._coeffs.items()))

    def _check_params(self, other: "PSeries") -> None:
        if other.param_arity != self.param_arity:
            raise ParamArityMismatch(
                f"parameter arity {self.param_arity} does not match {other.param_arity}"
            )

    # ------------------------------------------------------------------ #
    # Arithmetic
    # ------------------------------------------------------------------ #

    def _lift(self, other: object) -> Optional["PSeries"]:
        if isinstance(other, PSeries):
            self._check_params(other)
            return other
        if isinstance(other, Poly):
            if other.arity != self.param_arity:
                raise ParamArityMismatch(
                    f"parameter arity {self.param_arity} does not match {other.arity}"
                )
            return self.like({0: other}, None)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.like({0: Poly.constant(self.param_arity, other)}, None)
        return None

    def __add__(self, other: Union["PSeries", Poly, int, Fraction]) -> "PSeries":
        b = self._lift(other)
        if b is None:
            return NotImplemented
        trunc = min_trunc(self.trunc, b.trunc)
        result = dict(self._coeffs)
        for k, c in b._coeffs.items():
            result[k] = result[k] + c if k in result else c
        return self.like(result, trunc)

    __radd__ = __add__

    def __neg__(self) -> "PSeries":
        return self.like({k: -c for k, c in self._coeffs.items()}, self.trunc)

    def __sub__(self, other: Union["PSeries", Poly, int, Fraction]) -> "PSeries":
        b = self._lift(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: Union[Poly, int, Fraction]) -> "PSeries":
        return (-self) + other

    def scale(self, factor: Union[Poly, int, Fraction]) -> "PSeries":
        """Multiply every coefficient by a parameter polynomial or scalar."""
        if isinstance(factor, Poly) and factor.arity != self.param_arity:
            raise ParamArityMismatch(
                f"parameter arity {self.param_arity} does not match {factor.arity}"
            )
        return self.like({k: c * factor for k, c in self._coeffs.items()}, self.trunc)

    def __mul__(self, other: Union["PSeries", Poly, int, Fraction]) -> "PSeries":
        if not isinstance(other, PSeries):
            if isinstance(other, (Poly, int, Fraction)) and not isinstance(other, bool):
                return self.scale(other)
            return NotImplemented
        b = self._lift(other)
        assert b is not None
        if (self.is_exact and self.is_zero()) or (b.is_exact and b.is_zero()):
            return self.like({}, None)
        va, vb = self.valuation, b.valuation
        assert va is not None and vb is not None
        trunc = min_trunc(
            None if self.trunc is None else self.trunc + vb,
            None if b.trunc is None else b.trunc + va,
        )
        result: Dict[int, Poly] = {}
        for i, ci in self._coeffs.items():
            for j, cj in b._coeffs.items():
                k = i + j
                if trunc is not None and k > trunc:
                    continue
                prod = ci * cj
                result[k] = result[k] + prod if k in result else prod
        return self.like(result, trunc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PSeries":
        if exponent < 0:
            raise ValueError("use the series services for negative powers")
        result = self.like({0: Poly.constant(self.param_arity, 1)}, None)
        for _ in range(exponent):
            result = result * self
        return result

    def shift(self, k: int) -> "PSeries":
        """Multiply by s^k (k may be negative)."""
        trunc = None if self.trunc is None else self.trunc + k
        return self.like({e + k: c for e, c in self._coeffs.items()}, trunc)

    def truncate_to(self, order: int) -> "PSeries":
        """Forget every coefficient above `order`."""
        return self.like(self._coeffs, min_trunc(self.trunc, order))

    def polynomial_part(self, order: int) -> "PSeries":
        """The exact Laurent polynomial Σ_{k <= order} c_k s^k."""
        if self.trunc is not None and order > self.trunc:
            raise TruncationInsufficient(
                f"cannot keep terms up to {order}: only known up to {self.trunc}"
            )
        return self.like({k: c for k, c in self._coeffs.items() if k <= order}, None)

    def map_coefficients(self, fn: Callable[[Poly], Poly]) -> "PSeries":
        return self.like({k: fn(c) for k, c in self._coeffs.items()}, self.trunc)

    def derivative(self) -> "PSeries":
        """Formal d/ds."""
        trunc = None if self.trunc is None else self.trunc - 1
        return self.like({k - 1: c * k for k, c in self._coeffs.items() if k}, trunc)

    def param_partial(self, index: int) -> "PSeries":
        """Coefficientwise partial derivative in parameter `index`."""
        return self.map_coefficients(lambda c: c.partial(index))

    def rename(
        self, variable: Optional[str] = None, param_names: Optional[Sequence[str]] = None
    ) -> "PSeries":
        return PSeries(
            self.param_arity,
            self._coeffs,
            self.trunc,
            variable or self.variable,
            param_names if param_names is not None else self.param_names,
        )

    # ------------------------------------------------------------------ #
    # Comparison and evaluation
    # ------------------------------------------------------------------ #

    def __eq__(self, other: object) -> bool:
        """Equal coefficients and equal truncation order (display names ignored)."""
        if not isinstance(other, PSeries):
            return NotImplemented
        return (
            self.param_arity == other.param_arity
            and self.trunc == other.trunc
            and dict(self._coeffs) == dict(other._coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.param_arity, self.trunc, frozenset(self._coeffs.items())))

    def agrees_with(self, other: "PSeries") -> bool:
        """Equality of the coefficients both series know."""
        self._check_params(other)
        limit = min_trunc(self.trunc, other.trunc)
        keys = set(self._coeffs) | set(other._coeffs)
        return all(
            self.coeff(k) == other.coeff(k)
            for k in keys
            if limit is None or k <= limit
        )

    def evaluate(self, x: complex, params: Sequence[complex] = ()) -> complex:
        """Sum of the known terms at s = x."""
        return sum(
            (c.evaluate(params) * x**k for k, c in self._coeffs.items()), 0j
        )

    # ------------------------------------------------------------------ #
    # Printing
    # ------------------------------------------------------------------ #

    def _power(self, k: int) -> str:
        if k == 1:
            return self.variable
        return f"{self.variable}^{k}"

    def format(self) -> str:
        """Ascending-exponent text such as "2*z + z^2 - e*z^3 + O(z^4)"."""
        pieces: List[str] = []
        for k, c in self.items():
            negative = len(c) == 1 and next(iter(c.terms.values())) < 0
            shown = -c if negative else c
            text = shown.format(self.param_names)
            if len(shown) > 1:
                text = f"({text})"
            if k == 0:
                body = text
            elif text == "1":
                body = self._power(k)
            else:
                body = f"{text}*{self._power(k)}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        if self.trunc is not None:
            tail = f"O({self._power(self.trunc + 1)})"
            pieces.append(f"+ {tail}" if pieces else tail)
        return " ".join(pieces) if pieces else "0"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"PSeries({self.format()!r})"


# ============================================================================
# Blowup chart chain
# ============================================================================


@dataclass(frozen=True)
class ChartStep:
    """
    One monoidal-transformation chart: the new coordinate `name` is
    (numerator - numerator_center) / (denominator - denominator_center),
    taken in the chart where the denominator generates the exceptional divisor.
    """

    name: str
    numerator: str
    denominator: str
    numerator_center: Fraction = Fraction(0)
    denominator_center: Fraction = Fraction(0)

    def describe(self) -> str:
        def shifted(coord: str, center: Fraction) -> str:
            if not center:
                return coord
            sign = "-" if center > 0 else "+"
            return f"({coord} {sign} {abs(center)})"

        return (
            f"{self.name} = {shifted(self.numerator, self.numerator_center)}"
            f" / {shifted(self.denominator, self.denominator_center)}"
        )


@dataclass
class BlowupDemoReport:
    """Everything the worked blowup-chain walkthrough computes."""

    chain: List[ChartStep]
    t_of_s: PSeries
    x2_of_s: PSeries
    s_of_z: PSeries
    x2_of_z: PSeries
    parameter_index: Optional[int]
    kept_order: Optional[int]
    trajectory: Tuple[PSeries, PSeries]
    limits: List[Poly]
    expected: List[Poly]
    notes: List[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return self.limits == self.expected
