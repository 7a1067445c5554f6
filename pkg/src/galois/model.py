"""Exact arithmetic in small cyclotomic fields and the branch action on curves."""

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.polycore.model import Poly, rat_to_str
from src.pseries.model import PSeries, min_trunc
from src.uvrep.model import UVRep
from src.utils.exceptions import UnsupportedOrder

# zeta^d = Σ_i r_i zeta^i for the orders whose cyclotomic polynomial has
# degree d <= 2
CYCLOTOMIC_REDUCTIONS: Dict[int, Tuple[int, ...]] = {
    1: (1,),
    2: (-1,),
    3: (-1, -1),
    4: (-1, 0),
    6: (-1, 1),
}

Rational = Union[int, Fraction]


def is_exact_order(m: int) -> bool:
    return m in CYCLOTOMIC_REDUCTIONS


def zeta_complex(m: int, k: int = 1) -> complex:
    """Floating-point exp(2 pi i k / m)."""
    return cmath.exp(2j * cmath.pi * (k % m) / m)


def _reduce(values: List[Fraction], m: int) -> Tuple[Fraction, ...]:
    reduction = CYCLOTOMIC_REDUCTIONS[m]
    d = len(reduction)
    for e in range(len(values) - 1, d - 1, -1):
        c = values[e]
        if c:
            values[e] = Fraction(0)
            for i, r in enumerate(reduction):
                values[e - d + i] += c * r
    return tuple(values[:d]) + (Fraction(0),) * max(0, d - len(values))


class CycloScalar:
    """
    An element Σ c_i zeta^i of Q(zeta_m), reduced modulo the cyclotomic
    polynomial. Only orders with cyclotomic degree <= 2 are supported.
    """

    __slots__ = ("order", "coeffs")

    order: int
    coeffs: Tuple[Fraction, ...]

    def __init__(self, order: int, coeffs: Sequence[Rational]):
        if not is_exact_order(order):
            raise UnsupportedOrder(f"no exact arithmetic for zeta_{order}")
        object.__setattr__(self, "order", order)
        object.__setattr__(
            self, "coeffs", _reduce([Fraction(c) for c in coeffs], order)
        )

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("CycloScalar is immutable")

    def __reduce__(self) -> Tuple[type, Tuple[int, Tuple[Fraction, ...]]]:
        return (CycloScalar, (self.order, self.coeffs))

    @property
    def degree(self) -> int:
        return len(CYCLOTOMIC_REDUCTIONS[self.order])

    @classmethod
    def rational(cls, order: int, value: Rational) -> "CycloScalar":
        return cls(order, [value])

    @classmethod
    def zeta_power(cls, order: int, k: int) -> "CycloScalar":
        """zeta_m^k for any integer k."""
        values = [Fraction(0)] * (k % order + 1)
        values[-1] = Fraction(1)
        return cls(order, values)

    def _check(self, other: "CycloScalar") -> None:
        if self.order != other.order:
            raise ValueError(f"cannot mix zeta_{self.order} and zeta_{other.order}")

    def __add__(self, other: "CycloScalar") -> "CycloScalar":
        self._check(other)
        return CycloScalar(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "CycloScalar":
        return CycloScalar(self.order, [-c for c in self.coeffs])

    def __sub__(self, other: "CycloScalar") -> "CycloScalar":
        return self + (-other)

    def __mul__(self, other: "CycloScalar") -> "CycloScalar":
        self._check(other)
        product = [Fraction(0)] * (2 * self.degree - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                product[i + j] += a * b
        return CycloScalar(self.order, product)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycloScalar):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __complex__(self) -> complex:
        zeta = zeta_complex(self.order)
        return sum((float(c) * zeta**i for i, c in enumerate(self.coeffs)), 0j)

    def format(self) -> str:
        pieces = []
        for i, c in enumerate(self.coeffs):
            if c:
                basis = "" if i == 0 else "zeta" if i == 1 else f"zeta^{i}"
                if not basis:
                    pieces.append(rat_to_str(c))
                elif c == 1:
                    pieces.append(basis)
                else:
                    pieces.append(f"{rat_to_str(c)}*{basis}")
        return " + ".join(pieces) if pieces else "0"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"CycloScalar(zeta_{self.order}: {self.format()})"


@dataclass(frozen=True)
class CycloSeries:
    """
    Σ_i zeta^i S_i with S_i rational series sharing variable and parameters.
    `parts` has one entry per basis power of the field.
    """

    order: int
    parts: Tuple[PSeries, ...]

    def __post_init__(self) -> None:
        if not is_exact_order(self.order):
            raise UnsupportedOrder(f"no exact arithmetic for zeta_{self.order}")
        degree = len(CYCLOTOMIC_REDUCTIONS[self.order])
        if len(self.parts) != degree:
            raise ValueError(f"expected {degree} parts, got {len(self.parts)}")

    @classmethod
    def from_series(cls, order: int, series: PSeries) -> "CycloSeries":
        zero = series.like({}, None)
        degree = len(CYCLOTOMIC_REDUCTIONS[order])
        return cls(order, (series,) + (zero,) * (degree - 1))

    @property
    def trunc(self) -> Optional[int]:
        return min_trunc(*(p.trunc for p in self.parts))

    def _zero_like(self) -> PSeries:
        return self.parts[0].like({}, None)

    def scale(self, factor: CycloScalar) -> "CycloSeries":
        """Multiply by a cyclotomic constant."""
        if factor.order != self.order:
            raise ValueError(f"cannot mix zeta_{self.order} and zeta_{factor.order}")
        first = self.parts[0]
        constants = tuple(
            first.like({0: Poly.constant(first.param_arity, c)}, None)
            for c in factor.coeffs
        )
        return self * CycloSeries(self.order, constants)

    def __add__(self, other: "CycloSeries") -> "CycloSeries":
        return CycloSeries(self.order, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __neg__(self) -> "CycloSeries":
        return CycloSeries(self.order, tuple(-p for p in self.parts))

    def __sub__(self, other: "CycloSeries") -> "CycloSeries":
        return self + (-other)

    def __mul__(self, other: "CycloSeries") -> "CycloSeries":
        if self.order != other.order:
            raise ValueError(f"cannot mix zeta_{self.order} and zeta_{other.order}")
        degree = len(self.parts)
        product: List[PSeries] = [self._zero_like() for _ in range(2 * degree - 1)]
        for i, a in enumerate(self.parts):
            for j, b in enumerate(other.parts):
                if (a.is_exact and a.is_zero()) or (b.is_exact and b.is_zero()):
                    continue
                product[i + j] = product[i + j] + a * b
        reduction = CYCLOTOMIC_REDUCTIONS[self.order]
        for e in range(len(product) - 1, degree - 1, -1):
            top = product[e]
            product[e] = self._zero_like()
            for i, r in enumerate(reduction):
                if r:
                    product[e - degree + i] = product[e - degree + i] + top.scale(r)
        return CycloSeries(self.order, tuple(product[:degree]))

    def __pow__(self, exponent: int) -> "CycloSeries":
        if exponent < 0:
            raise ValueError("negative powers are not supported")
        first = self.parts[0]
        one = first.like({0: Poly.constant(first.param_arity, 1)}, None)
        result = CycloSeries.from_series(self.order, one)
        for _ in range(exponent):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def truncate_to(self, order: int) -> "CycloSeries":
        return CycloSeries(self.order, tuple(p.truncate_to(order) for p in self.parts))

    def shift(self, k: int) -> "CycloSeries":
        """Multiply by the series variable to the power k."""
        return CycloSeries(self.order, tuple(p.shift(k) for p in self.parts))

    def rational_part(self) -> Optional[PSeries]:
        """The series itself when every zeta part vanishes, else None."""
        if all(p.is_zero() for p in self.parts[1:]):
            return self.parts[0]
        return None

    def evaluate(self, x: complex, params: Sequence[complex]) -> complex:
        """Value at series variable x with the parameters bound to params."""
        zeta = zeta_complex(self.order)
        return sum(
            (zeta**i * p.evaluate(x, params) for i, p in enumerate(self.parts)), 0j
        )

    def format(self) -> str:
        pieces = []
        for i, part in enumerate(self.parts):
            if part.is_zero() and part.is_exact:
                continue
            basis = "" if i == 0 else "zeta*" if i == 1 else f"zeta^{i}*"
            pieces.append(f"{basis}({part.format()})" if basis else part.format())
        return " + ".join(pieces) if pieces else "0"

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class CycloLaurent:
    """A sigma-image of a LaurentGamma: numerator over an optional denominator."""

    numerator: CycloSeries
    denominator: Optional[CycloSeries] = None

    def evaluate(self, gamma: complex, u: complex) -> complex:
        w = 1 / u
        value = self.numerator.evaluate(w, (gamma,))
        if self.denominator is not None:
            value /= self.denominator.evaluate(w, (gamma,))
        return value

    def format(self) -> str:
        if self.denominator is None:
            return self.numerator.format()
        return f"[{self.numerator.format()}] / [{self.denominator.format()}]"


@dataclass(frozen=True)
class SigmaAction:
    """
    u -> zeta^j u with gamma -> gamma_image, the unique transformation that
    leaves both curve coordinates fixed. `gamma_image` is an exact series in
    w = 1/u; approximate actions (orders without exact arithmetic) carry only
    the floating-point zeta.
    """

    rep: UVRep
    m: int
    j: int
    gamma_image: Optional[CycloSeries]
    approximate: bool
    zeta: complex

    @property
    def is_identity(self) -> bool:
        return self.j % self.m == 0
