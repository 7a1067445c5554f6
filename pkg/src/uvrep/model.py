"""u-gamma representations of curves approaching a finiteness variety."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from src.polycore.model import Poly
from src.pseries.model import PSeries

GAMMA = ("gamma",)
# Expansions are stored as series in w = 1/u
INVERSE_U = "w"


@dataclass(frozen=True)
class UVRep:
    """
    The curve C(gamma, u) with lead coordinate sign*u^m and second coordinate
    h_0 u^m + h_1 u^(m-1) + .. + h_(N-1) u^(m-N+1) + gamma u^(m-N).

    `role` = (index of the lead coordinate, index of the second coordinate)
    in the ambient space.
    """

    m: int
    N: int
    h: Tuple[Fraction, ...]
    role: Tuple[int, int] = (0, 1)
    sign: int = 1

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be at least 1, got {self.m}")
        if self.N < 1:
            raise ValueError(f"N must be at least 1, got {self.N}")
        if len(self.h) != self.N:
            raise ValueError(f"expected {self.N} constants h_i, got {len(self.h)}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be 1 or -1, got {self.sign}")
        if sorted(self.role) != [0, 1]:
            raise ValueError(f"role must be a permutation of (0, 1), got {self.role}")
        object.__setattr__(self, "h", tuple(Fraction(c) for c in self.h))
        object.__setattr__(self, "role", tuple(self.role))

    @property
    def L(self) -> int:
        return self.N - self.m

    @property
    def K(self) -> int:
        return self.L - self.m

    @property
    def orientation(self) -> int:
        """sign times the parity of the role permutation."""
        return self.sign if self.role == (0, 1) else -self.sign


@dataclass(frozen=True)
class ABExpansion:
    """
    f o C written as a(gamma, u) = Σ a_i(gamma) u^-i and likewise b, held as
    series in w = 1/u with one parameter gamma.
    """

    a: PSeries
    b: PSeries
    max_order: Optional[int] = None

    @property
    def a_coeffs(self) -> Tuple[Poly, ...]:
        return _coefficient_list(self.a)

    @property
    def b_coeffs(self) -> Tuple[Poly, ...]:
        return _coefficient_list(self.b)

    def evaluate(self, gamma: complex, u: complex) -> Tuple[complex, complex]:
        w = 1 / u
        return self.a.evaluate(w, (gamma,)), self.b.evaluate(w, (gamma,))


def _coefficient_list(series: PSeries) -> Tuple[Poly, ...]:
    top = series.degree()
    if top is None:
        return ()
    return tuple(series.coeff(i) for i in range(top + 1))


@dataclass(frozen=True)
class FVComponent:
    """The finiteness-variety parametrization gamma -> (a_0(gamma), b_0(gamma))."""

    a0: Poly
    b0: Poly
    degenerate: bool = False

    def format(self) -> str:
        return f"({self.a0.format(GAMMA)}, {self.b0.format(GAMMA)})"


@dataclass(frozen=True)
class Indices:
    m: int
    N: int
    L: int
    K: int
    k: int
