from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import List, Optional

from src.pseries.model import PSeries


class VerificationStatus(str, PyEnum):
    """Outcome of an identity check."""

    PASS = "pass"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class LaurentGamma:
    """
    A series in w = 1/u with gamma-polynomial coefficients, optionally over a
    unit denominator. Rational entries are kept as a pair and never divided.
    """

    numerator: PSeries
    denominator: Optional[PSeries] = None

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

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class UVJacobian:
    """J(f) on the curve, columns in role order (lead coordinate first)."""

    r1: LaurentGamma
    r2: LaurentGamma
    r3: LaurentGamma
    r4: LaurentGamma


@dataclass
class VerificationRecord:
    identity: str
    status: VerificationStatus
    residual: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status != VerificationStatus.FAIL
