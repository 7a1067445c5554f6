import cmath
from typing import List, Sequence, Tuple

from src.uvrep.model import UVRep
from src.utils.exceptions import BranchAmbiguous, ZeroLeadCoordinate

# Relative gap below which the two closest roots count as equidistant
AMBIGUITY_TOL = 1e-12


class BranchTracker:
    """
    Recovers (u, gamma) from an ambient point, choosing among the m roots of
    u^m = sign * lead the one closest to the previous u.
    """

    def __init__(self, rep: UVRep, seed: complex):
        self.rep = rep
        self.m = rep.m
        self.sign = rep.sign
        self.L = rep.L
        self.lead_index, self.second_index = rep.role
        self.u = complex(seed)
        self._unity: List[complex] = [
            cmath.exp(2j * cmath.pi * k / self.m) for k in range(self.m)
        ]
        self._h_terms: List[Tuple[float, int]] = [
            (float(h), rep.m + rep.L - i) for i, h in enumerate(rep.h) if h
        ]

    def candidates(self, lead: complex) -> List[complex]:
        target = lead * self.sign
        if self.m == 1:
            return [target]
        if self.m == 2:
            root = cmath.sqrt(target)
            return [root, -root]
        root = target ** (1.0 / self.m)
        return [root * zeta for zeta in self._unity]

    def select(self, lead: complex) -> complex:
        """Advance the tracked branch to the root nearest the previous u."""
        if lead == 0:
            raise ZeroLeadCoordinate("lead coordinate vanished, u is undefined")
        prev = self.u
        if self.m == 1:
            self.u = lead * self.sign
            return self.u
        roots = self.candidates(lead)
        ranked = sorted((abs(r - prev), i) for i, r in enumerate(roots))
        best, second = ranked[0][0], ranked[1][0]
        if second - best <= AMBIGUITY_TOL * (abs(prev) + abs(roots[0])):
            raise BranchAmbiguous(
                f"roots {roots} are equidistant from the previous u = {prev}"
            )
        self.u = roots[ranked[0][1]]
        return self.u

    def gamma(self, second: complex, u: complex) -> complex:
        """gamma = x2 u^L - Σ h_i u^(m+L-i)."""
        value = second * u**self.L
        for h, power in self._h_terms:
            value -= h * u**power
        return value

    def principal(self, lead: complex) -> complex:
        if lead == 0:
            raise ZeroLeadCoordinate("lead coordinate vanished, u is undefined")
        return self.candidates(lead)[0]


def solve_uv(
    rep: UVRep, x: Sequence[complex], prev_u: complex
) -> Tuple[complex, complex]:
    """(u, gamma) of an ambient point on the branch closest to prev_u."""
    tracker = BranchTracker(rep, prev_u)
    u = tracker.select(complex(x[tracker.lead_index]))
    return u, tracker.gamma(complex(x[tracker.second_index]), u)
