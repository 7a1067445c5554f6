from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.polycore.model import Poly, PolyMap
from src.pseries.model import PSeries
from src.pseries.services.series_service import series_service
from src.uvrep.model import GAMMA, INVERSE_U, ABExpansion, FVComponent, Indices, UVRep
from src.utils.exceptions import (
    AllHigherOrdersZero,
    ArityMismatch,
    NonConvergent,
    TruncationInsufficient,
    ZeroU,
)
from src.utils.logger import logger

log = logger(__name__)


def w_power(k: int, coeff: Poly | int | Fraction = 1) -> PSeries:
    """coeff * w^k as an exact series in w = 1/u with parameter gamma."""
    return PSeries.monomial(k, 1, coeff, INVERSE_U, GAMMA)


def u_power(k: int, coeff: Poly | int | Fraction = 1) -> PSeries:
    """coeff * u^k, i.e. coeff * w^-k."""
    return w_power(-k, coeff)


def u_derivative(series: PSeries) -> PSeries:
    """d/du of a series in w = 1/u, using d/du = -w^2 d/dw."""
    return -(series.derivative() * w_power(2))


class ExpansionService:
    """Curve evaluation and expansion of f o C in powers of 1/u."""

    def curve_series(self, rep: UVRep) -> Tuple[PSeries, PSeries]:
        """Ambient coordinates of C(gamma, u) as exact series in w, in ambient order."""
        lead = u_power(rep.m, rep.sign)
        second = w_power(rep.N - rep.m, Poly.variable(1, 0))
        for i, h in enumerate(rep.h):
            if h:
                second = second + u_power(rep.m - i, h)
        coords: List[PSeries] = [lead, second]
        if rep.role == (1, 0):
            coords.reverse()
        return coords[0], coords[1]

    def lead_and_second(self, rep: UVRep) -> Tuple[PSeries, PSeries]:
        """The curve coordinates in role order: (sign*u^m, x2-role coordinate)."""
        coords = self.curve_series(rep)
        return coords[rep.role[0]], coords[rep.role[1]]

    def curve_eval(self, rep: UVRep, gamma: complex, u: complex) -> Tuple[complex, complex]:
        if u == 0:
            raise ZeroU("the curve is not defined at u = 0")
        lead = rep.sign * u**rep.m
        second = gamma * u ** (rep.m - rep.N)
        for i, h in enumerate(rep.h):
            if h:
                second += float(h) * u ** (rep.m - i)
        point = [lead, second]
        if rep.role == (1, 0):
            point.reverse()
        return point[0], point[1]

    def compose_on_curve(self, rep: UVRep, p: Poly) -> PSeries:
        """p(C(gamma, u)) as an exact series in w."""
        if p.arity != 2:
            raise ArityMismatch(f"curve lives in the plane, polynomial has arity {p.arity}")
        return series_service.substitute(p, list(self.curve_series(rep)))

    def expand_image(
        self, rep: UVRep, f: PolyMap, max_order: Optional[int] = None
    ) -> ABExpansion:
        """
        Expand both components of f o C in powers of 1/u. The expansion is
        exact; `max_order` optionally truncates it.
        """
        if f.arity != 2:
            raise ArityMismatch(f"u-gamma expansions need a plane map, got arity {f.arity}")
        a, b = (self.compose_on_curve(rep, component) for component in f.components)
        for name, series in (("a", a), ("b", b)):
            valuation = series.valuation
            if valuation is not None and valuation < 0:
                raise NonConvergent(
                    f"{name} contains u^{-valuation}: {series}"
                )
        if max_order is not None:
            if max_order < 0:
                raise TruncationInsufficient(f"max_order must be >= 0, got {max_order}")
            a, b = a.truncate_to(max_order), b.truncate_to(max_order)
        log.debug(f"Expanded {f} on rep m={rep.m}, N={rep.N}: a = {a}, b = {b}")
        return ABExpansion(a=a, b=b, max_order=max_order)

    def fv_component(self, exp: ABExpansion) -> FVComponent:
        a0, b0 = exp.a.coeff(0), exp.b.coeff(0)
        degenerate = a0.is_constant() and b0.is_constant()
        if degenerate:
            log.warning(
                f"Finiteness component ({a0.format(GAMMA)}, {b0.format(GAMMA)}) is a single point"
            )
        return FVComponent(a0=a0, b0=b0, degenerate=degenerate)

    def indices(self, rep: UVRep, exp: ABExpansion) -> Indices:
        positive = [
            k
            for series in (exp.a, exp.b)
            for k in series.coeffs
            if k > 0
        ]
        if not positive:
            raise AllHigherOrdersZero("a_i and b_i vanish for every i > 0")
        return Indices(m=rep.m, N=rep.N, L=rep.L, K=rep.K, k=min(positive))

    def is_admissible(self, component: FVComponent, gamma: complex) -> bool:
        """Both da0/dgamma and db0/dgamma are nonzero at gamma."""
        da = component.a0.partial(0).evaluate((gamma,))
        db = component.b0.partial(0).evaluate((gamma,))
        return da != 0 and db != 0

    def rep_from_series(self, trajectory: PSeries, m: int) -> Tuple[UVRep, Poly]:
        """
        Build the representation of a trajectory X2 = Σ β_i s^i, T = s^m: the
        constants h_i are the coefficients below the first parameter-dependent
        index N, and the curve parameter at the trajectory is β_N.
        """
        valuation = trajectory.valuation
        if valuation is None or valuation < 0:
            raise NonConvergent(f"trajectory must be a power series, got {trajectory}")
        index = series_service.first_parameter_index(trajectory)
        if index is None:
            raise AllHigherOrdersZero("no coefficient depends on the parameters")
        h: Dict[int, Fraction] = {
            i: trajectory.coeff(i).constant_term() for i in range(index)
        }
        rep = UVRep(m=m, N=index, h=tuple(h[i] for i in range(index)))
        return rep, trajectory.coeff(index)


# Singleton instance
expansion_service = ExpansionService()
