import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.flow.model import (
    DIVERGENCE_LIMIT,
    FlowSpec,
    FlowStatus,
    IntegratorEnum,
    RunSummary,
    TrajectoryRecord,
)
from src.flow.services.branch_service import BranchTracker
from src.jacrep.model import LaurentGamma
from src.jacrep.services.identity_service import identity_service
from src.polycore.model import Poly, PolyMap
from src.polycore.services.evaluator import compile_polys
from src.polycore.services.jacobian_service import MAX_DET_SIZE, jacobian_service
from src.uvrep.model import ABExpansion, UVRep
from src.uvrep.services.expansion_service import expansion_service
from src.utils.exceptions import (
    ArityMismatch,
    BranchAmbiguous,
    IndexOutOfRange,
    KellerDynamicsError,
    TooLarge,
    ZeroLeadCoordinate,
)
from src.utils.logger import logger

log = logger(__name__)

State = List[complex]
Rates = Tuple[LaurentGamma, LaurentGamma]


def _finite(x: Sequence[complex]) -> bool:
    # componentwise, since abs() of a huge complex raises; nan compares False
    return all(
        abs(c.real) < DIVERGENCE_LIMIT and abs(c.imag) < DIVERGENCE_LIMIT for c in x
    )


def _magnitude(c: complex) -> float:
    try:
        return abs(c)
    except OverflowError:
        return math.inf


def _values(
    fn: Callable[..., List[complex]], state: Sequence[complex], size: int
) -> Tuple[complex, ...]:
    """fn(*state) as complex numbers; nan when the evaluation overflows."""
    try:
        return tuple(complex(c) for c in fn(*state))
    except (OverflowError, ZeroDivisionError):
        return (complex(math.nan, math.nan),) * size


def rate_residuals(
    prev_u: complex,
    prev_gamma: complex,
    u: complex,
    gamma: complex,
    step: float,
    rates: Rates,
) -> Tuple[float, float]:
    """
    Forward differences of (u, gamma) over one step minus the analytic rates
    evaluated at the later state. Real parts only.
    """
    du, dgamma = rates
    res_u = (u - prev_u) / step - du.evaluate(gamma, u)
    res_gamma = (gamma - prev_gamma) / step - dgamma.evaluate(gamma, u)
    return res_u.real, res_gamma.real


class FlowService:
    """Signed-minor inverse dynamics, integrated with a fixed step."""

    def velocity_polys(self, f: PolyMap, driven: int) -> List[Poly]:
        """dx_j/dr = signed_minor(J(f), driven, j)."""
        if f.arity > MAX_DET_SIZE:
            raise TooLarge(f"velocity field of arity {f.arity} exceeds {MAX_DET_SIZE}")
        if not 0 <= driven < f.arity:
            raise IndexOutOfRange(f"driven index {driven} outside 0..{f.arity - 1}")
        jac = jacobian_service.jacobian(f)
        return [jacobian_service.signed_minor(jac, driven, j) for j in range(f.arity)]

    def rhs(self, f: PolyMap, driven: int, x: Sequence[complex]) -> List[complex]:
        if len(x) != f.arity:
            raise ArityMismatch(f"state has {len(x)} coordinates, map has arity {f.arity}")
        return [p.evaluate(x) for p in self.velocity_polys(f, driven)]

    def branch_rates(self, spec: FlowSpec) -> Optional[Rates]:
        """Analytic (du/dr, dgamma/dr) for the run, when the rep allows them."""
        rep = spec.rep
        if rep is None:
            return None
        if spec.driven_index != 0:
            log.warning(
                f"driven component {spec.driven_index + 1} is not the a-component of the rep; "
                "skipping rate residuals"
            )
            return None
        try:
            exp: ABExpansion = expansion_service.expand_image(rep, spec.map)
        except KellerDynamicsError as e:
            log.warning(f"No u-gamma expansion for this run: {e}")
            return None
        return identity_service.flow_rates(exp, rep)

    def integrate(self, spec: FlowSpec, x0: Sequence[complex]) -> List[TrajectoryRecord]:
        """
        Integrate from x0 for spec.max_steps steps, recording step 0, every
        record_stride-th step and the last step reached. Numerical failure
        stops the run and is reported on the final record.
        """
        f = spec.map
        n = f.arity
        if len(x0) != n:
            raise ArityMismatch(f"x0 has {len(x0)} coordinates, map has arity {n}")
        d = spec.driven_index
        h = spec.step

        velocity = compile_polys(self.velocity_polys(f, d), f.names)
        image = compile_polys(list(f.components), f.names)
        jdet = compile_polys([jacobian_service.jacobian_determinant(f)], f.names)
        advance = self._stepper(spec.integrator, velocity, h)

        x: State = [complex(c) for c in x0]
        y0 = [complex(c) for c in image(*x)]

        tracker: Optional[BranchTracker] = None
        rates: Optional[Rates] = None
        u: Optional[complex] = None
        if spec.rep is not None:
            rep: UVRep = spec.rep
            lead_index, second_index = rep.role
            tracker = BranchTracker(rep, 0j)
            seed = spec.initial_branch
            tracker.u = seed if seed is not None else tracker.principal(x[lead_index])
            u = tracker.select(x[lead_index])
            rates = self.branch_rates(spec)

        def gamma_at(state: State, u_value: Optional[complex]) -> Optional[complex]:
            if tracker is None or u_value is None:
                return None
            try:
                return tracker.gamma(state[tracker.second_index], u_value)
            except OverflowError:
                return complex(math.nan, math.nan)

        def build(
            step: int,
            state: State,
            u_value: Optional[complex],
            prev: Optional[Tuple[State, Optional[complex]]],
        ) -> TrajectoryRecord:
            y = _values(image, state, n)
            gamma = gamma_at(state, u_value)
            record = TrajectoryRecord(
                step=step,
                r=step * h,
                x=tuple(state),
                y=y,
                u=u_value,
                gamma=gamma,
                conserved_drift={j: _magnitude(y[j] - y0[j]) for j in range(n) if j != d},
                jacobian_det=_values(jdet, state, 1)[0],
            )
            if prev is not None:
                prev_state, prev_u = prev
                prev_y = _values(image, prev_state, n)
                record.driven_rate = ((y[d] - prev_y[d]) / h).real
                prev_gamma = gamma_at(prev_state, prev_u)
                if rates is not None and u_value is not None and prev_u is not None:
                    assert gamma is not None and prev_gamma is not None
                    try:
                        record.rate_residuals = rate_residuals(
                            prev_u, prev_gamma, u_value, gamma, h, rates
                        )
                    except (OverflowError, ZeroDivisionError):
                        record.rate_residuals = (math.nan, math.nan)
            return record

        log.info(
            f"Integrating {f} ({spec.integrator.value}, step {h:g}, "
            f"{spec.max_steps} steps, driven component {d + 1})"
        )
        records = [build(0, x, u, None)]
        status = FlowStatus.OK
        stride = spec.record_stride
        last = spec.max_steps
        lead = tracker.lead_index if tracker is not None else 0
        step = 0
        prev_x, prev_u = x, u

        for step in range(1, last + 1):
            prev_x, prev_u = x, u
            try:
                x = advance(x)
            except (OverflowError, ZeroDivisionError):
                status = FlowStatus.DIVERGED
                break
            if not _finite(x):
                status = FlowStatus.DIVERGED
                break
            if tracker is not None:
                try:
                    u = tracker.select(x[lead])
                except ZeroLeadCoordinate:
                    status = FlowStatus.ZERO_LEAD_COORDINATE
                    break
                except BranchAmbiguous:
                    status = FlowStatus.BRANCH_AMBIGUOUS
                    break
                except OverflowError:
                    status = FlowStatus.DIVERGED
                    break
            if step % stride == 0 or step == last:
                records.append(build(step, x, u, (prev_x, prev_u)))

        if status != FlowStatus.OK:
            # the last good state is the one before the failing step
            good = step - 1
            if records[-1].step == good:
                records[-1].status = status
            else:
                final = build(good, prev_x, prev_u, None)
                final.status = status
                records.append(final)
            log.warning(f"Run stopped at step {good}: {status.value}")
        else:
            log.info(f"Run finished after {last} steps, {len(records)} records")
        return records

    def _stepper(
        self,
        integrator: IntegratorEnum,
        velocity: Callable[..., List[complex]],
        h: float,
    ) -> Callable[[State], State]:
        if integrator == IntegratorEnum.EULER:

            def euler(x: State) -> State:
                v = velocity(*x)
                return [xi + h * vi for xi, vi in zip(x, v)]

            return euler

        half = h / 2
        sixth = h / 6

        def rk4(x: State) -> State:
            k1 = velocity(*x)
            k2 = velocity(*[xi + half * ki for xi, ki in zip(x, k1)])
            k3 = velocity(*[xi + half * ki for xi, ki in zip(x, k2)])
            k4 = velocity(*[xi + h * ki for xi, ki in zip(x, k3)])
            return [
                xi + sixth * (a + 2 * b + 2 * c + e)
                for xi, a, b, c, e in zip(x, k1, k2, k3, k4)
            ]

        return rk4

    def summarize(
        self, name: str, records: List[TrajectoryRecord], csv_path: Optional[str] = None
    ) -> RunSummary:
        if not records:
            raise ValueError("cannot summarize an empty trajectory")
        final = records[-1]
        max_drift: Dict[int, float] = {}
        for j in final.conserved_drift:
            drifts = np.array([r.conserved_drift[j] for r in records], dtype=float)
            max_drift[j] = float(np.max(drifts))
        notes: List[str] = []
        if final.gamma is not None:
            notes.append(f"final gamma = {final.gamma.real:.6g}")
        if final.u is not None:
            notes.append(f"final u = {final.u.real:.6g}")
        return RunSummary(
            name=name,
            records=len(records),
            final=final,
            max_drift=max_drift,
            status=final.status,
            csv_path=csv_path,
            notes=notes,
        )

    def run_batch(
        self,
        jobs: Sequence[Tuple[FlowSpec, Sequence[complex]]],
        max_workers: int = 1,
    ) -> List[List[TrajectoryRecord]]:
        """Independent runs, results in input order."""
        if max_workers <= 1 or len(jobs) <= 1:
            return [self.integrate(spec, x0) for spec, x0 in jobs]
        log.info(f"Running {len(jobs)} experiments on {max_workers} workers")
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_integrate_job, jobs))


def _integrate_job(job: Tuple[FlowSpec, Sequence[complex]]) -> List[TrajectoryRecord]:
    spec, x0 = job
    return flow_service.integrate(spec, x0)


# Singleton instance
flow_service = FlowService()
