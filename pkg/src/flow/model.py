from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import Dict, List, Optional, Tuple

from src.polycore.model import PolyMap
from src.uvrep.model import UVRep

# Any state coordinate above this magnitude ends the run as diverged
DIVERGENCE_LIMIT = 1e300


class IntegratorEnum(str, PyEnum):
    """Fixed-step explicit schemes."""

    EULER = "euler"
    RK4 = "rk4"


class FlowStatus(str, PyEnum):
    """How a run ended (or that it is still healthy at a record)."""

    OK = "ok"
    DIVERGED = "diverged"
    BRANCH_AMBIGUOUS = "branch_ambiguous"
    ZERO_LEAD_COORDINATE = "zero_lead_coordinate"


@dataclass(frozen=True)
class FlowSpec:
    """
    Inverse-dynamics run description. `driven_index` is 0-based: that image
    component grows at rate |J(f)| while every other component is conserved.
    """

    map: PolyMap
    driven_index: int = 0
    integrator: IntegratorEnum = IntegratorEnum.EULER
    step: float = 1e-5
    max_steps: int = 1000
    record_stride: int = 100
    rep: Optional[UVRep] = None
    initial_branch: Optional[complex] = None

    def __post_init__(self) -> None:
        if not 0 <= self.driven_index < self.map.arity:
            raise ValueError(
                f"driven_index {self.driven_index} outside 0..{self.map.arity - 1}"
            )
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.max_steps < 0:
            raise ValueError(f"max_steps must be non-negative, got {self.max_steps}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be positive, got {self.record_stride}")
        if self.rep is not None and self.map.arity != 2:
            raise ValueError("branch recovery needs a plane map")


@dataclass
class TrajectoryRecord:
    """
    One sampled state. `y` is f(x) recomputed from x. `conserved_drift` maps
    each non-driven component index to |f_j(x) - f_j(x0)|. `rate_residuals`
    holds the real parts of the forward differences of (u, gamma) minus the
    predicted rates at this state.
    """

    step: int
    r: float
    x: Tuple[complex, ...]
    y: Tuple[complex, ...]
    u: Optional[complex] = None
    gamma: Optional[complex] = None
    conserved_drift: Dict[int, float] = field(default_factory=dict)
    rate_residuals: Optional[Tuple[float, float]] = None
    driven_rate: Optional[float] = None
    jacobian_det: Optional[complex] = None
    status: FlowStatus = FlowStatus.OK


@dataclass
class RunSummary:
    name: str
    records: int
    final: TrajectoryRecord
    max_drift: Dict[int, float]
    status: FlowStatus
    csv_path: Optional[str] = None
    notes: List[str] = field(default_factory=list)
