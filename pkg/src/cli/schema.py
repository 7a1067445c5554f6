"""Experiment, fixture and registry file schemas."""

from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.flow.model import IntegratorEnum
from src.polycore.model import to_rat
from src.polycore.schema import PolyMapSchema
from src.uvrep.schema import UVRepSchema

# A real number or an [re, im] pair
ComplexLike = Union[float, Tuple[float, float]]


def as_complex(value: ComplexLike) -> complex:
    if isinstance(value, (tuple, list)):
        return complex(value[0], value[1])
    return complex(value)


# ============================================================================
# Experiment Schemas
# ============================================================================


class ExperimentConfig(BaseModel):
    """
    One inverse-dynamics run. `map` and `rep` are registry names, paths to
    JSON files, or inline objects. `driven_index` counts from 1.
    """

    name: str = Field(..., min_length=1)
    map: Union[str, PolyMapSchema]
    rep: Optional[Union[str, UVRepSchema]] = None
    driven_index: int = Field(default=1, ge=1)
    integrator: IntegratorEnum = IntegratorEnum.EULER
    step: float = Field(default=1e-5, gt=0)
    max_steps: int = Field(default=1000, ge=0)
    record_stride: int = Field(default=100, ge=1)
    x0: List[ComplexLike] = Field(..., min_length=1)
    initial_branch: Optional[ComplexLike] = None
    output: Optional[str] = Field(default=None, description="CSV path")

    model_config = ConfigDict(extra="forbid")

    def initial_state(self) -> List[complex]:
        return [as_complex(c) for c in self.x0]

    def branch_seed(self) -> Optional[complex]:
        return None if self.initial_branch is None else as_complex(self.initial_branch)


# ============================================================================
# Verification Fixture Schemas
# ============================================================================


class PerturbationTerm(BaseModel):
    """coeff * gamma^gamma_power * u^u_power added to one image component."""

    component: Literal["a", "b"] = "b"
    coeff: str = "1"
    gamma_power: int = Field(default=0, ge=0)
    u_power: int = Field(default=0, le=0)

    model_config = ConfigDict(extra="forbid")

    @field_validator("coeff")
    @classmethod
    def _parse_coeff(cls, v: str) -> str:
        try:
            to_rat(v.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"invalid rational {v!r}") from e
        return v.strip()


class VerifyFixture(BaseModel):
    """A map and a rep to expand it on, optionally perturbed after expansion."""

    map: Union[str, PolyMapSchema]
    rep: Union[str, UVRepSchema]
    perturbation: List[PerturbationTerm] = Field(default_factory=list)
    assume_keller: bool = Field(
        default=False, description="Treat |J| as 1 regardless of the map"
    )

    model_config = ConfigDict(extra="forbid")


# ============================================================================
# Registry File Schema
# ============================================================================


class RegistryFileSchema(BaseModel):
    """User registry file extending or replacing the built-in one."""

    maps: Dict[str, PolyMapSchema] = Field(default_factory=dict)
    reps: Dict[str, UVRepSchema] = Field(default_factory=dict)
    experiments: Dict[str, ExperimentConfig] = Field(default_factory=dict)
    fixtures: Dict[str, VerifyFixture] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid")
