"""u-gamma representation schemas."""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.polycore.model import rat_to_str, to_rat
from src.uvrep.model import UVRep


class UVRepSchema(BaseModel):
    """Wire form of a UVRep."""

    m: int = Field(..., ge=1, description="Exponent of the lead coordinate")
    N: int = Field(..., ge=1, description="Index of the gamma term")
    h: List[str] = Field(..., description='Rational constants h_0..h_(N-1) as "p/q"')
    role: List[int] = Field(default=[0, 1], min_length=2, max_length=2)
    sign: int = Field(default=1)

    model_config = ConfigDict(extra="forbid")

    @field_validator("h")
    @classmethod
    def _parse_h(cls, v: List[str]) -> List[str]:
        for item in v:
            try:
                to_rat(item.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"invalid rational {item!r}") from e
        return [item.strip() for item in v]

    @field_validator("sign")
    @classmethod
    def _unit_sign(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("sign must be 1 or -1")
        return v

    @model_validator(mode="after")
    def _check_shape(self) -> "UVRepSchema":
        if len(self.h) != self.N:
            raise ValueError(f"{len(self.h)} constants h_i given for N = {self.N}")
        if sorted(self.role) != [0, 1]:
            raise ValueError(f"role must be a permutation of [0, 1], got {self.role}")
        return self

    def to_model(self) -> UVRep:
        return UVRep(
            m=self.m,
            N=self.N,
            h=tuple(to_rat(c) for c in self.h),
            role=(self.role[0], self.role[1]),
            sign=self.sign,
        )

    @classmethod
    def from_model(cls, rep: UVRep) -> "UVRepSchema":
        return cls(
            m=rep.m,
            N=rep.N,
            h=[rat_to_str(c) for c in rep.h],
            role=list(rep.role),
            sign=rep.sign,
        )
