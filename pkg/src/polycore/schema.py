"""Polynomial map schemas."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.polycore.model import Poly, PolyMap, rat_to_str, to_rat


# ============================================================================
# Term / Component Schemas
# ============================================================================


class TermSchema(BaseModel):
    """A single monomial: rational coefficient and exponent vector."""

    coeff: str = Field(..., description='Rational coefficient as "p/q" or an integer')
    exps: List[int] = Field(..., description="Exponent of each variable")

    model_config = ConfigDict(extra="forbid")

    @field_validator("coeff")
    @classmethod
    def _parse_coeff(cls, v: str) -> str:
        try:
            to_rat(v.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"invalid rational {v!r}") from e
        return v.strip()

    @field_validator("exps")
    @classmethod
    def _non_negative(cls, v: List[int]) -> List[int]:
        if any(e < 0 for e in v):
            raise ValueError("exponents must be non-negative")
        return v


# ============================================================================
# PolyMap Schemas
# ============================================================================


class PolyMapSchema(BaseModel):
    """Wire form of a polynomial map f : A^n -> A^n."""

    arity: int = Field(..., ge=1)
    vars: Optional[List[str]] = Field(default=None, description="Variable names")
    components: List[List[TermSchema]] = Field(..., min_length=1)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _check_shape(self) -> "PolyMapSchema":
        if len(self.components) != self.arity:
            raise ValueError(
                f"{len(self.components)} components given for arity {self.arity}"
            )
        if self.vars is not None and len(self.vars) != self.arity:
            raise ValueError(f"{len(self.vars)} variable names for arity {self.arity}")
        for component in self.components:
            for term in component:
                if len(term.exps) != self.arity:
                    raise ValueError(
                        f"exponent vector {term.exps} does not have length {self.arity}"
                    )
        return self

    def to_model(self) -> PolyMap:
        polys = [_sum_terms(self.arity, component) for component in self.components]
        return PolyMap(polys, self.vars)

    @classmethod
    def from_model(cls, f: PolyMap) -> "PolyMapSchema":
        return cls(
            arity=f.arity,
            vars=list(f.names),
            components=[
                [TermSchema(coeff=rat_to_str(c), exps=list(e)) for e, c in p]
                for p in f.components
            ],
        )


def _sum_terms(arity: int, terms: List[TermSchema]) -> Poly:
    # Repeated exponent vectors are summed rather than overwritten
    total = Poly.zero(arity)
    for t in terms:
        total = total + Poly(arity, {tuple(t.exps): to_rat(t.coeff)})
    return total
