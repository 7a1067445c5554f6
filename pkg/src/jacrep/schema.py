"""Verification record schemas."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.jacrep.model import VerificationRecord, VerificationStatus


class VerificationRecordSchema(BaseModel):
    """JSON form shared by every identity checker."""

    identity: str
    status: VerificationStatus
    residual: Optional[str] = Field(default=None, description="Residual series text")
    notes: List[str] = Field(default_factory=list)

    model_config = ConfigDict(from_attributes=True, use_enum_values=True)

    @classmethod
    def from_model(cls, record: VerificationRecord) -> "VerificationRecordSchema":
        return cls.model_validate(record)
