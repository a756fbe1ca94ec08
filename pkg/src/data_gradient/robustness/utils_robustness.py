import enum
import logging

import pydantic

from ..datagrad import RegularizerKind
from ..network import Model

LOGGER = logging.getLogger(__name__)

DEFAULT_PHI_GRID = [0.0, 0.005, 0.01, 0.05, 0.1]


class AttackHead(str, enum.Enum):
    DIGIT = "digit"
    ROTATION = "rotation"


class AttackConfig(pydantic.BaseModel):
    """How adversarial test sets are built from an attacker's data gradient."""

    model_config = pydantic.ConfigDict(frozen=True)

    kind: RegularizerKind = RegularizerKind.L1
    phi_grid: list[pydantic.NonNegativeFloat] = pydantic.Field(
        default_factory=lambda: list(DEFAULT_PHI_GRID), min_length=1
    )
    use_head: AttackHead = AttackHead.DIGIT

    @pydantic.field_validator("phi_grid")
    @classmethod
    def check_phi_grid(cls: type["AttackConfig"], phi_grid: list[float]) -> list[float]:
        if phi_grid != sorted(phi_grid) or len(set(phi_grid)) != len(phi_grid):
            LOGGER.error(f"received {phi_grid=}")

            raise ValueError("attack magnitudes must be strictly ascending")

        if 0.0 not in phi_grid:
            LOGGER.error(f"received {phi_grid=}")

            raise ValueError("attack magnitudes must include 0")

        return phi_grid


class NamedModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    name: str = pydantic.Field(min_length=1)
    model: Model


class ReportRow(pydantic.BaseModel):
    """Accuracy on one adversarial set; ``failure`` is set instead when the cell could not run."""

    model_config = pydantic.ConfigDict(frozen=True)

    phi: pydantic.NonNegativeFloat
    accuracy_pct: float | None = pydantic.Field(default=None, ge=0, le=100)
    failure: str | None = None

    @pydantic.model_validator(mode="after")
    def check_outcome(self: "ReportRow") -> "ReportRow":
        if (self.accuracy_pct is None) == (self.failure is None):
            LOGGER.error(f"{self.accuracy_pct=} with {self.failure=}")

            raise ValueError("a report row holds either an accuracy or a failure")

        return self


class RobustnessReport(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    defender: str
    attacker: str
    rows: list[ReportRow]
    metadata: dict[str, pydantic.JsonValue] = pydantic.Field(default_factory=dict)

    @property
    def accuracies(self: "RobustnessReport") -> list[float | None]:
        return [row.accuracy_pct for row in self.rows]


__all__ = [
    "DEFAULT_PHI_GRID",
    "AttackConfig",
    "AttackHead",
    "NamedModel",
    "ReportRow",
    "RobustnessReport",
]
