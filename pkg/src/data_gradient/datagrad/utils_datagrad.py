import enum

import pydantic

from ..network import BackpropResult, Model, ParameterGradients


class RegularizerKind(str, enum.Enum):
    L1 = "l1"
    L2 = "l2"


class WeightPenalty(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    kind: RegularizerKind
    coefficient: pydantic.NonNegativeFloat


class TrainConfig(pydantic.BaseModel):
    """Hyperparameters of one training run.

    ``fd_step`` is the finite-difference step used while training; the attack magnitude used
    during evaluation is configured separately.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    eta: pydantic.NonNegativeFloat = 0.1005
    lambda0: pydantic.NonNegativeFloat = 1.0
    lambda1: pydantic.NonNegativeFloat = 0.0
    fd_step: pydantic.PositiveFloat = 0.0525
    reg_kind: RegularizerKind = RegularizerKind.L1
    weight_penalty: WeightPenalty | None = None
    batch_size: pydantic.PositiveInt = 100
    epochs: pydantic.PositiveInt = 30
    seed: int = 0
    gamma: pydantic.NonNegativeFloat = 0.0


class MultiTaskGradients(pydantic.BaseModel):
    """Gradients of one multi-task pass.

    ``digit_path`` covers the trunk layers followed by the digit head, ``rotation_head`` the
    single rotation layer; ``digit`` is the backward pass of the digit loss alone, whose data
    gradient drives the adversarial direction.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    digit_path: ParameterGradients
    rotation_head: ParameterGradients
    digit: BackpropResult


class EpochRecord(pydantic.BaseModel):
    epoch: pydantic.PositiveInt
    mean_loss: float
    train_accuracy_pct: float = pydantic.Field(ge=0, le=100)
    validation_accuracy_pct: float | None = pydantic.Field(default=None, ge=0, le=100)


class TrainingOutcome(pydantic.BaseModel):
    model: Model
    history: list[EpochRecord]
    best_epoch: pydantic.PositiveInt


__all__ = [
    "EpochRecord",
    "MultiTaskGradients",
    "RegularizerKind",
    "TrainConfig",
    "TrainingOutcome",
    "WeightPenalty",
]
