import logging

import numpy
import pydantic

from ..tensor import Operand, add, scale, sign
from .utils_datagrad import RegularizerKind

LOGGER = logging.getLogger(__name__)


@pydantic.validate_call(validate_return=True)
def reg_value(kind: RegularizerKind, values: Operand) -> float:
    """Penalty on a data gradient: sum of magnitudes (L1) or squared norm (L2)."""
    match kind:
        case RegularizerKind.L1:
            return float(numpy.abs(values.data).sum())
        case RegularizerKind.L2:
            return float(numpy.square(values.data).sum())
        case _:
            raise ValueError("Unexpected regularizer kind")


@pydantic.validate_call(validate_return=True)
def immediate_gradient(kind: RegularizerKind, values: Operand) -> Operand:
    match kind:
        case RegularizerKind.L1:
            return sign(values)
        case RegularizerKind.L2:
            return scale(values, 2.0)
        case _:
            raise ValueError("Unexpected regularizer kind")


@pydantic.validate_call(validate_return=True)
def adversarial_direction(kind: RegularizerKind, data_gradient: Operand) -> Operand:
    """Regularizer gradient at the data gradient; the L1 case is the fast gradient sign."""
    return immediate_gradient(kind, data_gradient)


@pydantic.validate_call(validate_return=True)
def make_adversarial(data: Operand, direction: Operand, phi: float) -> Operand:
    if not numpy.isfinite(phi):
        LOGGER.error(f"received {phi=}")

        raise ValueError("attack magnitude must be finite")

    # no clipping: perturbed pixels may leave [0, 1]
    return add(data, scale(direction, phi))


__all__ = ["adversarial_direction", "immediate_gradient", "make_adversarial", "reg_value"]
