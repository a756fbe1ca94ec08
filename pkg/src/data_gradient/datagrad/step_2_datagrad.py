import logging

import numpy
import pydantic

from ..data import Batch
from ..network import (
    BackpropResult,
    NetworkParams,
    NumericalFailureError,
    ParameterGradients,
    backward,
    forward,
)
from ..tensor import (
    Matrix,
    Operand,
    Vector,
    add,
    as_columns,
    is_finite,
    scale,
    sign,
    subtract,
)
from .step_1_datagrad import adversarial_direction, make_adversarial
from .utils_datagrad import RegularizerKind, TrainConfig, WeightPenalty

LOGGER = logging.getLogger(__name__)

Targets = int | list[int] | pydantic.InstanceOf[numpy.ndarray]


def scale_gradients(gradients: ParameterGradients, factor: float) -> ParameterGradients:
    return ParameterGradients(
        weight_grads=[scale(weight, factor) for weight in gradients.weight_grads],
        bias_grads=[scale(bias, factor) for bias in gradients.bias_grads],
    )


def combine_gradients(
    first: ParameterGradients,
    first_factor: float,
    second: ParameterGradients,
    second_factor: float,
) -> ParameterGradients:
    """Layer-wise ``first_factor * first + second_factor * second``."""
    return ParameterGradients(
        weight_grads=[
            add(scale(one, first_factor), scale(other, second_factor))
            for one, other in zip(first.weight_grads, second.weight_grads, strict=True)
        ],
        bias_grads=[
            add(scale(one, first_factor), scale(other, second_factor))
            for one, other in zip(first.bias_grads, second.bias_grads, strict=True)
        ],
    )


def finite_difference(
    clean: ParameterGradients, perturbed: ParameterGradients, step: float
) -> ParameterGradients:
    """``(perturbed - clean) / step`` per layer, rejecting non-finite results."""
    difference = ParameterGradients(
        weight_grads=[
            scale(subtract(after, before), 1.0 / step)
            for before, after in zip(clean.weight_grads, perturbed.weight_grads, strict=True)
        ],
        bias_grads=[
            scale(subtract(after, before), 1.0 / step)
            for before, after in zip(clean.bias_grads, perturbed.bias_grads, strict=True)
        ],
    )

    for layer, (weight, bias) in enumerate(
        zip(difference.weight_grads, difference.bias_grads, strict=True), start=1
    ):
        if not (is_finite(weight) and is_finite(bias)):
            LOGGER.error(f"regularizer gradient of layer {layer} is not finite ({step=})")

            raise NumericalFailureError(f"non-finite regularizer gradient in layer {layer}")

    return difference


def perturbed_backward(
    params: NetworkParams,
    inputs: Matrix,
    targets: Targets,
    data_gradient: Matrix,
    kind: RegularizerKind,
    step: float,
) -> BackpropResult:
    """Second backward pass at ``inputs + step * y``, y being the adversarial direction."""
    direction = adversarial_direction(kind, data_gradient)
    perturbed_inputs = make_adversarial(inputs, direction, step)

    return backward(params, forward(params, perturbed_inputs), targets)


@pydantic.validate_call(validate_return=True)
def fd_regularizer_grad(
    params: NetworkParams, data: Operand, targets: Targets, cfg: TrainConfig
) -> ParameterGradients:
    """Finite-difference estimate of the weight gradient of R(dL/dd).

    Two forward and two backward passes: one at the data, one at the adversarial example
    built from the data gradient of the first.
    """
    inputs = as_columns(data)
    clean = backward(params, forward(params, inputs), targets)
    perturbed = perturbed_backward(
        params, inputs, targets, clean.data_gradient, cfg.reg_kind, cfg.fd_step
    )

    return finite_difference(clean.gradients, perturbed.gradients, cfg.fd_step)


def penalty_gradient(weight: Matrix, penalty: WeightPenalty) -> Matrix:
    match penalty.kind:
        case RegularizerKind.L1:
            return scale(sign(weight), penalty.coefficient)
        case RegularizerKind.L2:
            return scale(weight, 2.0 * penalty.coefficient)
        case _:
            raise ValueError("Unexpected penalty kind")


def penalise(
    gradients: ParameterGradients, weights: list[Matrix], penalty: WeightPenalty | None
) -> ParameterGradients:
    """Add the classical weight penalty gradient; biases are not penalised."""
    if penalty is None:
        return gradients

    return ParameterGradients(
        weight_grads=[
            add(gradient, penalty_gradient(weight, penalty))
            for gradient, weight in zip(gradients.weight_grads, weights, strict=True)
        ],
        bias_grads=gradients.bias_grads,
    )


def descend(
    weights: list[Matrix], biases: list[Vector], gradients: ParameterGradients, eta: float
) -> tuple[list[Matrix], list[Vector]]:
    new_weights: list[Matrix] = []
    new_biases: list[Vector] = []

    for layer, (weight, bias, weight_grad, bias_grad) in enumerate(
        zip(weights, biases, gradients.weight_grads, gradients.bias_grads, strict=True), start=1
    ):
        new_weight = subtract(weight, scale(weight_grad, eta))
        new_bias = subtract(bias, scale(bias_grad, eta))

        if not (is_finite(new_weight) and is_finite(new_bias)):
            LOGGER.error(f"update of layer {layer} is not finite ({eta=})")

            raise NumericalFailureError(f"non-finite parameter update in layer {layer}")

        new_weights.append(new_weight)
        new_biases.append(new_bias)

    return new_weights, new_biases


@pydantic.validate_call(validate_return=True)
def apply_gradients(
    params: NetworkParams, gradients: ParameterGradients, eta: float
) -> NetworkParams:
    weights, biases = descend(params.weights, params.biases, gradients, eta)

    return params.model_copy(update={"weights": weights, "biases": biases})


@pydantic.validate_call(validate_return=True)
def datagrad_gradients(
    params: NetworkParams, batch: Batch, cfg: TrainConfig
) -> ParameterGradients:
    """Batch-averaged ``lambda0 * xi + lambda1 * (omega - xi) / t`` plus the weight penalty."""
    clean = backward(params, forward(params, batch.images), batch.labels)

    if cfg.lambda1 == 0:
        direction = scale_gradients(clean.gradients, cfg.lambda0)
    else:
        perturbed = perturbed_backward(
            params, batch.images, batch.labels, clean.data_gradient, cfg.reg_kind, cfg.fd_step
        )
        regularizer = finite_difference(clean.gradients, perturbed.gradients, cfg.fd_step)
        direction = combine_gradients(clean.gradients, cfg.lambda0, regularizer, cfg.lambda1)

    return penalise(direction, params.weights, cfg.weight_penalty)


@pydantic.validate_call(validate_return=True)
def datagrad_step(params: NetworkParams, batch: Batch, cfg: TrainConfig) -> NetworkParams:
    return apply_gradients(params, datagrad_gradients(params, batch, cfg), cfg.eta)


@pydantic.validate_call(validate_return=True)
def sgd_step(params: NetworkParams, batch: Batch, eta: float) -> NetworkParams:
    """Unregularised stochastic gradient descent on the mean cross-entropy."""
    result = backward(params, forward(params, batch.images), batch.labels)

    return apply_gradients(params, result.gradients, eta)


__all__ = [
    "Targets",
    "apply_gradients",
    "combine_gradients",
    "datagrad_gradients",
    "datagrad_step",
    "descend",
    "fd_regularizer_grad",
    "finite_difference",
    "penalise",
    "penalty_gradient",
    "perturbed_backward",
    "scale_gradients",
    "sgd_step",
]
