import logging
import math

import numpy
import pydantic

from ..tensor import (
    Matrix,
    Operand,
    Vector,
    add_to_columns,
    as_columns,
    matmul,
    require,
    wrap_like,
)
from .utils_network import ForwardTrace, Model, MultiTaskParams, NetworkParams

LOGGER = logging.getLogger(__name__)

PROBABILITY_FLOOR = 1e-300


def relu(value: float) -> float:
    return max(0.0, value)


def relu_deriv(value: float) -> float:
    # subgradient 0 at exactly 0
    return 1.0 if value > 0 else 0.0


def rectify(operand: Operand) -> Operand:
    return wrap_like(operand, numpy.maximum(operand.data, 0.0))


def rectify_deriv(operand: Operand) -> Operand:
    return wrap_like(operand, (operand.data > 0).astype(numpy.float64))


def softmax(logits: Operand) -> Operand:
    """Column-wise softmax with max subtraction."""
    shifted = logits.data - logits.data.max(axis=0, keepdims=True)
    exponentials = numpy.exp(shifted)

    return wrap_like(logits, exponentials / exponentials.sum(axis=0, keepdims=True))


def forward_hidden(
    weights: list[Matrix], biases: list[Vector], inputs: Matrix
) -> tuple[list[Matrix], list[Matrix]]:
    preactivations: list[Matrix] = []
    activations: list[Matrix] = [inputs]

    for weight, bias in zip(weights, biases, strict=True):
        preactivation = add_to_columns(matmul(weight, activations[-1]), bias)

        preactivations.append(preactivation)
        activations.append(rectify(preactivation))

    return preactivations, activations


@pydantic.validate_call(validate_return=True)
def forward(params: NetworkParams, data: Operand) -> ForwardTrace:
    """Feed ``data`` (a vector, or a matrix with one sample per column) through the network."""
    inputs = as_columns(data)
    require(
        inputs.rows == params.input_size,
        f"input of length {inputs.rows} does not fit {params.input_size} input units",
    )

    preactivations, activations = forward_hidden(params.weights[:-1], params.biases[:-1], inputs)

    logits = add_to_columns(matmul(params.weights[-1], activations[-1]), params.biases[-1])

    return ForwardTrace(
        preactivations=[*preactivations, logits], activations=[*activations, softmax(logits)]
    )


@pydantic.validate_call(validate_return=True)
def cross_entropy_loss(prediction: Vector, target: int) -> float:
    if not 0 <= target < prediction.size:
        LOGGER.error(f"{target=} outside {prediction.size} classes")

        raise ValueError("target class index out of range")

    return -math.log(max(float(prediction.data[target]), PROBABILITY_FLOOR))


def mean_cross_entropy(prediction: Matrix, targets: numpy.ndarray) -> float:
    picked = prediction.data[targets, numpy.arange(prediction.cols)]

    return float(-numpy.log(numpy.maximum(picked, PROBABILITY_FLOOR)).mean())


def classify(model: Model) -> NetworkParams:
    match model:
        case NetworkParams():
            return model
        case MultiTaskParams():
            return model.digit_network()
        case _:
            raise ValueError("Unexpected model type")


def predict_classes(model: Model, images: numpy.ndarray) -> numpy.ndarray:
    """Digit predictions for ``images`` laid out one sample per row."""
    trace = forward(classify(model), Matrix(data=images.T))

    return trace.prediction.data.argmax(axis=0)


__all__ = [
    "PROBABILITY_FLOOR",
    "classify",
    "cross_entropy_loss",
    "forward",
    "forward_hidden",
    "mean_cross_entropy",
    "predict_classes",
    "rectify",
    "rectify_deriv",
    "relu",
    "relu_deriv",
    "softmax",
]
