import logging
import typing

import numpy
import pydantic

from ..tensor import (
    Matrix,
    column_mean,
    hadamard,
    matmul_transpose,
    outer,
    scale,
)
from .step_2_network import rectify_deriv
from .utils_network import BackpropResult, ForwardTrace, NetworkParams

LOGGER = logging.getLogger(__name__)


def as_targets(targets: int | typing.Sequence[int] | numpy.ndarray, classes: int) -> numpy.ndarray:
    indices = numpy.atleast_1d(numpy.asarray(targets, dtype=numpy.int64))

    if indices.ndim != 1 or ((indices < 0) | (indices >= classes)).any():
        LOGGER.error(f"received targets {indices.tolist()} for {classes} classes")

        raise ValueError(f"class indices must lie in [0, {classes})")

    return indices


def one_hot(targets: numpy.ndarray, classes: int) -> Matrix:
    encoded = numpy.zeros((classes, targets.size))
    encoded[targets, numpy.arange(targets.size)] = 1.0

    return Matrix(data=encoded)


def output_error(prediction: Matrix, targets: numpy.ndarray) -> Matrix:
    """Derivative of softmax cross-entropy with respect to the logits."""
    if targets.size != prediction.cols:
        LOGGER.error(f"{targets.size=} labels for {prediction.cols=} samples")

        raise ValueError("need exactly one label per sample")

    return Matrix(data=prediction.data - one_hot(targets, prediction.rows).data)


def backpropagate_hidden(
    weights: list[Matrix],
    preactivations: list[Matrix],
    activations: list[Matrix],
    activation_error: Matrix,
) -> BackpropResult:
    """Propagate dL/da of the top hidden layer down to the data layer.

    ``weights``, ``preactivations`` and ``activations[1:]`` describe rectified layers only;
    ``activations[0]`` is the data.
    """
    batch_size = activations[0].cols

    douts: list[Matrix] = []
    weight_grads: list[Matrix] = []
    bias_grads = []

    upstream = activation_error
    for layer in reversed(range(len(weights))):
        dout = hadamard(upstream, rectify_deriv(preactivations[layer]))

        douts.insert(0, dout)
        weight_grads.insert(0, scale(outer(dout, activations[layer]), 1.0 / batch_size))
        bias_grads.insert(0, column_mean(dout))

        upstream = matmul_transpose(weights[layer], dout)

    return BackpropResult(
        douts=douts, weight_grads=weight_grads, bias_grads=bias_grads, data_gradient=upstream
    )


@pydantic.validate_call(validate_return=True)
def backward(
    params: NetworkParams,
    trace: ForwardTrace,
    targets: int | list[int] | pydantic.InstanceOf[numpy.ndarray],
) -> BackpropResult:
    """Gradients of the mean cross-entropy, plus one data-gradient column per sample."""
    if len(trace.preactivations) != params.layer_count or any(
        preactivation.rows != size
        for preactivation, size in zip(trace.preactivations, params.layer_sizes[1:], strict=True)
    ):
        LOGGER.error(f"trace with {len(trace.preactivations)} layers for {params.layer_sizes=}")

        raise ValueError("trace was not produced by these parameters")

    labels = as_targets(targets, params.layer_sizes[-1])
    dout_top = output_error(trace.prediction, labels)

    hidden = backpropagate_hidden(
        params.weights[:-1],
        trace.preactivations[:-1],
        trace.activations[:-1],
        matmul_transpose(params.weights[-1], dout_top),
    )

    return BackpropResult(
        douts=[*hidden.douts, dout_top],
        weight_grads=[
            *hidden.weight_grads,
            scale(outer(dout_top, trace.activations[-2]), 1.0 / trace.batch_size),
        ],
        bias_grads=[*hidden.bias_grads, column_mean(dout_top)],
        data_gradient=hidden.data_gradient,
    )


__all__ = ["as_targets", "backpropagate_hidden", "backward", "one_hot", "output_error"]
