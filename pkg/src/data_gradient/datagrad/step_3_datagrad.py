import logging

import numpy
import pydantic

from ..data import Batch
from ..network import (
    ForwardTrace,
    MultiTaskParams,
    OutputHead,
    ParameterGradients,
    as_targets,
    backward,
    forward_hidden,
    softmax,
)
from ..tensor import Matrix, Operand, Vector, add_to_columns, as_columns, matmul
from .step_2_datagrad import (
    Targets,
    combine_gradients,
    descend,
    finite_difference,
    penalise,
    perturbed_backward,
    scale_gradients,
)
from .utils_datagrad import MultiTaskGradients, TrainConfig

LOGGER = logging.getLogger(__name__)


def head_trace(
    head: OutputHead, preactivations: list[Matrix], activations: list[Matrix]
) -> ForwardTrace:
    """Complete a trunk pass with one output head."""
    logits = add_to_columns(matmul(head.weights, activations[-1]), head.biases)

    return ForwardTrace(
        preactivations=[*preactivations, logits], activations=[*activations, softmax(logits)]
    )


def zero_gradients(head: OutputHead) -> ParameterGradients:
    return ParameterGradients(
        weight_grads=[Matrix(data=numpy.zeros(head.weights.shape))],
        bias_grads=[Vector(data=numpy.zeros(head.biases.size))],
    )


def split_head(gradients: ParameterGradients) -> tuple[ParameterGradients, ParameterGradients]:
    """Separate trunk layers from the output layer."""
    return (
        ParameterGradients(
            weight_grads=gradients.weight_grads[:-1], bias_grads=gradients.bias_grads[:-1]
        ),
        ParameterGradients(
            weight_grads=gradients.weight_grads[-1:], bias_grads=gradients.bias_grads[-1:]
        ),
    )


@pydantic.validate_call(validate_return=True)
def multitask_forward_backward(
    mt: MultiTaskParams, data: Operand, digits: Targets, aux: Targets, cfg: TrainConfig
) -> MultiTaskGradients:
    """Gradients of ``L_digit + gamma * L_rotation`` sharing a single trunk pass.

    The returned ``digit`` pass holds the data gradient of the digit loss alone.
    """
    inputs = as_columns(data)
    rotations = as_targets(aux, mt.head1.classes)
    preactivations, activations = forward_hidden(mt.shared.weights, mt.shared.biases, inputs)

    digit = backward(
        mt.digit_network(), head_trace(mt.head0, preactivations, activations), digits
    )

    if cfg.gamma == 0:
        return MultiTaskGradients(
            digit_path=digit.gradients, rotation_head=zero_gradients(mt.head1), digit=digit
        )

    rotation = backward(
        mt.rotation_network(), head_trace(mt.head1, preactivations, activations), rotations
    )
    rotation_trunk, rotation_head = split_head(rotation.gradients)
    digit_trunk, digit_head = split_head(digit.gradients)
    trunk = combine_gradients(digit_trunk, 1.0, rotation_trunk, cfg.gamma)

    return MultiTaskGradients(
        digit_path=ParameterGradients(
            weight_grads=[*trunk.weight_grads, *digit_head.weight_grads],
            bias_grads=[*trunk.bias_grads, *digit_head.bias_grads],
        ),
        rotation_head=scale_gradients(rotation_head, cfg.gamma),
        digit=digit,
    )


def require_aux_labels(batch: Batch) -> numpy.ndarray:
    if batch.aux_labels is None:
        LOGGER.error(f"batch of {batch.size} samples carries no rotation labels")

        raise ValueError("multi-task training needs auxiliary labels")

    return batch.aux_labels


@pydantic.validate_call(validate_return=True)
def multitask_datagrad_gradients(
    mt: MultiTaskParams, batch: Batch, cfg: TrainConfig
) -> MultiTaskGradients:
    """Descent direction for both paths; the regularizer only reaches the digit path."""
    base = multitask_forward_backward(
        mt, batch.images, batch.labels, require_aux_labels(batch), cfg
    )
    digit_network = mt.digit_network()

    if cfg.lambda1 == 0:
        digit_path = scale_gradients(base.digit_path, cfg.lambda0)
    else:
        perturbed = perturbed_backward(
            digit_network,
            batch.images,
            batch.labels,
            base.digit.data_gradient,
            cfg.reg_kind,
            cfg.fd_step,
        )
        regularizer = finite_difference(base.digit.gradients, perturbed.gradients, cfg.fd_step)
        digit_path = combine_gradients(base.digit_path, cfg.lambda0, regularizer, cfg.lambda1)

    return MultiTaskGradients(
        digit_path=penalise(digit_path, digit_network.weights, cfg.weight_penalty),
        rotation_head=penalise(
            scale_gradients(base.rotation_head, cfg.lambda0),
            [mt.head1.weights],
            cfg.weight_penalty,
        ),
        digit=base.digit,
    )


@pydantic.validate_call(validate_return=True)
def apply_multitask_gradients(
    mt: MultiTaskParams, gradients: MultiTaskGradients, eta: float
) -> MultiTaskParams:
    digit_network = mt.digit_network()
    weights, biases = descend(
        digit_network.weights, digit_network.biases, gradients.digit_path, eta
    )
    head_weights, head_biases = descend(
        [mt.head1.weights], [mt.head1.biases], gradients.rotation_head, eta
    )

    return MultiTaskParams.from_digit_network(
        digit_network.model_copy(update={"weights": weights, "biases": biases}),
        OutputHead(weights=head_weights[0], biases=head_biases[0]),
    )


@pydantic.validate_call(validate_return=True)
def multitask_datagrad_step(
    mt: MultiTaskParams, batch: Batch, cfg: TrainConfig
) -> MultiTaskParams:
    return apply_multitask_gradients(mt, multitask_datagrad_gradients(mt, batch, cfg), cfg.eta)


__all__ = [
    "apply_multitask_gradients",
    "head_trace",
    "multitask_datagrad_gradients",
    "multitask_datagrad_step",
    "multitask_forward_backward",
    "require_aux_labels",
    "split_head",
    "zero_gradients",
]
