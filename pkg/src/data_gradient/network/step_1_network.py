import logging

import numpy
import pydantic

from ..tensor import Matrix, Vector
from .utils_network import MultiTaskParams, NetworkParams, OutputHead

LOGGER = logging.getLogger(__name__)

DIGIT_CLASSES = 10
ROTATION_CLASSES = 5


def he_layer(
    generator: numpy.random.Generator, fan_in: int, fan_out: int
) -> tuple[Matrix, Vector]:
    weights = generator.normal(loc=0.0, scale=numpy.sqrt(2.0 / fan_in), size=(fan_out, fan_in))

    return Matrix(data=weights), Vector(data=numpy.zeros(fan_out))


@pydantic.validate_call(validate_return=True)
def init_he(layer_sizes: list[int], seed: int) -> NetworkParams:
    """Draw weights from N(0, 2 / fan_in) with zero biases, reproducibly for a given seed."""
    if len(layer_sizes) < 2 or min(layer_sizes) < 1:  # noqa: PLR2004
        LOGGER.error(f"received {layer_sizes=}")

        raise ValueError("need at least an input and an output layer, all of positive size")

    generator = numpy.random.default_rng(seed)

    weights: list[Matrix] = []
    biases: list[Vector] = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:], strict=True):
        weight, bias = he_layer(generator, fan_in, fan_out)

        weights.append(weight)
        biases.append(bias)

    return NetworkParams(layer_sizes=layer_sizes, weights=weights, biases=biases, seed=seed)


@pydantic.validate_call(validate_return=True)
def init_multitask(
    trunk_sizes: list[int],
    seed: int,
    digit_classes: int = DIGIT_CLASSES,
    rotation_classes: int = ROTATION_CLASSES,
) -> MultiTaskParams:
    shared = init_he(trunk_sizes, seed)

    # heads draw from their own stream so the trunk matches init_he for the same seed
    generator = numpy.random.default_rng([seed, 1])

    heads: list[OutputHead] = []
    for classes in (digit_classes, rotation_classes):
        weight, bias = he_layer(generator, trunk_sizes[-1], classes)

        heads.append(OutputHead(weights=weight, biases=bias))

    return MultiTaskParams(shared=shared, head0=heads[0], head1=heads[1])


__all__ = ["DIGIT_CLASSES", "ROTATION_CLASSES", "he_layer", "init_he", "init_multitask"]
