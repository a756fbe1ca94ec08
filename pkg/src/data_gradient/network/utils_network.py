import logging

import numpy
import pydantic
import typing_extensions

from ..tensor import Matrix, Vector

LOGGER = logging.getLogger(__name__)


class NumericalFailureError(ArithmeticError):
    pass


class CheckpointFormatError(ValueError):
    pass


def check_layer_shapes(
    layer_sizes: list[int], weights: list[Matrix], biases: list[Vector]
) -> None:
    if len(weights) != len(layer_sizes) - 1 or len(biases) != len(layer_sizes) - 1:
        LOGGER.error(f"{layer_sizes=} with {len(weights)=} and {len(biases)=}")

        raise ValueError("one weight matrix and one bias vector are needed per non-input layer")

    for layer, (weight, bias) in enumerate(zip(weights, biases, strict=True), start=1):
        expected = (layer_sizes[layer], layer_sizes[layer - 1])

        if weight.shape != expected:
            LOGGER.error(f"layer {layer}: {weight.shape=} while {expected=}")

            raise ValueError(f"weight matrix of layer {layer} has the wrong shape")

        if bias.size != layer_sizes[layer]:
            LOGGER.error(f"layer {layer}: {bias.size=} while expecting {layer_sizes[layer]}")

            raise ValueError(f"bias vector of layer {layer} has the wrong length")

        if not numpy.isfinite(weight.data).all():
            LOGGER.error(f"layer {layer} contains non-finite weights")

            raise ValueError(f"weights of layer {layer} must be finite")


class NetworkParams(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    layer_sizes: list[pydantic.PositiveInt] = pydantic.Field(min_length=2)
    weights: list[Matrix]
    biases: list[Vector]
    seed: int

    @pydantic.model_validator(mode="after")
    def check_shapes(self: "NetworkParams") -> "NetworkParams":
        check_layer_shapes(self.layer_sizes, self.weights, self.biases)

        return self

    @property
    def layer_count(self: "NetworkParams") -> int:
        return len(self.weights)

    @property
    def input_size(self: "NetworkParams") -> int:
        return self.layer_sizes[0]


class OutputHead(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    weights: Matrix
    biases: Vector

    @pydantic.model_validator(mode="after")
    def check_shapes(self: "OutputHead") -> "OutputHead":
        if self.weights.rows != self.biases.size:
            LOGGER.error(f"{self.weights.shape=} with {self.biases.size=}")

            raise ValueError("head bias length must match its number of outputs")

        return self

    @property
    def classes(self: "OutputHead") -> int:
        return self.weights.rows


class MultiTaskParams(pydantic.BaseModel):
    """Shared rectifier trunk feeding a digit head and a rotation head.

    Every layer of ``shared`` is a hidden (rectified) layer; both heads read the last of them.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    shared: NetworkParams
    head0: OutputHead
    head1: OutputHead

    @pydantic.model_validator(mode="after")
    def check_heads(self: "MultiTaskParams") -> "MultiTaskParams":
        penultimate = self.shared.layer_sizes[-1]

        for name, head in (("head0", self.head0), ("head1", self.head1)):
            if head.weights.cols != penultimate:
                LOGGER.error(f"{name} has {head.weights.cols=} while trunk ends at {penultimate}")

                raise ValueError(f"{name} must consume the penultimate activation dimension")

        return self

    def attach(self: "MultiTaskParams", head: OutputHead) -> NetworkParams:
        return NetworkParams(
            layer_sizes=[*self.shared.layer_sizes, head.classes],
            weights=[*self.shared.weights, head.weights],
            biases=[*self.shared.biases, head.biases],
            seed=self.shared.seed,
        )

    def digit_network(self: "MultiTaskParams") -> NetworkParams:
        return self.attach(self.head0)

    def rotation_network(self: "MultiTaskParams") -> NetworkParams:
        return self.attach(self.head1)

    @classmethod
    def from_digit_network(
        cls: type["MultiTaskParams"], digit_network: NetworkParams, head1: OutputHead
    ) -> "MultiTaskParams":
        return cls(
            shared=NetworkParams(
                layer_sizes=digit_network.layer_sizes[:-1],
                weights=digit_network.weights[:-1],
                biases=digit_network.biases[:-1],
                seed=digit_network.seed,
            ),
            head0=OutputHead(weights=digit_network.weights[-1], biases=digit_network.biases[-1]),
            head1=head1,
        )


Model = typing_extensions.TypeAliasType("Model", NetworkParams | MultiTaskParams)


class ForwardTrace(pydantic.BaseModel):
    """Per-layer statistics of one forward pass; every matrix holds one column per sample.

    ``activations`` runs from the data itself (a_0) to the softmax output (a_K), so
    ``activations[-1]`` and ``prediction`` are the same matrix.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    preactivations: list[Matrix]
    activations: list[Matrix]

    @pydantic.model_validator(mode="after")
    def check_lengths(self: "ForwardTrace") -> "ForwardTrace":
        if len(self.activations) != len(self.preactivations) + 1:
            LOGGER.error(f"{len(self.activations)=} with {len(self.preactivations)=}")

            raise ValueError("a trace holds one more activation than pre-activations")

        return self

    @property
    def prediction(self: "ForwardTrace") -> Matrix:
        return self.activations[-1]

    @property
    def batch_size(self: "ForwardTrace") -> int:
        return self.activations[0].cols


class ParameterGradients(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    weight_grads: list[Matrix]
    bias_grads: list[Vector]

    @pydantic.model_validator(mode="after")
    def check_lengths(self: "ParameterGradients") -> "ParameterGradients":
        if len(self.weight_grads) != len(self.bias_grads):
            LOGGER.error(f"{len(self.weight_grads)=} with {len(self.bias_grads)=}")

            raise ValueError("weight and bias gradients must cover the same layers")

        return self

    @property
    def layer_count(self: "ParameterGradients") -> int:
        return len(self.weight_grads)


class BackpropResult(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    douts: list[Matrix]
    weight_grads: list[Matrix]
    bias_grads: list[Vector]
    data_gradient: Matrix

    @property
    def gradients(self: "BackpropResult") -> ParameterGradients:
        return ParameterGradients(weight_grads=self.weight_grads, bias_grads=self.bias_grads)


__all__ = [
    "BackpropResult",
    "CheckpointFormatError",
    "ForwardTrace",
    "Model",
    "MultiTaskParams",
    "NetworkParams",
    "NumericalFailureError",
    "OutputHead",
    "ParameterGradients",
    "check_layer_shapes",
]
