import logging
import pathlib
import struct

import numpy
import pydantic

from ..tensor import Matrix, Vector
from .utils_network import CheckpointFormatError, Model, MultiTaskParams, NetworkParams, OutputHead

LOGGER = logging.getLogger(__name__)

CHECKPOINT_MAGIC = b"DGRD"
SINGLE_TASK_VERSION = 1
MULTI_TASK_VERSION = 2

FLOAT_TYPE = numpy.dtype("<f8")


def encode_u32s(values: list[int]) -> bytes:
    return struct.pack(f"<{len(values)}I", *values)


def encode_layers(weights: list[Matrix], biases: list[Vector]) -> bytes:
    return b"".join(
        [weight.data.astype(FLOAT_TYPE).tobytes(order="C") for weight in weights]
        + [bias.data.astype(FLOAT_TYPE).tobytes() for bias in biases]
    )


@pydantic.validate_call(validate_return=True)
def serialise_checkpoint(model: Model) -> bytes:
    match model:
        case NetworkParams():
            header = encode_u32s([SINGLE_TASK_VERSION, model.layer_count + 1, *model.layer_sizes])

            return CHECKPOINT_MAGIC + header + encode_layers(model.weights, model.biases)
        case MultiTaskParams():
            trunk = model.shared
            header = encode_u32s(
                [
                    MULTI_TASK_VERSION,
                    trunk.layer_count + 1,
                    *trunk.layer_sizes,
                    2,
                    model.head0.classes,
                    model.head1.classes,
                ]
            )

            return (
                CHECKPOINT_MAGIC
                + header
                + encode_layers(trunk.weights, trunk.biases)
                + encode_layers([model.head0.weights], [model.head0.biases])
                + encode_layers([model.head1.weights], [model.head1.biases])
            )
        case _:
            raise ValueError("Unexpected model type")


class CheckpointReader:
    def __init__(self: "CheckpointReader", payload: bytes) -> None:
        self.payload = payload
        self.offset = 0

    def take(self: "CheckpointReader", count: int) -> bytes:
        if self.offset + count > len(self.payload):
            LOGGER.error(f"needed {count} bytes at offset {self.offset} of {len(self.payload)}")

            raise CheckpointFormatError(f"checkpoint truncated at byte offset {self.offset}")

        chunk = self.payload[self.offset : self.offset + count]
        self.offset += count

        return chunk

    def u32s(self: "CheckpointReader", count: int) -> list[int]:
        return list(struct.unpack(f"<{count}I", self.take(4 * count)))

    def sizes(self: "CheckpointReader", count: int, minimum: int, what: str) -> list[int]:
        if count < minimum:
            LOGGER.error(f"{count=} {what} while at least {minimum} are needed")

            raise CheckpointFormatError(f"checkpoint declares {count} {what}")

        sizes = self.u32s(count)
        if 0 in sizes:
            LOGGER.error(f"{sizes=} contains an empty layer")

            raise CheckpointFormatError(f"checkpoint declares an empty layer among its {what}")

        return sizes

    def floats(self: "CheckpointReader", shape: tuple[int, ...]) -> numpy.ndarray:
        count = int(numpy.prod(shape))

        return numpy.frombuffer(self.take(8 * count), dtype=FLOAT_TYPE).reshape(shape)

    def layers(
        self: "CheckpointReader", layer_sizes: list[int]
    ) -> tuple[list[Matrix], list[Vector]]:
        weights = [
            Matrix(data=self.floats((fan_out, fan_in)))
            for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:], strict=True)
        ]
        biases = [Vector(data=self.floats((fan_out,))) for fan_out in layer_sizes[1:]]

        return weights, biases

    def finish(self: "CheckpointReader") -> None:
        if self.offset != len(self.payload):
            LOGGER.error(f"{len(self.payload) - self.offset} trailing bytes after {self.offset}")

            raise CheckpointFormatError("checkpoint has trailing bytes")


@pydantic.validate_call(validate_return=True)
def deserialise_checkpoint(payload: bytes, seed: int = 0) -> Model:
    reader = CheckpointReader(payload)

    if (magic := reader.take(len(CHECKPOINT_MAGIC))) != CHECKPOINT_MAGIC:
        LOGGER.error(f"{magic=} while expecting {CHECKPOINT_MAGIC!r}")

        raise CheckpointFormatError("not a checkpoint file: wrong magic bytes")

    version, layer_count = reader.u32s(2)
    if version not in (SINGLE_TASK_VERSION, MULTI_TASK_VERSION):
        LOGGER.error(f"{version=} is not supported")

        raise CheckpointFormatError(f"unsupported checkpoint format version {version}")

    layer_sizes = reader.sizes(layer_count, 2, "layers")

    if version == SINGLE_TASK_VERSION:
        weights, biases = reader.layers(layer_sizes)
        reader.finish()

        return NetworkParams(layer_sizes=layer_sizes, weights=weights, biases=biases, seed=seed)

    (head_count,) = reader.u32s(1)
    if head_count != 2:  # noqa: PLR2004
        LOGGER.error(f"{head_count=} while a multi-task checkpoint holds 2 heads")

        raise CheckpointFormatError("multi-task checkpoints hold exactly two heads")

    head_sizes = reader.sizes(head_count, 2, "heads")

    weights, biases = reader.layers(layer_sizes)
    heads = []
    for classes in head_sizes:
        head_weights, head_biases = reader.layers([layer_sizes[-1], classes])

        heads.append(OutputHead(weights=head_weights[0], biases=head_biases[0]))
    reader.finish()

    return MultiTaskParams(
        shared=NetworkParams(layer_sizes=layer_sizes, weights=weights, biases=biases, seed=seed),
        head0=heads[0],
        head1=heads[1],
    )


@pydantic.validate_call
def store_checkpoint(model: Model, file_path: pathlib.Path) -> None:
    file_path.write_bytes(serialise_checkpoint(model))


@pydantic.validate_call(validate_return=True)
def load_checkpoint(file_path: pathlib.Path) -> Model:
    if not file_path.exists():
        LOGGER.error(f"{file_path=} refers to a non-existing file")

        raise FileNotFoundError(f"checkpoint '{file_path}' is missing")

    return deserialise_checkpoint(file_path.read_bytes())


__all__ = [
    "CHECKPOINT_MAGIC",
    "MULTI_TASK_VERSION",
    "SINGLE_TASK_VERSION",
    "CheckpointReader",
    "deserialise_checkpoint",
    "load_checkpoint",
    "serialise_checkpoint",
    "store_checkpoint",
]
