import logging
import pathlib
import struct

import numpy
import pydantic

from .utils_data import (
    DIGIT_CLASSES,
    Dataset,
    DatasetConsistencyError,
    IDXFormatError,
    PerturbedDataset,
    RawDataset,
    check_label_range,
)

LOGGER = logging.getLogger(__name__)

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
FLOAT_IMAGE_MAGIC = 0x00000D03

BYTE_TYPE = numpy.dtype(">u1")
FLOAT_TYPE = numpy.dtype(">f8")


def parse_idx(payload: bytes, expected_magic: int, item_type: numpy.dtype) -> numpy.ndarray:
    """Decode one IDX payload into an array shaped by its header dimensions."""
    if len(payload) < 4:  # noqa: PLR2004
        LOGGER.error(f"{len(payload)=} bytes cannot hold a magic number")

        raise IDXFormatError("IDX file truncated at byte offset 0")

    (magic,) = struct.unpack(">I", payload[:4])
    if magic != expected_magic:
        LOGGER.error(f"{magic=:#010x} while expecting {expected_magic:#010x}")

        raise IDXFormatError(f"wrong magic {magic:#010x}, expected {expected_magic:#010x}")

    dimension_count = magic & 0xFF
    header_end = 4 + 4 * dimension_count
    if len(payload) < header_end:
        LOGGER.error(f"{len(payload)=} bytes cannot hold {dimension_count} dimensions")

        raise IDXFormatError(f"IDX file truncated at byte offset {len(payload)}")

    dimensions = struct.unpack(f">{dimension_count}I", payload[4:header_end])
    expected_end = header_end + int(numpy.prod(dimensions)) * item_type.itemsize

    if len(payload) < expected_end:
        LOGGER.error(f"{len(payload)=} bytes while header declares {expected_end}")

        raise IDXFormatError(f"IDX file truncated at byte offset {len(payload)}")

    if len(payload) > expected_end:
        LOGGER.error(f"{len(payload) - expected_end} trailing bytes after offset {expected_end}")

        raise IDXFormatError(f"unexpected trailing data at byte offset {expected_end}")

    return numpy.frombuffer(payload, dtype=item_type, offset=header_end).reshape(dimensions)


def encode_idx(array: numpy.ndarray, magic: int, item_type: numpy.dtype) -> bytes:
    header = struct.pack(f">I{array.ndim}I", magic, *array.shape)

    return header + numpy.ascontiguousarray(array, dtype=item_type).tobytes()


def read_file(file_path: pathlib.Path) -> bytes:
    if not file_path.exists():
        LOGGER.error(f"{file_path=} refers to a non-existing file")

        raise FileNotFoundError(f"IDX file '{file_path}' is missing")

    return file_path.read_bytes()


def pair_counts(images: numpy.ndarray, labels: numpy.ndarray) -> None:
    if images.shape[0] != labels.shape[0]:
        LOGGER.error(f"{images.shape[0]=} images against {labels.shape[0]=} labels")

        raise DatasetConsistencyError(
            f"image file holds {images.shape[0]} samples but label file holds {labels.shape[0]}"
        )


@pydantic.validate_call(validate_return=True)
def load_idx(images_path: pathlib.Path, labels_path: pathlib.Path) -> RawDataset:
    images = parse_idx(read_file(images_path), IMAGE_MAGIC, BYTE_TYPE)
    labels = parse_idx(read_file(labels_path), LABEL_MAGIC, BYTE_TYPE)
    pair_counts(images, labels)
    check_label_range(labels, DIGIT_CLASSES)

    LOGGER.info(f"Loaded {images.shape[0]} samples from '{images_path}'.")

    return RawDataset(
        images=images.reshape(images.shape[0], -1).astype(numpy.uint8),
        labels=labels.astype(numpy.uint8),
        image_shape=images.shape[1:],
    )


@pydantic.validate_call
def store_idx(raw: RawDataset, images_path: pathlib.Path, labels_path: pathlib.Path) -> None:
    images = raw.images.reshape(len(raw), *raw.image_shape)

    images_path.write_bytes(encode_idx(images, IMAGE_MAGIC, BYTE_TYPE))
    labels_path.write_bytes(encode_idx(raw.labels, LABEL_MAGIC, BYTE_TYPE))


@pydantic.validate_call
def store_float_idx(
    dataset: Dataset, images_path: pathlib.Path, labels_path: pathlib.Path
) -> None:
    """Write images with the float64 IDX variant (magic 0x00000D03) and labels as bytes."""
    images = dataset.images.reshape(len(dataset), *dataset.image_shape)

    images_path.write_bytes(encode_idx(images, FLOAT_IMAGE_MAGIC, FLOAT_TYPE))
    labels_path.write_bytes(encode_idx(dataset.labels, LABEL_MAGIC, BYTE_TYPE))


@pydantic.validate_call(validate_return=True)
def load_float_idx(
    images_path: pathlib.Path, labels_path: pathlib.Path, attacker: str, phi: float
) -> PerturbedDataset:
    images = parse_idx(read_file(images_path), FLOAT_IMAGE_MAGIC, FLOAT_TYPE)
    labels = parse_idx(read_file(labels_path), LABEL_MAGIC, BYTE_TYPE)
    pair_counts(images, labels)
    check_label_range(labels, DIGIT_CLASSES)

    return PerturbedDataset(
        images=images.reshape(images.shape[0], -1),
        labels=labels,
        image_shape=images.shape[1:],
        attacker=attacker,
        phi=phi,
    )


__all__ = [
    "FLOAT_IMAGE_MAGIC",
    "IMAGE_MAGIC",
    "LABEL_MAGIC",
    "encode_idx",
    "load_float_idx",
    "load_idx",
    "parse_idx",
    "store_float_idx",
    "store_idx",
]
