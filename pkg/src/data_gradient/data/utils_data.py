import logging
import typing

import numpy
import pydantic

from ..tensor import Matrix

LOGGER = logging.getLogger(__name__)

IMAGE_SHAPE = (28, 28)
DIGIT_CLASSES = 10
ROTATION_CLASSES = 5


class IDXFormatError(ValueError):
    pass


class DatasetConsistencyError(ValueError):
    pass


class DoubleNormalisationError(ValueError):
    pass


def frozen(array: numpy.ndarray) -> numpy.ndarray:
    """Read-only array; a read-only array owning its buffer is kept without a copy."""
    if array.flags.owndata and not array.flags.writeable:
        return array

    array = numpy.array(array)
    array.flags.writeable = False

    return array


def check_label_lengths(
    count: int, labels: numpy.ndarray, aux_labels: numpy.ndarray | None
) -> None:
    if labels.shape != (count,):
        LOGGER.error(f"{labels.shape=} for {count} images")

        raise DatasetConsistencyError(f"{count} images but {labels.size} labels")

    if aux_labels is not None and aux_labels.shape != (count,):
        LOGGER.error(f"{aux_labels.shape=} for {count} images")

        raise DatasetConsistencyError(f"{count} images but {aux_labels.size} auxiliary labels")


def check_label_range(labels: numpy.ndarray, classes: int, what: str = "label") -> None:
    """Reject the first class index outside ``0 .. classes - 1``, naming its position."""
    outside = numpy.flatnonzero((labels < 0) | (labels >= classes))

    if outside.size:
        index = int(outside[0])
        LOGGER.error(f"{outside.size} {what}s outside [0, {classes}), first at {index=}")

        raise DatasetConsistencyError(
            f"{what} {int(labels[index])} at index {index} is not a class in 0-{classes - 1}"
        )


class RawDataset(pydantic.BaseModel):
    """Images exactly as stored in IDX files: one row of 0-255 bytes per sample."""

    model_config = pydantic.ConfigDict(frozen=True)

    images: pydantic.InstanceOf[numpy.ndarray]
    labels: pydantic.InstanceOf[numpy.ndarray]
    image_shape: tuple[pydantic.PositiveInt, pydantic.PositiveInt] = IMAGE_SHAPE

    @pydantic.model_validator(mode="after")
    def check_consistency(self: "RawDataset") -> "RawDataset":
        if self.images.dtype != numpy.uint8 or self.images.ndim != 2:  # noqa: PLR2004
            LOGGER.error(f"{self.images.dtype=} with {self.images.shape=}")

            raise ValueError("raw images must be a two-dimensional array of bytes")

        if self.images.shape[1] != self.image_shape[0] * self.image_shape[1]:
            LOGGER.error(f"{self.images.shape=} for {self.image_shape=}")

            raise DatasetConsistencyError("image rows do not match the declared image shape")

        check_label_lengths(self.images.shape[0], self.labels, None)

        return self

    def __len__(self: "RawDataset") -> int:
        return int(self.images.shape[0])


class Dataset(pydantic.BaseModel):
    """Normalised samples, one row per image, every pixel in [0, 1]."""

    model_config = pydantic.ConfigDict(frozen=True)

    bounded_pixels: typing.ClassVar[bool] = True

    images: pydantic.InstanceOf[numpy.ndarray]
    labels: pydantic.InstanceOf[numpy.ndarray]
    aux_labels: pydantic.InstanceOf[numpy.ndarray] | None = None
    image_shape: tuple[pydantic.PositiveInt, pydantic.PositiveInt] = IMAGE_SHAPE

    @pydantic.field_validator("images", mode="before")
    @classmethod
    def coerce_images(cls: type["Dataset"], value: typing.Any) -> numpy.ndarray:  # noqa: ANN401
        return frozen(numpy.asarray(value, dtype=numpy.float64))

    @pydantic.field_validator("labels", "aux_labels", mode="before")
    @classmethod
    def coerce_labels(
        cls: type["Dataset"], value: typing.Any  # noqa: ANN401
    ) -> numpy.ndarray | None:
        if value is None:
            return None

        return frozen(numpy.asarray(value, dtype=numpy.int64))

    @pydantic.model_validator(mode="after")
    def check_consistency(self: "Dataset") -> "Dataset":
        if self.images.ndim != 2 or self.images.shape[1] != self.feature_count:  # noqa: PLR2004
            LOGGER.error(f"{self.images.shape=} for {self.image_shape=}")

            raise DatasetConsistencyError("images must be rows of the declared image size")

        check_label_lengths(self.images.shape[0], self.labels, self.aux_labels)
        check_label_range(self.labels, DIGIT_CLASSES)

        if self.aux_labels is not None:
            check_label_range(self.aux_labels, ROTATION_CLASSES, "auxiliary label")

        if self.bounded_pixels and self.images.size and (
            self.images.min() < 0.0 or self.images.max() > 1.0
        ):
            LOGGER.error(f"pixel range [{self.images.min()}, {self.images.max()}]")

            raise ValueError("normalised pixels must lie in [0, 1]")

        return self

    @property
    def feature_count(self: "Dataset") -> int:
        return self.image_shape[0] * self.image_shape[1]

    def __len__(self: "Dataset") -> int:
        return int(self.images.shape[0])

    def subset(self: "Dataset", indices: numpy.ndarray) -> "Dataset":
        return type(self).model_validate(
            {
                **self.model_dump(exclude={"images", "labels", "aux_labels"}),
                "images": self.images[indices],
                "labels": self.labels[indices],
                "aux_labels": None if self.aux_labels is None else self.aux_labels[indices],
            }
        )


class PerturbedDataset(Dataset):
    """Adversarially perturbed samples; pixels may leave [0, 1] since they are never clipped."""

    bounded_pixels: typing.ClassVar[bool] = False

    attacker: str
    phi: float


class SplitSpec(pydantic.BaseModel):
    validation_count: pydantic.NonNegativeInt
    shuffle_seed: int


class Batch(pydantic.BaseModel):
    """A mini-batch with one sample per column of ``images``."""

    model_config = pydantic.ConfigDict(frozen=True)

    images: Matrix
    labels: pydantic.InstanceOf[numpy.ndarray]
    aux_labels: pydantic.InstanceOf[numpy.ndarray] | None = None

    @pydantic.model_validator(mode="after")
    def check_consistency(self: "Batch") -> "Batch":
        check_label_lengths(self.images.cols, self.labels, self.aux_labels)

        return self

    @property
    def size(self: "Batch") -> int:
        return self.images.cols

    @classmethod
    def from_dataset(cls: type["Batch"], dataset: Dataset) -> "Batch":
        if not len(dataset):
            LOGGER.error("received an empty dataset")

            raise ValueError("a batch needs at least one sample")

        return cls(
            images=Matrix(data=dataset.images.T),
            labels=dataset.labels,
            aux_labels=dataset.aux_labels,
        )


__all__ = [
    "DIGIT_CLASSES",
    "IMAGE_SHAPE",
    "ROTATION_CLASSES",
    "Batch",
    "Dataset",
    "DatasetConsistencyError",
    "DoubleNormalisationError",
    "IDXFormatError",
    "PerturbedDataset",
    "RawDataset",
    "SplitSpec",
    "check_label_lengths",
    "check_label_range",
    "frozen",
]
