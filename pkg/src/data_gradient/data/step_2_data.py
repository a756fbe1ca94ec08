import logging

import numpy
import pydantic

from .utils_data import Dataset, DoubleNormalisationError, RawDataset, SplitSpec

LOGGER = logging.getLogger(__name__)

PIXEL_MAXIMUM = 255.0


@pydantic.validate_call(validate_return=True)
def normalize(raw: RawDataset | Dataset) -> Dataset:
    """Scale 0-255 grey levels to [0, 1], refusing data that already looks normalised."""
    if isinstance(raw, Dataset) or (len(raw) and raw.images.max() <= 1):
        LOGGER.error(f"received {type(raw).__name__} whose pixels already lie in [0, 1]")

        raise DoubleNormalisationError("dataset appears to be normalised already")

    return Dataset(
        images=raw.images.astype(numpy.float64) / PIXEL_MAXIMUM,
        labels=raw.labels,
        image_shape=raw.image_shape,
    )


@pydantic.validate_call(validate_return=True)
def split(train: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Draw a validation subset without replacement; both parts keep their original order."""
    if spec.validation_count > len(train):
        LOGGER.error(f"{spec.validation_count=} exceeds {len(train)} training samples")

        raise ValueError("validation subset cannot be larger than the training set")

    permutation = numpy.random.default_rng(spec.shuffle_seed).permutation(len(train))

    validation_indices = numpy.sort(permutation[: spec.validation_count])
    train_indices = numpy.sort(permutation[spec.validation_count :])

    LOGGER.info(
        f"Split {len(train)} samples into {train_indices.size} training"
        f" and {validation_indices.size} validation samples."
    )

    return train.subset(train_indices), train.subset(validation_indices)


__all__ = ["PIXEL_MAXIMUM", "normalize", "split"]
