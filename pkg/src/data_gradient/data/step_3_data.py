import collections.abc
import logging

import numpy
import pydantic
import scipy.ndimage

from .utils_data import IMAGE_SHAPE, Batch, Dataset

LOGGER = logging.getLogger(__name__)

# auxiliary class -> rotation in degrees, positive meaning counter-clockwise ("to the left")
ROTATION_ANGLES: dict[int, float] = {0: 0.0, 1: 15.0, 2: 30.0, 3: -15.0, 4: -30.0}


def rotate_images(
    images: numpy.ndarray, angle: float, image_shape: tuple[int, int]
) -> numpy.ndarray:
    """Bilinear rotation about the image centre on a black background, clamped to [0, 1]."""
    if angle == 0:
        return images.copy()

    stack = images.reshape(-1, *image_shape)
    rotated = scipy.ndimage.rotate(
        stack, angle, axes=(2, 1), reshape=False, order=1, mode="constant", cval=0.0
    )

    return numpy.clip(rotated, 0.0, 1.0, out=rotated).reshape(images.shape)


@pydantic.validate_call(validate_return=True)
def rotation_augment(train: Dataset) -> Dataset:
    """Emit every sample five times, once per rotation class, keeping the digit label."""
    if train.image_shape != IMAGE_SHAPE:
        LOGGER.error(f"received {train.image_shape=} while expecting {IMAGE_SHAPE}")

        raise ValueError("rotation augmentation expects 28x28 images")

    # row 5 * sample + aux label, filled one angle at a time
    images = numpy.empty((len(train) * len(ROTATION_ANGLES), train.feature_count))
    for position, angle in ROTATION_ANGLES.items():
        images[position :: len(ROTATION_ANGLES)] = (
            train.images if angle == 0 else rotate_images(train.images, angle, train.image_shape)
        )
    images.flags.writeable = False

    augmented = Dataset(
        images=images,
        labels=numpy.repeat(train.labels, len(ROTATION_ANGLES)),
        aux_labels=numpy.tile(numpy.array(list(ROTATION_ANGLES)), len(train)),
        image_shape=train.image_shape,
    )

    LOGGER.info(f"Augmented {len(train)} samples into {len(augmented)} rotated samples.")

    return augmented


def batches(
    dataset: Dataset, batch_size: int, epoch_seed: int | None
) -> collections.abc.Iterator[Batch]:
    """Yield mini-batches in seeded shuffled order, or dataset order without a seed."""
    if batch_size < 1:
        LOGGER.error(f"received {batch_size=}")

        raise ValueError("batch size must be positive")

    order = (
        numpy.arange(len(dataset))
        if epoch_seed is None
        else numpy.random.default_rng(epoch_seed).permutation(len(dataset))
    )

    for start in range(0, len(dataset), batch_size):
        yield Batch.from_dataset(dataset.subset(order[start : start + batch_size]))


def epoch_seed(seed: int, epoch: int) -> int:
    return int(numpy.random.SeedSequence([seed, epoch]).generate_state(1)[0])


__all__ = ["ROTATION_ANGLES", "batches", "epoch_seed", "rotate_images", "rotation_augment"]
