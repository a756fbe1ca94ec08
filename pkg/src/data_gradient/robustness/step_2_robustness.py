import logging

import numpy
import pydantic

from ..data import Dataset
from ..network import classify, predict_classes
from ..tensor import require
from .step_1_robustness import ATTACK_CHUNK
from .utils_robustness import NamedModel

LOGGER = logging.getLogger(__name__)


@pydantic.validate_call(validate_return=True)
def evaluate_accuracy(defender: NamedModel, testset: Dataset) -> float:
    """Percentage of test samples whose digit prediction matches the label."""
    if not len(testset):
        LOGGER.error(f"{defender.name} received an empty test set")

        raise ValueError("cannot evaluate on an empty test set")

    require(
        classify(defender.model).input_size == testset.feature_count,
        f"defender {defender.name} does not fit images of {testset.feature_count} pixels",
    )

    predictions = numpy.concatenate(
        [
            predict_classes(defender.model, testset.images[start : start + ATTACK_CHUNK])
            for start in range(0, len(testset), ATTACK_CHUNK)
        ]
    )

    return 100.0 * float((predictions == testset.labels).mean())


__all__ = ["evaluate_accuracy"]
