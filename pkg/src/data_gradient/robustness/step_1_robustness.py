import logging

import numpy
import pydantic

from ..data import Dataset, PerturbedDataset
from ..datagrad import adversarial_direction, make_adversarial
from ..network import MultiTaskParams, NetworkParams, backward, classify, forward
from ..tensor import Matrix, require
from .utils_robustness import AttackConfig, AttackHead, NamedModel

LOGGER = logging.getLogger(__name__)

ATTACK_CHUNK = 1000


def attack_target(
    attacker: NamedModel, testset: Dataset, head: AttackHead
) -> tuple[NetworkParams, numpy.ndarray]:
    """Network whose loss drives the attack, with the labels that loss is taken against."""
    match head:
        case AttackHead.DIGIT:
            return classify(attacker.model), testset.labels
        case AttackHead.ROTATION:
            if not isinstance(attacker.model, MultiTaskParams) or testset.aux_labels is None:
                LOGGER.error(f"{attacker.name} cannot drive a rotation attack on this test set")

                raise ValueError("rotation attacks need a multi-task attacker and rotation labels")

            return attacker.model.rotation_network(), testset.aux_labels
        case _:
            raise ValueError("Unexpected attack head")


@pydantic.validate_call(validate_return=True)
def generate_adversarial_testset(
    attacker: NamedModel, testset: Dataset, cfg: AttackConfig, phi: pydantic.NonNegativeFloat
) -> PerturbedDataset:
    """Move every test image by ``phi`` along the attacker's regularizer direction.

    The data gradient is taken at the true label; results are not clipped to [0, 1].
    """
    network, targets = attack_target(attacker, testset, cfg.use_head)
    require(
        network.input_size == testset.feature_count,
        f"attacker {attacker.name} expects {network.input_size} inputs, "
        f"test images have {testset.feature_count}",
    )

    if phi == 0:
        images = testset.images.copy()
    else:
        chunks: list[numpy.ndarray] = []

        for start in range(0, len(testset), ATTACK_CHUNK):
            inputs = Matrix(data=testset.images[start : start + ATTACK_CHUNK].T)
            result = backward(
                network, forward(network, inputs), targets[start : start + ATTACK_CHUNK]
            )
            direction = adversarial_direction(cfg.kind, result.data_gradient)

            chunks.append(make_adversarial(inputs, direction, phi).data.T)

        images = (
            numpy.concatenate(chunks) if chunks else numpy.empty((0, testset.feature_count))
        )

    LOGGER.info(f"Generated {len(testset)} adversarial samples from {attacker.name} at {phi=}.")

    return PerturbedDataset(
        images=images,
        labels=testset.labels,
        aux_labels=testset.aux_labels,
        image_shape=testset.image_shape,
        attacker=attacker.name,
        phi=phi,
    )


__all__ = ["ATTACK_CHUNK", "attack_target", "generate_adversarial_testset"]
