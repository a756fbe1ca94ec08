import logging
import pathlib

import pandas
import pydantic

from ..data import Batch, Dataset, batches, epoch_seed
from ..network import (
    Model,
    MultiTaskParams,
    NetworkParams,
    NumericalFailureError,
    classify,
    forward,
    mean_cross_entropy,
)
from ..tensor import Matrix
from .step_2_datagrad import datagrad_step
from .step_3_datagrad import multitask_datagrad_step
from .utils_datagrad import EpochRecord, TrainConfig, TrainingOutcome

LOGGER = logging.getLogger(__name__)

SCORING_CHUNK = 1000
HISTORY_COLUMNS = ["epoch", "mean_loss", "train_accuracy_pct", "validation_accuracy_pct"]


def score_dataset(model: Model, dataset: Dataset) -> tuple[float, float]:
    """Mean digit cross-entropy and accuracy percent, evaluated in chunks."""
    if not len(dataset):
        LOGGER.error("received an empty dataset")

        raise ValueError("cannot score an empty dataset")

    network = classify(model)
    total_loss = 0.0
    correct = 0

    for start in range(0, len(dataset), SCORING_CHUNK):
        images = dataset.images[start : start + SCORING_CHUNK]
        labels = dataset.labels[start : start + SCORING_CHUNK]

        prediction = forward(network, Matrix(data=images.T)).prediction

        total_loss += mean_cross_entropy(prediction, labels) * labels.size
        correct += int((prediction.data.argmax(axis=0) == labels).sum())

    return total_loss / len(dataset), 100.0 * correct / len(dataset)


def training_step(model: Model, batch: Batch, cfg: TrainConfig) -> Model:
    match model:
        case NetworkParams():
            return datagrad_step(model, batch, cfg)
        case MultiTaskParams():
            return multitask_datagrad_step(model, batch, cfg)
        case _:
            raise ValueError("Unexpected model type")


def run_epoch(model: Model, train: Dataset, cfg: TrainConfig, epoch: int) -> Model:
    for index, batch in enumerate(
        batches(train, cfg.batch_size, epoch_seed(cfg.seed, epoch)), start=1
    ):
        try:
            model = training_step(model, batch, cfg)
        except NumericalFailureError as error:
            LOGGER.error(f"numerical failure at {epoch=}, batch={index}: {error}")

            raise NumericalFailureError(f"epoch {epoch}, batch {index}: {error}") from error

    return model


@pydantic.validate_call(validate_return=True)
def train_model(
    model: Model, train: Dataset, validation: Dataset, cfg: TrainConfig
) -> TrainingOutcome:
    """Run ``cfg.epochs`` epochs, keeping the parameters of the best validation epoch.

    Without validation samples the last epoch is kept.
    """
    history: list[EpochRecord] = []
    best_model = model
    best_epoch = cfg.epochs
    best_accuracy = -1.0

    for epoch in range(1, cfg.epochs + 1):
        model = run_epoch(model, train, cfg, epoch)

        mean_loss, train_accuracy = score_dataset(model, train)
        validation_accuracy = score_dataset(model, validation)[1] if len(validation) else None

        record = EpochRecord(
            epoch=epoch,
            mean_loss=mean_loss,
            train_accuracy_pct=train_accuracy,
            validation_accuracy_pct=validation_accuracy,
        )
        history.append(record)

        LOGGER.info(
            f"Epoch {epoch}/{cfg.epochs}: loss {mean_loss:.4f}, "
            f"train accuracy {train_accuracy:.2f}%, validation accuracy {validation_accuracy}."
        )

        if validation_accuracy is None:
            best_model = model
        elif validation_accuracy > best_accuracy:
            best_model, best_epoch, best_accuracy = model, epoch, validation_accuracy

    LOGGER.info(f"Selected parameters of epoch {best_epoch}.")

    return TrainingOutcome(model=best_model, history=history, best_epoch=best_epoch)


@pydantic.validate_call
def store_history(history: list[EpochRecord], file_path: pathlib.Path) -> None:
    frame = pandas.DataFrame(
        [record.model_dump() for record in history], columns=HISTORY_COLUMNS
    )

    try:
        frame.to_csv(file_path, index=False, lineterminator="\n")
    except OSError as error:
        LOGGER.error(f"failed to write history to {file_path}")

        raise OSError(f"cannot write {file_path}: {error}") from error


__all__ = [
    "HISTORY_COLUMNS",
    "SCORING_CHUNK",
    "run_epoch",
    "score_dataset",
    "store_history",
    "train_model",
    "training_step",
]
