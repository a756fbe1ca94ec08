import hashlib
import json
import logging
import pathlib

import pydantic

from . import METADATA
from .data import (
    Dataset,
    SplitSpec,
    load_idx,
    normalize,
    rotation_augment,
    split,
    store_float_idx,
)
from .datagrad import store_history, train_model
from .network import (
    DIGIT_CLASSES,
    Model,
    init_he,
    init_multitask,
    load_checkpoint,
    store_checkpoint,
)
from .robustness import (
    AttackHead,
    NamedModel,
    generate_adversarial_testset,
    sidecar_path,
    sweep,
    write_report,
    write_text,
)
from .utils_top_level import (
    ConfigurationError,
    RunConfig,
    build_attack_config,
    build_train_config,
)

LOGGER = logging.getLogger(__name__)


def file_digest(file_path: pathlib.Path) -> str:
    if not file_path.exists():
        LOGGER.error(f"{file_path=} refers to a non-existing file")

        raise FileNotFoundError(f"Input file {file_path} is missing.")

    return hashlib.sha256(file_path.read_bytes()).hexdigest()


def run_metadata(
    config: RunConfig, command: str, inputs: list[pathlib.Path]
) -> dict[str, pydantic.JsonValue]:
    """Everything needed to repeat a run: configuration, seeds, version and input hashes."""
    return {
        "command": command,
        "config": config.model_dump(mode="json"),
        "seeds": {"initialisation": config.seed, "split": config.seed, "epochs": config.seed},
        "version": METADATA["Version"],
        "inputs": {str(path): file_digest(path) for path in inputs},
    }


def claim_outputs(outputs: list[pathlib.Path], force: bool) -> None:
    """Refuse to overwrite existing outputs unless forced; nothing is written here."""
    existing = [path for path in outputs if path.exists()]

    if existing and not force:
        LOGGER.error(f"{existing=} while {force=}")

        raise FileExistsError(f"Output {existing[0]} exists already, use force to overwrite.")

    for path in existing:
        LOGGER.warning(f"Overwriting {path}.")


def write_sidecar(output_path: pathlib.Path, metadata: dict[str, pydantic.JsonValue]) -> None:
    write_text(sidecar_path(output_path), json.dumps(metadata, sort_keys=True, indent=4) + "\n")


def load_normalised(images_path: pathlib.Path, labels_path: pathlib.Path) -> Dataset:
    dataset = normalize(load_idx(images_path, labels_path))
    LOGGER.info(f"Loaded {len(dataset)} samples from {images_path}.")

    return dataset


def initial_model(config: RunConfig, input_size: int) -> Model:
    trunk_sizes = [input_size, *config.hidden_sizes]

    if config.mode.multitask:
        return init_multitask(trunk_sizes, config.seed)

    return init_he([*trunk_sizes, DIGIT_CLASSES], config.seed)


@pydantic.validate_call(validate_return=True)
def train_model_run(config: RunConfig) -> pathlib.Path:
    train_images = config.required("train_images")
    train_labels = config.required("train_labels")
    out = config.required("out")

    checkpoint_path = out / f"{config.mode.value}.dgrd"
    history_path = out / f"{config.mode.value}.history.csv"

    train_config = build_train_config(config)
    claim_outputs([checkpoint_path, history_path, sidecar_path(checkpoint_path)], config.force)
    metadata = run_metadata(config, "train", [train_images, train_labels])

    dataset = load_normalised(train_images, train_labels)
    train, validation = split(
        dataset, SplitSpec(validation_count=config.validation_count, shuffle_seed=config.seed)
    )

    if config.mode.multitask:
        train = rotation_augment(train)

    outcome = train_model(
        initial_model(config, dataset.feature_count), train, validation, train_config
    )

    out.mkdir(parents=True, exist_ok=True)
    store_checkpoint(outcome.model, checkpoint_path)
    store_history(outcome.history, history_path)
    write_sidecar(checkpoint_path, {**metadata, "best_epoch": outcome.best_epoch})

    return checkpoint_path.resolve()


@pydantic.validate_call(validate_return=True)
def attack_model(
    config: RunConfig, attacker_checkpoint: pathlib.Path, phi: pydantic.NonNegativeFloat
) -> pathlib.Path:
    test_images = config.required("test_images")
    test_labels = config.required("test_labels")
    out = config.required("out")

    attack_config = build_attack_config(config)
    prefix = f"{attacker_checkpoint.stem}-{config.attack_kind.value}-phi{phi:g}"
    images_path = out / f"{prefix}-images-idx3-f64"
    labels_path = out / f"{prefix}-labels-idx1-ubyte"

    claim_outputs([images_path, labels_path, sidecar_path(images_path)], config.force)
    metadata = run_metadata(config, "attack", [test_images, test_labels, attacker_checkpoint])

    testset = load_normalised(test_images, test_labels)
    if attack_config.use_head == AttackHead.ROTATION:
        testset = rotation_augment(testset)

    attacker = NamedModel(
        name=attacker_checkpoint.stem, model=load_checkpoint(attacker_checkpoint)
    )
    perturbed = generate_adversarial_testset(attacker, testset, attack_config, phi)

    out.mkdir(parents=True, exist_ok=True)
    store_float_idx(perturbed, images_path, labels_path)
    write_sidecar(images_path, {**metadata, "phi": phi})

    return images_path.resolve()


@pydantic.validate_call(validate_return=True)
def sweep_models(
    config: RunConfig,
    defender_checkpoints: list[pathlib.Path],
    attacker_checkpoints: list[pathlib.Path],
) -> pathlib.Path:
    test_images = config.required("test_images")
    test_labels = config.required("test_labels")
    out = config.required("out")

    if not defender_checkpoints or not attacker_checkpoints:
        LOGGER.error(f"{defender_checkpoints=} with {attacker_checkpoints=}")

        raise ConfigurationError("a sweep needs at least one defender and one attacker checkpoint")

    attack_config = build_attack_config(config)
    report_path = out / "robustness.csv"

    claim_outputs([report_path, sidecar_path(report_path)], config.force)
    metadata = run_metadata(
        config,
        "sweep",
        [test_images, test_labels, *defender_checkpoints, *attacker_checkpoints],
    )

    testset = load_normalised(test_images, test_labels)
    if attack_config.use_head == AttackHead.ROTATION:
        testset = rotation_augment(testset)

    defenders = [
        NamedModel(name=path.stem, model=load_checkpoint(path)) for path in defender_checkpoints
    ]
    attackers = [
        NamedModel(name=path.stem, model=load_checkpoint(path)) for path in attacker_checkpoints
    ]

    reports = sweep(defenders, attackers, attack_config, testset, metadata)

    out.mkdir(parents=True, exist_ok=True)
    write_report(reports, report_path)

    return report_path.resolve()


__all__ = ["attack_model", "sweep_models", "train_model_run"]
