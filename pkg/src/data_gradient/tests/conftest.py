import pathlib
import typing

import numpy
import pytest

from data_gradient.data import RawDataset, store_idx


class IDXFiles(typing.NamedTuple):
    train_images: pathlib.Path
    train_labels: pathlib.Path
    test_images: pathlib.Path
    test_labels: pathlib.Path


def write_digits(
    directory: pathlib.Path, prefix: str, count: int, seed: int
) -> tuple[pathlib.Path, pathlib.Path]:
    """Random 28x28 byte images whose label depends on which half is brighter."""
    generator = numpy.random.default_rng(seed)
    images = generator.integers(0, 256, size=(count, 784), dtype=numpy.uint8)
    labels = (images[:, :392].sum(axis=1) > images[:, 392:].sum(axis=1)).astype(numpy.uint8)

    images_path = directory / f"{prefix}-images-idx3-ubyte"
    labels_path = directory / f"{prefix}-labels-idx1-ubyte"
    store_idx(RawDataset(images=images, labels=labels), images_path, labels_path)

    return images_path, labels_path


@pytest.fixture(name="idx_files")
def fixture_idx_files(tmp_path: pathlib.Path) -> IDXFiles:
    data_directory = tmp_path / "data"
    data_directory.mkdir()

    return IDXFiles(
        *write_digits(data_directory, "train", 40, seed=0),
        *write_digits(data_directory, "t10k", 20, seed=1),
    )


@pytest.fixture(name="config_path")
def fixture_config_path(tmp_path: pathlib.Path, idx_files: IDXFiles) -> pathlib.Path:
    config_path = tmp_path / "run.cfg"
    config_path.write_text(
        "\n".join(
            [
                f"train_images = {idx_files.train_images}",
                f"train_labels = {idx_files.train_labels}",
                f"test_images = {idx_files.test_images}",
                f"test_labels = {idx_files.test_labels}",
                f"out = {tmp_path / 'out'}",
                "hidden_sizes = 8",
                "epochs = 2",
                "batch_size = 10",
                "validation_count = 10",
                "phi_grid = 0, 0.05",
                "seed = 7",
            ]
        )
        + "\n",
        encoding="utf-8",
    )

    return config_path
