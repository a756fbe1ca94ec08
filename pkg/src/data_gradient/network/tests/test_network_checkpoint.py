import pathlib
import struct
import typing

import numpy
import pytest

from data_gradient.network import (
    CHECKPOINT_MAGIC,
    MULTI_TASK_VERSION,
    SINGLE_TASK_VERSION,
    CheckpointFormatError,
    MultiTaskParams,
    NetworkParams,
    deserialise_checkpoint,
    init_he,
    init_multitask,
    load_checkpoint,
    serialise_checkpoint,
    store_checkpoint,
)
from data_gradient.tensor import Vector


def assert_same_layers(first: NetworkParams, second: NetworkParams) -> None:
    assert first.layer_sizes == second.layer_sizes

    for left, right in zip(
        [*first.weights, *first.biases], [*second.weights, *second.biases], strict=True
    ):
        assert numpy.array_equal(left.data, right.data)


@pytest.fixture(name="single_task")
def fixture_single_task() -> NetworkParams:
    params = init_he([5, 4, 3], seed=8)
    generator = numpy.random.default_rng(8)

    return params.model_copy(
        update={"biases": [Vector(data=generator.normal(size=size)) for size in (4, 3)]}
    )


@pytest.fixture(name="multi_task")
def fixture_multi_task() -> MultiTaskParams:
    return init_multitask([5, 4, 3], seed=9)


def test_single_task_header_layout(single_task: NetworkParams) -> None:
    payload = serialise_checkpoint(single_task)

    assert payload[:4] == CHECKPOINT_MAGIC
    assert struct.unpack("<5I", payload[4:24]) == (SINGLE_TASK_VERSION, 3, 5, 4, 3)
    assert len(payload) == 24 + 8 * (5 * 4 + 4 * 3 + 4 + 3)


def test_multi_task_header_layout(multi_task: MultiTaskParams) -> None:
    payload = serialise_checkpoint(multi_task)

    assert payload[:4] == CHECKPOINT_MAGIC
    assert struct.unpack("<8I", payload[4:36]) == (MULTI_TASK_VERSION, 3, 5, 4, 3, 2, 10, 5)


def test_single_task_round_trip_is_exact(
    single_task: NetworkParams, tmp_path: pathlib.Path
) -> None:
    checkpoint_path = tmp_path / "rect.dgrd"

    store_checkpoint(single_task, checkpoint_path)
    restored = load_checkpoint(checkpoint_path)

    assert isinstance(restored, NetworkParams)
    assert_same_layers(restored, single_task)
    assert serialise_checkpoint(restored) == checkpoint_path.read_bytes()


def test_multi_task_round_trip_is_exact(
    multi_task: MultiTaskParams, tmp_path: pathlib.Path
) -> None:
    checkpoint_path = tmp_path / "mt.dgrd"

    store_checkpoint(multi_task, checkpoint_path)
    restored = load_checkpoint(checkpoint_path)

    assert isinstance(restored, MultiTaskParams)
    assert_same_layers(restored.digit_network(), multi_task.digit_network())
    assert_same_layers(restored.rotation_network(), multi_task.rotation_network())


@pytest.mark.parametrize(
    ("mutate", "message"),
    [
        (lambda payload: b"XGRD" + payload[4:], "wrong magic"),
        (lambda payload: payload[:-1], "truncated"),
        (lambda payload: payload[:10], "truncated"),
        (lambda payload: payload + b"\x00", "trailing bytes"),
        (lambda payload: payload[:4] + struct.pack("<I", 3) + payload[8:], "version 3"),
        (lambda payload: payload[:8] + struct.pack("<I", 0) + payload[12:], "declares 0 layers"),
        (lambda payload: payload[:8] + struct.pack("<I", 1) + payload[12:], "declares 1 layers"),
        (lambda payload: payload[:16] + struct.pack("<I", 0) + payload[20:], "empty layer"),
    ],
)
def test_corrupted_single_task_payloads_are_rejected(
    single_task: NetworkParams, mutate: typing.Callable[[bytes], bytes], message: str
) -> None:
    with pytest.raises(CheckpointFormatError, match=message):
        deserialise_checkpoint(mutate(serialise_checkpoint(single_task)))


def test_multi_task_payload_needs_two_heads(multi_task: MultiTaskParams) -> None:
    payload = serialise_checkpoint(multi_task)
    head_count_offset = 4 + 4 * (2 + 3)
    altered = payload[:head_count_offset] + struct.pack("<I", 3) + payload[head_count_offset + 4 :]

    with pytest.raises(CheckpointFormatError, match="two heads"):
        deserialise_checkpoint(altered)


def test_multi_task_payload_rejects_an_empty_head(multi_task: MultiTaskParams) -> None:
    payload = serialise_checkpoint(multi_task)
    head_size_offset = 4 + 4 * (2 + 3 + 1)
    altered = payload[:head_size_offset] + struct.pack("<I", 0) + payload[head_size_offset + 4 :]

    with pytest.raises(CheckpointFormatError, match="empty layer among its heads"):
        deserialise_checkpoint(altered)


def test_missing_checkpoint_file(tmp_path: pathlib.Path) -> None:
    with pytest.raises(FileNotFoundError):
        load_checkpoint(tmp_path / "absent.dgrd")


def test_checkpoint_format_error_is_a_value_error() -> None:
    assert issubclass(CheckpointFormatError, ValueError)
