import logging
import typing

import numpy
import pydantic

LOGGER = logging.getLogger(__name__)


class DimensionMismatchError(ValueError):
    pass


def freeze_array(value: typing.Any, dimensions: int) -> numpy.ndarray:  # noqa: ANN401
    array = numpy.array(value, dtype=numpy.float64)

    if array.ndim != dimensions:
        LOGGER.error(f"received {array.shape=} while expecting {dimensions=}")

        raise DimensionMismatchError(f"expected a {dimensions}-dimensional array")

    array.flags.writeable = False

    return array


class Vector(pydantic.BaseModel):
    """Dense 64-bit vector, immutable after construction."""

    model_config = pydantic.ConfigDict(frozen=True)

    data: pydantic.InstanceOf[numpy.ndarray]

    @pydantic.field_validator("data", mode="before")
    @classmethod
    def coerce_data(cls: type["Vector"], value: typing.Any) -> numpy.ndarray:  # noqa: ANN401
        return freeze_array(value, 1)

    @property
    def size(self: "Vector") -> int:
        return int(self.data.shape[0])

    def __len__(self: "Vector") -> int:
        return self.size


class Matrix(pydantic.BaseModel):
    """Dense row-major 64-bit matrix; as an operand its columns are treated as samples."""

    model_config = pydantic.ConfigDict(frozen=True)

    data: pydantic.InstanceOf[numpy.ndarray]

    @pydantic.field_validator("data", mode="before")
    @classmethod
    def coerce_data(cls: type["Matrix"], value: typing.Any) -> numpy.ndarray:  # noqa: ANN401
        array = freeze_array(value, 2)

        if array.shape[0] < 1 or array.shape[1] < 1:
            LOGGER.error(f"received {array.shape=} with an empty dimension")

            raise DimensionMismatchError("matrix needs at least one row and one column")

        return array

    @property
    def rows(self: "Matrix") -> int:
        return int(self.data.shape[0])

    @property
    def cols(self: "Matrix") -> int:
        return int(self.data.shape[1])

    @property
    def shape(self: "Matrix") -> tuple[int, int]:
        return self.rows, self.cols

    def column(self: "Matrix", index: int) -> Vector:
        return Vector(data=self.data[:, index])


Operand = Vector | Matrix


def require(condition: bool, message: str) -> None:
    if not condition:
        LOGGER.error(message)

        raise DimensionMismatchError(message)


__all__ = ["DimensionMismatchError", "Matrix", "Operand", "Vector", "freeze_array", "require"]
