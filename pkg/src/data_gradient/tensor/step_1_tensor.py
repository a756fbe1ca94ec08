import logging

import numpy
import pydantic

from .utils_tensor import DimensionMismatchError, Matrix, Operand, Vector, require

LOGGER = logging.getLogger(__name__)


def wrap_like(operand: Operand, values: numpy.ndarray) -> Operand:
    match operand:
        case Vector():
            return Vector(data=values)
        case Matrix():
            return Matrix(data=values)
        case _:
            raise TypeError("Unexpected operand type")


def require_same_shape(first: Operand, second: Operand) -> None:
    require(
        type(first) is type(second) and first.data.shape == second.data.shape,
        f"operands differ: {type(first).__name__}{first.data.shape}"
        f" against {type(second).__name__}{second.data.shape}",
    )


@pydantic.validate_call(validate_return=True)
def matmul(matrix: Matrix, operand: Operand) -> Operand:
    """Multiply ``matrix`` with a vector, or with every column of a matrix.

    Examples
    --------
    >>> matmul(Matrix(data=[[1.0, 2.0], [3.0, 4.0]]), Vector(data=[1.0, 1.0])).data.tolist()
    [3.0, 7.0]
    """
    inner = operand.size if isinstance(operand, Vector) else operand.rows
    require(matrix.cols == inner, f"cannot multiply {matrix.shape} matrix with length {inner}")

    return wrap_like(operand, matrix.data @ operand.data)


@pydantic.validate_call(validate_return=True)
def matmul_transpose(matrix: Matrix, operand: Operand) -> Operand:
    """Multiply the transpose of ``matrix`` without materialising it.

    Examples
    --------
    >>> matmul_transpose(Matrix(data=[[1.0, 2.0, 3.0]]), Vector(data=[2.0])).data.tolist()
    [2.0, 4.0, 6.0]
    """
    inner = operand.size if isinstance(operand, Vector) else operand.rows
    require(
        matrix.rows == inner,
        f"cannot multiply transposed {matrix.shape} matrix with length {inner}",
    )

    return wrap_like(operand, matrix.data.T @ operand.data)


@pydantic.validate_call(validate_return=True)
def transpose(matrix: Matrix) -> Matrix:
    return Matrix(data=matrix.data.T)


@pydantic.validate_call(validate_return=True)
def hadamard(first: Operand, second: Operand) -> Operand:
    require_same_shape(first, second)

    return wrap_like(first, first.data * second.data)


@pydantic.validate_call(validate_return=True)
def outer(first: Operand, second: Operand) -> Matrix:
    """Outer product of two vectors, or the sum of column-wise outer products of two matrices.

    Examples
    --------
    >>> outer(Vector(data=[2.0, 3.0]), Vector(data=[1.0, 1.0])).data.tolist()
    [[2.0, 2.0], [3.0, 3.0]]
    """
    match first, second:
        case Vector(), Vector():
            return Matrix(data=numpy.outer(first.data, second.data))
        case Matrix(), Matrix():
            require(
                first.cols == second.cols,
                f"column counts differ: {first.shape} against {second.shape}",
            )

            return Matrix(data=first.data @ second.data.T)
        case _:
            LOGGER.error(f"received {type(first)=} and {type(second)=}")

            raise DimensionMismatchError("outer product needs two vectors or two matrices")


@pydantic.validate_call(validate_return=True)
def add(first: Operand, second: Operand) -> Operand:
    require_same_shape(first, second)

    return wrap_like(first, first.data + second.data)


@pydantic.validate_call(validate_return=True)
def subtract(first: Operand, second: Operand) -> Operand:
    require_same_shape(first, second)

    return wrap_like(first, first.data - second.data)


@pydantic.validate_call(validate_return=True)
def scale(operand: Operand, factor: float) -> Operand:
    return wrap_like(operand, factor * operand.data)


@pydantic.validate_call(validate_return=True)
def add_to_columns(matrix: Matrix, vector: Vector) -> Matrix:
    require(
        matrix.rows == vector.size,
        f"cannot add length {vector.size} vector to columns of {matrix.shape} matrix",
    )

    return Matrix(data=matrix.data + vector.data[:, numpy.newaxis])


@pydantic.validate_call(validate_return=True)
def column_mean(matrix: Matrix) -> Vector:
    return Vector(data=matrix.data.mean(axis=1))


@pydantic.validate_call(validate_return=True)
def sign(operand: Operand) -> Operand:
    return wrap_like(operand, numpy.sign(operand.data))


@pydantic.validate_call(validate_return=True)
def as_columns(operand: Operand) -> Matrix:
    match operand:
        case Vector():
            return Matrix(data=operand.data[:, numpy.newaxis])
        case Matrix():
            return operand
        case _:
            raise TypeError("Unexpected operand type")


def is_finite(operand: Operand) -> bool:
    return bool(numpy.isfinite(operand.data).all())


__all__ = [
    "add",
    "add_to_columns",
    "as_columns",
    "column_mean",
    "hadamard",
    "is_finite",
    "matmul",
    "matmul_transpose",
    "outer",
    "scale",
    "sign",
    "subtract",
    "transpose",
    "wrap_like",
]
