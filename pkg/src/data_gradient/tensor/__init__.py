from .step_1_tensor import (
    add,
    add_to_columns,
    as_columns,
    column_mean,
    hadamard,
    is_finite,
    matmul,
    matmul_transpose,
    outer,
    scale,
    sign,
    subtract,
    transpose,
    wrap_like,
)
from .utils_tensor import DimensionMismatchError, Matrix, Operand, Vector, freeze_array, require

__all__ = [
    "DimensionMismatchError",
    "Matrix",
    "Operand",
    "Vector",
    "add",
    "add_to_columns",
    "as_columns",
    "column_mean",
    "freeze_array",
    "hadamard",
    "is_finite",
    "matmul",
    "matmul_transpose",
    "outer",
    "require",
    "scale",
    "sign",
    "subtract",
    "transpose",
    "wrap_like",
]
