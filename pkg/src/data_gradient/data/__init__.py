from .step_1_data import (
    FLOAT_IMAGE_MAGIC,
    IMAGE_MAGIC,
    LABEL_MAGIC,
    encode_idx,
    load_float_idx,
    load_idx,
    parse_idx,
    store_float_idx,
    store_idx,
)
from .step_2_data import PIXEL_MAXIMUM, normalize, split
from .step_3_data import ROTATION_ANGLES, batches, epoch_seed, rotate_images, rotation_augment
from .utils_data import (
    IMAGE_SHAPE,
    Batch,
    Dataset,
    DatasetConsistencyError,
    DoubleNormalisationError,
    IDXFormatError,
    PerturbedDataset,
    RawDataset,
    SplitSpec,
)

__all__ = [
    "FLOAT_IMAGE_MAGIC",
    "IMAGE_MAGIC",
    "IMAGE_SHAPE",
    "LABEL_MAGIC",
    "PIXEL_MAXIMUM",
    "ROTATION_ANGLES",
    "Batch",
    "Dataset",
    "DatasetConsistencyError",
    "DoubleNormalisationError",
    "IDXFormatError",
    "PerturbedDataset",
    "RawDataset",
    "SplitSpec",
    "batches",
    "encode_idx",
    "epoch_seed",
    "load_float_idx",
    "load_idx",
    "normalize",
    "parse_idx",
    "rotate_images",
    "rotation_augment",
    "split",
    "store_float_idx",
    "store_idx",
]
