from .orchestrate_network import (
    CHECKPOINT_MAGIC,
    MULTI_TASK_VERSION,
    SINGLE_TASK_VERSION,
    deserialise_checkpoint,
    load_checkpoint,
    serialise_checkpoint,
    store_checkpoint,
)
from .step_1_network import DIGIT_CLASSES, ROTATION_CLASSES, init_he, init_multitask
from .step_2_network import (
    classify,
    cross_entropy_loss,
    forward,
    forward_hidden,
    mean_cross_entropy,
    predict_classes,
    rectify,
    rectify_deriv,
    relu,
    relu_deriv,
    softmax,
)
from .step_3_network import as_targets, backpropagate_hidden, backward, one_hot, output_error
from .utils_network import (
    BackpropResult,
    CheckpointFormatError,
    ForwardTrace,
    Model,
    MultiTaskParams,
    NetworkParams,
    NumericalFailureError,
    OutputHead,
    ParameterGradients,
)

__all__ = [
    "CHECKPOINT_MAGIC",
    "DIGIT_CLASSES",
    "MULTI_TASK_VERSION",
    "ROTATION_CLASSES",
    "SINGLE_TASK_VERSION",
    "BackpropResult",
    "CheckpointFormatError",
    "ForwardTrace",
    "Model",
    "MultiTaskParams",
    "NetworkParams",
    "NumericalFailureError",
    "OutputHead",
    "ParameterGradients",
    "as_targets",
    "backpropagate_hidden",
    "backward",
    "classify",
    "cross_entropy_loss",
    "deserialise_checkpoint",
    "forward",
    "forward_hidden",
    "init_he",
    "init_multitask",
    "load_checkpoint",
    "mean_cross_entropy",
    "one_hot",
    "output_error",
    "predict_classes",
    "rectify",
    "rectify_deriv",
    "relu",
    "relu_deriv",
    "serialise_checkpoint",
    "softmax",
    "store_checkpoint",
]
