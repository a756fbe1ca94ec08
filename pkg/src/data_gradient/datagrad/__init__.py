from .orchestrate_datagrad import (
    HISTORY_COLUMNS,
    SCORING_CHUNK,
    run_epoch,
    score_dataset,
    store_history,
    train_model,
    training_step,
)
from .step_1_datagrad import adversarial_direction, immediate_gradient, make_adversarial, reg_value
from .step_2_datagrad import (
    Targets,
    apply_gradients,
    combine_gradients,
    datagrad_gradients,
    datagrad_step,
    descend,
    fd_regularizer_grad,
    finite_difference,
    penalise,
    penalty_gradient,
    perturbed_backward,
    scale_gradients,
    sgd_step,
)
from .step_3_datagrad import (
    apply_multitask_gradients,
    head_trace,
    multitask_datagrad_gradients,
    multitask_datagrad_step,
    multitask_forward_backward,
    require_aux_labels,
    split_head,
    zero_gradients,
)
from .utils_datagrad import (
    EpochRecord,
    MultiTaskGradients,
    RegularizerKind,
    TrainConfig,
    TrainingOutcome,
    WeightPenalty,
)

__all__ = [
    "HISTORY_COLUMNS",
    "SCORING_CHUNK",
    "EpochRecord",
    "MultiTaskGradients",
    "RegularizerKind",
    "Targets",
    "TrainConfig",
    "TrainingOutcome",
    "WeightPenalty",
    "adversarial_direction",
    "apply_gradients",
    "apply_multitask_gradients",
    "combine_gradients",
    "datagrad_gradients",
    "datagrad_step",
    "descend",
    "fd_regularizer_grad",
    "finite_difference",
    "head_trace",
    "immediate_gradient",
    "make_adversarial",
    "multitask_datagrad_gradients",
    "multitask_datagrad_step",
    "multitask_forward_backward",
    "penalise",
    "penalty_gradient",
    "perturbed_backward",
    "reg_value",
    "require_aux_labels",
    "run_epoch",
    "score_dataset",
    "scale_gradients",
    "sgd_step",
    "split_head",
    "store_history",
    "train_model",
    "training_step",
    "zero_gradients",
]
