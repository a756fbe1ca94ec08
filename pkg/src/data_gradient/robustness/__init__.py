from .orchestrate_robustness import SWEEP_FAILURES, adversarial_sets, evaluate_cell, sweep
from .step_1_robustness import ATTACK_CHUNK, attack_target, generate_adversarial_testset
from .step_2_robustness import evaluate_accuracy
from .step_3_robustness import (
    FAILED_CELL,
    REPORT_COLUMNS,
    format_accuracy,
    read_report,
    read_text,
    sidecar_path,
    write_report,
    write_text,
)
from .utils_robustness import (
    DEFAULT_PHI_GRID,
    AttackConfig,
    AttackHead,
    NamedModel,
    ReportRow,
    RobustnessReport,
)

__all__ = [
    "ATTACK_CHUNK",
    "DEFAULT_PHI_GRID",
    "FAILED_CELL",
    "REPORT_COLUMNS",
    "SWEEP_FAILURES",
    "AttackConfig",
    "AttackHead",
    "NamedModel",
    "ReportRow",
    "RobustnessReport",
    "adversarial_sets",
    "attack_target",
    "evaluate_accuracy",
    "evaluate_cell",
    "format_accuracy",
    "generate_adversarial_testset",
    "read_report",
    "read_text",
    "sidecar_path",
    "sweep",
    "write_report",
    "write_text",
]
