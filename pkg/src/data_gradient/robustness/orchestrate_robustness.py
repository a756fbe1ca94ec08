import logging

import pydantic

from ..data import Dataset, PerturbedDataset
from .step_1_robustness import generate_adversarial_testset
from .step_2_robustness import evaluate_accuracy
from .utils_robustness import AttackConfig, NamedModel, ReportRow, RobustnessReport

LOGGER = logging.getLogger(__name__)

SWEEP_FAILURES = (ValueError, ArithmeticError)


def adversarial_sets(
    attacker: NamedModel, testset: Dataset, cfg: AttackConfig
) -> dict[float, PerturbedDataset | str]:
    """One perturbed set per attack magnitude, or the reason it could not be generated."""
    generated: dict[float, PerturbedDataset | str] = {}

    for phi in cfg.phi_grid:
        try:
            generated[phi] = generate_adversarial_testset(attacker, testset, cfg, phi)
        except SWEEP_FAILURES as error:
            LOGGER.warning(f"Attack by {attacker.name} at {phi=} failed: {error}")

            generated[phi] = f"attack failed: {error}"

    return generated


def evaluate_cell(defender: NamedModel, phi: float, testset: PerturbedDataset | str) -> ReportRow:
    if isinstance(testset, str):
        return ReportRow(phi=phi, failure=testset)

    try:
        accuracy = evaluate_accuracy(defender, testset)
    except SWEEP_FAILURES as error:
        LOGGER.warning(f"Evaluating {defender.name} on {testset.attacker} at {phi=} failed.")

        return ReportRow(phi=phi, failure=f"evaluation failed: {error}")

    LOGGER.info(f"{defender.name} attacked by {testset.attacker} at {phi=}: {accuracy:.2f}%.")

    return ReportRow(phi=phi, accuracy_pct=accuracy)


@pydantic.validate_call(validate_return=True)
def sweep(
    defenders: list[NamedModel],
    attackers: list[NamedModel],
    cfg: AttackConfig,
    testset: Dataset,
    metadata: dict[str, pydantic.JsonValue] | None = None,
) -> list[RobustnessReport]:
    """Evaluate every defender against every attacker over the whole attack grid.

    Each adversarial set is generated once per attacker and magnitude, then shared by all
    defenders. Failed cells are recorded in the report instead of aborting the sweep.
    """
    if not defenders or not attackers:
        LOGGER.error(f"received {len(defenders)} defenders and {len(attackers)} attackers")

        raise ValueError("a sweep needs at least one defender and one attacker")

    report_metadata = {
        **(metadata or {}),
        "attack_kind": cfg.kind.value,
        "use_head": cfg.use_head.value,
        "phi_grid": list(cfg.phi_grid),
    }

    reports: list[RobustnessReport] = []
    for attacker in attackers:
        generated = adversarial_sets(attacker, testset, cfg)

        for defender in defenders:
            reports.append(
                RobustnessReport(
                    defender=defender.name,
                    attacker=attacker.name,
                    rows=[evaluate_cell(defender, phi, generated[phi]) for phi in cfg.phi_grid],
                    metadata=report_metadata,
                )
            )

    return reports


__all__ = ["SWEEP_FAILURES", "adversarial_sets", "evaluate_cell", "sweep"]
