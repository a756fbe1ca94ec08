import json
import logging
import pathlib

import pandas
import pydantic

from .utils_robustness import ReportRow, RobustnessReport

LOGGER = logging.getLogger(__name__)

REPORT_COLUMNS = ["defender", "attacker", "phi", "accuracy_pct"]
FAILED_CELL = "failed"


def sidecar_path(file_path: pathlib.Path) -> pathlib.Path:
    return file_path.with_name(f"{file_path.name}.metadata.json")


def format_accuracy(row: ReportRow) -> str:
    return FAILED_CELL if row.accuracy_pct is None else f"{row.accuracy_pct:.2f}"


def write_text(file_path: pathlib.Path, text: str) -> None:
    try:
        with file_path.open(mode="w", encoding="utf-8", newline="\n") as file_object:
            file_object.write(text)
    except OSError as error:
        LOGGER.error(f"failed to write {file_path}")

        raise OSError(f"cannot write {file_path}: {error}") from error


def read_text(file_path: pathlib.Path) -> str:
    try:
        return file_path.read_text(encoding="utf-8")
    except FileNotFoundError:
        LOGGER.error(f"{file_path} does not exist")

        raise
    except OSError as error:
        LOGGER.error(f"failed to read {file_path}")

        raise OSError(f"cannot read {file_path}: {error}") from error


@pydantic.validate_call
def write_report(reports: list[RobustnessReport], file_path: pathlib.Path) -> None:
    """Write the accuracy table as CSV and everything else to a JSON sidecar next to it.

    The CSV rounds accuracies to two decimals; the sidecar keeps them at full precision.
    """
    frame = pandas.DataFrame(
        [
            {
                "defender": report.defender,
                "attacker": report.attacker,
                "phi": row.phi,
                "accuracy_pct": format_accuracy(row),
            }
            for report in reports
            for row in report.rows
        ],
        columns=REPORT_COLUMNS,
    )
    sidecar = [
        {
            "defender": report.defender,
            "attacker": report.attacker,
            "accuracies": [
                {"phi": row.phi, "accuracy_pct": row.accuracy_pct}
                for row in report.rows
                if row.accuracy_pct is not None
            ],
            "metadata": report.metadata,
            "failures": [
                {"phi": row.phi, "failure": row.failure}
                for row in report.rows
                if row.failure is not None
            ],
        }
        for report in reports
    ]

    write_text(file_path, frame.to_csv(index=False, lineterminator="\n"))
    write_text(sidecar_path(file_path), json.dumps(sidecar, sort_keys=True, indent=4) + "\n")

    LOGGER.info(f"Wrote {len(frame)} report rows to {file_path}.")


@pydantic.validate_call(validate_return=True)
def read_report(file_path: pathlib.Path) -> list[RobustnessReport]:
    frame = pandas.read_csv(file_path, dtype=str, keep_default_na=False)

    if list(frame.columns) != REPORT_COLUMNS:
        LOGGER.error(f"{file_path} has columns {list(frame.columns)}")

        raise ValueError(f"{file_path} is not a robustness report")

    frame = frame.astype({"phi": float})
    details = {
        (entry["defender"], entry["attacker"]): entry
        for entry in json.loads(read_text(sidecar_path(file_path)))
    }

    reports: list[RobustnessReport] = []
    for (defender, attacker), cells in frame.groupby(["defender", "attacker"], sort=False):
        entry = details.get((defender, attacker), {"metadata": {}, "failures": []})
        failures = {failure["phi"]: failure["failure"] for failure in entry["failures"]}
        exact = {cell["phi"]: cell["accuracy_pct"] for cell in entry.get("accuracies", [])}

        rows = [
            ReportRow(phi=phi, failure=failures.get(phi, "unknown failure"))
            if accuracy == FAILED_CELL
            else ReportRow(phi=phi, accuracy_pct=exact.get(phi, float(accuracy)))
            for phi, accuracy in zip(cells["phi"], cells["accuracy_pct"], strict=True)
        ]

        reports.append(
            RobustnessReport(
                defender=defender, attacker=attacker, rows=rows, metadata=entry["metadata"]
            )
        )

    return reports


__all__ = [
    "FAILED_CELL",
    "REPORT_COLUMNS",
    "format_accuracy",
    "read_report",
    "read_text",
    "sidecar_path",
    "write_report",
    "write_text",
]
