import json
import pathlib

import pytest

from data_gradient.robustness import (
    FAILED_CELL,
    ReportRow,
    RobustnessReport,
    read_report,
    sidecar_path,
    write_report,
)


@pytest.fixture(name="reports")
def fixture_reports() -> list[RobustnessReport]:
    metadata = {"command": "sweep", "phi_grid": [0.0, 0.005, 0.1]}

    return [
        RobustnessReport(
            defender="dgl1",
            attacker="rect",
            rows=[
                ReportRow(phi=0.0, accuracy_pct=98.456),
                ReportRow(phi=0.005, accuracy_pct=97.0),
                ReportRow(phi=0.1, failure="attack failed: non-finite data gradient"),
            ],
            metadata=metadata,
        ),
        RobustnessReport(
            defender="rect",
            attacker="rect",
            rows=[
                ReportRow(phi=0.0, accuracy_pct=100.0),
                ReportRow(phi=0.005, accuracy_pct=12.344),
                ReportRow(phi=0.1, accuracy_pct=0.0),
            ],
            metadata=metadata,
        ),
    ]


def test_report_table_layout(reports: list[RobustnessReport], tmp_path: pathlib.Path) -> None:
    report_path = tmp_path / "robustness.csv"

    write_report(reports, report_path)

    assert report_path.read_bytes().decode("utf-8").split("\n") == [
        "defender,attacker,phi,accuracy_pct",
        "dgl1,rect,0.0,98.46",
        "dgl1,rect,0.005,97.00",
        f"dgl1,rect,0.1,{FAILED_CELL}",
        "rect,rect,0.0,100.00",
        "rect,rect,0.005,12.34",
        "rect,rect,0.1,0.00",
        "",
    ]


def test_sidecar_holds_metadata_and_failures(
    reports: list[RobustnessReport], tmp_path: pathlib.Path
) -> None:
    report_path = tmp_path / "robustness.csv"

    write_report(reports, report_path)
    sidecar = json.loads(sidecar_path(report_path).read_text(encoding="utf-8"))

    assert sidecar_path(report_path).name == "robustness.csv.metadata.json"
    assert sidecar[0]["metadata"]["command"] == "sweep"
    assert sidecar[0]["accuracies"] == [
        {"phi": 0.0, "accuracy_pct": 98.456},
        {"phi": 0.005, "accuracy_pct": 97.0},
    ]
    assert sidecar[0]["failures"] == [
        {"phi": 0.1, "failure": "attack failed: non-finite data gradient"}
    ]
    assert sidecar[1]["failures"] == []


def test_reports_read_back_exactly(
    reports: list[RobustnessReport], tmp_path: pathlib.Path
) -> None:
    report_path = tmp_path / "robustness.csv"
    write_report(reports, report_path)

    restored = read_report(report_path)

    assert [(report.defender, report.attacker) for report in restored] == [
        ("dgl1", "rect"),
        ("rect", "rect"),
    ]
    assert restored[0].accuracies == [98.456, 97.0, None]
    assert restored[0].rows[2].failure == "attack failed: non-finite data gradient"
    assert restored[1].accuracies == [100.0, 12.344, 0.0]
    assert restored == reports


def test_table_without_exact_values_reads_at_two_decimals(
    reports: list[RobustnessReport], tmp_path: pathlib.Path
) -> None:
    report_path = tmp_path / "robustness.csv"
    write_report(reports, report_path)
    sidecar = json.loads(sidecar_path(report_path).read_text(encoding="utf-8"))
    for entry in sidecar:
        del entry["accuracies"]
    sidecar_path(report_path).write_text(json.dumps(sidecar), encoding="utf-8")

    restored = read_report(report_path)

    assert restored[0].accuracies == [98.46, 97.0, None]
    assert restored[1].accuracies == [100.0, 12.34, 0.0]


def test_writing_twice_gives_identical_bytes(
    reports: list[RobustnessReport], tmp_path: pathlib.Path
) -> None:
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"

    write_report(reports, first)
    write_report(reports, second)

    assert first.read_bytes() == second.read_bytes()
    assert sidecar_path(first).read_bytes() == sidecar_path(second).read_bytes()


def test_foreign_tables_are_rejected(tmp_path: pathlib.Path) -> None:
    table_path = tmp_path / "other.csv"
    table_path.write_text("model,accuracy\nrect,99.0\n", encoding="utf-8")

    with pytest.raises(ValueError, match="not a robustness report"):
        read_report(table_path)
