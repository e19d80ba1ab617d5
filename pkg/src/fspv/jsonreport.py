"""JSON form of :class:`~fspv.analyzer.Report` (schema version "1")."""

from __future__ import annotations

import json
from importlib import resources

from .analyzer import Report, Stats, Violation

SCHEMA_VERSION = "1"


def load_schema() -> dict:
    return json.loads(resources.files("fspv").joinpath("report.schema.json").read_text())


def report_to_json(report: Report) -> dict:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "target": report.target,
        "result": report.result,
        "stats": {
            "states": report.stats.states,
            "transitions": report.stats.transitions,
            "alphabet": report.stats.alphabet,
            "elapsed_ms": report.stats.elapsed_ms,
        },
        "terminal_sets": report.terminal_sets,
        "warnings": list(report.warnings),
        "violations": [
            {"kind": v.kind, "subject": v.subject, "trace": list(v.trace),
             "cycle": None if v.cycle is None else list(v.cycle), "note": v.note}
            for v in report.violations
        ],
    }


def report_from_json(data: dict) -> Report:
    if data.get("schemaVersion") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema version {data.get('schemaVersion')!r}")
    s = data["stats"]
    report = Report(
        data["target"],
        Stats(s["states"], s["transitions"], s["alphabet"], s["elapsed_ms"]),
        [Violation(v["kind"], v["subject"], list(v["trace"]),
                   None if v["cycle"] is None else list(v["cycle"]), v.get("note"))
         for v in data["violations"]],
        data.get("terminal_sets", 0),
        list(data.get("warnings", [])),
    )
    if report.result != data["result"]:
        raise ValueError("result field disagrees with the violation list")
    return report
