"""Canonical JSON reports."""

from __future__ import annotations

import json
from typing import Any, Dict, Iterable, Optional

from . import __version__
from .qfam import CheckResult, CheckVerdict, GammaPresentation

__all__ = ["REPORT_SCHEMA", "check_record", "make_report", "emit_report", "gamma_export", "summarize"]

TOOL = "qfamily"

REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["tool", "version", "command", "config", "checks", "summary"],
    "properties": {
        "tool": {"const": TOOL},
        "version": {"type": "string", "minLength": 1},
        "command": {"type": "string"},
        "config": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "verdict"],
                "properties": {
                    "name": {"type": "string"},
                    "verdict": {"enum": ["pass", "fail", "inconclusive"]},
                    "witness": {"type": "string"},
                    "residuals": {"type": "object", "additionalProperties": {"type": "number"}},
                    "elapsed": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "summary": {
            "type": "object",
            "required": ["pass", "fail", "inconclusive", "verdict"],
            "properties": {
                "pass": {"type": "integer", "minimum": 0},
                "fail": {"type": "integer", "minimum": 0},
                "inconclusive": {"type": "integer", "minimum": 0},
                "verdict": {"enum": ["pass", "fail", "inconclusive"]},
            },
        },
    },
}


def check_record(entry: CheckResult, timings: bool = False) -> Dict[str, Any]:
    rec: Dict[str, Any] = {"name": entry.name, "verdict": entry.verdict.value}
    if entry.verdict is not CheckVerdict.PASS and entry.witness:
        rec["witness"] = entry.witness
    if entry.residuals:
        rec["residuals"] = dict(entry.residuals)
    if timings:
        rec["elapsed"] = entry.elapsed
    return rec


def summarize(verdicts: Iterable[CheckVerdict]) -> Dict[str, Any]:
    counts = {v: 0 for v in CheckVerdict}
    for v in verdicts:
        counts[v] += 1
    if counts[CheckVerdict.FAIL]:
        overall = CheckVerdict.FAIL
    elif counts[CheckVerdict.INCONCLUSIVE]:
        overall = CheckVerdict.INCONCLUSIVE
    else:
        overall = CheckVerdict.PASS
    out: Dict[str, Any] = {v.value: counts[v] for v in CheckVerdict}
    out["verdict"] = overall.value
    return out


def make_report(
    command: str,
    config: Dict[str, Any],
    checks: Iterable[CheckResult],
    timings: bool = False,
    extra: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    checks = list(checks)
    report = {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "config": config,
        "checks": [check_record(c, timings) for c in checks],
        "summary": summarize(c.verdict for c in checks),
    }
    if extra:
        report.update(extra)
    return report


def emit_report(report: Dict[str, Any]) -> bytes:
    """Sorted keys, fixed indentation, shortest round-trip floats, trailing newline."""
    return (json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n").encode("utf-8")


def gamma_export(g: GammaPresentation, label: Optional[str] = None) -> Dict[str, Any]:
    cfg = g.config
    images = []
    for gen in g.generators():
        img = g.images[gen]
        images.append(
            {
                "generator": str(gen),
                "image": img.render(),
                "terms": [
                    {"coeff": c.render(), "legs": [[[x, k] for x, k in w] for w in key]}
                    for key, c in img.items()
                ],
            }
        )
    return {
        "tool": TOOL,
        "version": __version__,
        "command": "gamma",
        "m": cfg.m,
        "n": cfg.n,
        "preset": cfg.preset.value,
        "table": cfg.table.rows(),
        "label": label,
        "images": images,
    }
