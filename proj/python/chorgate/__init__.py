"""Validate BPMN choreography models against goal-model requirement scenarios."""

from pathlib import Path

from ._chorgate import (
    ChorgateError,
    ChoreographyModel,
    Diagnostic,
    MessageEvent,
    RequirementsDoc,
    ScenarioVerdict,
    Severity,
    TraceAutomaton,
    ValidationReport,
    bind_participants,
    compile,
    compute_metrics,
    parse_choreography,
    parse_requirements,
    run,
    validate,
    validate_choreography,
)

__all__ = [
    "ChorgateError",
    "ChoreographyModel",
    "Diagnostic",
    "MessageEvent",
    "RequirementsDoc",
    "ScenarioVerdict",
    "Severity",
    "TraceAutomaton",
    "ValidationReport",
    "bind_participants",
    "compile",
    "compute_metrics",
    "load_choreography",
    "load_requirements",
    "parse_choreography",
    "parse_requirements",
    "run",
    "validate",
    "validate_choreography",
]


def load_choreography(path):
    return parse_choreography(Path(path).read_text(encoding="utf-8"))


def load_requirements(path):
    return parse_requirements(Path(path).read_text(encoding="utf-8"))
