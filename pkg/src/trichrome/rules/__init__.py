"""Rewrite rules: concrete rule sets, parametric families, scripts, search."""

from .engine import (
    ConcreteRule,
    Match,
    ParametricRule,
    Rule,
    RuleError,
    RuleLibrary,
    ScriptError,
    ScriptResult,
    ScriptStep,
    StepRecord,
    bounded_search,
    run_script,
    semantically_equal,
)
from .families import standard_families
from .libraries import close_under_meta, load_library, soundness_report

__all__ = [
    "ConcreteRule",
    "Match",
    "ParametricRule",
    "Rule",
    "RuleError",
    "RuleLibrary",
    "ScriptError",
    "ScriptResult",
    "ScriptStep",
    "StepRecord",
    "bounded_search",
    "close_under_meta",
    "load_library",
    "run_script",
    "semantically_equal",
    "soundness_report",
    "standard_families",
]
