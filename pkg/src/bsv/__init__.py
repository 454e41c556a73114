"""Contract inheritance under percolation, join composition and client conformance."""

from __future__ import annotations

__version__ = "0.1.0"

from .dsl import Config, DslError, ScenarioFile, load, parse_source, serialize
from .formula import (
    FALSE,
    TRUE,
    BudgetExceeded,
    Domain,
    FormulaError,
    IntRange,
    counterexample,
    equivalent,
    evaluate,
    implies,
    is_tautology,
)
from .hierarchy import (
    ClassDef,
    Hierarchy,
    MethodSpec,
    detect_hierarchy_violations,
    parse_hierarchy,
    resolve_method,
    spec_chain,
    supers_of,
)
from .matcher import (
    SpecPair,
    check_safe_refinement,
    effective_specification,
    join,
    match_plug_in,
    match_relaxed_plug_in,
    refines,
    refines_semantic,
    strong_behavioral_subtype,
    verify_join_lub,
)
from .properties import verify_properties
from .runtime import (
    Anomaly,
    Blame,
    CallOutcome,
    CallScenario,
    StateMode,
    TruthMode,
    classify_truth_config,
    compare_strategies,
    simulate_call,
)
from .strategy import Strategy, effective_invariant, effective_postcondition, effective_precondition
from .syntax import DslSyntaxError, parse_formula, to_source
from .tables import generate_table

__all__ = [
    "__version__",
    "Anomaly",
    "Blame",
    "BudgetExceeded",
    "CallOutcome",
    "CallScenario",
    "check_safe_refinement",
    "ClassDef",
    "classify_truth_config",
    "compare_strategies",
    "Config",
    "counterexample",
    "detect_hierarchy_violations",
    "Domain",
    "DslError",
    "DslSyntaxError",
    "effective_invariant",
    "effective_postcondition",
    "effective_precondition",
    "effective_specification",
    "equivalent",
    "evaluate",
    "FALSE",
    "FormulaError",
    "generate_table",
    "Hierarchy",
    "implies",
    "IntRange",
    "is_tautology",
    "join",
    "load",
    "match_plug_in",
    "match_relaxed_plug_in",
    "MethodSpec",
    "parse_formula",
    "parse_hierarchy",
    "parse_source",
    "refines",
    "refines_semantic",
    "resolve_method",
    "ScenarioFile",
    "serialize",
    "simulate_call",
    "spec_chain",
    "SpecPair",
    "StateMode",
    "Strategy",
    "strong_behavioral_subtype",
    "supers_of",
    "to_source",
    "TRUE",
    "TruthMode",
    "verify_join_lub",
    "verify_properties",
]
