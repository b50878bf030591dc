"""Exact rewriting engine for two- and three-colour qubit graphical calculi."""

from .cyclo import CycloNum
from .diagram import Color, Deco, Diagram, DiagramError, Edge, Flavour, Node, Phase
from .dsl import ParseError, parse, parse_diagram, parse_script, print_diagram, print_script
from .functors import (
    check_roundtrip,
    check_translation_preserves_interp,
    generator_diagrams,
    roundtrip_image,
    to_unrestricted,
    translate_S,
    translate_T,
)
from .groups import (
    check_iso_pair,
    check_relators,
    enumerate_group,
    group_report,
    order_profile,
    qubit_rotations,
)
from .interp import EvalError, Matrix, equal_up_to_scalar, eval_float, evaluate
from .rules import (
    ScriptError,
    ScriptStep,
    bounded_search,
    load_library,
    run_script,
    soundness_report,
)
from .verify import run_suite

__all__ = [
    "Color",
    "CycloNum",
    "Deco",
    "Diagram",
    "DiagramError",
    "Edge",
    "EvalError",
    "Flavour",
    "Matrix",
    "Node",
    "ParseError",
    "Phase",
    "ScriptError",
    "ScriptStep",
    "bounded_search",
    "check_iso_pair",
    "check_relators",
    "check_roundtrip",
    "check_translation_preserves_interp",
    "enumerate_group",
    "equal_up_to_scalar",
    "eval_float",
    "evaluate",
    "generator_diagrams",
    "group_report",
    "load_library",
    "order_profile",
    "parse",
    "parse_diagram",
    "parse_script",
    "print_diagram",
    "print_script",
    "qubit_rotations",
    "roundtrip_image",
    "run_script",
    "run_suite",
    "soundness_report",
    "to_unrestricted",
    "translate_S",
    "translate_T",
]

__version__ = "0.1.0"
