"""HyLTL model checking for hybrid automata."""

from ._hyltl import (
    Automaton,
    Error,
    Formula,
    check,
    compose,
    export_phaver,
    import_phaver,
    isomorphic,
    load_model,
    monitor,
    parse_formula,
    parse_model,
    simulate,
    to_nnf,
    translate,
)

__all__ = [
    "Automaton",
    "Error",
    "Formula",
    "check",
    "compose",
    "export_phaver",
    "import_phaver",
    "isomorphic",
    "load_model",
    "monitor",
    "parse_formula",
    "parse_model",
    "simulate",
    "to_nnf",
    "translate",
]
