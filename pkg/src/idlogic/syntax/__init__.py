"""Abstract syntax, parser, printer and syntactic analyses of ID-logic."""
from .analysis import (
    all_names,
    defined_symbols,
    free_symbols,
    fresh_names,
    infer_arities,
    is_non_recursive,
    is_positive,
    occurrences,
    open_symbols,
    phi_bodies,
    rename_negatives,
    rename_predicates,
    single_rule_form,
    subst,
    unprime,
    vocabulary_of,
)
from .ast import (
    FALSE,
    FUNCTION,
    OBJECT,
    PREDICATE,
    TRUE,
    And,
    Apply,
    Atom,
    Bottom,
    Def,
    Definition,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Rule,
    Theory,
    Top,
    Var,
    conj,
    disj,
    exists_all,
    forall_all,
)
from .parser import load_theory, parse_definition, parse_formula, parse_theory, tokenize
from .printer import format_definition, format_formula, format_rule, format_theory

__all__ = [name for name in dir() if not name.startswith("_")]
