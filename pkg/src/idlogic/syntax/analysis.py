"""Syntactic analyses: free symbols, polarity, normal forms, renamings."""
from __future__ import annotations

import functools
import itertools

from ..core import Vocabulary
from ..errors import FreeSymbolOutsideVocab, NameCollision
from .ast import (
    FUNCTION,
    PREDICATE,
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
    Top,
    Var,
    conj,
    disj,
    exists_all,
)

FRESH_PREFIX = "$x"


# free symbols ----------------------------------------------------------------

def term_symbols(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    out = {t.func}
    for a in t.args:
        out |= term_symbols(a)
    return out


def free_symbols(phi) -> set:
    """Free non-logical symbols (equality excluded) of a formula, rule or definition."""
    if isinstance(phi, Definition):
        out = set()
        for r in phi.rules:
            out |= free_symbols(r)
        return out
    if isinstance(phi, Rule):
        out = {phi.head_pred} | free_symbols(phi.body)
        for t in phi.head_args:
            out |= term_symbols(t)
        return out - set(phi.vars)
    if isinstance(phi, Atom):
        out = {phi.pred}
        for t in phi.args:
            out |= term_symbols(t)
        return out
    if isinstance(phi, Eq):
        return term_symbols(phi.left) | term_symbols(phi.right)
    if isinstance(phi, (Top, Bottom)):
        return set()
    if isinstance(phi, Not):
        return free_symbols(phi.body)
    if isinstance(phi, (And, Or, Implies, Iff)):
        return free_symbols(phi.left) | free_symbols(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return free_symbols(phi.body) - {phi.name}
    if isinstance(phi, Def):
        return free_symbols(phi.definition)
    raise TypeError(f"not a formula: {phi!r}")


def all_names(phi) -> set:
    """Every identifier occurring anywhere, bound or free."""
    if isinstance(phi, Definition):
        out = set()
        for r in phi.rules:
            out |= all_names(r)
        return out
    if isinstance(phi, Rule):
        out = {phi.head_pred} | set(phi.vars) | all_names(phi.body)
        for t in phi.head_args:
            out |= term_symbols(t)
        return out
    if isinstance(phi, (Exists, Forall)):
        return {phi.name} | all_names(phi.body)
    if isinstance(phi, Not):
        return all_names(phi.body)
    if isinstance(phi, (And, Or, Implies, Iff)):
        return all_names(phi.left) | all_names(phi.right)
    if isinstance(phi, Def):
        return all_names(phi.definition)
    return free_symbols(phi)


def fresh_names(avoid, count, prefix=FRESH_PREFIX) -> list:
    out = []
    for i in itertools.count():
        if len(out) == count:
            return out
        name = f"{prefix}{i}"
        if name not in avoid:
            out.append(name)


# defined / open -----------------------------------------------------------

def defined_symbols(delta: Definition) -> set:
    return set(delta.defined)


def open_symbols(delta: Definition, vocab: Vocabulary) -> set:
    free = free_symbols(delta)
    outside = free - vocab.names()
    if outside:
        raise FreeSymbolOutsideVocab(outside)
    return vocab.names() - defined_symbols(delta)


def infer_arities(phi) -> dict:
    """(name -> (kind, arity)) for free predicate/function symbols as used in ``phi``."""
    return dict(_infer_arities(phi))


@functools.lru_cache(maxsize=1024)
def _infer_arities(phi) -> tuple:
    out = {}

    def term(t, bound):
        if isinstance(t, Var):
            if t.name not in bound:
                out.setdefault(t.name, (FUNCTION, 0))
            return
        if t.func not in bound:
            out.setdefault(t.func, (FUNCTION, len(t.args)))
        for a in t.args:
            term(a, bound)

    def walk(f, bound):
        if isinstance(f, Atom):
            if f.pred not in bound:
                out.setdefault(f.pred, (PREDICATE, len(f.args)))
            for t in f.args:
                term(t, bound)
        elif isinstance(f, Eq):
            term(f.left, bound)
            term(f.right, bound)
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, (And, Or, Implies, Iff)):
            walk(f.left, bound)
            walk(f.right, bound)
        elif isinstance(f, (Exists, Forall)):
            walk(f.body, bound | {f.name})
        elif isinstance(f, Def):
            walk_def(f.definition, bound)

    def walk_def(d, bound):
        for r in d.rules:
            inner = bound | set(r.vars)
            if r.head_pred not in bound:
                out.setdefault(r.head_pred, (PREDICATE, len(r.head_args)))
            for t in r.head_args:
                term(t, inner)
            walk(r.body, inner)

    if isinstance(phi, Definition):
        walk_def(phi, frozenset())
    else:
        walk(phi, frozenset())
    return tuple(out.items())


def vocabulary_of(phi) -> Vocabulary:
    ar = infer_arities(phi)
    return Vocabulary.of({n: a for n, (k, a) in ar.items() if k == FUNCTION},
                         {n: a for n, (k, a) in ar.items() if k == PREDICATE})


# polarity -----------------------------------------------------------------

def occurrences(phi: Formula, preds, positive: bool = True):
    """Yield ``(pred, is_positive)`` for occurrences of ``preds`` in ``phi``.

    Polarity is read off the expansion into negation, conjunction and
    existential quantification: the antecedent of an implication flips,
    and both sides of an equivalence occur with both polarities.
    """
    if isinstance(phi, Atom):
        if phi.pred in preds:
            yield phi.pred, positive
    elif isinstance(phi, Not):
        yield from occurrences(phi.body, preds, not positive)
    elif isinstance(phi, (And, Or)):
        yield from occurrences(phi.left, preds, positive)
        yield from occurrences(phi.right, preds, positive)
    elif isinstance(phi, Implies):
        yield from occurrences(phi.left, preds, not positive)
        yield from occurrences(phi.right, preds, positive)
    elif isinstance(phi, Iff):
        for side in (phi.left, phi.right):
            yield from occurrences(side, preds, positive)
            yield from occurrences(side, preds, not positive)
    elif isinstance(phi, (Exists, Forall)):
        if phi.name in preds:
            preds = set(preds) - {phi.name}
        yield from occurrences(phi.body, preds, positive)
    elif isinstance(phi, Def):
        # predicates in a nested definition occur both ways
        for r in phi.definition.rules:
            yield from occurrences(r.body, preds, positive)
            yield from occurrences(r.body, preds, not positive)


def is_positive(delta: Definition) -> bool:
    defined = defined_symbols(delta)
    return all(pos for r in delta.rules for _, pos in occurrences(r.body, defined))


def is_non_recursive(delta: Definition) -> bool:
    defined = defined_symbols(delta)
    return not any(True for r in delta.rules for _ in occurrences(r.body, defined))


# substitution -------------------------------------------------------------

def subst_term(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if not t.args and t.func in mapping:
        return mapping[t.func]
    return Apply(t.func, tuple(subst_term(a, mapping) for a in t.args))


def subst(phi: Formula, mapping: dict) -> Formula:
    """Replace free object variables/constants by terms.

    Only safe when no term in ``mapping`` mentions a name bound inside
    ``phi``; callers pick fresh reserved names to guarantee this.
    """
    if not mapping:
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(subst_term(t, mapping) for t in phi.args))
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, mapping), subst_term(phi.right, mapping))
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Not):
        return Not(subst(phi.body, mapping))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(subst(phi.left, mapping), subst(phi.right, mapping))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.name}
        return type(phi)(phi.name, subst(phi.body, inner), phi.kind, phi.arity)
    if isinstance(phi, Def):
        rules = []
        for r in phi.definition.rules:
            inner = {k: v for k, v in mapping.items() if k not in r.vars}
            rules.append(Rule(r.vars, r.head_pred,
                              tuple(subst_term(t, inner) for t in r.head_args),
                              subst(r.body, inner)))
        return Def(Definition(rules))
    raise TypeError(f"not a formula: {phi!r}")


def rename_predicates(phi, mapping: dict):
    """Rename free predicate symbols (also in rule heads of nested definitions)."""
    if isinstance(phi, Definition):
        return Definition(Rule(r.vars, mapping.get(r.head_pred, r.head_pred), r.head_args,
                               rename_predicates(r.body, mapping)) for r in phi.rules)
    if isinstance(phi, Atom):
        return Atom(mapping.get(phi.pred, phi.pred), phi.args)
    if isinstance(phi, (Eq, Top, Bottom)):
        return phi
    if isinstance(phi, Not):
        return Not(rename_predicates(phi.body, mapping))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(rename_predicates(phi.left, mapping), rename_predicates(phi.right, mapping))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.name}
        return type(phi)(phi.name, rename_predicates(phi.body, inner), phi.kind, phi.arity)
    if isinstance(phi, Def):
        return Def(rename_predicates(phi.definition, mapping))
    raise TypeError(f"not a formula: {phi!r}")


# single-rule normal form --------------------------------------------------

def phi_bodies(delta: Definition) -> dict:
    """Map each defined X to ``(fresh_vars, phi_X)``.

    phi_X is the disjunction over X's rules of ``?ys: (xs = ts & body)``.
    Where a head argument is a rule variable occurring once in the head,
    the variable is renamed to the fresh one instead of equated, which is
    the usual simplified reading (``x=0`` rather than ``?y: (x=y & y=0)``).
    """
    avoid = all_names(delta)
    out = {}
    for pred in delta.defined:
        arity = delta.head_arity(pred)
        xs = fresh_names(avoid, arity)
        avoid |= set(xs)
        disjuncts = []
        for r in delta.rules_for(pred):
            counts = {}
            for t in r.head_args:
                if isinstance(t, Var) and t.name in r.vars:
                    counts[t.name] = counts.get(t.name, 0) + 1
            renaming = {}
            equations = []
            for x, t in zip(xs, r.head_args):
                if isinstance(t, Var) and counts.get(t.name) == 1:
                    renaming[t.name] = Var(x)
                else:
                    equations.append((x, t))
            body = subst(r.body, renaming)
            eqs = [Eq(Var(x), subst_term(t, renaming)) for x, t in equations]
            remaining = [v for v in r.vars if v not in renaming]
            parts = eqs + ([] if isinstance(body, Top) and eqs else [body])
            disjuncts.append(exists_all(remaining, conj(parts)))
        out[pred] = (tuple(xs), disj(disjuncts))
    return out


def single_rule_form(delta: Definition) -> Definition:
    rules = []
    for pred, (xs, body) in phi_bodies(delta).items():
        rules.append(Rule(xs, pred, tuple(Var(x) for x in xs), body))
    return Definition(rules)


# negative-occurrence renaming -------------------------------------------------

def _expand_iff(phi: Formula) -> Formula:
    if isinstance(phi, Iff):
        a, b = _expand_iff(phi.left), _expand_iff(phi.right)
        return And(Implies(a, b), Implies(b, a))
    if isinstance(phi, Not):
        return Not(_expand_iff(phi.body))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(_expand_iff(phi.left), _expand_iff(phi.right))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.name, _expand_iff(phi.body), phi.kind, phi.arity)
    return phi


def _rename_neg(phi, mapping, positive):
    if isinstance(phi, Atom):
        if not positive and phi.pred in mapping:
            return Atom(mapping[phi.pred], phi.args)
        return phi
    if isinstance(phi, Not):
        return Not(_rename_neg(phi.body, mapping, not positive))
    if isinstance(phi, (And, Or)):
        return type(phi)(_rename_neg(phi.left, mapping, positive),
                         _rename_neg(phi.right, mapping, positive))
    if isinstance(phi, Implies):
        return Implies(_rename_neg(phi.left, mapping, not positive),
                       _rename_neg(phi.right, mapping, positive))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.name}
        return type(phi)(phi.name, _rename_neg(phi.body, inner, positive), phi.kind, phi.arity)
    return phi


def primed_name(pred: str, taken) -> str:
    name = pred + "'"
    while name in taken:
        name += "'"
        if len(name) > len(pred) + 64:
            raise NameCollision(f"cannot find a fresh primed name for {pred}")
    return name


def rename_negatives(delta: Definition, vocab: Vocabulary | None = None):
    """Return ``(delta_prime, vocab_prime, mapping)``.

    Every negative occurrence of a defined X is replaced by a fresh X'
    (equivalences are first expanded so that each occurrence has a single
    polarity).  Positive definitions come back unchanged.
    """
    defined = delta.defined
    taken = all_names(delta) | (vocab.names() if vocab else set())
    mapping = {}
    for x in defined:
        mapping[x] = primed_name(x, taken | set(mapping.values()))
    rules = []
    for r in delta.rules:
        body = r.body
        if any(not pos for _, pos in occurrences(body, set(defined))):
            body = _rename_neg(_expand_iff(body), mapping, True)
        rules.append(Rule(r.vars, r.head_pred, r.head_args, body))
    new = Definition(rules)
    base = vocab if vocab is not None else vocabulary_of(delta)
    extra = Vocabulary.of(predicates={mapping[x]: delta.head_arity(x) for x in defined})
    return new, base.union(extra), mapping


def unprime(delta_prime: Definition, mapping: dict) -> Definition:
    inverse = {v: k for k, v in mapping.items()}
    return rename_predicates(delta_prime, inverse)
