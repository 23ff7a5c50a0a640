"""Satisfaction of ID-logic formulas in finite structures.

Formulas are compiled once into nested closures ``f(I, env) -> bool``;
``env`` holds object-variable bindings while second-order bindings extend
the structure itself.
"""
from __future__ import annotations

import functools
import itertools
from typing import Iterator

from . import config
from .core import ExtensionLattice, Structure, Vocabulary
from .errors import BudgetExceeded, FreeSymbolUninterpreted
from .syntax import (
    OBJECT,
    PREDICATE,
    And,
    Atom,
    Bottom,
    Def,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Theory,
    Top,
    Var,
    free_symbols,
    infer_arities,
)


def _term(t):
    if isinstance(t, Var) or not t.args:
        name = t.name if isinstance(t, Var) else t.func

        def var(I, env):
            try:
                return env[name]
            except KeyError:
                return I.funcs[name][()]
        return var
    fname = t.func
    args = [_term(a) for a in t.args]
    if len(args) == 1:
        a0 = args[0]
        return lambda I, env: I.funcs[fname][(a0(I, env),)]
    if len(args) == 2:
        a0, a1 = args
        return lambda I, env: I.funcs[fname][(a0(I, env), a1(I, env))]
    return lambda I, env: I.funcs[fname][tuple(a(I, env) for a in args)]


def _relation_binder(I: Structure, name, arity):
    """Returns rel -> copy of I with ``name`` bound to rel; the vocabulary is built once."""
    preds = {n: a for n, a in I.vocab.predicates if n != name}
    preds[name] = arity
    fns = {n: a for n, a in I.vocab.functions if n != name}
    vocab = Vocabulary.of(fns, preds)
    funcs = {k: v for k, v in I.funcs.items() if k != name}

    def bind(rel):
        rels = dict(I.rels)
        rels[name] = rel
        return Structure._trusted(I.domain, vocab, funcs, rels, I._index)
    return bind


def _bind_relation(I: Structure, name, arity, rel) -> Structure:
    return _relation_binder(I, name, arity)(rel)


def _bind_function(I: Structure, name, arity, table) -> Structure:
    fns = {n: a for n, a in I.vocab.functions if n != name}
    fns[name] = arity
    preds = {n: a for n, a in I.vocab.predicates if n != name}
    funcs = dict(I.funcs)
    funcs[name] = table
    rels = {k: v for k, v in I.rels.items() if k != name}
    return Structure._trusted(I.domain, Vocabulary.of(fns, preds), funcs, rels, I._index)


def relations(domain, arity, budget=None) -> Iterator[frozenset]:
    """All relations of the given arity over ``domain``, smallest first."""
    tuples = list(itertools.product(domain, repeat=arity))
    count = 2 ** len(tuples)
    limit = config.enumeration_budget(budget)
    if count > limit:
        raise BudgetExceeded(count, limit)
    for bits in itertools.product((False, True), repeat=len(tuples)):
        yield frozenset(t for t, b in zip(tuples, bits) if b)


def function_tables(domain, arity, budget=None) -> Iterator[dict]:
    keys = list(itertools.product(domain, repeat=arity))
    count = len(domain) ** len(keys)
    limit = config.enumeration_budget(budget)
    if count > limit:
        raise BudgetExceeded(count, limit)
    for values in itertools.product(domain, repeat=len(keys)):
        yield dict(zip(keys, values))


@functools.lru_cache(maxsize=4096)
def compile_formula(phi: Formula):
    """Closure evaluating ``phi`` in (structure, object environment)."""
    if isinstance(phi, Atom):
        pred = phi.pred
        args = [_term(t) for t in phi.args]
        if not args:
            return lambda I, env: () in I.rels[pred]
        if len(args) == 1:
            a0 = args[0]
            return lambda I, env: (a0(I, env),) in I.rels[pred]
        if len(args) == 2:
            a0, a1 = args
            return lambda I, env: (a0(I, env), a1(I, env)) in I.rels[pred]
        return lambda I, env: tuple(a(I, env) for a in args) in I.rels[pred]
    if isinstance(phi, Eq):
        l, r = _term(phi.left), _term(phi.right)
        return lambda I, env: l(I, env) == r(I, env)
    if isinstance(phi, Top):
        return lambda I, env: True
    if isinstance(phi, Bottom):
        return lambda I, env: False
    if isinstance(phi, Not):
        f = compile_formula(phi.body)
        return lambda I, env: not f(I, env)
    if isinstance(phi, (And, Or, Implies, Iff)):
        a, b = compile_formula(phi.left), compile_formula(phi.right)
        if isinstance(phi, And):
            return lambda I, env: a(I, env) and b(I, env)
        if isinstance(phi, Or):
            return lambda I, env: a(I, env) or b(I, env)
        if isinstance(phi, Implies):
            return lambda I, env: (not a(I, env)) or b(I, env)
        return lambda I, env: a(I, env) == b(I, env)
    if isinstance(phi, (Exists, Forall)):
        body = compile_formula(phi.body)
        name, arity = phi.name, phi.arity
        want = isinstance(phi, Exists)
        if phi.kind == OBJECT:
            def quant(I, env):
                inner = dict(env)
                for e in I.domain:
                    inner[name] = e
                    if body(I, inner) == want:
                        return want
                return not want
            return quant
        if phi.kind == PREDICATE:
            def quant_rel(I, env):
                inner = {k: v for k, v in env.items() if k != name}
                bind = _relation_binder(I, name, arity)
                for rel in relations(I.domain, arity):
                    if body(bind(rel), inner) == want:
                        return want
                return not want
            return quant_rel

        def quant_fun(I, env):
            inner = {k: v for k, v in env.items() if k != name}
            for tab in function_tables(I.domain, arity):
                if body(_bind_function(I, name, arity, tab), inner) == want:
                    return want
            return not want
        return quant_fun
    if isinstance(phi, Def):
        delta = phi.definition
        names = set(infer_arities(delta))

        def defn(I, env):
            from .engine import satisfies_definition
            bound = {k: v for k, v in env.items() if k in names}
            if bound:
                for k, v in bound.items():
                    I = _bind_function(I, k, 0, {(): v})
            return satisfies_definition(I, delta)
        return defn
    raise TypeError(f"not a formula: {phi!r}")


def satisfies(I: Structure, phi: Formula, env: dict | None = None) -> bool:
    """I |= phi, with ``env`` binding free object variables."""
    env = env or {}
    missing = free_symbols(phi) - I.vocab.names() - set(env)
    if missing:
        raise FreeSymbolUninterpreted(missing)
    return bool(compile_formula(phi)(I, env))


def _axioms(T) -> list:
    if isinstance(T, Theory):
        return list(T.axioms)
    if isinstance(T, Formula):
        return [T]
    return list(T)


def satisfies_theory(I: Structure, T) -> bool:
    return all(satisfies(I, ax) for ax in _axioms(T))


def enumerate_models(T, base: Structure, free_preds=None, budget: int | None = None):
    """Every extension of ``base`` over ``free_preds`` satisfying ``T``.

    ``free_preds`` is a mapping name -> arity or an iterable of names whose
    arities are read off the theory; by default every predicate of ``T``
    that ``base`` does not interpret.  Order is deterministic.
    """
    axioms = _axioms(T)
    arities = {}
    if isinstance(T, Theory):
        arities.update(T.vocab.predicate_arities)
    for ax in axioms:
        for n, (kind, a) in infer_arities(ax).items():
            if kind == PREDICATE:
                arities.setdefault(n, a)
    if free_preds is None:
        free = {n: a for n, a in arities.items() if n not in base.vocab.names()}
    elif isinstance(free_preds, dict):
        free = dict(free_preds)
    else:
        free = {n: arities[n] for n in free_preds}
    lat = ExtensionLattice(base.restrict(base.vocab.names() - set(free)),
                           base.vocab.without(free).union(Vocabulary.of(predicates=free)))
    compiled = [compile_formula(ax) for ax in axioms]
    for I in lat.enumerate_extensions(budget):
        if all(f(I, {}) for f in compiled):
            yield I


def models(T, base: Structure, free_preds=None, budget: int | None = None) -> list:
    return list(enumerate_models(T, base, free_preds, budget))
