"""Brute-force reference implementations used to cross-check the engine.

Nothing here calls the engine or the kernel.  The well-founded oracle
reads the ground bodies as plain data and runs its own three-valued
evaluation with unfounded sets; the model oracles enumerate structures
and test formulas with the checker on Def-free formulas.
"""
from __future__ import annotations

from .checker import enumerate_models
from .core import Structure
from .engine import WfPair
from .ground import GNot, GAnd, GroundRuleSet
from .core import GroundAtom
from .syntax import Atom, Definition, Iff, Implies, Var, conj, forall_all, phi_bodies

TRUE, FALSE, UNKNOWN = 1, 0, None


def _defined_base(delta: Definition, base: Structure) -> Structure:
    return base.restrict(base.vocab.names() - set(delta.defined))


def _arities(delta: Definition) -> dict:
    return {p: delta.head_arity(p) for p in delta.defined}


def _material(delta: Definition):
    return conj([forall_all(r.vars, Implies(r.body, Atom(r.head_pred, r.head_args)))
                 for r in delta.rules])


def _comp(delta: Definition):
    parts = []
    for pred, (xs, body) in phi_bodies(delta).items():
        parts.append(forall_all(xs, Iff(Atom(pred, tuple(Var(x) for x in xs)), body)))
    return conj(parts)


def _true_set(I: Structure, preds) -> frozenset:
    return frozenset(GroundAtom(p, t) for p in preds for t in I.rels[p])


def minimal_models(delta: Definition, base: Structure, budget: int | None = None) -> set:
    """Inclusion-minimal extensions of ``base`` satisfying the rules as implications."""
    preds = delta.defined
    models = list(enumerate_models(_material(delta), _defined_base(delta, base),
                                   _arities(delta), budget))
    sets = [_true_set(m, preds) for m in models]
    return {m for m, s in zip(models, sets) if not any(o < s for o in sets)}


def completion_models(delta: Definition, base: Structure, budget: int | None = None) -> set:
    """Extensions of ``base`` satisfying the completion of ``delta``."""
    return set(enumerate_models(_comp(delta), _defined_base(delta, base),
                                _arities(delta), budget))


# three-valued well-founded computation ------------------------------------

def _value(atom, T, F):
    if atom in T:
        return TRUE
    if atom in F:
        return FALSE
    return UNKNOWN


def _neg(v):
    return UNKNOWN if v is UNKNOWN else 1 - v


def _kleene(b, leaf, positive=True):
    """Kleene evaluation; ``leaf(atom, positive)`` gives a leaf's value."""
    if b is True:
        return TRUE
    if b is False:
        return FALSE
    if isinstance(b, GroundAtom):
        return leaf(b, positive)
    if isinstance(b, GNot):
        return _neg(_kleene(b.child, leaf, not positive))
    is_and = isinstance(b, GAnd)
    seen_unknown = False
    for c in b.children:
        v = _kleene(c, leaf, positive)
        if v is UNKNOWN:
            seen_unknown = True
        elif v == (FALSE if is_and else TRUE):
            return v
    return UNKNOWN if seen_unknown else (TRUE if is_and else FALSE)


def _greatest_unfounded(g: GroundRuleSet, T, F, opened) -> set:
    """Complement of the atoms that can still be supported.

    Support grows from the empty set: an atom is supported when its body
    is not false once every positive defined leaf outside the support
    (or known false) is read as false.
    """
    defined = set(g.defined)
    supported = set()
    while True:
        def leaf(atom, positive):
            if atom.predicate not in defined:
                return opened[atom]
            if positive and (atom in F or atom not in supported):
                return FALSE
            return _value(atom, T, F)
        new = {a for a in g.atoms if _kleene(g.bodies[a], leaf) != FALSE}
        if new == supported:
            return set(g.atoms) - supported
        supported = new


def wf_unfounded(g: GroundRuleSet, I_o: Structure | None = None) -> WfPair:
    """Well-founded pair by iterating true derivation and unfounded-set removal."""
    I_o = g.base if I_o is None else I_o
    opened = {a: (TRUE if a.args in I_o.rels[a.predicate] else FALSE) for a in g.open_atoms}
    defined = set(g.defined)
    T, F = set(), set()
    while True:
        def leaf(atom, positive):
            if atom.predicate not in defined:
                return opened[atom]
            return _value(atom, T, F)
        new_T = {a for a in g.atoms if _kleene(g.bodies[a], leaf) == TRUE}
        new_F = _greatest_unfounded(g, T, F, opened)
        if new_T == T and new_F == F:
            break
        T, F = new_T, new_F
    keep = I_o.restrict(I_o.vocab.names() - defined)
    lb_rels = {p: frozenset(a.args for a in T if a.predicate == p) for p in g.defined}
    ub_rels = {p: frozenset(a.args for a in g.atoms if a.predicate == p and a not in F)
               for p in g.defined}
    lb = keep.extend(lb_rels, arities=g.arities)
    ub = keep.extend(ub_rels, arities=g.arities)
    return WfPair(lb, ub, lb == ub, None, g)
