"""Fixpoint semantics of definitions over finite structures.

The heavy lifting (stable operator and the alternating fixpoint) runs in
``kernel`` on the flat program of a ``GroundRuleSet``; the functions here
translate between structures and the kernel's byte vectors.
"""
from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field

from . import config, kernel
from .core import ExtensionLattice, GroundAtom, Structure, leq
from .errors import (
    BudgetExceeded,
    DomainMismatch,
    FreeSymbolUninterpreted,
    NonMonotoneDetected,
    NotTotal,
    VocabularyError,
)
from .ground import GroundRuleSet, ground_definition
from .syntax import Definition, Formula, infer_arities


@dataclass
class WfPair:
    """Lower and upper bound of the well-founded pair over one open structure."""

    lb: Structure
    ub: Structure
    total: bool
    trace: list | None = None
    ground: GroundRuleSet | None = field(default=None, repr=False)
    stages: int = 0

    def undefined_atoms(self) -> list:
        """Defined atoms true in ub but not in lb, in atom order."""
        if self.ground is not None:
            atoms = self.ground.atoms
        else:
            atoms = [GroundAtom(p, t) for p in sorted(self.ub.rels) for t in self.ub.rels[p]]
        return [a for a in atoms
                if a.args in self.ub.rels[a.predicate] and a.args not in self.lb.rels[a.predicate]]

    def trace_text(self) -> str:
        if not self.trace:
            return ""
        defined = self.ground.defined if self.ground else sorted(self.lb.rels)
        lines = []
        for k, (I, J) in enumerate(self.trace):
            label = "initial" if k == 0 else f"stage {k - 1}"
            lines.append(f"{label}: I = {_atom_set(I, defined)}, J = {_atom_set(J, defined)}")
        return "\n".join(lines)

    def trace_json(self) -> list:
        if not self.trace:
            return []
        defined = self.ground.defined if self.ground else sorted(self.lb.rels)
        return [{"stage": k - 1, "I": [str(a) for a in I.true_atoms(defined)],
                 "J": [str(a) for a in J.true_atoms(defined)]}
                for k, (I, J) in enumerate(self.trace)]


def _atom_set(I: Structure, preds) -> str:
    return "{" + ", ".join(str(a) for a in I.true_atoms(preds)) + "}"


# grounding helpers -----------------------------------------------------------

def open_base(delta: Definition, I: Structure) -> Structure:
    """The part of ``I`` interpreting open symbols that ``delta`` mentions."""
    used = set(infer_arities(delta)) - set(delta.defined)
    return I.restrict(used & I.vocab.names())


@functools.lru_cache(maxsize=256)
def _ground_memo(delta, base, fold_open, budget):
    return ground_definition(delta, base, fold_open=fold_open, budget=budget)


def _ground_cached(delta, base, fold_open, budget=None):
    # the effective budget is part of the key so an override is never bypassed
    return _ground_memo(delta, base, fold_open, config.atom_budget(budget))


def ground(delta: Definition, I: Structure, fold_open: bool = True) -> GroundRuleSet:
    """Ground ``delta`` over the open part of ``I`` (memoised)."""
    return _ground_cached(delta, open_base(delta, I), fold_open)


def _check_extends(g: GroundRuleSet, I: Structure):
    if I.domain != g.base.domain:
        raise DomainMismatch("structure domain differs from the grounding base")
    base = g.base
    for name, tab in base.funcs.items():
        if I.funcs.get(name) is not tab and I.funcs.get(name) != tab:
            raise VocabularyError(f"structure disagrees with the grounding base on {name}")
    for name, rel in base.rels.items():
        if name in g.arities:
            continue
        if I.rels.get(name) is not rel and I.rels.get(name) != rel:
            raise VocabularyError(f"structure disagrees with the grounding base on {name}")


def _open_vector(g: GroundRuleSet, I_o: Structure) -> bytearray:
    vec = bytearray(g.nd + len(g.open_atoms))
    missing = set()
    for k, a in enumerate(g.open_atoms, g.nd):
        rel = I_o.rels.get(a.predicate)
        if rel is None:
            missing.add(a.predicate)
        elif a.args in rel:
            vec[k] = 1
    if missing:
        raise FreeSymbolUninterpreted(missing)
    return vec


def _like(g: GroundRuleSet, I_o: Structure) -> Structure:
    """``I_o`` without its own defined relations, defined predicates empty."""
    names = I_o.vocab.names() - set(g.defined)
    return g.template(I_o.restrict(names))


# operators ---------------------------------------------------------------------

def gamma(g: GroundRuleSet, I: Structure) -> Structure:
    """Immediate consequence: re-derive every defined relation from I."""
    _check_extends(g, I)
    v = g.vector(I)
    return g.structure(kernel.eval_bodies(g.program(), v, v), I)


def t_pp(g: GroundRuleSet, I: Structure, J: Structure) -> Structure:
    """Positive defined leaves read in I; negative defined and open leaves in J."""
    if I.domain != J.domain:
        raise DomainMismatch("t_pp needs structures over one domain")
    _check_extends(g, I)
    _check_extends(g, J)
    out = kernel.eval_bodies(g.program(), g.vector(I), g.vector(J))
    return g.structure(out, J)


def join(I: Structure, J: Structure, preds) -> Structure:
    return I._with_rels({p: I.rels[p] | J.rels[p] for p in preds})


def lfp_monotone(op, lat: ExtensionLattice) -> Structure:
    """Least fixpoint of a monotone ``op`` by iteration from bottom.

    Each stage applies ``op`` to the join of all earlier stages.  A stage
    that does not contain that join witnesses non-monotonicity.
    """
    preds = [n for n, _ in lat.free_predicates]
    acc = lat.bottom()
    while True:
        nxt = op(acc)
        if nxt == acc:
            return acc
        if not leq(acc, nxt):
            raise NonMonotoneDetected(
                "operator output does not contain the join of earlier stages")
        acc = join(acc, nxt, preds)


def stable(g: GroundRuleSet, J: Structure) -> Structure:
    """Least fixpoint of I -> t_pp(I, J) among extensions of J's open part."""
    _check_extends(g, J)
    return g.structure(kernel.stable(g.program(), g.vector(J)), J)


def well_founded_pair(g: GroundRuleSet, I_o: Structure | None = None,
                      trace: bool = False) -> WfPair:
    """Alternating fixpoint: I := ST(J_prev), J := ST(I_prev) until both settle."""
    I_o = g.base if I_o is None else I_o
    _check_extends(g, I_o)
    like = _like(g, I_o)
    vec = _open_vector(g, I_o)
    prog = g.program()
    if not trace:
        lb, ub, stages = kernel.wf_pair(prog, vec)
        return WfPair(g.structure(lb, like), g.structure(ub, like), lb == ub,
                      None, g, stages)
    nd = g.nd
    lb = bytearray(vec)
    lb[:nd] = bytes(nd)
    ub = bytearray(vec)
    ub[:nd] = b"\x01" * nd
    snaps = [(g.structure(lb, like), g.structure(ub, like))]
    stages = 0
    while True:
        new_lb, new_ub = kernel.stable(prog, ub), kernel.stable(prog, lb)
        snaps.append((g.structure(new_lb, like), g.structure(new_ub, like)))
        if new_lb == lb and new_ub == ub:
            break
        lb, ub = new_lb, new_ub
        stages += 1
    return WfPair(snaps[-1][0], snaps[-1][1], lb == ub, snaps, g, stages)


# definitions over (partial) open structures ---------------------------------

def _missing_open(delta: Definition, I_o: Structure) -> dict:
    defined = set(delta.defined)
    return {n: a for n, (kind, a) in infer_arities(delta).items()
            if kind == "predicate" and n not in defined and n not in I_o.vocab.names()}


def open_completions(delta: Definition, I_o: Structure, budget: int | None = None):
    """Every completion of ``I_o`` by the open predicates of ``delta`` it lacks."""
    missing = _missing_open(delta, I_o)
    if not missing:
        yield I_o
        return
    lat = ExtensionLattice(I_o, I_o.vocab.union(_vocab_of(missing)))
    yield from lat.enumerate_extensions(config.enumeration_budget(budget))


def _vocab_of(preds):
    from .core import Vocabulary
    return Vocabulary.of(predicates=preds)


def _pairs(delta: Definition, I_o: Structure, all_completions: bool, budget):
    """Yield the kernel pair for each relevant open completion of I_o."""
    base = open_base(delta, I_o)
    g = _ground_cached(delta, base, True)
    prog = g.program()
    k = len(g.open_atoms)
    if k and all_completions:
        limit = config.enumeration_budget(budget)
        if 2 ** k > limit:
            raise BudgetExceeded(2 ** k, limit)
        for bits in itertools.product((0, 1), repeat=k):
            vec = bytearray(g.nd) + bytearray(bits)
            yield g, vec, kernel.wf_pair(prog, vec)
    else:
        vec = bytearray(g.nd + k)
        yield g, vec, kernel.wf_pair(prog, vec)


def models_of(delta: Definition, I_o: Structure, budget: int | None = None):
    """Every model of ``delta`` extending ``I_o``.

    Open predicates of ``delta`` missing from ``I_o`` range over all their
    interpretations; each completion contributes its extension when total.
    """
    g = _ground_cached(delta, open_base(delta, I_o), True)
    prog = g.program()
    seen = {}
    for done in open_completions(delta, I_o, budget):
        vec = bytes(_open_vector(g, done))
        if vec not in seen:
            seen[vec] = kernel.wf_pair(prog, bytearray(vec))
        lb, ub, _ = seen[vec]
        if lb == ub:
            yield g.structure(lb, g.template(done))


def is_total(delta: Definition, I_o: Structure, all_completions: bool = True,
             budget: int | None = None) -> bool:
    """lb = ub in I_o, or in every completion of I_o when it is partial.

    With ``all_completions=False`` a partial I_o is completed by making the
    missing open predicates empty.
    """
    for _, _, (lb, ub, _) in _pairs(delta, I_o, all_completions, budget):
        if lb != ub:
            return False
    return True


def wf_pair_of(delta: Definition, I_o: Structure, trace: bool = False) -> WfPair:
    """Well-founded pair of ``delta`` over a structure interpreting its open symbols."""
    missing = _missing_open(delta, I_o)
    if missing:
        raise FreeSymbolUninterpreted(missing)
    return well_founded_pair(ground(delta, I_o), I_o, trace=trace)


def extension(delta: Definition, I_o: Structure) -> Structure:
    """The delta-extension of I_o: I_o with the defined relations of lb.

    Raises NotTotal (carrying the pair) when lb and ub differ.
    """
    pair = wf_pair_of(delta, I_o)
    if not pair.total:
        raise NotTotal(pair)
    defined = {p: pair.lb.rels[p] for p in delta.defined}
    arities = {p: delta.head_arity(p) for p in delta.defined}
    return I_o.extend(defined, arities=arities)


def satisfies_definition(I: Structure, delta: Definition) -> bool:
    """I is a model of delta: total over I's open part with lb equal to I."""
    missing = [p for p in delta.defined if p not in I.rels]
    missing += list(_missing_open(delta, I))
    if missing:
        raise FreeSymbolUninterpreted(missing)
    g = ground(delta, I)
    lb, ub, _ = kernel.wf_pair(g.program(), _open_vector(g, I))
    if lb != ub:
        return False
    rels = I.rels
    for k, a in enumerate(g.atoms):
        if lb[k] != (a.args in rels[a.predicate]):
            return False
    return True


def inflationary_fixpoint(phi: Formula, X: str, I: Structure, xs=None, arity=None):
    """Iterate R -> R | {a : I[X:R] |= phi[a]} from the empty relation.

    ``xs`` names the free variables of ``phi`` standing for the tuple; by
    default they are the free object variables of ``phi`` that ``I`` does
    not interpret, in sorted order.
    """
    from .checker import satisfies

    if xs is None:
        known = I.vocab.names()
        xs = sorted(n for n, (kind, a) in infer_arities(phi).items()
                    if kind == "function" and a == 0 and n not in known)
    xs = tuple(xs)
    arity = len(xs) if arity is None else arity
    R = frozenset()
    tuples = list(itertools.product(I.domain, repeat=arity))
    while True:
        cur = I.extend({X: R}, arities={X: arity})
        new = R | {t for t in tuples if t not in R and satisfies(cur, phi, dict(zip(xs, t)))}
        if new == R:
            return R
        R = frozenset(new)


def trace_json_dump(pair: WfPair) -> str:
    return json.dumps(pair.trace_json(), indent=2)
