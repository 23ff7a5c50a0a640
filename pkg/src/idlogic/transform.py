"""Partitions, certificates and first/second-order translations of definitions."""
from __future__ import annotations

from dataclasses import dataclass

from .core import Structure
from .engine import extension, open_base
from .errors import NotAnIidSequence, PartitionError, SplitHead, UncoveredPredicate
from .ground import dependency_graph, ground_definition, scc_preorder
from .syntax import (
    PREDICATE,
    And,
    Atom,
    Definition,
    Forall,
    Iff,
    Implies,
    Var,
    all_names,
    conj,
    forall_all,
    fresh_names,
    free_symbols,
    is_positive,
    phi_bodies,
    rename_predicates,
    subst,
)

CERTIFIED = "certified"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Partition:
    definition: Definition
    parts: tuple

    def part_of(self) -> dict:
        return {p: k for k, part in enumerate(self.parts) for p in part.defined}


@dataclass(frozen=True)
class Certificate:
    """Outcome of a syntactic certification.

    ``witness`` is the offending strongly connected component (ground
    atoms) when the status is unknown.
    """

    status: str
    witness: tuple = ()
    reason: str = ""

    def __bool__(self):
        return self.status == CERTIFIED

    def report(self) -> str:
        if self:
            return CERTIFIED
        atoms = ", ".join(str(a) for a in self.witness)
        return f"{UNKNOWN}: {self.reason} [{atoms}]"


def make_partition(delta: Definition, grouping: dict) -> Partition:
    """Route rules to parts by head predicate; part order follows sorted keys."""
    uncovered = [p for p in delta.defined if p not in grouping]
    if uncovered:
        raise UncoveredPredicate("no part for " + ", ".join(uncovered))
    keys = sorted({grouping[p] for p in delta.defined})
    if len(keys) < 2:
        raise PartitionError("a partition needs at least two parts")
    buckets = {k: [] for k in keys}
    for r in delta.rules:
        buckets[grouping[r.head_pred]].append(r)
    parts = tuple(Definition(buckets[k]) for k in keys)
    seen = {}
    for k, part in enumerate(parts):
        for p in part.defined:
            if seen.setdefault(p, k) != k:
                raise SplitHead(f"rules for {p} land in different parts")
    return Partition(delta, parts)


def _graph(delta: Definition, base: Structure, budget=None):
    g = ground_definition(delta, open_base(delta, base), fold_open=True, budget=budget)
    dg = dependency_graph(g, include_folded=False)
    return g, dg, scc_preorder(dg)


def certify_reduction_partition(delta: Definition, p: Partition, base: Structure,
                                budget=None) -> Certificate:
    """Certified when no dependency cycle joins atoms of different parts.

    Open predicates that ``base`` interprets are folded; the rest stay
    symbolic, so a certificate covers every completion of ``base``.
    A failed check is reported as unknown: the ground graph over-approximates
    the semantic dependencies.
    """
    part = p.part_of()
    _, _, scc = _graph(delta, base, budget)
    for comp in scc.components:
        if len(comp) < 2:
            continue
        owners = {part.get(a.predicate, "open") for a in comp}
        if len(owners) > 1:
            return Certificate(UNKNOWN, comp, "dependency cycle crosses parts")
    return Certificate(CERTIFIED)


def certify_strict_reduction(delta: Definition, base: Structure, budget=None) -> Certificate:
    """Certified when the dependency graph on defined atoms is acyclic."""
    g, _, scc = _graph(delta, base, budget)
    defined = set(g.defined)
    for cid in sorted(scc.cyclic):
        comp = scc.components[cid]
        if any(a.predicate in defined for a in comp):
            reason = "self-dependent atom" if len(comp) == 1 else "dependency cycle"
            return Certificate(UNKNOWN, comp, reason)
    return Certificate(CERTIFIED)


# translations ----------------------------------------------------------------

def _readable_vars(delta: Definition, bodies: dict) -> dict:
    """Swap reserved variable names for plain unused ones."""
    taken = set(all_names(delta))
    pool = [n for n in ("x", "y", "z", "u", "v", "w") if n not in taken]
    k = 1
    out = {}
    for pred, (xs, body) in bodies.items():
        names = []
        for i in range(len(xs)):
            while i >= len(pool):
                cand = f"x{k}"
                k += 1
                if cand not in taken:
                    pool.append(cand)
            names.append(pool[i])
        body = subst(body, {x: Var(n) for x, n in zip(xs, names)})
        out[pred] = (tuple(names), body)
    return out


def completion(delta: Definition):
    """Conjunction over defined X of  !xs: X(xs) <=> phi_X."""
    parts = []
    for pred, (xs, body) in _readable_vars(delta, phi_bodies(delta)).items():
        head = Atom(pred, tuple(Var(x) for x in xs))
        parts.append(forall_all(xs, Iff(head, body)))
    return conj(parts)


def rules_as_implications(delta: Definition):
    """The material reading of delta: each rule as a universally closed implication."""
    parts = []
    for r in delta.rules:
        parts.append(forall_all(r.vars, Implies(r.body, Atom(r.head_pred, r.head_args))))
    return conj(parts)


def _second_order_copies(delta: Definition):
    preds = list(delta.defined)
    avoid = all_names(delta)
    names = fresh_names(avoid, len(preds), prefix="$X")
    return preds, dict(zip(preds, names))


def _included(delta, small: dict, big: dict, preds):
    """Conjunction of  !xs: small_P(xs) => big_P(xs)."""
    parts = []
    avoid = all_names(delta) | set(small.values()) | set(big.values())
    for p in preds:
        xs = fresh_names(avoid, delta.head_arity(p))
        args = tuple(Var(x) for x in xs)
        parts.append(forall_all(xs, Implies(Atom(small[p], args), Atom(big[p], args))))
    return conj(parts)


def _forall_preds(delta, names: dict, body):
    for p in reversed(list(names)):
        body = Forall(names[p], body, PREDICATE, delta.head_arity(p))
    return body


def pos_ind(delta: Definition):
    """Rules hold, and the defined relations are contained in any relations closed under them."""
    preds, names = _second_order_copies(delta)
    rules = rules_as_implications(delta)
    ident = {p: p for p in preds}
    closed = rename_predicates(rules, names)
    return And(rules, _forall_preds(delta, names,
                                    Implies(closed, _included(delta, ident, names, preds))))


def circumscription(delta: Definition):
    """Rules hold, and no strictly smaller relations satisfy them."""
    preds, names = _second_order_copies(delta)
    rules = rules_as_implications(delta)
    ident = {p: p for p in preds}
    closed = rename_predicates(rules, names)
    smaller = _included(delta, names, ident, preds)
    return And(rules, _forall_preds(delta, names,
                                    Implies(And(closed, smaller),
                                            _included(delta, ident, names, preds))))


# iterated inductive definitions --------------------------------------------

@dataclass(frozen=True)
class IidSequence:
    defs: tuple

    def __post_init__(self):
        object.__setattr__(self, "defs", tuple(self.defs))


def iid_violation(seq: IidSequence) -> str | None:
    """None for a valid sequence, otherwise the first violated condition."""
    seen = {}
    for i, d in enumerate(seq.defs):
        if not is_positive(d):
            return f"definition {i} is not positive"
        for p in d.defined:
            if p in seen:
                return f"{p} is defined in definitions {seen[p]} and {i}"
            seen[p] = i
    for j, d in enumerate(seq.defs):
        opened = free_symbols(d) - set(d.defined)
        for i in range(j + 1, len(seq.defs)):
            clash = opened & set(seq.defs[i].defined)
            if clash:
                return (f"{', '.join(sorted(clash))} occurs open in definition {j} "
                        f"but is defined by later definition {i}")
    return None


def check_iid(seq: IidSequence) -> bool:
    return iid_violation(seq) is None


def iterated_extension(seq: IidSequence, I_o: Structure) -> Structure:
    reason = iid_violation(seq)
    if reason is not None:
        raise NotAnIidSequence(reason)
    I = I_o
    for d in seq.defs:
        I = extension(d, I)
    return I


def union(defs) -> Definition:
    return Definition(r for d in defs for r in d.rules)

