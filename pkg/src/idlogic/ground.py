"""Grounding of definitions over a finite structure and the atom dependency graph.

A ground body is a tree whose leaves are ``GroundAtom`` instances or the
booleans ``True``/``False`` and whose inner nodes are ``GNot``, ``GAnd``
and ``GOr``.  Equalities and atoms of open predicates that the base
structure interprets are folded to booleans; atoms of defined predicates
(and of uninterpreted open predicates) stay symbolic.
"""
from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass, field
from typing import NamedTuple

from . import config
from .core import GroundAtom, Structure, Vocabulary
from .errors import DomainMismatch, DomainTooLarge, GroundingError, MissingFunctionInterpretation
from .syntax import (
    OBJECT,
    PREDICATE,
    And,
    Atom,
    Bottom,
    Def,
    Definition,
    Eq,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    Var,
    infer_arities,
    phi_bodies,
)


class GNot(NamedTuple):
    child: object


class GAnd(NamedTuple):
    children: tuple


class GOr(NamedTuple):
    children: tuple


def g_not(b):
    if b is True:
        return False
    if b is False:
        return True
    return GNot(b)


def g_and(children):
    out = []
    for c in children:
        if c is False:
            return False
        if c is not True:
            out.append(c)
    if not out:
        return True
    if len(out) == 1:
        return out[0]
    return GAnd(tuple(out))


def g_or(children):
    out = []
    for c in children:
        if c is True:
            return True
        if c is not False:
            out.append(c)
    if not out:
        return False
    if len(out) == 1:
        return out[0]
    return GOr(tuple(out))


def leaves(b, positive=True):
    """Yield ``(atom, is_positive)`` for every leaf occurrence."""
    if isinstance(b, GroundAtom):
        yield b, positive
    elif isinstance(b, GNot):
        yield from leaves(b.child, not positive)
    elif isinstance(b, (GAnd, GOr)):
        for c in b.children:
            yield from leaves(c, positive)


def format_body(b, defined=None, positive=True) -> str:
    """Text form; defined leaves carry a ``+``/``-`` polarity mark."""
    if b is True:
        return "true"
    if b is False:
        return "false"
    if isinstance(b, GroundAtom):
        if defined is not None and b.predicate in defined:
            return ("+" if positive else "-") + str(b)
        return str(b)
    if isinstance(b, GNot):
        inner = format_body(b.child, defined, not positive)
        return "~" + (f"({inner})" if isinstance(b.child, (GAnd, GOr)) else inner)
    sep = " & " if isinstance(b, GAnd) else " | "
    parts = []
    for c in b.children:
        s = format_body(c, defined, positive)
        if isinstance(c, (GAnd, GOr)) and type(c) is not type(b):
            s = f"({s})"
        parts.append(s)
    return sep.join(parts)


# grounding --------------------------------------------------------------------

class _Grounder:
    def __init__(self, base: Structure, defined, fold_open: bool):
        self.base = base
        self.defined = set(defined)
        self.fold_open = fold_open
        self.domain = base.domain
        self.funcs = base.funcs
        self.rels = base.rels
        self.open_atoms = {}

    def term(self, t, env):
        if isinstance(t, Var) or not t.args:
            name = t.name if isinstance(t, Var) else t.func
            if name in env:
                return env[name]
            return self.funcs[name][()]
        args = tuple(self.term(a, env) for a in t.args)
        return self.funcs[t.func][args]

    def formula(self, phi, env):
        if isinstance(phi, Atom):
            args = tuple(self.term(t, env) for t in phi.args)
            if phi.pred in self.defined:
                return GroundAtom(phi.pred, args)
            if self.fold_open and phi.pred in self.rels:
                return args in self.rels[phi.pred]
            atom = GroundAtom(phi.pred, args)
            self.open_atoms.setdefault(atom, None)
            return atom
        if isinstance(phi, Eq):
            return self.term(phi.left, env) == self.term(phi.right, env)
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Bottom):
            return False
        if isinstance(phi, Not):
            return g_not(self.formula(phi.body, env))
        if isinstance(phi, And):
            return g_and((self.formula(phi.left, env), self.formula(phi.right, env)))
        if isinstance(phi, Or):
            return g_or((self.formula(phi.left, env), self.formula(phi.right, env)))
        if isinstance(phi, Implies):
            return g_or((g_not(self.formula(phi.left, env)), self.formula(phi.right, env)))
        if isinstance(phi, Iff):
            a, b = phi.left, phi.right
            return g_and((
                g_or((g_not(self.formula(a, env)), self.formula(b, env))),
                g_or((g_not(self.formula(b, env)), self.formula(a, env))),
            ))
        if isinstance(phi, (Exists, Forall)):
            if phi.kind != OBJECT:
                raise GroundingError(
                    "second-order quantifiers are not supported inside rule bodies")
            parts = []
            combine = g_or if isinstance(phi, Exists) else g_and
            stop = True if isinstance(phi, Exists) else False
            for e in self.domain:
                inner = dict(env)
                inner[phi.name] = e
                v = self.formula(phi.body, inner)
                if v is stop:
                    return stop
                parts.append(v)
            return combine(parts)
        if isinstance(phi, Def):
            raise GroundingError("definitions may not occur inside rule bodies")
        raise TypeError(f"not a formula: {phi!r}")


@dataclass
class Program:
    """Flat postfix encoding of all bodies, consumed by the kernels.

    Instruction pairs ``(op, arg)`` live in ``code``; body ``k`` spans
    ``code[2*offsets[k] : 2*offsets[k+1]]``.  Atom indices below ``nd``
    are defined atoms, the rest are symbolic open atoms.
    """

    code: array
    offsets: array
    nd: int
    n: int
    max_len: int
    cache: dict = field(default_factory=dict, repr=False)


OP_TRUE, OP_FALSE, OP_LEAF_I, OP_LEAF_J, OP_NOT, OP_AND, OP_OR = range(7)


@dataclass
class GroundRuleSet:
    """One ground body per defined atom of a definition over a fixed base."""

    definition: Definition
    base: Structure
    defined: tuple
    arities: dict
    atoms: list
    bodies: dict
    open_atoms: list
    vocab: Vocabulary
    index: dict = field(repr=False, default_factory=dict)
    _program: Program | None = field(repr=False, default=None)
    _split: dict | None = field(repr=False, default=None)

    @property
    def nd(self) -> int:
        return len(self.atoms)

    @property
    def all_atoms(self) -> list:
        return self.atoms + self.open_atoms

    @property
    def polarity_split(self) -> dict:
        """Per defined atom: (positive defined leaves, negative defined leaves)."""
        if self._split is None:
            split = {}
            defined = set(self.defined)
            for atom, body in self.bodies.items():
                pos, neg = set(), set()
                for leaf, p in leaves(body):
                    if leaf.predicate in defined:
                        (pos if p else neg).add(leaf)
                split[atom] = (frozenset(pos), frozenset(neg))
            self._split = split
        return self._split

    def program(self) -> Program:
        if self._program is None:
            self._program = compile_program(self)
        return self._program

    def dump(self) -> str:
        defined = set(self.defined)
        return "\n".join(f"{a} := {format_body(self.bodies[a], defined)}" for a in self.atoms)

    # vectors <-> structures ---------------------------------------------

    def template(self, I_o: Structure | None = None) -> Structure:
        """Structure over the full vocabulary with defined predicates empty."""
        src = I_o if I_o is not None else self.base
        empty = {p: frozenset() for p in self.defined}
        return src.extend(empty, arities=self.arities)

    def vector(self, I: Structure) -> bytearray:
        self._check(I)
        rels = I.rels
        out = bytearray(len(self.atoms) + len(self.open_atoms))
        for k, a in enumerate(self.all_atoms):
            try:
                out[k] = a.args in rels[a.predicate]
            except KeyError:
                raise GroundingError(f"structure does not interpret {a.predicate}") from None
        return out

    def structure(self, vec, like: Structure) -> Structure:
        """``like`` with defined predicates read from ``vec``."""
        rels = {p: set() for p in self.defined}
        for k, a in enumerate(self.atoms):
            if vec[k]:
                rels[a.predicate].add(a.args)
        frozen = {p: frozenset(v) for p, v in rels.items()}
        if all(p in like.rels for p in self.defined):
            return like._with_rels(frozen)
        return like.extend(frozen, arities=self.arities)

    def _check(self, I: Structure):
        if I.domain != self.base.domain:
            raise DomainMismatch("structure domain differs from the grounding base")


def ground_definition(delta: Definition, base: Structure, *, fold_open: bool = True,
                      budget: int | None = None) -> GroundRuleSet:
    """Ground ``delta`` over ``base``.

    Every function symbol (and free object symbol) of ``delta`` must be
    interpreted by ``base``.  Open predicates interpreted by ``base`` are
    folded to constants when ``fold_open`` is set and kept as symbolic
    leaves otherwise.
    """
    defined = delta.defined
    arities = {p: delta.head_arity(p) for p in defined}
    used = infer_arities(delta)
    missing = {s for s, (kind, _) in used.items() if kind != PREDICATE and s not in base.funcs}
    if missing:
        raise MissingFunctionInterpretation(missing)
    n = len(base.domain)
    count = sum(n ** a for a in arities.values())
    limit = config.atom_budget(budget)
    if count > limit:
        raise DomainTooLarge(count, limit)
    g = _Grounder(base, defined, fold_open)
    atoms, bodies = [], {}
    for pred, (xs, phi) in phi_bodies(delta).items():
        for args in itertools.product(base.domain, repeat=len(xs)):
            atom = GroundAtom(pred, args)
            atoms.append(atom)
            bodies[atom] = g.formula(phi, dict(zip(xs, args)))
    open_atoms = sorted(g.open_atoms, key=lambda a: (a.predicate, tuple(base.index(e) for e in a.args)))
    # Structures in this lattice interpret the base, the defined predicates,
    # and any open predicates kept symbolic.
    open_preds = {s: a for s, (kind, a) in used.items()
                  if kind == PREDICATE and s not in arities and s not in base.vocab.names()}
    vocab = base.vocab.union(Vocabulary.of(predicates={**arities, **open_preds}))
    grs = GroundRuleSet(delta, base, tuple(defined), arities, atoms, bodies,
                        open_atoms, vocab)
    grs.index = {a: k for k, a in enumerate(grs.all_atoms)}
    return grs


# evaluation ------------------------------------------------------------------

def _eval(b, value):
    if b is True or b is False:
        return b
    if isinstance(b, GroundAtom):
        return value(b, True)
    if isinstance(b, GNot):
        return not _eval_pol(b.child, value, False)
    if isinstance(b, GAnd):
        return all(_eval(c, value) for c in b.children)
    return any(_eval(c, value) for c in b.children)


def _eval_pol(b, value, positive):
    if b is True or b is False:
        return b
    if isinstance(b, GroundAtom):
        return value(b, positive)
    if isinstance(b, GNot):
        return not _eval_pol(b.child, value, not positive)
    if isinstance(b, GAnd):
        return all(_eval_pol(c, value, positive) for c in b.children)
    return any(_eval_pol(c, value, positive) for c in b.children)


def eval_body(b, I: Structure) -> bool:
    rels = I.rels

    def value(atom, _positive):
        return atom.args in rels[atom.predicate]

    return _eval_pol(b, value, True)


def eval_body_pair(b, I: Structure, J: Structure, defined) -> bool:
    """Evaluate with positive defined leaves in ``I``, everything else in ``J``."""
    if I.domain != J.domain:
        raise DomainMismatch("pair evaluation needs structures over one domain")
    defined = set(defined)
    ri, rj = I.rels, J.rels

    def value(atom, positive):
        rels = ri if positive and atom.predicate in defined else rj
        return atom.args in rels[atom.predicate]

    return _eval_pol(b, value, True)


# kernel program ---------------------------------------------------------------

def compile_program(g: GroundRuleSet) -> Program:
    index = g.index
    nd = len(g.atoms)
    code = array("i")
    offsets = array("i", [0])
    max_len = 0

    def emit(b, positive):
        if b is True:
            code.extend((OP_TRUE, 0))
        elif b is False:
            code.extend((OP_FALSE, 0))
        elif isinstance(b, GroundAtom):
            k = index[b]
            code.extend((OP_LEAF_I if positive and k < nd else OP_LEAF_J, k))
        elif isinstance(b, GNot):
            emit(b.child, not positive)
            code.extend((OP_NOT, 0))
        else:
            for c in b.children:
                emit(c, positive)
            code.extend((OP_AND if isinstance(b, GAnd) else OP_OR, len(b.children)))

    for atom in g.atoms:
        start = len(code)
        emit(g.bodies[atom], True)
        max_len = max(max_len, (len(code) - start) // 2)
        offsets.append(len(code) // 2)
    return Program(code, offsets, nd, nd + len(g.open_atoms), max(max_len, 1))


# dependency graph ----------------------------------------------------------

POS, NEG = "pos", "neg"


@dataclass
class DependencyGraph:
    nodes: list
    edges: set
    defined: frozenset

    def successors(self) -> dict:
        out = {n: set() for n in self.nodes}
        for src, dst, _ in self.edges:
            out.setdefault(src, set()).add(dst)
        return out

    def to_edge_list(self) -> str:
        lines = []
        for src, dst, pol in sorted(self.edges, key=lambda e: (str(e[1]), str(e[0]), e[2])):
            lines.append(f'"{src}" -> "{dst}" [label="{"+" if pol == POS else "-"}"];')
        return "\n".join(lines)

    def to_dot(self) -> str:
        return "digraph dependencies {\n" + "".join(
            f"  {line}\n" for line in self.to_edge_list().splitlines()) + "}\n"


def dependency_graph(g: GroundRuleSet, include_folded: bool = True) -> DependencyGraph:
    """Edge ``Q[b] -> P[a]`` (with polarity) for every leaf Q[b] of P[a]'s body."""
    nodes = list(g.all_atoms)
    if include_folded:
        known = set(nodes)
        for name, arity in sorted(g.base.vocab.predicates):
            for a in g.base.atoms(name, arity):
                if a not in known:
                    nodes.append(a)
    edges = set()
    for atom in g.atoms:
        for leaf, positive in leaves(g.bodies[atom]):
            edges.add((leaf, atom, POS if positive else NEG))
    return DependencyGraph(nodes, edges, frozenset(g.atoms))


@dataclass
class SccDecomposition:
    component: dict        # atom -> component id (ids follow topological order)
    components: list       # component id -> tuple of atoms
    cyclic: frozenset      # ids of components with >1 atom or a self-edge

    def mutually_reachable(self, a, b) -> bool:
        return self.component[a] == self.component[b]


def scc_preorder(dg: DependencyGraph) -> SccDecomposition:
    """Tarjan's algorithm (iterative); components come out dependencies-first."""
    succ = dg.successors()
    index, low, on_stack = {}, {}, set()
    stack, found = [], []
    counter = 0
    for root in dg.nodes:
        if root in index:
            continue
        work = [(root, iter(sorted(succ.get(root, ()), key=str)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ.get(w, ()), key=str))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                found.append(tuple(reversed(comp)))
    # Tarjan emits sinks first; reverse for a dependencies-first order.
    found.reverse()
    component = {}
    for cid, comp in enumerate(found):
        for a in comp:
            component[a] = cid
    self_loops = {src for src, dst, _ in dg.edges if src == dst}
    cyclic = frozenset(cid for cid, comp in enumerate(found)
                       if len(comp) > 1 or comp[0] in self_loops)
    return SccDecomposition(component, found, cyclic)
