"""Vocabularies, finite structures, domain atoms and lattices of structure extensions.

Structures are immutable values. Constants are 0-ary functions and
propositions are 0-ary predicates; equality is built in and never part of
a vocabulary.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple

from . import config
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ElementOutOfDomain,
    MissingFunctionInterpretation,
    StructureFormatError,
    SymbolNotInterpreted,
    VocabularyError,
)

Element = Hashable


@dataclass(frozen=True)
class Vocabulary:
    functions: frozenset = frozenset()
    predicates: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "functions", frozenset(self.functions))
        object.__setattr__(self, "predicates", frozenset(self.predicates))
        seen = {}
        for name, arity in itertools.chain(self.functions, self.predicates):
            if arity < 0:
                raise VocabularyError(f"negative arity for {name}")
            if name in seen:
                raise VocabularyError(f"symbol {name!r} declared more than once")
            seen[name] = arity

    @classmethod
    def of(cls, functions: Mapping[str, int] | None = None,
           predicates: Mapping[str, int] | None = None) -> "Vocabulary":
        return cls(frozenset((functions or {}).items()),
                   frozenset((predicates or {}).items()))

    @property
    def function_arities(self) -> dict:
        return dict(self.functions)

    @property
    def predicate_arities(self) -> dict:
        return dict(self.predicates)

    def names(self) -> set:
        return {n for n, _ in self.functions} | {n for n, _ in self.predicates}

    def arity(self, name: str) -> int:
        for n, a in itertools.chain(self.functions, self.predicates):
            if n == name:
                return a
        raise SymbolNotInterpreted([name])

    def is_function(self, name: str) -> bool:
        return any(n == name for n, _ in self.functions)

    def is_predicate(self, name: str) -> bool:
        return any(n == name for n, _ in self.predicates)

    def __contains__(self, name) -> bool:
        return name in self.names()

    def issubset(self, other: "Vocabulary") -> bool:
        return self.functions <= other.functions and self.predicates <= other.predicates

    def union(self, other: "Vocabulary") -> "Vocabulary":
        return Vocabulary(self.functions | other.functions,
                          self.predicates | other.predicates)

    def select(self, names: Iterable[str]) -> "Vocabulary":
        names = set(names)
        return Vocabulary(frozenset(s for s in self.functions if s[0] in names),
                          frozenset(s for s in self.predicates if s[0] in names))

    def without(self, names: Iterable[str]) -> "Vocabulary":
        names = set(names)
        return Vocabulary(frozenset(s for s in self.functions if s[0] not in names),
                          frozenset(s for s in self.predicates if s[0] not in names))


class GroundAtom(NamedTuple):
    """A domain atom P[a1,...,an]."""

    predicate: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}[{','.join(str(a) for a in self.args)}]"


class Structure:
    """A finite structure: domain, total function tables, relations.

    ``funcs`` maps each function symbol to a dict from argument tuples to
    elements (constants use the key ``()``); ``rels`` maps each predicate to
    a frozenset of tuples.  The domain order is the stable total order used
    everywhere for enumeration and printing.
    """

    __slots__ = ("domain", "vocab", "funcs", "rels", "_index", "_hash")

    def __init__(self, domain: Iterable[Element], vocab: Vocabulary,
                 funcs: Mapping | None = None, rels: Mapping | None = None,
                 *, check: bool = True):
        self.domain = tuple(domain)
        self.vocab = vocab
        self.funcs = {k: dict(v) for k, v in (funcs or {}).items()}
        self.rels = {k: frozenset(v) for k, v in (rels or {}).items()}
        self._index = {e: i for i, e in enumerate(self.domain)}
        self._hash = None
        if check:
            self._validate()

    @classmethod
    def _trusted(cls, domain, vocab, funcs, rels, index=None):
        s = cls.__new__(cls)
        s.domain = domain
        s.vocab = vocab
        s.funcs = funcs
        s.rels = rels
        s._index = index if index is not None else {e: i for i, e in enumerate(domain)}
        s._hash = None
        return s

    @classmethod
    def build(cls, domain, funcs=None, rels=None, arities=None) -> "Structure":
        """Convenience constructor inferring the vocabulary.

        ``funcs`` values may be a bare element for constants or a dict of
        argument tuples (or bare elements for unary functions).  ``rels``
        values are iterables of tuples, bare elements for unary predicates,
        or booleans for propositions.  ``arities`` pins arities that cannot
        be inferred (empty relations).
        """
        arities = dict(arities or {})
        fdecl, ftab = {}, {}
        for name, table in (funcs or {}).items():
            if isinstance(table, Mapping):
                norm = {(k if isinstance(k, tuple) else (k,)): v for k, v in table.items()}
                arity = arities.get(name, len(next(iter(norm))) if norm else 0)
            else:
                norm = {(): table}
                arity = 0
            fdecl[name] = arity
            ftab[name] = norm
        pdecl, ptab = {}, {}
        for name, value in (rels or {}).items():
            if isinstance(value, bool):
                tuples = {()} if value else set()
                arity = 0
            else:
                tuples = {t if isinstance(t, tuple) else (t,) for t in value}
                if name in arities:
                    arity = arities[name]
                elif tuples:
                    arity = len(next(iter(tuples)))
                else:
                    raise VocabularyError(f"cannot infer arity of empty relation {name!r}")
            pdecl[name] = arity
            ptab[name] = tuples
        return cls(domain, Vocabulary.of(fdecl, pdecl), ftab, ptab)

    def _validate(self):
        if not self.domain:
            raise ElementOutOfDomain("domain must be non-empty")
        if len(self._index) != len(self.domain):
            raise ElementOutOfDomain("duplicate domain elements")
        interpreted = set(self.funcs) | set(self.rels)
        declared = self.vocab.names()
        if interpreted != declared:
            missing = declared - interpreted
            if missing:
                raise SymbolNotInterpreted(missing)
            raise VocabularyError(
                "interpretations for undeclared symbols: " + ", ".join(sorted(interpreted - declared)))
        for name, arity in self.vocab.functions:
            table = self.funcs[name]
            for key, val in table.items():
                if len(key) != arity:
                    raise ArityMismatch(f"{name}/{arity} applied to {key}")
                self._check_elements(key + (val,), name)
            if len(table) != len(self.domain) ** arity:
                raise ArityMismatch(f"function {name} is not total on the domain")
        for name, arity in self.vocab.predicates:
            for t in self.rels[name]:
                if len(t) != arity:
                    raise ArityMismatch(f"tuple {t} does not match {name}/{arity}")
                self._check_elements(t, name)

    def _check_elements(self, elems, name):
        for e in elems:
            if e not in self._index:
                raise ElementOutOfDomain(f"{e!r} (in {name}) is not a domain element")

    # values -------------------------------------------------------------

    def index(self, element) -> int:
        return self._index[element]

    def holds(self, pred: str, args: tuple = ()) -> bool:
        return tuple(args) in self.rels[pred]

    def apply(self, func: str, args: tuple = ()):
        return self.funcs[func][tuple(args)]

    def __getitem__(self, name):
        if name in self.rels:
            return self.rels[name]
        return self.funcs[name]

    def atoms(self, pred: str, arity: int | None = None) -> list:
        """All domain atoms of ``pred`` in lexicographic domain order."""
        if arity is None:
            arity = self.vocab.arity(pred)
        return [GroundAtom(pred, t) for t in itertools.product(self.domain, repeat=arity)]

    def true_atoms(self, preds: Iterable[str] | None = None) -> list:
        names = sorted(self.rels) if preds is None else list(preds)
        out = []
        for p in names:
            rel = self.rels[p]
            out.extend(a for a in self.atoms(p) if a.args in rel)
        return out

    # derived structures -------------------------------------------------

    def restrict(self, sub: Vocabulary | Iterable[str]) -> "Structure":
        names = sub.names() if isinstance(sub, Vocabulary) else set(sub)
        missing = names - self.vocab.names()
        if missing:
            raise SymbolNotInterpreted(missing)
        return Structure._trusted(
            self.domain, self.vocab.select(names),
            {k: v for k, v in self.funcs.items() if k in names},
            {k: v for k, v in self.rels.items() if k in names},
            self._index)

    def extend(self, assignments: Mapping | None = None, *, functions: Mapping | None = None,
               arities: Mapping | None = None) -> "Structure":
        """Return ``I[X:R, ...]``; assigned symbols override existing values."""
        assignments = assignments or {}
        functions = functions or {}
        arities = dict(arities or {})
        preds = dict(self.vocab.predicates)
        fns = dict(self.vocab.functions)
        rels = dict(self.rels)
        ftabs = dict(self.funcs)
        for name, value in assignments.items():
            tuples = frozenset(t if isinstance(t, tuple) else (t,) for t in value)
            arity = arities.get(name, preds.get(name))
            if arity is None:
                if not tuples:
                    raise VocabularyError(f"cannot infer arity of new empty relation {name!r}")
                arity = len(next(iter(tuples)))
            for t in tuples:
                if len(t) != arity:
                    raise ArityMismatch(f"tuple {t} does not match {name}/{arity}")
                self._check_elements(t, name)
            fns.pop(name, None)
            ftabs.pop(name, None)
            preds[name] = arity
            rels[name] = tuples
        for name, table in functions.items():
            if not isinstance(table, Mapping):
                table = {(): table}
            table = {(k if isinstance(k, tuple) else (k,)): v for k, v in table.items()}
            arity = len(next(iter(table))) if table else 0
            if len(table) != len(self.domain) ** arity:
                raise ArityMismatch(f"function {name} is not total on the domain")
            for k, v in table.items():
                self._check_elements(k + (v,), name)
            preds.pop(name, None)
            rels.pop(name, None)
            fns[name] = arity
            ftabs[name] = table
        return Structure._trusted(self.domain, Vocabulary.of(fns, preds), ftabs, rels, self._index)

    def _with_rels(self, rels: Mapping) -> "Structure":
        """Unchecked override of existing relations (internal fast path)."""
        new = dict(self.rels)
        new.update(rels)
        return Structure._trusted(self.domain, self.vocab, self.funcs, new, self._index)

    # identity -----------------------------------------------------------

    def _key(self):
        return (
            self.domain,
            self.vocab,
            frozenset((k, frozenset(v.items())) for k, v in self.funcs.items()),
            frozenset(self.rels.items()),
        )

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.domain == other.domain and self.vocab == other.vocab
                and self.rels == other.rels and self.funcs == other.funcs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        parts = []
        for name in sorted(self.funcs):
            tab = self.funcs[name]
            if () in tab:
                parts.append(f"{name}={tab[()]}")
            else:
                parts.append(f"{name}={{{', '.join(f'{k}->{v}' for k, v in tab.items())}}}")
        for name in sorted(self.rels):
            parts.append(f"{name}={sorted(self.rels[name], key=self._tuple_key)}")
        return f"Structure(domain={list(self.domain)}, {', '.join(parts)})"

    def _tuple_key(self, t):
        return tuple(self._index[e] for e in t)

    def same_functions(self, other: "Structure") -> bool:
        return self.funcs == other.funcs


def leq(I: Structure, J: Structure) -> bool:
    """The extension order: same functions, pointwise relation inclusion."""
    if I.vocab != J.vocab or I.domain != J.domain:
        return False
    if I.funcs != J.funcs:
        return False
    return all(I.rels[p] <= J.rels[p] for p in I.rels)


def restrict(I: Structure, sub) -> Structure:
    return I.restrict(sub)


def extend(I: Structure, assignments: Mapping) -> Structure:
    return I.extend(assignments)


class ExtensionLattice:
    """All structures over ``full_vocab`` extending ``base``, ordered by ``leq``."""

    def __init__(self, base: Structure, full_vocab: Vocabulary):
        if not base.vocab.issubset(full_vocab):
            raise VocabularyError("base interprets symbols outside the lattice vocabulary")
        missing = {n for n, _ in full_vocab.functions} - set(base.funcs)
        if missing:
            raise MissingFunctionInterpretation(missing)
        self.base = base
        self.full_vocab = full_vocab
        self.free_predicates = tuple(sorted(
            (n, a) for n, a in full_vocab.predicates if n not in base.rels))

    def atoms(self) -> list:
        out = []
        for name, arity in self.free_predicates:
            out.extend(self.base.atoms(name, arity))
        return out

    def count(self) -> int:
        """Number of extensions, 2 ** (number of free domain atoms)."""
        n = len(self.base.domain)
        return 2 ** sum(n ** a for _, a in self.free_predicates)

    def _fill(self, value: bool) -> Structure:
        rels = {}
        for name, arity in self.free_predicates:
            rels[name] = (frozenset(itertools.product(self.base.domain, repeat=arity))
                          if value else frozenset())
        return self.base.extend(rels, arities=dict(self.free_predicates))

    def bottom(self) -> Structure:
        return self._fill(False)

    def top(self) -> Structure:
        return self._fill(True)

    def structure_from_atoms(self, true_atoms: Iterable[GroundAtom]) -> Structure:
        rels = {name: set() for name, _ in self.free_predicates}
        for a in true_atoms:
            rels[a.predicate].add(a.args)
        return self.base.extend(rels, arities=dict(self.free_predicates))

    def enumerate_extensions(self, budget: int | None = None) -> Iterator[Structure]:
        """Yield every extension exactly once, lexicographic in atom order."""
        count = self.count()
        budget = config.enumeration_budget(budget)
        if count > budget:
            raise BudgetExceeded(count, budget)
        atoms = self.atoms()
        proto = self.bottom()
        names = [n for n, _ in self.free_predicates]
        for bits in itertools.product((False, True), repeat=len(atoms)):
            rels = {n: set() for n in names}
            for atom, bit in zip(atoms, bits):
                if bit:
                    rels[atom.predicate].add(atom.args)
            yield proto._with_rels({n: frozenset(v) for n, v in rels.items()})


def bottom(lat: ExtensionLattice) -> Structure:
    return lat.bottom()


def top(lat: ExtensionLattice) -> Structure:
    return lat.top()


def enumerate_extensions(lat: ExtensionLattice, budget: int | None = None) -> Iterator[Structure]:
    return lat.enumerate_extensions(budget)


# JSON structure files -----------------------------------------------------

def structure_from_json(data, vocab: Vocabulary | None = None) -> Structure:
    """Build a structure from the JSON document format.

    ``functions`` values: a bare element name (constants), a list of rows
    ``[a1, ..., an, value]``, or an object keyed by comma-joined argument
    names.  ``relations`` values: lists of tuples (lists), or bare names
    for unary predicates, or a boolean for propositions.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        domain = [str(e) for e in data["domain"]]
    except (KeyError, TypeError) as exc:
        raise StructureFormatError("structure document needs a 'domain' array") from exc
    declared_f = vocab.function_arities if vocab else {}
    declared_p = vocab.predicate_arities if vocab else {}
    funcs, fdecl = {}, {}
    for name, value in (data.get("functions") or {}).items():
        if isinstance(value, (str, int)):
            table = {(): str(value)}
        elif isinstance(value, list):
            table = {tuple(str(x) for x in row[:-1]): str(row[-1]) for row in value}
        elif isinstance(value, dict):
            table = {tuple(str(k).split(",")) if str(k) != "" else (): str(v)
                     for k, v in value.items()}
        else:
            raise StructureFormatError(f"bad table for function {name!r}")
        arity = len(next(iter(table))) if table else 0
        if name in declared_f and declared_f[name] != arity:
            raise ArityMismatch(f"{name} has arity {declared_f[name]} in the theory, {arity} in the structure")
        funcs[name] = table
        fdecl[name] = arity
    rels, pdecl = {}, {}
    for name, value in (data.get("relations") or {}).items():
        if isinstance(value, bool):
            tuples = {()} if value else set()
        else:
            tuples = {tuple(str(x) for x in t) if isinstance(t, list) else (str(t),) for t in value}
        if name in declared_p:
            arity = declared_p[name]
        elif tuples:
            arity = len(next(iter(tuples)))
        else:
            arity = 0
        for t in tuples:
            if len(t) != arity:
                raise ArityMismatch(f"tuple {list(t)} does not match {name}/{arity}")
        rels[name] = tuples
        pdecl[name] = arity
    return Structure(domain, Vocabulary.of(fdecl, pdecl), funcs, rels)


def structure_to_json(I: Structure) -> dict:
    funcs = {}
    for name in sorted(I.funcs):
        tab = I.funcs[name]
        if () in tab:
            funcs[name] = str(tab[()])
        else:
            keys = sorted(tab, key=I._tuple_key)
            funcs[name] = [[str(x) for x in k] + [str(tab[k])] for k in keys]
    rels = {}
    for name in sorted(I.rels):
        arity = I.vocab.arity(name)
        if arity == 0:
            rels[name] = bool(I.rels[name])
        else:
            rels[name] = [[str(x) for x in t] for t in sorted(I.rels[name], key=I._tuple_key)]
    return {"domain": [str(e) for e in I.domain], "functions": funcs, "relations": rels}


def load_structure(path: str, vocab: Vocabulary | None = None) -> Structure:
    if path == "-":
        import sys
        return structure_from_json(sys.stdin.read(), vocab)
    with open(path, encoding="utf-8") as fh:
        return structure_from_json(json.load(fh), vocab)
