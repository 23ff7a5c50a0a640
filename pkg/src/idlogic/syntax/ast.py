"""Immutable AST for terms, FO formulas, ID-formulas, rules and definitions."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import Vocabulary

OBJECT = "object"
FUNCTION = "function"
PREDICATE = "predicate"


# terms ---------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Apply:
    func: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.func
        return f"{self.func}({', '.join(map(str, self.args))})"


Term = Var | Apply


# formulas ------------------------------------------------------------------

class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)

    def __str__(self):
        from .printer import format_formula
        return format_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: str
    args: tuple = ()

    def __repr__(self):
        return f"Atom({self.pred!r}, {self.args!r})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term

    def __repr__(self):
        return f"Eq({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "FALSE"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def __repr__(self):
        return f"Not({self.body!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Iff(_Binary):
    pass


@dataclass(frozen=True, repr=False)
class _Quant(Formula):
    name: str
    body: Formula
    kind: str = OBJECT
    arity: int = 0

    def __repr__(self):
        extra = "" if self.kind == OBJECT else f", kind={self.kind!r}, arity={self.arity}"
        return f"{type(self).__name__}({self.name!r}, {self.body!r}{extra})"


class Exists(_Quant):
    pass


class Forall(_Quant):
    pass


@dataclass(frozen=True, repr=False)
class Def(Formula):
    definition: "Definition"

    def __repr__(self):
        return f"Def({self.definition!r})"


# rules, definitions, theories ---------------------------------------------

@dataclass(frozen=True)
class Rule:
    """``!vars: head_pred(head_args) <- body``; the body is first-order."""

    vars: tuple
    head_pred: str
    head_args: tuple
    body: Formula = TRUE

    def __str__(self):
        from .printer import format_rule
        return format_rule(self)


@dataclass(frozen=True)
class Definition:
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise ValueError("a definition needs at least one rule")
        arities = {}
        for r in self.rules:
            n = len(r.head_args)
            if arities.setdefault(r.head_pred, n) != n:
                raise ValueError(f"inconsistent head arity for {r.head_pred}")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __str__(self):
        from .printer import format_definition
        return format_definition(self)

    @property
    def defined(self) -> tuple:
        """Defined predicates in order of first head occurrence."""
        seen = []
        for r in self.rules:
            if r.head_pred not in seen:
                seen.append(r.head_pred)
        return tuple(seen)

    def head_arity(self, pred: str) -> int:
        for r in self.rules:
            if r.head_pred == pred:
                return len(r.head_args)
        raise KeyError(pred)

    def rules_for(self, pred: str) -> tuple:
        return tuple(r for r in self.rules if r.head_pred == pred)


@dataclass(frozen=True)
class Theory:
    vocab: Vocabulary
    axioms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))

    def definitions(self) -> list:
        return [a.definition for a in self.axioms if isinstance(a, Def)]

    def __str__(self):
        from .printer import format_theory
        return format_theory(self)


# small constructors ---------------------------------------------------------

def conj(formulas) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return TRUE
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = And(f, out)
    return out


def disj(formulas) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return FALSE
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = Or(f, out)
    return out


def exists_all(names, body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Exists(n, body)
    return body


def forall_all(names, body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Forall(n, body)
    return body
