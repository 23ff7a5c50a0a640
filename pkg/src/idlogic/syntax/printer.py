"""Pretty printer producing text the parser reads back to the same AST."""
from __future__ import annotations

from .ast import (
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
    Rule,
    Theory,
    Top,
)

_IFF, _IMP, _OR, _AND, _UNARY = 1, 2, 3, 4, 5
_BINARY = {Iff: ("<=>", _IFF), Implies: ("=>", _IMP), Or: ("|", _OR), And: ("&", _AND)}


def format_term(t) -> str:
    return str(t)


def _binder(q) -> str:
    if q.kind == OBJECT:
        return q.name
    if q.kind == PREDICATE:
        return f"{q.name}/{q.arity}"
    return f"func {q.name}/{q.arity}"


def _fmt(phi, prec, tail):
    if isinstance(phi, Atom):
        if not phi.args:
            return phi.pred
        return f"{phi.pred}({', '.join(map(format_term, phi.args))})"
    if isinstance(phi, Eq):
        return f"{format_term(phi.left)}={format_term(phi.right)}"
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Not):
        if isinstance(phi.body, Eq):
            return f"~({_fmt(phi.body, _IFF, True)})"
        return "~" + _fmt(phi.body, _UNARY, tail)
    if isinstance(phi, Def):
        return format_definition(phi.definition)
    op = _BINARY.get(type(phi))
    if op is not None:
        sym, p = op
        wrap = p < prec
        inner_tail = True if wrap else tail
        if isinstance(phi, Iff):
            left = _fmt(phi.left, p, False)
            right = _fmt(phi.right, p + 1, inner_tail)
        else:
            left = _fmt(phi.left, p + 1, False)
            right = _fmt(phi.right, p, inner_tail)
        text = f"{left} {sym} {right}"
        return f"({text})" if wrap else text
    if isinstance(phi, (Exists, Forall)):
        cls = type(phi)
        binders = [_binder(phi)]
        body = phi.body
        while type(body) is cls:
            binders.append(_binder(body))
            body = body.body
        sym = "!" if cls is Forall else "?"
        nested = prec > _IFF or not tail
        if nested and type(body) in _BINARY:
            body_text = f"({_fmt(body, _IFF, True)})"
        else:
            body_text = _fmt(body, _IFF, True)
        text = f"{sym}{' '.join(binders)}: {body_text}"
        return text if tail else f"({text})"
    raise TypeError(f"not a formula: {phi!r}")


def format_formula(phi) -> str:
    return _fmt(phi, _IFF, True)


def format_rule(rule: Rule) -> str:
    head = format_formula(Atom(rule.head_pred, rule.head_args))
    prefix = f"!{' '.join(rule.vars)}: " if rule.vars else ""
    if isinstance(rule.body, Top):
        return f"{prefix}{head} <- true."
    return f"{prefix}{head} <- {format_formula(rule.body)}."


def format_definition(delta: Definition, multiline: bool = False, indent: str = "  ") -> str:
    rules = [format_rule(r) for r in delta.rules]
    if multiline:
        return "{\n" + "".join(f"{indent}{r}\n" for r in rules) + "}"
    return "{ " + " ".join(rules) + " }"


def format_declarations(vocab) -> list:
    lines = []
    preds = sorted(vocab.predicates)
    consts = sorted(n for n, a in vocab.functions if a == 0)
    funcs = sorted((n, a) for n, a in vocab.functions if a > 0)
    if preds:
        lines.append("pred " + ", ".join(f"{n}/{a}" for n, a in preds) + ".")
    if funcs:
        lines.append("func " + ", ".join(f"{n}/{a}" for n, a in funcs) + ".")
    if consts:
        lines.append("const " + ", ".join(consts) + ".")
    return lines


def format_theory(theory: Theory) -> str:
    lines = format_declarations(theory.vocab)
    for ax in theory.axioms:
        if isinstance(ax, Def):
            lines.append(format_definition(ax.definition, multiline=True) + ".")
        else:
            lines.append(format_formula(ax) + ".")
    return "\n".join(lines) + "\n"
