"""Recursive-descent parser for theory files.

Grammar (EBNF)::

    theory     = { declaration | axiom } ;
    declaration= ("pred" | "func" | "const") symdecl { "," symdecl } "." ;
    symdecl    = IDENT [ "/" INT ] ;
    axiom      = formula [ "." ] ;         (* "." optional after "}" or at EOF *)
    formula    = implication { "<=>" implication } ;
    implication= disjunction [ "=>" implication ] ;
    disjunction= conjunction [ "|" disjunction ] ;
    conjunction= unary [ "&" conjunction ] ;
    unary      = "~" unary | quantified | primary ;
    quantified = ( "!" | "?" ) binder { [","] binder } ":" formula ;
    binder     = [ "func" ] IDENT [ "/" INT ] ;
    primary    = "true" | "false" | "(" formula ")" | definition
               | atom | term "=" term | term "~=" term ;
    definition = "{" { rule } "}" ;
    rule       = [ "!" binder { [","] binder } ":" ] atom [ "<-" formula ] "." ;
    atom       = PRED [ "(" term { "," term } ")" ] ;
    term       = VAR | FUNC [ "(" term { "," term } ")" ] ;

Quantifier scopes extend as far to the right as possible.  ``#`` starts a
line comment.  An object binder without ``/n`` binds an object variable;
``P/n`` binds a predicate variable and ``func f/n`` a function variable.
Identifiers not declared and not bound inside a rule are the rule's
universally quantified variables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..core import Vocabulary
from ..errors import ArityError, ParseError, UndeclaredSymbol
from .ast import (
    FUNCTION,
    OBJECT,
    PREDICATE,
    FALSE,
    TRUE,
    And,
    Apply,
    Atom,
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
    Var,
)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op><=>|=>|<-|~=|[~&|!?:(){},./=])
  | (?P<ident>[A-Za-z0-9_$][A-Za-z0-9_$']*)
""", re.VERBOSE)

KEYWORDS = {"pred", "func", "const", "true", "false"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tok_kind = "kw" if kind == "ident" and m.group() in KEYWORDS else kind
            out.append(Token(tok_kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text, vocab=None):
        self.toks = tokenize(text)
        self.i = 0
        self.preds = dict(vocab.predicates) if vocab else {}
        self.funcs = dict(vocab.functions) if vocab else {}
        self.scopes = []          # list of dicts name -> (kind, arity)
        self.rule_vars = None     # list collecting implicit rule variables
        self.rule_scope = None
        self.in_rule_body = False
        self.last = None

    # token helpers ---------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self):
        self.last = self.toks[self.i]
        self.i += 1
        return self.last

    def at(self, text):
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text):
        if not self.at(text):
            self.error(f"unexpected {self.describe(self.tok)}", repr(text))
        return self.advance()

    def error(self, msg, expected=None, tok=None, cls=ParseError):
        tok = tok or self.tok
        raise cls(msg, tok.line, tok.col, expected)

    @staticmethod
    def describe(tok):
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def ident(self):
        if self.tok.kind != "ident":
            self.error(f"unexpected {self.describe(self.tok)}", "identifier")
        return self.advance()

    def integer(self):
        t = self.ident()
        if not t.text.isdigit():
            self.error("arity must be a natural number", "integer", t)
        return int(t.text)

    # scope -----------------------------------------------------------------

    def lookup(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if name in self.preds:
            return (PREDICATE, self.preds[name])
        if name in self.funcs:
            return (FUNCTION, self.funcs[name])
        return None

    # theory ------------------------------------------------------------------

    def theory(self):
        axioms = []
        while self.tok.kind != "eof":
            if self.tok.kind == "kw" and self.tok.text in ("pred", "func", "const"):
                self.declaration()
                continue
            phi = self.formula()
            if self.at("."):
                self.advance()
            elif not (self.tok.kind == "eof" or (self.last and self.last.text == "}")):
                self.error(f"unexpected {self.describe(self.tok)}", "'.'")
            axioms.append(phi)
        vocab = Vocabulary.of(self.funcs, self.preds)
        return Theory(vocab, tuple(axioms))

    def declaration(self):
        kw = self.advance().text
        while True:
            t = self.ident()
            name = t.text
            if "$" in name or "'" in name:
                self.error(f"{name!r}: '$' and \"'\" are reserved for generated names", tok=t)
            arity = 0
            if self.at("/"):
                self.advance()
                arity = self.integer()
            if kw == "const" and arity:
                self.error("constants have arity 0", tok=t, cls=ArityError)
            table, other = (self.preds, self.funcs) if kw == "pred" else (self.funcs, self.preds)
            if name in other or (name in table and table[name] != arity):
                self.error(f"symbol {name!r} declared twice", tok=t)
            table[name] = arity
            if self.at(","):
                self.advance()
                continue
            break
        self.expect(".")

    # formulas ------------------------------------------------------------------

    def formula(self):
        left = self.implication()
        while self.at("<=>"):
            self.advance()
            left = Iff(left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("=>"):
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        if self.at("|"):
            self.advance()
            return Or(left, self.disjunction())
        return left

    def conjunction(self):
        left = self.unary()
        if self.at("&"):
            self.advance()
            return And(left, self.conjunction())
        return left

    def unary(self):
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        if self.at("!") or self.at("?"):
            return self.quantified()
        return self.primary()

    def binders(self):
        out = []
        while True:
            is_func = False
            if self.at("func"):
                self.advance()
                is_func = True
            t = self.ident()
            arity = None
            if self.at("/"):
                self.advance()
                arity = self.integer()
            if is_func:
                out.append((t.text, FUNCTION, arity or 0))
            elif arity is None:
                out.append((t.text, OBJECT, 0))
            else:
                out.append((t.text, PREDICATE, arity))
            if self.at(","):
                self.advance()
            if self.at(":"):
                self.advance()
                return out

    def quantified(self):
        cls = Forall if self.advance().text == "!" else Exists
        binders = self.binders()
        self.scopes.append({n: (k, a) for n, k, a in binders})
        try:
            body = self.formula()
        finally:
            self.scopes.pop()
        for name, kind, arity in reversed(binders):
            body = cls(name, body, kind, arity)
        return body

    def primary(self):
        t = self.tok
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return FALSE
        if self.at("("):
            self.advance()
            phi = self.formula()
            self.expect(")")
            return phi
        if self.at("{"):
            if self.in_rule_body:
                self.error("definitions may not be nested inside rule bodies")
            return Def(self.definition())
        if t.kind != "ident":
            self.error(f"unexpected {self.describe(t)}", "formula")
        info = self.lookup(t.text)
        if info and info[0] == PREDICATE:
            return self.atom()
        left = self.term()
        if self.at("="):
            self.advance()
            return Eq(left, self.term())
        if self.at("~="):
            self.advance()
            return Not(Eq(left, self.term()))
        if info is None and self.peek().text == "(":
            self.error(f"undeclared symbol {t.text!r}", tok=t, cls=UndeclaredSymbol)
        self.error(f"unexpected {self.describe(self.tok)}", "'='")

    def args(self):
        if not self.at("("):
            return ()
        self.advance()
        if self.at(")"):
            self.advance()
            return ()
        out = [self.term()]
        while self.at(","):
            self.advance()
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def atom(self):
        t = self.ident()
        info = self.lookup(t.text)
        if info is None:
            self.error(f"undeclared predicate {t.text!r}", tok=t, cls=UndeclaredSymbol)
        if info[0] != PREDICATE:
            self.error(f"{t.text!r} is not a predicate", tok=t, cls=ArityError)
        args = self.args()
        if len(args) != info[1]:
            self.error(f"{t.text}/{info[1]} applied to {len(args)} argument(s)", tok=t, cls=ArityError)
        return Atom(t.text, args)

    def term(self):
        t = self.ident()
        name = t.text
        info = self.lookup(name)
        if info is not None and info[0] == FUNCTION:
            args = self.args()
            if len(args) != info[1]:
                self.error(f"{name}/{info[1]} applied to {len(args)} argument(s)", tok=t, cls=ArityError)
            return Apply(name, args)
        if info is not None and info[0] == OBJECT:
            if self.at("("):
                self.error(f"variable {name!r} applied to arguments", tok=t, cls=ArityError)
            return Var(name)
        if info is not None:
            self.error(f"predicate {name!r} used as a term", tok=t, cls=ArityError)
        if self.at("("):
            self.error(f"undeclared function {name!r}", tok=t, cls=UndeclaredSymbol)
        if self.rule_vars is not None:
            if name not in self.rule_vars:
                self.rule_vars.append(name)
            self.rule_scope[name] = (OBJECT, 0)
            return Var(name)
        self.error(f"undeclared symbol {name!r}", tok=t, cls=UndeclaredSymbol)

    # definitions -----------------------------------------------------------

    def definition(self):
        self.expect("{")
        rules = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("unterminated definition", "'}'")
            rules.append(self.rule())
        self.expect("}")
        if not rules:
            self.error("empty definition", tok=self.last)
        return Definition(tuple(rules))

    def rule(self):
        saved = (self.rule_vars, self.in_rule_body, self.rule_scope)
        self.rule_vars = []
        self.rule_scope = {}
        self.scopes.append(self.rule_scope)
        try:
            explicit = []
            if self.at("!"):
                self.advance()
                for name, kind, arity in self.binders():
                    if kind != OBJECT:
                        self.error("rule prefixes bind object variables only")
                    explicit.append(name)
                    self.scopes[-1][name] = (OBJECT, 0)
            head = self.atom()
            body = TRUE
            if self.at("<-"):
                self.advance()
                self.in_rule_body = True
                body = self.formula()
            self.expect(".")
            variables = list(explicit) + [v for v in self.rule_vars if v not in explicit]
            return Rule(tuple(variables), head.pred, head.args, body)
        finally:
            self.scopes.pop()
            self.rule_vars, self.in_rule_body, self.rule_scope = saved


def parse_theory(text: str, vocab: Vocabulary | None = None) -> Theory:
    """Parse a theory; ``vocab`` pre-declares symbols (declarations may add more)."""
    return _Parser(text, vocab).theory()


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    p = _Parser(text, vocab)
    phi = p.formula()
    if p.at("."):
        p.advance()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.describe(p.tok)}", "end of input")
    return phi


def parse_definition(text: str, vocab: Vocabulary) -> Definition:
    phi = parse_formula(text, vocab)
    if not isinstance(phi, Def):
        raise ParseError("expected a definition in braces")
    return phi.definition


def load_theory(path: str) -> Theory:
    if path == "-":
        import sys
        return parse_theory(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read())
