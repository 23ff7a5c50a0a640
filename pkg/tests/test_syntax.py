import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idlogic.core import Vocabulary
from idlogic.errors import ArityError, FreeSymbolOutsideVocab, ParseError, UndeclaredSymbol
from idlogic.syntax import (
    FALSE,
    PREDICATE,
    TRUE,
    And,
    Apply,
    Atom,
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
    Var,
    format_formula,
    format_theory,
    free_symbols,
    is_non_recursive,
    is_positive,
    occurrences,
    open_symbols,
    parse_definition,
    parse_formula,
    parse_theory,
    rename_negatives,
    single_rule_form,
    unprime,
)

from gen import EVEN_VOCAB

VOCAB = Vocabulary.of({"f": 1, "c": 0}, {"P": 0, "Q": 1, "R": 2})
EVEN = "{ E(0). !x: E(s(x)) <- ~E(x). }"


def test_parse_even_definition():
    d = parse_definition(EVEN, EVEN_VOCAB)
    assert d.defined == ("E",)
    r0, r1 = d.rules
    assert r0 == Rule((), "E", (Apply("0"),), TRUE)
    assert r1 == Rule(("x",), "E", (Apply("s", (Var("x"),)),), Not(Atom("E", (Var("x"),))))


def test_implicit_rule_variables():
    d = parse_definition("{ T(x, y) <- ?z: R(x, z) & T(z, y). }",
                         Vocabulary.of(predicates={"T": 2, "R": 2}))
    assert d.rules[0].vars == ("x", "y")


def test_precedence_and_associativity():
    phi = parse_formula("P & Q(c) | ~P => P <=> P", VOCAB)
    assert isinstance(phi, Iff)
    assert isinstance(phi.left, Implies)
    assert isinstance(phi.left.left, Or)
    assert isinstance(phi.left.left.left, And)
    chain = parse_formula("P => P => P", VOCAB)
    assert isinstance(chain.right, Implies)
    assert parse_formula("c ~= f(c)", VOCAB) == Not(Eq(Apply("c"), Apply("f", (Apply("c"),))))


def test_quantifier_extends_right():
    phi = parse_formula("?x: Q(x) & Q(f(x))", VOCAB)
    assert isinstance(phi, Exists) and isinstance(phi.body, And)


def test_second_order_binders():
    phi = parse_formula("!X/1 func g/1: X(c) => X(g(c))", VOCAB)
    assert isinstance(phi, Forall) and phi.kind == PREDICATE and phi.arity == 1
    assert phi.body.kind == "function"


@pytest.mark.parametrize("text, exc", [
    ("Q(c, c)", ArityError),
    ("Z(c)", UndeclaredSymbol),
    ("Q(y)", UndeclaredSymbol),
    ("P &", ParseError),
    ("(P", ParseError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_formula(text, VOCAB)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_theory("pred P/0.\nP & .")
    assert info.value.line == 2


def test_theory_round_trip():
    text = """
    pred P/0, Q/0, E/1.
    func s/1.
    const 0.
    { P <- true. Q <- ~P. Q <- Q. }.
    { E(0). !x: E(s(x)) <- ~E(x). }.
    E(s(0)) => ~P.
    """
    t = parse_theory(text)
    assert len(t.definitions()) == 2
    again = parse_theory(format_theory(t))
    assert again == t


def test_single_rule_form_of_even():
    d = parse_definition(EVEN, EVEN_VOCAB)
    srf = single_rule_form(d)
    assert str(srf) == "{ !$x0: E($x0) <- $x0=0 | ?x: ($x0=s(x) & ~E(x)). }"


def test_single_rule_form_repeated_head_variable():
    d = parse_definition("{ R(x, x) <- Q(x). }", VOCAB)
    (rule,) = single_rule_form(d).rules
    assert "$x0=x" in str(rule) or "$x1=x" in str(rule)


def test_negative_renaming():
    d = parse_definition(EVEN, EVEN_VOCAB)
    d2, vocab2, mapping = rename_negatives(d, EVEN_VOCAB)
    assert mapping == {"E": "E'"}
    assert str(d2) == "{ E(0) <- true. !x: E(s(x)) <- ~E'(x). }"
    assert "E'" in vocab2
    assert unprime(d2, mapping) == d


def test_polarity_analysis():
    d = parse_definition(EVEN, EVEN_VOCAB)
    assert not is_positive(d)
    assert not is_non_recursive(d)
    phi = parse_formula("(Q(c) => P) <=> P", VOCAB)
    occ = sorted(set(occurrences(phi, {"P", "Q"})))
    assert occ == [("P", False), ("P", True), ("Q", False), ("Q", True)]
    assert sorted(occurrences(parse_formula("Q(c) => P", VOCAB), {"P", "Q"})) == \
        [("P", True), ("Q", False)]


def test_free_and_open_symbols():
    d = parse_definition(EVEN, EVEN_VOCAB)
    assert free_symbols(d) == {"0", "E", "s"}
    assert open_symbols(d, EVEN_VOCAB) == {"0", "s"}
    with pytest.raises(FreeSymbolOutsideVocab):
        open_symbols(d, Vocabulary.of(predicates={"E": 1}))


# printing / parsing agree on random formulas -------------------------------

def _terms(scope):
    leaves = [st.just(Apply("c"))] + [st.just(Var(v)) for v in scope]
    return st.recursive(st.one_of(leaves), lambda t: t.map(lambda a: Apply("f", (a,))),
                        max_leaves=3)


def _formulas(scope, depth):
    t = _terms(scope)
    atoms = st.one_of(
        st.just(Atom("P")),
        t.map(lambda a: Atom("Q", (a,))),
        st.tuples(t, t).map(lambda ab: Atom("R", ab)),
        st.tuples(t, t).map(lambda ab: Eq(*ab)),
        st.sampled_from([TRUE, FALSE]),
    )
    if depth == 0:
        return atoms
    sub = _formulas(scope, depth - 1)
    name = f"v{depth}"
    inner = _formulas(scope + [name], depth - 1)
    return st.one_of(
        atoms,
        sub.map(Not),
        st.tuples(st.sampled_from([And, Or, Implies, Iff]), sub, sub).map(lambda x: x[0](x[1], x[2])),
        st.tuples(st.sampled_from([Exists, Forall]), inner).map(lambda x: x[0](name, x[1])),
        st.tuples(st.sampled_from([Exists, Forall]), sub).map(
            lambda x: x[0]("Y", x[1], PREDICATE, 1)),
    )


@settings(max_examples=300, deadline=None)
@given(_formulas([], 3))
def test_print_parse_round_trip(phi):
    text = format_formula(phi)
    assert parse_formula(text, VOCAB) == phi, text


@settings(max_examples=100, deadline=None)
@given(_formulas(["x"], 2))
def test_definition_round_trip(body):
    head_args = (Var("x"),)
    d = Definition([Rule(("x",), "Q", head_args, body),
                    Rule((), "Q", (Apply("c"),), TRUE)])
    text = format_formula(Def(d))
    assert parse_formula(text, VOCAB) == Def(d)
