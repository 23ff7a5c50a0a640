import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idlogic import engine, transform
from idlogic.checker import models
from idlogic.core import Structure, Vocabulary
from idlogic.errors import NotAnIidSequence, PartitionError, UncoveredPredicate
from idlogic.syntax import Def, format_formula, parse_definition, parse_formula

from gen import (
    EVEN_VOCAB,
    PROP_VOCAB,
    UNIT,
    chain,
    models_conjunction,
    models_delta,
    random_instance,
    rel_chain,
    true_atoms,
)

EO_VOCAB = Vocabulary.of({"0": 0}, {"S": 2, "E": 1, "O": 1})
EVEN_ODD = parse_definition(
    "{ !x: E(x) <- x=0. !x y: E(y) <- S(x,y) & O(x). !x y: O(y) <- S(x,y) & E(x). }", EO_VOCAB)
FN_VOCAB = Vocabulary.of({"0": 0, "s": 1}, {"E": 1, "O": 1})
EVEN_ODD_FN = parse_definition(
    "{ !x: E(x) <- x=0. !x: E(s(x)) <- O(x). !x: O(s(x)) <- E(x). }", FN_VOCAB)
EVEN = parse_definition("{ E(0). !x: E(s(x)) <- ~E(x). }", EVEN_VOCAB)
LOOP = parse_definition("{ P <- Q. Q <- P. }", PROP_VOCAB)
BAD = parse_definition("{ P <- ~P. Q <- ~P. }", PROP_VOCAB)
TC_VOCAB = Vocabulary.of(predicates={"G": 2, "T": 2})
TC = parse_definition("{ T(x,y) <- G(x,y). T(x,y) <- ?z: T(x,z) & T(z,y). }", TC_VOCAB)


def test_make_partition():
    p = transform.make_partition(EVEN_ODD, {"E": 1, "O": 2})
    assert [len(part.rules) for part in p.parts] == [2, 1]
    assert p.parts[0].defined == ("E",) and p.parts[1].defined == ("O",)
    with pytest.raises(PartitionError):
        transform.make_partition(EVEN_ODD, {"E": 1, "O": 1})
    with pytest.raises(UncoveredPredicate):
        transform.make_partition(EVEN_ODD, {"E": 1})


def test_certify_partitions():
    p = transform.make_partition(EVEN_ODD, {"E": 1, "O": 2})
    assert transform.certify_reduction_partition(EVEN_ODD, p, rel_chain(5))
    loop = transform.make_partition(LOOP, {"P": 1, "Q": 2})
    cert = transform.certify_reduction_partition(LOOP, loop, UNIT)
    assert cert.status == transform.UNKNOWN and set(map(str, cert.witness)) == {"P", "Q"}
    bad = transform.make_partition(BAD, {"P": 1, "Q": 2})
    assert transform.certify_reduction_partition(BAD, bad, UNIT)


def test_functional_sentinel_blocks_even_odd_certificate():
    # with s(N) = N the top atoms E[N], O[N] depend on each other
    p = transform.make_partition(EVEN_ODD_FN, {"E": 1, "O": 2})
    cert = transform.certify_reduction_partition(EVEN_ODD_FN, p, chain(5))
    assert cert.status == transform.UNKNOWN
    assert {str(a) for a in cert.witness} == {"E[5]", "O[5]"}
    preds = {"E": 1, "O": 1}
    assert models_delta(EVEN_ODD_FN, chain(5), preds) == \
        models_conjunction(p.parts, chain(5), preds)


def test_certify_strict():
    assert transform.certify_strict_reduction(EVEN, chain(20)).status == transform.UNKNOWN
    assert transform.certify_strict_reduction(EVEN_ODD, rel_chain(6))
    liar = parse_definition("{ P <- ~P. }", PROP_VOCAB)
    cert = transform.certify_strict_reduction(liar, UNIT)
    assert cert.reason == "self-dependent atom"


def test_completion_text():
    assert format_formula(transform.completion(EVEN)) == \
        "!y: E(y) <=> y=0 | ?x: (y=s(x) & ~E(x))"


def test_completion_loop_weaker_than_definition():
    comp = transform.completion(LOOP)
    assert sorted(len(m.true_atoms()) for m in models(comp, UNIT, {"P": 0, "Q": 0})) == [0, 2]
    assert [m.true_atoms() for m in models(Def(LOOP), UNIT, {"P": 0, "Q": 0})] == [[]]


def test_completion_under_strict_certificate():
    base = rel_chain(4)
    assert transform.certify_strict_reduction(EVEN_ODD, base)
    comp = {true_atoms(m, ["E", "O"])
            for m in models(transform.completion(EVEN_ODD), base, {"E": 1, "O": 1})}
    assert comp == models_delta(EVEN_ODD, base, ["E", "O"])


def test_pos_ind_and_circ_on_small_graphs():
    rng = random.Random(3)
    pos, circ = transform.pos_ind(TC), transform.circumscription(TC)
    for _ in range(6):
        edges = [(a, b) for a in "abc" for b in "abc" if rng.random() < 0.3]
        base = Structure.build(list("abc"), rels={"G": edges}, arities={"G": 2})
        ext = engine.extension(TC, base)
        for phi in (pos, circ):
            ms = models(phi, base, {"T": 2})
            assert [m.rels["T"] for m in ms] == [ext.rels["T"]]


def test_pos_ind_fact():
    d = parse_definition("{ P <- true. }", PROP_VOCAB)
    ms = models(transform.pos_ind(d), UNIT, {"P": 0})
    assert [m.rels["P"] for m in ms] == [frozenset({()})]


def test_pos_ind_on_even_differs_from_definition():
    base = chain(3)
    ms = models(transform.pos_ind(EVEN), base, {"E": 1})
    assert all(m != engine.extension(EVEN, base) for m in ms)


def test_translations_round_trip():
    for d, v in ((EVEN, EVEN_VOCAB), (TC, TC_VOCAB), (LOOP, PROP_VOCAB)):
        for op in (transform.completion, transform.pos_ind, transform.circumscription):
            phi = op(d)
            assert parse_formula(format_formula(phi), v) == phi


def test_iid_checks():
    V = Vocabulary.of(predicates={"P": 0, "Q": 0})
    seq = transform.IidSequence([parse_definition("{ P <- true. }", V),
                                 parse_definition("{ Q <- P. }", V)])
    assert transform.check_iid(seq)
    out = transform.iterated_extension(seq, UNIT)
    assert out.rels["P"] and out.rels["Q"]
    p = transform.make_partition(EVEN_ODD, {"E": 1, "O": 2})
    bad = transform.IidSequence(p.parts)
    assert not transform.check_iid(bad)
    assert "O occurs open" in transform.iid_violation(bad)
    with pytest.raises(NotAnIidSequence):
        transform.iterated_extension(bad, rel_chain(3))
    neg = transform.IidSequence([parse_definition("{ P <- ~P. }", V)])
    assert "not positive" in transform.iid_violation(neg)


def _grouping(defined, rnd):
    while True:
        g = {p: rnd.randint(0, len(defined) - 1) for p in defined}
        if len(set(g.values())) > 1:
            return g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_decomposition(seed, gseed):
    rnd = random.Random(gseed)
    inst = random_instance(random.Random(seed))
    if len(inst.delta.defined) < 2:
        return
    p = transform.make_partition(inst.delta, _grouping(inst.delta.defined, rnd))
    for m in engine.models_of(inst.delta, inst.base):
        for part in p.parts:
            assert engine.satisfies_definition(m, part)
