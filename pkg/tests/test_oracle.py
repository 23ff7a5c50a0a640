import random

from hypothesis import given, settings
from hypothesis import strategies as st

from idlogic import engine, oracle, transform
from idlogic.checker import models
from idlogic.core import Structure, Vocabulary
from idlogic.syntax import is_non_recursive, is_positive, parse_definition

from gen import EVEN_VOCAB, PROP_VOCAB, UNIT, chain, random_instance, true_atoms

EVEN = parse_definition("{ E(0). !x: E(s(x)) <- ~E(x). }", EVEN_VOCAB)
TC = parse_definition("{ T(x,y) <- G(x,y). T(x,y) <- ?z: T(x,z) & T(z,y). }",
                      Vocabulary.of(predicates={"G": 2, "T": 2}))


def P(*true):
    return frozenset(true)


def names(ms):
    return {frozenset(str(a) for a in m.true_atoms()) for m in ms}


def test_minimal_models_examples():
    base = Structure.build(["a", "b"], rels={"G": [("a", "b")]}, arities={"G": 2})
    (m,) = oracle.minimal_models(TC, base)
    assert m.rels["T"] == {("a", "b")}
    ms = oracle.minimal_models(EVEN, chain(4))
    assert sorted(sorted(t[0] for t in m.rels["E"]) for m in ms) == [[0, 1, 3, 4], [0, 2, 4]]


def test_wf_unfounded_examples():
    d0 = parse_definition("{ P <- true. Q <- ~P. Q <- Q. }", PROP_VOCAB)
    pair = oracle.wf_unfounded(engine.ground(d0, UNIT), UNIT)
    assert pair.total and pair.lb.rels["P"] and not pair.lb.rels["Q"]
    liar = parse_definition("{ P <- ~P. }", PROP_VOCAB)
    pair = oracle.wf_unfounded(engine.ground(liar, UNIT), UNIT)
    assert not pair.lb.rels["P"] and pair.ub.rels["P"]


def test_completion_models_examples():
    loop = parse_definition("{ P <- Q. Q <- P. }", PROP_VOCAB)
    assert names(oracle.completion_models(loop, UNIT)) == {P(), P("P", "Q")}
    liar = parse_definition("{ P <- ~P. }", PROP_VOCAB)
    assert oracle.completion_models(liar, UNIT) == set()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_non_recursive_completion_has_one_model_per_completion(seed):
    inst = random_instance(random.Random(seed))
    if not is_non_recursive(inst.delta):
        return
    for I_o in engine.open_completions(inst.delta, inst.base):
        assert len(oracle.completion_models(inst.delta, I_o)) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_positive_triangle(seed):
    inst = random_instance(random.Random(seed), positive=True)
    assert is_positive(inst.delta)
    pos = transform.pos_ind(inst.delta)
    arities = {p: inst.delta.head_arity(p) for p in inst.delta.defined}
    for I_o in list(engine.open_completions(inst.delta, inst.base))[:2]:
        ext = engine.extension(inst.delta, I_o)
        mins = oracle.minimal_models(inst.delta, I_o)
        assert len(mins) == 1
        (m,) = mins
        preds = inst.delta.defined
        assert true_atoms(m, preds) == true_atoms(ext, preds)
        if sum(len(I_o.domain) ** a for a in arities.values()) <= 4:
            pm = models(pos, I_o, arities)
            assert [true_atoms(x, preds) for x in pm] == [true_atoms(ext, preds)]
