"""Numbered acceptance criteria; each prints one PASS/FAIL line."""
import functools
import random
import time

import pytest

from idlogic import engine, oracle, transform
from idlogic.checker import models
from idlogic.core import ExtensionLattice, Structure, Vocabulary, leq
from idlogic.syntax import conj, is_non_recursive, parse_definition, parse_formula

from gen import (
    EVEN_VOCAB,
    PROP_VOCAB,
    UNIT,
    chain,
    completion_models,
    models_conjunction,
    _preds_of,
    models_delta,
    random_iid,
    random_instances,
    rel_chain,
    true_atoms,
)

LIMIT = 5.0


def criterion(n, text):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            start = time.perf_counter()
            try:
                fn(*a, **kw)
                took = time.perf_counter() - start
                assert took < LIMIT, f"took {took:.2f}s"
            except BaseException:
                print(f"FAIL criterion {n}: {text}")
                raise
            print(f"PASS criterion {n}: {text} ({took:.2f}s)")
        return pytest.mark.criterion(n, text)(run)
    return wrap


def prop(*true):
    return Structure.build([0], rels={p: (p in true) for p in ("P", "Q")})


def pdef(src):
    return parse_definition(src, PROP_VOCAB)


def names(atoms):
    return frozenset(str(a) for a in atoms)


EVEN = parse_definition("{ E(0). !x: E(s(x)) <- ~E(x). }", EVEN_VOCAB)
EO_VOCAB = Vocabulary.of({"0": 0}, {"S": 2, "E": 1, "O": 1})
EVEN_ODD = parse_definition(
    "{ !x: E(x) <- x=0. !x y: E(y) <- S(x,y) & O(x). !x y: O(y) <- S(x,y) & E(x). }", EO_VOCAB)
TC_VOCAB = Vocabulary.of(predicates={"G": 2, "T": 2})
TC = parse_definition("{ T(x,y) <- G(x,y). T(x,y) <- ?z: T(x,z) & T(z,y). }", TC_VOCAB)


@criterion(1, "delta0 well-founded pair and stable-operator trace")
def test_criterion_1():
    d0 = pdef("{ P <- true. Q <- ~P. Q <- Q. }")
    pair = engine.wf_pair_of(d0, UNIT, trace=True)
    assert pair.total and pair.lb == prop("P") and pair.ub == prop("P")
    g = pair.ground
    seq = [prop()]
    for _ in range(3):
        seq.append(engine.stable(g, seq[-1]))
    assert seq == [prop(), prop("P", "Q"), prop("P"), prop("P")]
    assert [(e["I"], e["J"]) for e in pair.trace_json()] == \
        [([], ["P", "Q"]), (["P"], ["P", "Q"]), (["P"], ["P"]), (["P"], ["P"])]


@criterion(2, "liar and choice definitions are not total")
def test_criterion_2():
    liar = engine.wf_pair_of(pdef("{ P <- ~P. }"), UNIT)
    assert not liar.total
    assert not liar.lb.rels["P"] and liar.ub.rels["P"] == {()}
    assert models_delta(pdef("{ P <- ~P. }"), UNIT, ["P"]) == set()
    choice = engine.wf_pair_of(pdef("{ P <- ~Q. Q <- ~P. }"), UNIT)
    assert not choice.total
    assert names(choice.lb.true_atoms(["P", "Q"])) == set()
    assert names(choice.ub.true_atoms(["P", "Q"])) == {"P", "Q"}


@criterion(3, "even numbers on chains 0..N, N in 4..21, against the unfounded-set oracle")
def test_criterion_3():
    for n in range(4, 22):
        base = chain(n)
        g = engine.ground(EVEN, base)
        pair = engine.well_founded_pair(g, base)
        ref = oracle.wf_unfounded(g, base)
        assert (pair.lb, pair.ub) == (ref.lb, ref.ub)
        evens = {(i,) for i in range(0, n + 1, 2)}
        if n % 2 == 0:
            assert pair.total and pair.lb.rels["E"] == evens
        else:
            assert not pair.total
            assert pair.ub.rels["E"] - pair.lb.rels["E"] == {(n,)}
            assert pair.lb.rels["E"] == evens
    two = Structure.build([0, 1], funcs={"s": {(0,): 1, (1,): 1}, "0": 0})
    pair = engine.wf_pair_of(EVEN, two)
    assert pair.lb.rels["E"] == {(0,)} and pair.ub.rels["E"] == {(0,), (1,)}


@criterion(4, "modularity fails for the positive loop split in two")
def test_criterion_4():
    loop = pdef("{ P <- Q. Q <- P. }")
    assert models_delta(loop, UNIT, ["P", "Q"]) == {frozenset()}
    p = transform.make_partition(loop, {"P": 1, "Q": 2})
    conj_models = models_conjunction(p.parts, UNIT, {"P": 0, "Q": 0})
    assert {names(m) for m in conj_models} == {frozenset(), frozenset({"P", "Q"})}
    assert transform.certify_reduction_partition(loop, p, UNIT).status == transform.UNKNOWN


@criterion(5, "even/odd split is certified and modular on chains up to 8 elements")
def test_criterion_5():
    p = transform.make_partition(EVEN_ODD, {"E": 1, "O": 2})
    for n in range(0, 8):
        base = rel_chain(n)
        assert transform.certify_reduction_partition(EVEN_ODD, p, base)
        assert all(engine.is_total(part, base) for part in p.parts)
        arities = {"E": 1, "O": 1}
        assert models_delta(EVEN_ODD, base, ["E", "O"]) == \
            models_conjunction(p.parts, base, arities)


@criterion(6, "a certified partition of an inconsistent definition stays inconsistent")
def test_criterion_6():
    bad = pdef("{ P <- ~P. Q <- ~P. }")
    p = transform.make_partition(bad, {"P": 1, "Q": 2})
    assert transform.certify_reduction_partition(bad, p, UNIT)
    assert models_delta(bad, UNIT, ["P", "Q"]) == set()
    assert models_delta(p.parts[0], UNIT, ["P"]) == set()
    assert models_conjunction(p.parts, UNIT, {"P": 0, "Q": 0}) == set()


def _warshall(dom, edges):
    reach = {(a, b): (a, b) in edges for a in dom for b in dom}
    for k in dom:
        for a in dom:
            for b in dom:
                reach[a, b] = reach[a, b] or (reach[a, k] and reach[k, b])
    return frozenset(t for t, v in reach.items() if v)


@criterion(7, "transitive closure agrees with Warshall, minimal models, pos_ind and circ")
def test_criterion_7():
    rng = random.Random(7)
    pos, circ = transform.pos_ind(TC), transform.circumscription(TC)
    small = 0
    for _ in range(200):
        dom = list(range(rng.randint(1, 6)))
        edges = {(a, b) for a in dom for b in dom if rng.random() < 0.3}
        base = Structure.build(dom, rels={"G": edges}, arities={"G": 2})
        closure = _warshall(dom, edges)
        assert engine.extension(TC, base).rels["T"] == closure
        if len(dom) <= 3:
            small += 1
            assert [m.rels["T"] for m in oracle.minimal_models(TC, base)] == [closure]
            for phi in (pos, circ):
                assert [m.rels["T"] for m in models(phi, base, {"T": 2})] == [closure]
    assert small > 50


def _grouping(defined, rng):
    while True:
        g = {p: rng.randint(0, len(defined) - 1) for p in defined}
        if len(set(g.values())) > 1:
            return g


def _comparable_pairs(exts, preds, rng, cap=4096):
    if len(exts) ** 2 <= cap:
        yield from ((J, K) for J in exts for K in exts if leq(J, K))
        return
    for _ in range(cap // 4):
        J, K = rng.choice(exts), rng.choice(exts)
        yield J, engine.join(J, K, preds)


@criterion(8, "property suite over 500 random definitions")
def test_criterion_8():
    rng = random.Random(8)
    counts = dict.fromkeys(["i", "ii", "iii", "iv", "v", "vi", "vii"], 0)
    for inst in random_instances(2024, 500):
        delta, base = inst.delta, inst.base
        preds = sorted(delta.defined)
        arities = {p: delta.head_arity(p) for p in preds}
        used = _preds_of(delta)
        arities.update((q, a) for q, a in inst.open_preds.items() if q in used)
        completions = list(engine.open_completions(delta, base))
        for I_o in completions:
            g = engine.ground(delta, I_o)
            pair = engine.well_founded_pair(g, I_o)
            ref = oracle.wf_unfounded(g, I_o)
            assert (pair.lb, pair.ub) == (ref.lb, ref.ub)                            # (i)
            counts["i"] += 1
            if g.nd > 8 or I_o is not completions[0]:
                continue
            lat = ExtensionLattice(I_o, g.vocab.union(I_o.vocab))
            exts = list(lat.enumerate_extensions())
            st = {}
            for J, K in _comparable_pairs(exts, g.defined, rng):                     # (ii)
                for X in (J, K):
                    if X not in st:
                        st[X] = engine.stable(g, X)
                assert leq(st[K], st[J])
                counts["ii"] += 1
            for M in exts:                                                           # (iii)
                if engine.satisfies_definition(M, delta):
                    assert engine.gamma(g, M) == M
                    assert leq(ref.lb, M) and leq(M, ref.ub)
                    counts["iii"] += 1
        total = engine.is_total(delta, base)
        mods = models_delta(delta, base, list(arities))
        if total and len(preds) >= 2:                                                # (iv)
            p = transform.make_partition(delta, _grouping(preds, rng))
            for m in engine.models_of(delta, base):
                assert all(engine.satisfies_definition(m, part) for part in p.parts)
            counts["iv"] += 1
        if transform.certify_strict_reduction(delta, base):                          # (v)
            assert total
            assert mods == completion_models(delta, base, inst.open_preds, list(arities))
            counts["v"] += 1
        if len(preds) >= 2:                                                          # (vi)
            p = transform.make_partition(delta, _grouping(preds, rng))
            if transform.certify_reduction_partition(delta, p, base) and \
                    all(engine.is_total(part, base) for part in p.parts):
                assert total
                assert mods == models_conjunction(p.parts, base, arities)
                counts["vi"] += 1
        if is_non_recursive(delta):                                                  # (vii)
            assert mods == completion_models(delta, base, inst.open_preds, list(arities))
            counts["vii"] += 1
    print(counts)
    assert all(counts.values()), counts


@criterion(9, "inflationary fixpoint of the even formula differs from the well-founded one")
def test_criterion_9():
    base = chain(10)
    phi = parse_formula("x=0 | ?y: x=s(y) & ~E(y)",
                        Vocabulary.of({"s": 1, "0": 0, "x": 0}, {"E": 1}))
    infl = engine.inflationary_fixpoint(phi, "E", base)
    wf = engine.extension(EVEN, base).rels["E"]
    assert infl == {(i,) for i in range(11)}
    assert wf == {(i,) for i in range(0, 11, 2)}
    assert infl - wf == {(i,) for i in range(1, 11, 2)}


@criterion(10, "iterated positive definitions collapse to their union and to pos_ind")
def test_criterion_10():
    rng = random.Random(10)
    for _ in range(100):
        defs, base, arities = random_iid(rng)
        seq = transform.IidSequence(defs)
        assert transform.check_iid(seq)
        it = true_atoms(transform.iterated_extension(seq, base), arities)
        assert it == true_atoms(engine.extension(transform.union(defs), base), arities)
        ms = models(conj([transform.pos_ind(d) for d in defs]), base, arities)
        assert [true_atoms(m, arities) for m in ms] == [it]
