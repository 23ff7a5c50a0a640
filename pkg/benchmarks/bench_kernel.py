"""Compare the compiled kernel with the pure-Python one on a few groundings.

    python benchmarks/bench_kernel.py [--repeat N]
"""
import argparse
import random
import timeit

from idlogic import _kernel_py
from idlogic.core import Structure, Vocabulary
from idlogic.engine import ground
from idlogic.syntax import parse_definition

try:
    from idlogic import _kernel as _kernel_c
except ImportError:
    _kernel_c = None


def even_chain(n):
    vocab = Vocabulary.of(functions={"s": 1, "0": 0}, predicates={"E": 1})
    delta = parse_definition("{ E(0). !x: E(s(x)) <- ~E(x). }", vocab)
    dom = list(range(n + 1))
    base = Structure.build(dom, funcs={"s": {(i,): min(i + 1, n) for i in dom}, "0": 0})
    return delta, base


def closure(n, p=0.1, seed=0):
    rng = random.Random(seed)
    vocab = Vocabulary.of(predicates={"G": 2, "T": 2})
    delta = parse_definition("{ T(x,y) <- G(x,y). T(x,y) <- ?z: T(x,z) & T(z,y). }", vocab)
    dom = list(range(n))
    edges = [(a, b) for a in dom for b in dom if rng.random() < p]
    return delta, Structure.build(dom, rels={"G": edges}, arities={"G": 2})


def win_move(n, seed=0):
    rng = random.Random(seed)
    vocab = Vocabulary.of(predicates={"M": 2, "W": 1})
    delta = parse_definition("{ W(x) <- ?y: M(x,y) & ~W(y). }", vocab)
    dom = list(range(n))
    moves = [(a, b) for a in dom for b in dom if rng.random() < 3 / n]
    return delta, Structure.build(dom, rels={"M": moves}, arities={"M": 2})


CASES = {
    "even chain 2000": lambda: even_chain(2000),
    "transitive closure 30": lambda: closure(30),
    "win-move 400": lambda: win_move(400),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [("python", _kernel_py)] + ([("cython", _kernel_c)] if _kernel_c else [])
    if _kernel_c is None:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'case':24} {'atoms':>7} " + " ".join(f"{b:>10}" for b, _ in backends) + "   speedup")
    for name, make in CASES.items():
        delta, base = make()
        g = ground(delta, base)
        prog = g.program()
        vec = bytearray(g.nd) + bytearray(1 if a.args in base.rels.get(a.predicate, ()) else 0
                                          for a in g.open_atoms)
        results, times = [], []
        for _, mod in backends:
            results.append(mod.wf_pair(prog, bytearray(vec))[:2])
            t = min(timeit.repeat(lambda: mod.wf_pair(prog, bytearray(vec)),
                                  number=1, repeat=args.repeat))
            times.append(t)
        assert all(r == results[0] for r in results), f"backends disagree on {name}"
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
        print(f"{name:24} {g.nd:>7} " + " ".join(f"{t * 1e3:8.2f}ms" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
