import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idlogic import _kernel_py, engine, kernel
from idlogic.ground import compile_program, ground_definition

from gen import random_instance

try:
    from idlogic import _kernel as _kernel_c
except ImportError:
    _kernel_c = None

needs_c = pytest.mark.skipif(_kernel_c is None, reason="compiled extension not built")


def test_backend_is_reported():
    assert kernel.BACKEND in ("cython", "python")


def _program(seed):
    inst = random_instance(random.Random(seed))
    I_o = next(engine.open_completions(inst.delta, inst.base))
    g = ground_definition(inst.delta, I_o, fold_open=False)
    return g, compile_program(g)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_python_interpreter_matches_generated_code(seed, rnd):
    g, prog = _program(seed)
    run = _kernel_py._interpreter(prog)
    n = prog.n
    for _ in range(5):
        I = bytearray(rnd.getrandbits(1) for _ in range(n))
        J = bytearray(rnd.getrandbits(1) for _ in range(n))
        out = bytearray(prog.nd)
        run(I, J, out)
        assert out == _kernel_py.eval_bodies(prog, I, J)


@needs_c
@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_backends_agree(seed, rnd):
    g, prog = _program(seed)
    n = prog.n
    for _ in range(4):
        I = bytearray(rnd.getrandbits(1) for _ in range(n))
        J = bytearray(rnd.getrandbits(1) for _ in range(n))
        assert _kernel_c.eval_bodies(prog, I, J) == _kernel_py.eval_bodies(prog, I, J)
        assert _kernel_c.stable(prog, J) == _kernel_py.stable(prog, J)
        assert _kernel_c.wf_pair(prog, J) == _kernel_py.wf_pair(prog, J)


def test_empty_program():
    from idlogic.ground import Program
    from array import array
    prog = Program(array("i"), array("i", [0]), 0, 0, 1)
    for impl in filter(None, (_kernel_py, _kernel_c)):
        assert impl.wf_pair(prog, bytearray()) == (bytearray(), bytearray(), 0)
        assert impl.stable(prog, bytearray()) == bytearray()
