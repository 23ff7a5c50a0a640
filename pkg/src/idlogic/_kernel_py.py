"""Pure-Python fixpoint kernels (fallback when the compiled extension is absent).

Bodies are translated once into a single generated Python function that
evaluates every defined atom; the generated code is cached on the program.
"""
OP_TRUE, OP_FALSE, OP_LEAF_I, OP_LEAF_J, OP_NOT, OP_AND, OP_OR = range(7)

_CHUNK = 2000


def _expressions(prog):
    code, offsets = prog.code, prog.offsets
    exprs = []
    for k in range(prog.nd):
        stack = []
        for pc in range(offsets[k], offsets[k + 1]):
            op, arg = code[2 * pc], code[2 * pc + 1]
            if op == OP_TRUE:
                stack.append("True")
            elif op == OP_FALSE:
                stack.append("False")
            elif op == OP_LEAF_I:
                stack.append(f"I[{arg}]")
            elif op == OP_LEAF_J:
                stack.append(f"J[{arg}]")
            elif op == OP_NOT:
                stack.append(f"(not {stack.pop()})")
            else:
                args = stack[-arg:]
                del stack[-arg:]
                sep = " and " if op == OP_AND else " or "
                stack.append("(" + sep.join(args) + ")")
        exprs.append(stack[0])
    return exprs


def _interpreter(prog):
    code, offsets, nd = prog.code, prog.offsets, prog.nd

    def run(I, J, out):
        for k in range(nd):
            stack = []
            for pc in range(offsets[k], offsets[k + 1]):
                op, arg = code[2 * pc], code[2 * pc + 1]
                if op == OP_TRUE:
                    stack.append(True)
                elif op == OP_FALSE:
                    stack.append(False)
                elif op == OP_LEAF_I:
                    stack.append(bool(I[arg]))
                elif op == OP_LEAF_J:
                    stack.append(bool(J[arg]))
                elif op == OP_NOT:
                    stack.append(not stack.pop())
                else:
                    args = stack[-arg:]
                    del stack[-arg:]
                    stack.append(all(args) if op == OP_AND else any(args))
            out[k] = stack[0]

    return run


def _compiled(prog):
    fn = prog.cache.get("py")
    if fn is not None:
        return fn
    try:
        exprs = _expressions(prog)
        # Several small functions keep each code object within compiler limits.
        parts = []
        for start in range(0, len(exprs), _CHUNK):
            lines = ["def f(I, J, out):"]
            lines += [f"    out[{k}] = 1 if {e} else 0"
                      for k, e in enumerate(exprs[start:start + _CHUNK], start)]
            if len(lines) == 1:
                lines.append("    pass")
            ns = {}
            exec(compile("\n".join(lines), "<idlogic-bodies>", "exec"), ns)
            parts.append(ns["f"])

        def fn(I, J, out):
            for p in parts:
                p(I, J, out)
    except (RecursionError, MemoryError, SyntaxError):
        fn = _interpreter(prog)
    prog.cache["py"] = fn
    return fn


def eval_bodies(prog, I, J):
    out = bytearray(prog.nd)
    _compiled(prog)(I, J, out)
    return out


def stable(prog, J):
    """Least fixpoint of I -> T''(I, J); open atoms are copied from J."""
    fn = _compiled(prog)
    nd = prog.nd
    I = bytearray(J)
    I[:nd] = bytes(nd)
    out = bytearray(nd)
    while True:
        fn(I, J, out)
        if out == I[:nd]:
            return I
        I[:nd] = out


def wf_pair(prog, open_vec):
    """Alternating fixpoint from (bottom, top); returns (lb, ub, stages)."""
    nd = prog.nd
    lb = bytearray(open_vec)
    lb[:nd] = bytes(nd)
    ub = bytearray(open_vec)
    ub[:nd] = b"\x01" * nd
    stages = 0
    while True:
        new_lb = stable(prog, ub)
        new_ub = stable(prog, lb)
        if new_lb == lb and new_ub == ub:
            return lb, ub, stages
        lb, ub = new_lb, new_ub
        stages += 1
