# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fixpoint kernels; same contract as the pure-Python fallback."""
from libc.stdlib cimport malloc, free
from libc.string cimport memcmp, memcpy, memset

cdef enum:
    OP_TRUE = 0
    OP_FALSE = 1
    OP_LEAF_I = 2
    OP_LEAF_J = 3
    OP_NOT = 4
    OP_AND = 5
    OP_OR = 6


cdef void _eval(const int[:] code, const int[:] offsets, int nd,
                const unsigned char* I, const unsigned char* J,
                unsigned char* out, unsigned char* stack) noexcept nogil:
    cdef int k, pc, op, arg, sp, i
    cdef unsigned char acc
    for k in range(nd):
        sp = 0
        for pc in range(offsets[k], offsets[k + 1]):
            op = code[2 * pc]
            arg = code[2 * pc + 1]
            if op == OP_TRUE:
                stack[sp] = 1
                sp += 1
            elif op == OP_FALSE:
                stack[sp] = 0
                sp += 1
            elif op == OP_LEAF_I:
                stack[sp] = I[arg] != 0
                sp += 1
            elif op == OP_LEAF_J:
                stack[sp] = J[arg] != 0
                sp += 1
            elif op == OP_NOT:
                stack[sp - 1] = not stack[sp - 1]
            elif op == OP_AND:
                acc = 1
                for i in range(sp - arg, sp):
                    acc = acc & stack[i]
                sp -= arg
                stack[sp] = acc
                sp += 1
            else:
                acc = 0
                for i in range(sp - arg, sp):
                    acc = acc | stack[i]
                sp -= arg
                stack[sp] = acc
                sp += 1
        out[k] = stack[0]


cdef void _stable(const int[:] code, const int[:] offsets, int nd, int n,
                  const unsigned char* J, unsigned char* I,
                  unsigned char* out, unsigned char* stack) noexcept nogil:
    memcpy(I, J, n)
    memset(I, 0, nd)
    while True:
        _eval(code, offsets, nd, I, J, out, stack)
        if memcmp(out, I, nd) == 0:
            return
        memcpy(I, out, nd)


def eval_bodies(prog, I, J):
    cdef const int[:] code = prog.code
    cdef const int[:] offsets = prog.offsets
    cdef const unsigned char[:] iv = I
    cdef const unsigned char[:] jv = J
    cdef int nd = prog.nd
    out = bytearray(nd)
    cdef unsigned char[:] ov = out
    cdef unsigned char* stack = <unsigned char*> malloc(prog.max_len + 1)
    try:
        if nd:
            _eval(code, offsets, nd, &iv[0], &jv[0], &ov[0], stack)
    finally:
        free(stack)
    return out


def stable(prog, J):
    cdef const int[:] code = prog.code
    cdef const int[:] offsets = prog.offsets
    cdef int nd = prog.nd
    cdef int n = prog.n
    if n == 0:
        return bytearray()
    cdef const unsigned char[:] jv = J
    I = bytearray(n)
    cdef unsigned char[:] iv = I
    cdef unsigned char* out = <unsigned char*> malloc(nd + 1)
    cdef unsigned char* stack = <unsigned char*> malloc(prog.max_len + 1)
    try:
        _stable(code, offsets, nd, n, &jv[0], &iv[0], out, stack)
    finally:
        free(out)
        free(stack)
    return I


def wf_pair(prog, open_vec):
    cdef const int[:] code = prog.code
    cdef const int[:] offsets = prog.offsets
    cdef int nd = prog.nd
    cdef int n = prog.n
    cdef int stages = 0
    lb = bytearray(open_vec)
    ub = bytearray(open_vec)
    if n == 0:
        return lb, ub, 0
    new_lb = bytearray(n)
    new_ub = bytearray(n)
    cdef unsigned char[:] lv = lb
    cdef unsigned char[:] uv = ub
    cdef unsigned char[:] nlv = new_lb
    cdef unsigned char[:] nuv = new_ub
    cdef unsigned char* out = <unsigned char*> malloc(nd + 1)
    cdef unsigned char* stack = <unsigned char*> malloc(prog.max_len + 1)
    try:
        with nogil:
            memset(&lv[0], 0, nd)
            memset(&uv[0], 1, nd)
            while True:
                _stable(code, offsets, nd, n, &uv[0], &nlv[0], out, stack)
                _stable(code, offsets, nd, n, &lv[0], &nuv[0], out, stack)
                if memcmp(&nlv[0], &lv[0], n) == 0 and memcmp(&nuv[0], &uv[0], n) == 0:
                    break
                memcpy(&lv[0], &nlv[0], n)
                memcpy(&uv[0], &nuv[0], n)
                stages += 1
    finally:
        free(out)
        free(stack)
    return lb, ub, stages
