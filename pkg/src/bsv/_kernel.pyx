# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; same contract as bsv._pykernel.first_false."""

from libc.stdlib cimport malloc, free


def first_false(tuple code, tuple lows, tuple radices):
    cdef Py_ssize_t ncode = len(code)
    cdef Py_ssize_t nslots = len(radices)
    cdef Py_ssize_t i, j, sp, depth, maxdepth
    cdef long long a, b, index
    cdef long long *prog = <long long *> malloc((ncode + 1) * sizeof(long long))
    cdef long long *vals = <long long *> malloc((nslots + 1) * sizeof(long long))
    cdef long long *lo = <long long *> malloc((nslots + 1) * sizeof(long long))
    cdef long long *hi = <long long *> malloc((nslots + 1) * sizeof(long long))
    cdef long long *stack = NULL
    cdef int op
    if prog == NULL or vals == NULL or lo == NULL or hi == NULL:
        free(prog); free(vals); free(lo); free(hi)
        raise MemoryError()
    try:
        depth = 0
        maxdepth = 1
        for i in range(ncode):
            prog[i] = code[i]
        for i in range(0, ncode, 2):
            op = <int> prog[i]
            if op == 0 or op == 1:
                depth += 1
            elif op != 2:
                depth -= 1
            if depth > maxdepth:
                maxdepth = depth
        stack = <long long *> malloc((maxdepth + 1) * sizeof(long long))
        if stack == NULL:
            raise MemoryError()
        for j in range(nslots):
            lo[j] = lows[j]
            hi[j] = lows[j] + radices[j] - 1
            vals[j] = lo[j]
            if radices[j] <= 0:
                return -1
        index = 0
        while True:
            sp = 0
            for i in range(0, ncode, 2):
                op = <int> prog[i]
                if op == 0:
                    stack[sp] = prog[i + 1]
                    sp += 1
                elif op == 1:
                    stack[sp] = vals[prog[i + 1]]
                    sp += 1
                elif op == 2:
                    stack[sp - 1] = stack[sp - 1] == 0
                else:
                    sp -= 1
                    b = stack[sp]
                    a = stack[sp - 1]
                    if op == 3:
                        a = (a != 0) and (b != 0)
                    elif op == 4:
                        a = (a != 0) or (b != 0)
                    elif op == 5:
                        a = (a == 0) or (b != 0)
                    elif op == 6:
                        a = (a != 0) == (b != 0)
                    elif op == 7:
                        a = a < b
                    elif op == 8:
                        a = a <= b
                    elif op == 9:
                        a = a == b
                    elif op == 10:
                        a = a != b
                    elif op == 11:
                        a = a >= b
                    else:
                        a = a > b
                    stack[sp - 1] = a
            if stack[0] == 0:
                return index
            index += 1
            j = nslots - 1
            while j >= 0:
                if vals[j] < hi[j]:
                    vals[j] += 1
                    break
                vals[j] = lo[j]
                j -= 1
            if j < 0:
                return -1
    finally:
        free(prog)
        free(vals)
        free(lo)
        free(hi)
        if stack != NULL:
            free(stack)
