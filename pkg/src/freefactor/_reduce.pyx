# cython: boundscheck=False, wraparound=False
"""Compiled word kernel: free reduction over signed letter indices.

Mirrors _reduce_py exactly; selected at import by freefactor._kernel.
"""

IMPLEMENTATION = "cython"


def reduce_word(seq):
    """Freely reduce a signed-letter sequence (stack cancellation)."""
    cdef list out = []
    cdef long x, top
    for x in seq:
        if out:
            top = out[len(out) - 1]
            if top == -x:
                out.pop()
                continue
        out.append(x)
    return out


def concat(a, b):
    """Concatenate two already-reduced sequences, cancelling at the seam."""
    cdef Py_ssize_t i = len(a)
    cdef Py_ssize_t j = 0
    cdef Py_ssize_t nb = len(b)
    while i > 0 and j < nb and a[i - 1] == -b[j]:
        i -= 1
        j += 1
    return list(a[:i]) + list(b[j:nb])
