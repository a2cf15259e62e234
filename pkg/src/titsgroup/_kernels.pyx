# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the permutation and sign-vector kernels."""


def compose(tuple u, tuple v):
    cdef Py_ssize_t n = len(v), i
    out = [None] * n
    for i in range(n):
        out[i] = u[<Py_ssize_t>v[i]]
    return tuple(out)


def invert(tuple u):
    cdef Py_ssize_t n = len(u), a
    out = [0] * n
    for a in range(n):
        out[<Py_ssize_t>u[a]] = a
    return tuple(out)


def inversion_count(tuple u, Py_ssize_t npos):
    cdef Py_ssize_t a, c = 0
    for a in range(npos):
        if <Py_ssize_t>u[a] >= npos:
            c += 1
    return c


def cocycle_bits(tuple u, tuple v, Py_ssize_t npos, coroot_bits):
    cdef Py_ssize_t a, va
    acc = 0
    for a in range(npos):
        va = <Py_ssize_t>v[a]
        if va >= npos and <Py_ssize_t>u[va] < npos:
            acc ^= coroot_bits[a]
    return acc


def act_bits(columns, bits):
    cdef Py_ssize_t k = 0
    acc = 0
    while bits:
        if bits & 1:
            acc ^= columns[k]
        bits >>= 1
        k += 1
    return acc


def mat_vec(mat, vec):
    cdef Py_ssize_t n = len(vec), i, j
    cdef long long s
    cdef list v = [int(x) for x in vec]
    out = []
    for row in mat:
        s = 0
        for j in range(n):
            s += <long long>row[j] * <long long>v[j]
        out.append(s)
    return tuple(out)
