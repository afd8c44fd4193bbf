# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sentence evaluation over a batch of bitmask models."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline bint _quant(int q, i64 a, i64 b, i64 full) nogil:
    cdef bint t
    if q == 0 or q == 2:
        t = (a & b) != 0
    else:
        t = (a & ~b & full) == 0
    if q >= 2:
        return not t
    return t


cdef inline bint _eval(const i64[:, :] U, const i64[:, :] B, Py_ssize_t m, int k,
                       const i64[:] spec) nogil:
    cdef i64 full = (<i64>1 << k) - 1
    cdef i64 fullk = (<i64>1 << (k * k)) - 1
    cdef i64 subj = U[m, spec[2]]
    cdef i64 obj = U[m, spec[8]]
    cdef i64 rel = B[m, spec[5]]
    cdef i64 scope = 0
    cdef i64 row
    cdef int x
    cdef bint t
    if spec[1] >= 0:
        subj &= U[m, spec[1]]
    if spec[7] >= 0:
        obj &= U[m, spec[7]]
    if spec[4] >= 0:
        rel &= B[m, spec[4]]
    rel &= fullk
    for x in range(k):
        row = (rel >> (x * k)) & full
        t = _quant(<int>spec[6], obj, row, full)
        if spec[3]:
            t = not t
        if t:
            scope |= <i64>1 << x
    return _quant(<int>spec[0], subj, scope, full)


def eval_sentence(const i64[:, :] U, const i64[:, :] B, int k, spec):
    cdef const i64[:] s = np.ascontiguousarray(spec, dtype=np.int64)
    cdef Py_ssize_t n = U.shape[0], m
    out = np.empty(n, dtype=np.uint8)
    cdef cnp.uint8_t[:] o = out
    with nogil:
        for m in range(n):
            o[m] = _eval(U, B, m, k, s)
    return out.view(np.bool_)


def eval_pair(const i64[:, :] U, const i64[:, :] B, int k, spec_p, spec_h):
    cdef const i64[:] sp = np.ascontiguousarray(spec_p, dtype=np.int64)
    cdef const i64[:] sh = np.ascontiguousarray(spec_h, dtype=np.int64)
    cdef Py_ssize_t n = U.shape[0], m
    p = np.empty(n, dtype=np.uint8)
    h = np.empty(n, dtype=np.uint8)
    cdef cnp.uint8_t[:] po = p
    cdef cnp.uint8_t[:] ho = h
    with nogil:
        for m in range(n):
            po[m] = _eval(U, B, m, k, sp)
            ho[m] = _eval(U, B, m, k, sh)
    return p.view(np.bool_), h.view(np.bool_)
