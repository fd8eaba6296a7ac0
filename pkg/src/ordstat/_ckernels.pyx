# distutils: language = c++
# cython: boundscheck=False, wraparound=False
"""Compiled selection kernels.

Return values and counter semantics mirror ordstat._pykernels exactly;
that module is the reference. The memoized kernels key the cache on a
64-bit survivor bitmask, so they only accept sequences of up to 64
elements (the dispatcher falls back to the Python kernels beyond that).
"""

from cython.operator cimport dereference as deref
from libc.stdlib cimport free, malloc
from libcpp.unordered_map cimport unordered_map

MEMO_MAX_N = 64

ctypedef unsigned long long u64


cdef struct Counters:
    u64 recursive
    u64 base
    u64 hits


cdef double _naive(double* cur, int m_len, int m, double* levels, int cap,
                   Counters* c) noexcept nogil:
    cdef int i, j, hi
    cdef double best, v
    cdef double* child
    c.recursive += 1
    if m == 1:
        c.base += 1
        best = cur[0]
        for i in range(1, m_len):
            if cur[i] < best:
                best = cur[i]
        return best
    hi = m_len - m + 2
    child = levels
    best = 0.0
    for j in range(hi):
        for i in range(j):
            child[i] = cur[i]
        for i in range(j + 1, m_len):
            child[i - 1] = cur[i]
        v = _naive(child, m_len - 1, m - 1, levels + cap, cap, c)
        if j == 0 or v > best:
            best = v
    return best


cdef double _memo(double* xs, int* idx, int m_len, int m, u64 mask,
                  int* levels, int cap, unordered_map[u64, double]& cache,
                  Counters* c, bint full, bint count) except +:
    cdef int i, j, hi
    cdef double best, v
    cdef int* child
    cdef unordered_map[u64, double].iterator it
    if count:
        c.recursive += 1
    it = cache.find(mask)
    if it != cache.end():
        if count:
            c.hits += 1
        return deref(it).second
    if m == 1:
        if count:
            c.base += 1
        best = xs[idx[0]]
        for i in range(1, m_len):
            v = xs[idx[i]]
            if v < best:
                best = v
    else:
        hi = m_len if full else m_len - m + 2
        child = levels
        best = 0.0
        for j in range(hi):
            for i in range(j):
                child[i] = idx[i]
            for i in range(j + 1, m_len):
                child[i - 1] = idx[i]
            v = _memo(xs, child, m_len - 1, m - 1,
                      mask & ~((<u64>1) << idx[j]), levels + cap, cap,
                      cache, c, full, count)
            if j == 0 or v > best:
                best = v
    cache[mask] = best
    return best


def select_naive(values, int rank):
    cdef int n = len(values)
    cdef int i
    cdef Counters c
    cdef double value
    c.recursive = 0
    c.base = 0
    c.hits = 0
    cdef double* mem = <double*> malloc(<size_t>(rank + 1) * n * sizeof(double))
    if mem == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            mem[i] = values[i]
        value = _naive(mem, n, rank, mem + n, n, &c)
    finally:
        free(mem)
    return value, c.recursive, c.base


cdef _memo_entry(values, int rank, bint full, bint count):
    cdef int n = len(values)
    if n > MEMO_MAX_N:
        raise ValueError("compiled memo kernel supports at most 64 elements")
    cdef Counters c
    cdef double value
    cdef u64 mask
    cdef int i
    c.recursive = 0
    c.base = 0
    c.hits = 0
    cdef unordered_map[u64, double] cache
    cdef double* xs = <double*> malloc(<size_t>n * sizeof(double))
    cdef int* idx = <int*> malloc(<size_t>(rank + 1) * n * sizeof(int))
    if xs == NULL or idx == NULL:
        free(xs)
        free(idx)
        raise MemoryError()
    try:
        for i in range(n):
            xs[i] = values[i]
            idx[i] = i
        if n == 64:
            mask = <u64>0xFFFFFFFFFFFFFFFF
        else:
            mask = ((<u64>1) << n) - 1
        value = _memo(xs, idx, n, rank, mask, idx + n, n, cache, &c,
                      full, count)
    finally:
        free(xs)
        free(idx)
    return value, c.recursive, c.base, c.hits


def select_memo(values, int rank):
    value, recursive, base, hits = _memo_entry(values, rank, False, True)
    return value, recursive, base, hits


def select_fullrange(values, int rank):
    value, _, _, _ = _memo_entry(values, rank, True, False)
    return value
