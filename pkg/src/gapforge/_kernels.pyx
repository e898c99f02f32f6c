# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled covering kernels: residue-class scoring over survivor arrays.

Result-identical twins of _kernels_py; selected at import by kernels.py.
"""

import numpy as np

BACKEND = "c"


cdef class ResidueScorer:
    """Scores residue classes of candidate primes against survivor values."""

    cdef int[::1] scratch
    cdef long long[::1] res
    cdef public long long max_q

    def __init__(self, max_q):
        self.max_q = max_q
        self.scratch = np.zeros(max_q + 1, dtype=np.int32)
        self.res = np.zeros(0, dtype=np.int64)

    cdef (long long, long long) _best(self, long long[::1] v, long long q) noexcept:
        cdef Py_ssize_t i, n = v.shape[0]
        cdef long long c, k, best_c = 0
        cdef int cnt, best = -1
        cdef int[::1] s = self.scratch
        cdef long long[::1] r = self.res
        cdef double inv = 1.0 / q
        if n and v[n - 1] < (<long long>1) << 50:
            # reciprocal-multiply division: k is off by at most one, the
            # fixup restores the exact remainder (values sorted, < 2^50)
            for i in range(n):
                k = <long long>(v[i] * inv)
                c = v[i] - k * q
                if c < 0:
                    c += q
                elif c >= q:
                    c -= q
                r[i] = c
                s[c] += 1
        else:
            for i in range(n):
                c = v[i] % q
                r[i] = c
                s[c] += 1
        for i in range(n):
            c = r[i]
            cnt = s[c]
            if cnt > best or (cnt == best and c < best_c):
                best = cnt
                best_c = c
        for i in range(n):
            s[r[i]] = 0
        return best, best_c

    cdef void _reserve(self, Py_ssize_t n):
        if self.res.shape[0] < n:
            self.res = np.zeros(n, dtype=np.int64)

    def best_class(self, values, long long q):
        """(count, c): the largest class of values (mod q), smallest c on ties."""
        cdef long long[::1] v = values
        self._reserve(v.shape[0])
        cdef (long long, long long) out = self._best(v, q)
        return int(out[0]), int(out[1])

    def score_all(self, values, primes):
        """best_class for every prime at once: (counts, classes) arrays."""
        cdef long long[::1] v = values
        cdef long long[::1] ps = primes
        cdef Py_ssize_t i, n = ps.shape[0]
        counts_arr = np.empty(n, dtype=np.int64)
        classes_arr = np.empty(n, dtype=np.int64)
        cdef long long[::1] counts = counts_arr
        cdef long long[::1] classes = classes_arr
        cdef (long long, long long) out
        self._reserve(v.shape[0])
        for i in range(n):
            out = self._best(v, ps[i])
            counts[i] = out[0]
            classes[i] = out[1]
        return counts_arr, classes_arr


def mark_residue_class(flags, long long upper, long long p, long long residue):
    """Clear flags[n] for every n in [1, upper] with n ≡ residue (mod p)."""
    cdef unsigned char[::1] f = flags
    cdef long long start = residue if residue >= 1 else p
    while start <= upper:
        f[start] = 0
        start += p
