# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for packed-monomial arithmetic.

Same contracts as :mod:`fglschur._pykernels`.  ``mul_terms`` re-packs the
operands into fixed-width 256-bit keys over the variable slots actually in use,
clears denominators, and accumulates integer products in 128-bit cells of an
open-addressing table.  Inputs that do not fit (more than 31 live slots or
coefficients beyond 62 bits after clearing denominators, or products whose
accumulated size could leave 127 bits) take the generic path.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memset

from gmpy2 import mpq
import gmpy2

from fglschur import _pykernels

FGL_ACC_LIMIT = 1 << 126
SMALL_WORK = 512

cdef extern from *:
    """
    typedef __int128 fgl_i128;
    static inline fgl_i128 fgl_mul64(long long a, long long b) {
        return (fgl_i128)a * (fgl_i128)b;
    }
    static inline long long fgl_hi(fgl_i128 v) { return (long long)(v >> 64); }
    static inline unsigned long long fgl_lo(fgl_i128 v) { return (unsigned long long)v; }
    static inline int fgl_nonzero(fgl_i128 v) { return v != 0; }
    static inline unsigned long long fgl_mix(unsigned long long a, unsigned long long b,
                                             unsigned long long c, unsigned long long d) {
        unsigned long long h = a * 0x9E3779B97F4A7C15ULL;
        h ^= (b + 0x632BE59BD9B4E019ULL) * 0xC2B2AE3D27D4EB4FULL;
        h ^= (c + 0x165667B19E3779F9ULL) * 0x94D049BB133111EBULL;
        h ^= (d + 0x27D4EB2F165667C5ULL) * 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 31;
        return h;
    }
    static const unsigned long long FGL_GUARDW = 0x8080808080808080ULL;
    static const long long FGL_LIMIT = 1LL << 62;
    """
    ctypedef struct fgl_i128:
        pass
    fgl_i128 fgl_mul64(long long a, long long b) nogil
    long long fgl_hi(fgl_i128 v) nogil
    unsigned long long fgl_lo(fgl_i128 v) nogil
    int fgl_nonzero(fgl_i128 v) nogil
    unsigned long long fgl_mix(unsigned long long a, unsigned long long b,
                               unsigned long long c, unsigned long long d) nogil
    const unsigned long long FGL_GUARDW
    const long long FGL_LIMIT

cdef extern from *:
    """
    typedef struct {
        unsigned long long k0, k1, k2, k3;
        __int128 acc;
        int used;
    } fgl_cell;
    static inline void fgl_cell_add(fgl_cell *c, long long a, long long b) {
        c->acc += (__int128)a * (__int128)b;
    }
    static inline __int128 fgl_cell_acc(fgl_cell *c) { return c->acc; }
    """
    ctypedef struct fgl_cell:
        unsigned long long k0
        unsigned long long k1
        unsigned long long k2
        unsigned long long k3
        int used
    void fgl_cell_add(fgl_cell *c, long long a, long long b) nogil
    fgl_i128 fgl_cell_acc(fgl_cell *c) nogil

cdef enum:
    NW = 4
    MAXSLOTS = 31


cdef class _Table:
    cdef fgl_cell *cells
    cdef size_t cap
    cdef size_t count

    def __cinit__(self, size_t cap):
        self.cap = 16
        while self.cap < cap:
            self.cap <<= 1
        self.cells = <fgl_cell *> calloc(self.cap, sizeof(fgl_cell))
        self.count = 0
        if self.cells == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.cells)

    cdef fgl_cell *slot(self, unsigned long long k0, unsigned long long k1,
                        unsigned long long k2, unsigned long long k3):
        cdef size_t mask = self.cap - 1
        cdef size_t i = fgl_mix(k0, k1, k2, k3) & mask
        cdef fgl_cell *c
        while True:
            c = &self.cells[i]
            if not c.used:
                c.used = 1
                c.k0 = k0
                c.k1 = k1
                c.k2 = k2
                c.k3 = k3
                self.count += 1
                return c
            if c.k0 == k0 and c.k1 == k1 and c.k2 == k2 and c.k3 == k3:
                return c
            i = (i + 1) & mask

    cdef void grow(self) except *:
        cdef size_t oldcap = self.cap
        cdef fgl_cell *old = self.cells
        cdef size_t i, j, mask
        self.cap = oldcap * 2
        self.cells = <fgl_cell *> calloc(self.cap, sizeof(fgl_cell))
        if self.cells == NULL:
            self.cells = old
            self.cap = oldcap
            raise MemoryError()
        mask = self.cap - 1
        for i in range(oldcap):
            if old[i].used:
                j = fgl_mix(old[i].k0, old[i].k1, old[i].k2, old[i].k3) & mask
                while self.cells[j].used:
                    j = (j + 1) & mask
                self.cells[j] = old[i]
        free(old)


cdef object _i128_to_int(fgl_i128 v):
    cdef long long hi = fgl_hi(v)
    cdef unsigned long long lo = fgl_lo(v)
    return (int(hi) << 64) + int(lo)


def _pack_operand(dict terms, list local_of, int nbytes, object den):
    """Return (keys, coeffs, degrees) C-friendly lists or None if coefficients are too large."""
    cdef Py_ssize_t n = len(terms)
    cdef list keys = []
    cdef list coeffs = []
    cdef object mono, c, scaled
    cdef bytes raw
    cdef int s, j
    cdef unsigned long long w[NW]
    for mono, c in terms.items():
        scaled = c * den
        if scaled.denominator != 1:
            return None
        scaled = int(scaled.numerator)
        if scaled >= FGL_LIMIT or scaled <= -FGL_LIMIT:
            return None
        raw = mono.to_bytes(nbytes, "little")
        w[0] = raw[0]
        w[1] = 0
        w[2] = 0
        w[3] = 0
        for s in range(1, nbytes):
            if raw[s]:
                j = local_of[s]
                w[j >> 3] |= (<unsigned long long> raw[s]) << (8 * (j & 7))
        keys.append((w[0], w[1], w[2], w[3]))
        coeffs.append(scaled)
    return keys, coeffs


def mul_terms(dict a, dict b, int cutoff, object guard):
    """Truncated product of two term dicts (see ``_pykernels.mul_terms``)."""
    if not a or not b:
        return {}
    if len(a) * len(b) < SMALL_WORK:
        # re-packing costs more than it saves on tiny operands
        return _pykernels.mul_terms(a, b, cutoff, guard)
    cdef object union = 0
    cdef object mono
    for mono in a:
        union |= mono
    for mono in b:
        union |= mono
    cdef int nbytes = max((union.bit_length() + 7) // 8, 1)
    cdef bytes ub = union.to_bytes(nbytes, "little")
    cdef list local_of = [0] * nbytes
    cdef list global_of = [0]
    cdef int s, nslots = 0
    for s in range(1, nbytes):
        if ub[s]:
            nslots += 1
            local_of[s] = nslots
            global_of.append(s)
    if nslots > MAXSLOTS:
        return _pykernels.mul_terms(a, b, cutoff, guard)
    da = gmpy2.mpz(1)
    for c in a.values():
        da = gmpy2.lcm(da, c.denominator)
    db = gmpy2.mpz(1)
    for c in b.values():
        db = gmpy2.lcm(db, c.denominator)
    pa = _pack_operand(a, local_of, nbytes, da)
    pb = _pack_operand(b, local_of, nbytes, db)
    if pa is None or pb is None:
        return _pykernels.mul_terms(a, b, cutoff, guard)
    # every cell sums at most min(na, nb) products; keep the sum inside 127 bits
    bound = max(abs(v) for v in pa[1]) * max(abs(v) for v in pb[1]) * min(len(pa[1]), len(pb[1]))
    if bound >= FGL_ACC_LIMIT:
        return _pykernels.mul_terms(a, b, cutoff, guard)
    cdef list ka = pa[0], ca = pa[1], kb = pb[0], cb = pb[1]
    cdef Py_ssize_t na = len(ka), nb = len(kb), i, j, t
    # C arrays, b sorted by degree
    cdef unsigned long long *A = <unsigned long long *> malloc(na * NW * sizeof(unsigned long long))
    cdef long long *AC = <long long *> malloc(na * sizeof(long long))
    cdef unsigned long long *B = <unsigned long long *> malloc(nb * NW * sizeof(unsigned long long))
    cdef long long *BC = <long long *> malloc(nb * sizeof(long long))
    cdef Py_ssize_t *ends = <Py_ssize_t *> malloc((cutoff + 2) * sizeof(Py_ssize_t))
    if A == NULL or AC == NULL or B == NULL or BC == NULL or ends == NULL:
        free(A); free(AC); free(B); free(BC); free(ends)
        raise MemoryError()
    cdef list order = sorted(range(nb), key=lambda q: kb[q][0] & 0x7F)
    cdef tuple key
    try:
        for i in range(na):
            key = ka[i]
            for t in range(NW):
                A[i * NW + t] = key[t]
            AC[i] = ca[i]
        for i in range(nb):
            j = order[i]
            key = kb[j]
            for t in range(NW):
                B[i * NW + t] = key[t]
            BC[i] = cb[j]
        j = 0
        for i in range(cutoff + 1):
            while j < nb and <int>(B[j * NW] & 0x7F) <= i:
                j += 1
            ends[i] = j
        table = _Table(2 * (na + nb) + 16)
        _mul_loop(<_Table> table, A, AC, na, B, BC, ends, cutoff)
    finally:
        free(A); free(AC); free(B); free(BC); free(ends)
    return _unpack(<_Table> table, global_of, nbytes, da * db)


cdef int _mul_loop(_Table table, unsigned long long *A, long long *AC, Py_ssize_t na,
                   unsigned long long *B, long long *BC, Py_ssize_t *ends, int cutoff) except -1:
    cdef Py_ssize_t i, j, lim
    cdef int room
    cdef unsigned long long k0, k1, k2, k3
    cdef fgl_cell *c
    for i in range(na):
        room = cutoff - <int>(A[i * NW] & 0x7F)
        if room < 0:
            continue
        lim = ends[room]
        for j in range(lim):
            k0 = A[i * NW] + B[j * NW]
            k1 = A[i * NW + 1] + B[j * NW + 1]
            k2 = A[i * NW + 2] + B[j * NW + 2]
            k3 = A[i * NW + 3] + B[j * NW + 3]
            if (k0 | k1 | k2 | k3) & FGL_GUARDW:
                raise OverflowError("exponent overflow in packed monomial")
            if table.count * 2 >= table.cap:
                table.grow()
            c = table.slot(k0, k1, k2, k3)
            fgl_cell_add(c, AC[i], BC[j])
    return 0


cdef dict _unpack(_Table table, list global_of, int nbytes, object den):
    cdef dict out = {}
    cdef size_t i
    cdef int j, e, nloc = len(global_of) - 1
    cdef fgl_cell *c
    cdef unsigned long long w[NW]
    cdef fgl_i128 acc
    cdef bytearray raw
    one = den == 1
    for i in range(table.cap):
        c = &table.cells[i]
        if not c.used:
            continue
        acc = fgl_cell_acc(c)
        if not fgl_nonzero(acc):
            continue
        w[0] = c.k0
        w[1] = c.k1
        w[2] = c.k2
        w[3] = c.k3
        raw = bytearray(nbytes)
        raw[0] = w[0] & 0x7F
        for j in range(1, nloc + 1):
            e = (w[j >> 3] >> (8 * (j & 7))) & 0xFF
            if e:
                raw[global_of[j]] = e
        mono = int.from_bytes(raw, "little")
        val = _i128_to_int(acc)
        out[mono] = mpq(val) if one else mpq(val, den)
    return out


def add_terms(dict a, dict b, int sign):
    cdef dict out = dict(a)
    cdef object mono, c, old
    if sign > 0:
        for mono, c in b.items():
            old = out.get(mono)
            out[mono] = c if old is None else old + c
    else:
        for mono, c in b.items():
            old = out.get(mono)
            out[mono] = -c if old is None else old - c
    return {mono: c for mono, c in out.items() if c}


def truncate_terms(dict a, int cutoff):
    cdef object mono
    return {mono: c for mono, c in a.items() if (mono & 0x7F) <= cutoff}
