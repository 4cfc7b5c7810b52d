# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; mirrors ``_pykernels`` function for function."""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset
import time

STATUS_COMPLETE = 0
STATUS_NODE_LIMIT = 1
STATUS_DEADLINE = 2

PRUNE_REASONS = (
    "class_budget",
    "capacity",
    "unreachable_difference",
    "forced_inclusion",
    "canonical_prefix",
    "noncanonical",
    "profile_mismatch",
)
DEF NREASONS = 7
DEF P_BUDGET = 0
DEF P_CAPACITY = 1
DEF P_UNREACHABLE = 2
DEF P_FORCED = 3
DEF P_PREFIX = 4
DEF P_NONCANON = 5
DEF P_MISMATCH = 6

BACKEND = "cython"


def weight_counts(int n, members):
    cdef int i, j, k = len(members)
    cdef int* m = <int*>malloc(max(k, 1) * sizeof(int))
    counts = [0] * n
    cdef int* c = <int*>calloc(n, sizeof(int))
    try:
        for i in range(k):
            m[i] = members[i]
        for i in range(k):
            for j in range(k):
                c[((m[i] - m[j]) % n + n) % n] += 1
        for i in range(n):
            counts[i] = c[i]
    finally:
        free(m)
        free(c)
    return counts


cdef int _canon_cmp(int n, int k, int* members, int* mult, int nmult,
                    char* mask, int* best, int* cand) noexcept:
    """Fill ``best`` with the canonical image; return 1 if it equals members."""
    cdef int ui, ai, i, j, u, a, x, have = 0, better
    for ui in range(nmult):
        u = mult[ui]
        for ai in range(k):
            a = (<long long>u * members[ai]) % n
            memset(mask, 0, n)
            for i in range(k):
                x = (<long long>u * members[i]) % n
                mask[((x - a) % n + n) % n] = 1
            j = 0
            for i in range(n):
                if mask[i]:
                    cand[j] = i
                    j += 1
            if not have:
                better = 1
            else:
                better = 0
                for i in range(k):
                    if cand[i] != best[i]:
                        better = cand[i] < best[i]
                        break
            if better:
                for i in range(k):
                    best[i] = cand[i]
                have = 1
    for i in range(k):
        if best[i] != members[i]:
            return 0
    return 1


def canonical_members(int n, members, multipliers):
    cdef int k = len(members), nm = len(multipliers), i
    cdef int* m = <int*>malloc(max(k, 1) * sizeof(int))
    cdef int* mu = <int*>malloc(max(nm, 1) * sizeof(int))
    cdef int* best = <int*>malloc(max(k, 1) * sizeof(int))
    cdef int* cand = <int*>malloc(max(k, 1) * sizeof(int))
    cdef char* mask = <char*>malloc(n)
    try:
        for i in range(k):
            m[i] = members[i]
        for i in range(nm):
            mu[i] = multipliers[i]
        _canon_cmp(n, k, m, mu, nm, mask, best, cand)
        return [best[i] for i in range(k)]
    finally:
        free(m); free(mu); free(best); free(cand); free(mask)


cdef class _Search:
    cdef int n, size, k, prune, nmult, first_diff, trace_limit, status
    cdef long long nodes, budget
    cdef double deadline
    cdef int* target
    cdef int* cnt
    cdef int* members
    cdef int* inc
    cdef int* total
    cdef int* slack
    cdef char* is_avail
    cdef int* childbuf
    cdef int* mult
    cdef int* best
    cdef int* cand
    cdef char* mask
    cdef long long prunes[NREASONS]
    cdef list found
    cdef list trace

    def __cinit__(self, int n, int size):
        self.n = n
        self.size = size
        self.target = <int*>calloc(n, sizeof(int))
        self.cnt = <int*>calloc(n, sizeof(int))
        self.members = <int*>calloc(size + 1, sizeof(int))
        self.inc = <int*>calloc(n, sizeof(int))
        self.total = <int*>calloc(n, sizeof(int))
        self.slack = <int*>calloc(n, sizeof(int))
        self.is_avail = <char*>calloc(n, 1)
        self.childbuf = <int*>calloc(<size_t>(size + 1) * n, sizeof(int))
        self.mult = <int*>calloc(n + 1, sizeof(int))
        self.best = <int*>calloc(size + 1, sizeof(int))
        self.cand = <int*>calloc(size + 1, sizeof(int))
        self.mask = <char*>calloc(n, 1)

    def __dealloc__(self):
        free(self.target); free(self.cnt); free(self.members); free(self.inc)
        free(self.total); free(self.slack); free(self.is_avail); free(self.childbuf)
        free(self.mult); free(self.best); free(self.cand); free(self.mask)

    cdef void add(self, int c, int sign) noexcept:
        cdef int i, m, n = self.n
        for i in range(self.k):
            m = self.members[i]
            self.cnt[((c - m) % n + n) % n] += sign
            self.cnt[((m - c) % n + n) % n] += sign
        self.cnt[0] += sign

    cdef int node(self, int split, int* nchildren) except -1:
        """Process one node; returns 1 on abort.  With ``split`` the
        children are left in childbuf[k*n ...] and counted in nchildren."""
        cdef int n = self.n, k = self.k, r, last, c, i, j, m, d1, d2, y
        cdef int navail, nover, deficit, nreq, bound, nchild, lo, hi, ff
        cdef int* av
        cdef int dummy
        nchildren[0] = 0
        if self.nodes >= self.budget:
            self.status = STATUS_NODE_LIMIT
            return 1
        if self.deadline > 0 and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            self.status = STATUS_DEADLINE
            return 1
        self.nodes += 1
        r = self.size - k
        if r == 0:
            for i in range(n):
                if self.cnt[i] != self.target[i]:
                    self.prunes[P_MISMATCH] += 1
                    return 0
            if not _canon_cmp(n, k, self.members, self.mult, self.nmult,
                              self.mask, self.best, self.cand):
                self.prunes[P_NONCANON] += 1
            else:
                self.found.append(tuple([self.members[i] for i in range(k)]))
            return 0
        last = self.members[k - 1]
        av = self.childbuf + <size_t>k * n
        navail = 0
        lo = last + 1
        hi = n
        if not self.prune:
            for c in range(lo, hi):
                av[navail] = c
                navail += 1
            nchild = navail
        else:
            for c in range(lo, hi):
                for i in range(k):
                    m = self.members[i]
                    self.inc[((c - m) % n + n) % n] += 1
                    self.inc[((m - c) % n + n) % n] += 1
                nover = 0
                for i in range(k):
                    m = self.members[i]
                    d1 = ((c - m) % n + n) % n
                    d2 = ((m - c) % n + n) % n
                    if self.cnt[d1] + self.inc[d1] > self.target[d1] or \
                       self.cnt[d2] + self.inc[d2] > self.target[d2]:
                        nover = 1
                        break
                if nover:
                    self.prunes[P_BUDGET] += 1
                    if r == 1 and len(self.trace) < self.trace_limit:
                        over = {}
                        for i in range(k):
                            m = self.members[i]
                            for d1 in (((c - m) % n + n) % n, ((m - c) % n + n) % n):
                                if self.cnt[d1] + self.inc[d1] > self.target[d1]:
                                    over[d1] = self.cnt[d1] + self.inc[d1]
                        self.trace.append((tuple([self.members[i] for i in range(k)]) + (c,),
                                           tuple(sorted(over.items()))))
                else:
                    av[navail] = c
                    navail += 1
                for i in range(k):
                    m = self.members[i]
                    self.inc[((c - m) % n + n) % n] = 0
                    self.inc[((m - c) % n + n) % n] = 0
            if navail < r:
                self.prunes[P_CAPACITY] += 1
                return 0
            memset(self.is_avail, 0, n)
            for j in range(navail):
                self.is_avail[av[j]] = 1
            memset(self.total, 0, n * sizeof(int))
            for j in range(navail):
                c = av[j]
                for i in range(k):
                    m = self.members[i]
                    self.total[((c - m) % n + n) % n] += 1
                    self.total[((m - c) % n + n) % n] += 1
            nreq = 0
            for y in range(n):
                self.slack[y] = -1
            for y in range(1, n):
                deficit = self.target[y] - self.cnt[y]
                if deficit <= 0:
                    continue
                ff = 0
                if r >= 2:
                    for j in range(navail):
                        if self.is_avail[(av[j] + y) % n]:
                            ff = 1
                            break
                if ff:
                    continue
                if self.total[y] < deficit:
                    self.prunes[P_UNREACHABLE] += 1
                    return 0
                self.slack[y] = self.total[y] - deficit
                nreq = 1
            bound = n
            if nreq:
                nreq = 0
                for j in range(navail):
                    c = av[j]
                    for i in range(k):
                        m = self.members[i]
                        self.inc[((c - m) % n + n) % n] += 1
                        self.inc[((m - c) % n + n) % n] += 1
                    ff = 0
                    for i in range(k):
                        m = self.members[i]
                        d1 = ((c - m) % n + n) % n
                        d2 = ((m - c) % n + n) % n
                        if (self.slack[d1] >= 0 and self.inc[d1] > self.slack[d1]) or \
                           (self.slack[d2] >= 0 and self.inc[d2] > self.slack[d2]):
                            ff = 1
                            break
                    for i in range(k):
                        m = self.members[i]
                        self.inc[((c - m) % n + n) % n] = 0
                        self.inc[((m - c) % n + n) % n] = 0
                    if ff:
                        if nreq == 0:
                            bound = c
                        nreq += 1
                if nreq > r:
                    self.prunes[P_FORCED] += 1
                    return 0
            nchild = 0
            for j in range(navail):
                if av[j] <= bound:
                    nchild += 1
            if nchild < navail:
                self.prunes[P_FORCED] += navail - nchild
            if k == 1:
                ff = 0
                for j in range(nchild):
                    if av[j] == self.first_diff:
                        ff = 1
                if ff:
                    av[0] = self.first_diff
                if nchild > ff:
                    self.prunes[P_PREFIX] += 1
                nchild = ff
        if split:
            nchildren[0] = nchild
            return 0
        for j in range(nchild):
            c = av[j]
            self.add(c, 1)
            self.members[k] = c
            self.k = k + 1
            if self.node(0, &dummy):
                self.k = k
                self.add(c, -1)
                return 1
            self.k = k
            self.add(c, -1)
        return 0


def explore(int n, target, int size, prefix, long long budget, prune, split,
            int trace_limit, multipliers, double deadline):
    if len(prefix) > size or len(prefix) == 0:
        raise ValueError("prefix must be nonempty and no larger than size")
    cdef _Search st = _Search(n, size)
    cdef int i, nchild = 0, aborted
    for i in range(n):
        st.target[i] = target[i]
    st.k = 0
    for c in sorted(prefix):
        st.add(c, 1)
        st.members[st.k] = c
        st.k += 1
    st.budget = budget
    st.nodes = 0
    st.prune = 1 if prune else 0
    for i in range(NREASONS):
        st.prunes[i] = 0
    st.found = []
    st.trace = []
    st.trace_limit = trace_limit
    st.nmult = len(multipliers)
    for i in range(st.nmult):
        st.mult[i] = multipliers[i]
    st.deadline = deadline
    st.status = STATUS_COMPLETE
    st.first_diff = -1
    for i in range(1, n):
        if st.target[i] > 0:
            st.first_diff = i
            break
    aborted = st.node(1 if split else 0, &nchild)
    children = None
    if split:
        if aborted:
            children = []
        else:
            off = st.k * n
            children = [st.childbuf[off + i] for i in range(nchild)]
    return (st.status, st.found, st.nodes, [st.prunes[i] for i in range(NREASONS)],
            children, st.trace)
