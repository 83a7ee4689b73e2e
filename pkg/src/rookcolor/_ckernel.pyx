# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_engine``: generic colouring search and canonical form.

Node accounting and value ordering match the pure-Python engine exactly.
Limits: k <= 62 colours, p and q <= 16.
"""
from libc.stdint cimport uint64_t
from libc.string cimport memset
from libc.time cimport clock_t

import time

DEF MAXK = 64
DEF MAXL = 16
DEF MAXN = 256

cdef enum:
    R_FREQ = 0
    R_MINF = 1
    R_PAIR = 2
    R_COLOUR = 3
    R_SYM = 4
    NRULES = 5

cdef enum:
    RUN_OK = 0
    RUN_DONE = 1
    RUN_BUDGET = 2

MAX_COLOURS = MAXK - 2
MAX_SIDE = MAXL


cdef inline int popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef class CEngine:
    cdef int p, q, k, n, minf, maxf, reach, nused
    cdef int sym, max_solutions
    cdef long long node_budget, nodes
    cdef double deadline
    cdef int grid[MAXN]
    cdef int ord_i[MAXN]
    cdef int ord_j[MAXN]
    cdef uint64_t rowmask[MAXL]
    cdef uint64_t colmask[MAXL]
    cdef int row_filled[MAXL]
    cdef int col_filled[MAXL]
    cdef uint64_t freerow[MAXL]
    cdef uint64_t rows_of[MAXK]
    cdef uint64_t cols_of[MAXK]
    cdef int cnt[MAXK]
    cdef int cap[MAXK]
    cdef int need[MAXK]
    cdef int prio[MAXK]
    cdef int covdeg[MAXK]
    cdef int pair[MAXK * MAXK]
    cdef int at_least[MAXL + 2]
    cdef int max_at_least[MAXL + 2]
    cdef int newcount[MAXL]
    cdef long long uncovered, slots
    cdef int deficit
    cdef long long prunes[NRULES]
    cdef list solutions

    def __init__(self, int p, int q, int k, int min_freq, int max_freq, max_at_least,
                 prio, symmetry=True, long long node_budget=0, double deadline=0.0,
                 int max_solutions=1):
        if k > MAXK - 2 or p > MAXL or q > MAXL:
            raise ValueError("instance exceeds compiled kernel limits")
        cdef int t, c, l
        self.p = p
        self.q = q
        self.k = k
        self.n = p * q
        self.minf = min_freq
        self.maxf = max_freq
        self.reach = p + q - 2
        self.sym = 1 if symmetry else 0
        self.node_budget = node_budget
        self.deadline = deadline
        self.max_solutions = max_solutions
        self.nodes = 0
        self.nused = 0
        memset(self.grid, 0, sizeof(self.grid))
        memset(self.rowmask, 0, sizeof(self.rowmask))
        memset(self.colmask, 0, sizeof(self.colmask))
        memset(self.row_filled, 0, sizeof(self.row_filled))
        memset(self.col_filled, 0, sizeof(self.col_filled))
        memset(self.rows_of, 0, sizeof(self.rows_of))
        memset(self.cols_of, 0, sizeof(self.cols_of))
        memset(self.cnt, 0, sizeof(self.cnt))
        memset(self.covdeg, 0, sizeof(self.covdeg))
        memset(self.pair, 0, sizeof(self.pair))
        memset(self.at_least, 0, sizeof(self.at_least))
        memset(self.max_at_least, 0, sizeof(self.max_at_least))
        memset(self.newcount, 0, sizeof(self.newcount))
        memset(self.prunes, 0, sizeof(self.prunes))
        for t in range(self.n):
            self.ord_i[t] = t % p
            self.ord_j[t] = t // p
        for t in range(p):
            self.freerow[t] = ((<uint64_t>1) << q) - 1
        for c in range(k + 1):
            self.cap[c] = max_freq
            self.need[c] = min_freq
            self.prio[c] = prio[c]
        for l in range(min(len(max_at_least), MAXL + 2)):
            self.max_at_least[l] = max_at_least[l]
        self.uncovered = k * (k - 1) // 2
        self.slots = p * q * (q - 1) // 2 + q * p * (p - 1) // 2
        self.deficit = k * min_freq
        self.solutions = []

    cdef inline void _touch(self, int c, int d):
        cdef int k1 = self.k + 1
        if self.pair[c * k1 + d] == 0:
            self.covdeg[c] += 1
            self.covdeg[d] += 1
            self.uncovered -= 1
        self.pair[c * k1 + d] += 1
        self.pair[d * k1 + c] += 1

    cdef inline void _untouch(self, int c, int d):
        cdef int k1 = self.k + 1
        self.pair[c * k1 + d] -= 1
        self.pair[d * k1 + c] -= 1
        if self.pair[c * k1 + d] == 0:
            self.covdeg[c] -= 1
            self.covdeg[d] -= 1
            self.uncovered += 1

    cdef void assign(self, int i, int j, int c):
        cdef int jj, ii, d, q = self.q
        for jj in range(q):
            d = self.grid[i * q + jj]
            if d:
                self._touch(c, d)
        for ii in range(self.p):
            d = self.grid[ii * q + j]
            if d:
                self._touch(c, d)
        self.slots -= self.row_filled[i] + self.col_filled[j]
        self.grid[i * q + j] = c
        self.rowmask[i] |= (<uint64_t>1) << c
        self.colmask[j] |= (<uint64_t>1) << c
        self.row_filled[i] += 1
        self.col_filled[j] += 1
        self.freerow[i] &= ~((<uint64_t>1) << j)
        self.rows_of[c] |= (<uint64_t>1) << i
        self.cols_of[c] |= (<uint64_t>1) << j
        if self.cnt[c] < self.need[c]:
            self.deficit -= 1
        self.cnt[c] += 1
        self.at_least[self.cnt[c]] += 1
        if c > self.nused:
            self.nused = c
        if c > self.p:
            self.newcount[j] += 1

    cdef void unassign(self, int i, int j, int c, bint was_new):
        cdef int jj, ii, d, q = self.q
        if c > self.p:
            self.newcount[j] -= 1
        if was_new:
            self.nused = c - 1
        self.at_least[self.cnt[c]] -= 1
        self.cnt[c] -= 1
        if self.cnt[c] < self.need[c]:
            self.deficit += 1
        self.rows_of[c] &= ~((<uint64_t>1) << i)
        self.cols_of[c] &= ~((<uint64_t>1) << j)
        self.freerow[i] |= (<uint64_t>1) << j
        self.row_filled[i] -= 1
        self.col_filled[j] -= 1
        self.rowmask[i] &= ~((<uint64_t>1) << c)
        self.colmask[j] &= ~((<uint64_t>1) << c)
        self.grid[i * q + j] = 0
        self.slots += self.row_filled[i] + self.col_filled[j]
        for jj in range(q):
            d = self.grid[i * q + jj]
            if d:
                self._untouch(c, d)
        for ii in range(self.p):
            d = self.grid[ii * q + j]
            if d:
                self._untouch(c, d)

    cdef bint colour_ok(self, int d):
        cdef int missing, room, free, i
        cdef uint64_t rows, cols
        if self.cnt[d] == 0:
            return True
        missing = self.k - 1 - self.covdeg[d]
        room = (self.cap[d] - self.cnt[d]) * self.reach
        if missing <= room:
            return True
        rows = self.rows_of[d]
        cols = self.cols_of[d]
        free = 0
        for i in range(self.p):
            if (rows >> i) & 1:
                free += popcount(self.freerow[i])
            else:
                free += popcount(self.freerow[i] & cols)
        return missing <= room + free

    cdef int check(self, int t, int i, int j, int c):
        cdef int jj, ii, d, q = self.q
        if self.at_least[self.cnt[c]] > self.max_at_least[self.cnt[c]]:
            return R_FREQ
        if self.deficit > self.n - t - 1:
            return R_MINF
        if self.uncovered > self.slots:
            return R_PAIR
        if not self.colour_ok(c):
            return R_COLOUR
        for jj in range(q):
            d = self.grid[i * q + jj]
            if d and d != c and not self.colour_ok(d):
                return R_COLOUR
        for ii in range(self.p):
            d = self.grid[ii * q + j]
            if d and d != c and not self.colour_ok(d):
                return R_COLOUR
        return -1

    cdef bint symmetry_ok(self, int i, int j, int c):
        if not self.sym or j == 0 or c <= self.p:
            return True
        if j == 1:
            return self.newcount[1] == self.col_filled[1]
        return self.newcount[j] + 1 <= self.newcount[j - 1]

    cdef int candidates(self, int i, int j, int* out):
        cdef uint64_t banned = self.rowmask[i] | self.colmask[j]
        cdef int c, m = 0, a, b, key_c, key_b, x
        for c in range(1, self.nused + 1):
            if not ((banned >> c) & 1) and self.cnt[c] < self.cap[c]:
                # insertion sort on (missing partners, prio)
                a = m
                key_c = self.k - 1 - self.covdeg[c]
                while a > 0:
                    b = out[a - 1]
                    key_b = self.k - 1 - self.covdeg[b]
                    if key_b < key_c or (key_b == key_c and self.prio[b] < self.prio[c]):
                        break
                    out[a] = b
                    a -= 1
                out[a] = c
                m += 1
        if self.nused < self.k:
            out[m] = self.nused + 1
            m += 1
        return m

    cdef int replay(self, prefix) except -1:
        cdef int t, c, i, j
        for t in range(len(prefix)):
            c = prefix[t]
            i = self.ord_i[t]
            j = self.ord_j[t]
            if ((self.rowmask[i] | self.colmask[j]) >> c) & 1 or c > self.nused + 1:
                return 0
            if self.cnt[c] >= self.cap[c] or not self.symmetry_ok(i, j, c):
                return 0
            self.assign(i, j, c)
            if self.check(t, i, j, c) >= 0:
                return 0
        return 1

    cdef int dfs(self, int t) except -1:
        cdef int cand[MAXK]
        cdef int m, a, c, i, j, rule, res
        cdef bint was_new
        if t == self.n:
            if self.uncovered == 0 and self.nused == self.k:
                self.solutions.append(tuple([self.grid[a] for a in range(self.n)]))
                if self.max_solutions and len(self.solutions) >= self.max_solutions:
                    return RUN_DONE
            return RUN_OK
        i = self.ord_i[t]
        j = self.ord_j[t]
        m = self.candidates(i, j, cand)
        for a in range(m):
            c = cand[a]
            if not self.symmetry_ok(i, j, c):
                self.prunes[R_SYM] += 1
                continue
            was_new = c > self.nused
            self.assign(i, j, c)
            rule = self.check(t, i, j, c)
            if rule >= 0:
                self.prunes[rule] += 1
                res = RUN_OK
            else:
                self.nodes += 1
                if self.node_budget and self.nodes > self.node_budget:
                    res = RUN_BUDGET
                elif self.deadline and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
                    res = RUN_BUDGET
                else:
                    res = self.dfs(t + 1)
            self.unassign(i, j, c, was_new)
            if res != RUN_OK:
                return res
        return RUN_OK

    def run(self, prefix=()):
        cdef int res
        status = 1
        if self.k > self.n or max(self.p, self.q) > self.k:
            return status, self.solutions, self.nodes, [0] * NRULES
        res = RUN_OK
        if self.replay(prefix):
            res = self.dfs(len(prefix))
        if res == RUN_BUDGET:
            status = 2
        elif res == RUN_DONE or self.solutions:
            status = 0
        return status, self.solutions, self.nodes, [self.prunes[a] for a in range(NRULES)]


# --- canonical form ----------------------------------------------------------

cdef class _Canon:
    cdef int p, q
    cdef int cells[MAXN]
    cdef int sigma[MAXL]
    cdef int best[MAXN]
    cdef int best_rho[MAXL]
    cdef int best_label[MAXN + 1]
    cdef bint have_best, improved
    cdef int flat[MAXN]
    cdef int rho[MAXL]
    cdef int used[MAXL]
    cdef int label[MAXN + 1]

    cdef void rec(self, int depth, int nxt):
        cdef int p = self.p, q = self.q
        cdef int rows[MAXL]
        cdef int vals[MAXL * MAXL]
        cdef int nexts[MAXL]
        cdef int order[MAXL]
        cdef int m = 0, r, j, x, y, n, a, b, cmp, o, pos
        cdef int lo = depth * q
        if depth == p:
            if not self.have_best or self._cmp(self.flat, self.best, p * q) < 0:
                for a in range(p * q):
                    self.best[a] = self.flat[a]
                for a in range(p):
                    self.best_rho[a] = self.rho[a]
                for a in range(MAXN + 1):
                    self.best_label[a] = self.label[a]
                self.have_best = True
                self.improved = True
            return
        # relabel every unused row given the labels so far
        for r in range(p):
            if self.used[r]:
                continue
            n = nxt
            for j in range(q):
                x = self.cells[r * q + self.sigma[j]]
                y = self.label[x]
                if y == 0:
                    # colours new in this row: number by position among earlier new ones
                    y = 0
                    for b in range(j):
                        if self.cells[r * q + self.sigma[b]] == x:
                            y = vals[m * q + b]
                            break
                    if y == 0:
                        y = n
                        n += 1
                vals[m * q + j] = y
            rows[m] = r
            nexts[m] = n
            order[m] = m
            m += 1
        # sort options by relabelled row
        for a in range(1, m):
            o = order[a]
            b = a
            while b > 0 and self._cmp(&vals[order[b - 1] * q], &vals[o * q], q) > 0:
                order[b] = order[b - 1]
                b -= 1
            order[b] = o
        for a in range(m):
            o = order[a]
            if self.have_best:
                cmp = self._cmp(self.flat, self.best, lo)
                if cmp == 0:
                    cmp = self._cmp(&vals[o * q], &self.best[lo], q)
                if cmp > 0:
                    break
            r = rows[o]
            for j in range(q):
                self.flat[lo + j] = vals[o * q + j]
                x = self.cells[r * q + self.sigma[j]]
                if self.label[x] == 0:
                    self.label[x] = vals[o * q + j]
            self.used[r] = 1
            self.rho[depth] = r
            self.rec(depth + 1, nexts[o])
            self.used[r] = 0
            for j in range(q):
                x = self.cells[r * q + self.sigma[j]]
                if self.label[x] >= nxt:
                    self.label[x] = 0

    cdef inline int _cmp(self, int* a, int* b, int n):
        cdef int t
        for t in range(n):
            if a[t] != b[t]:
                return -1 if a[t] < b[t] else 1
        return 0


def canonical(cells, int p, int q):
    """See ``_engine.canonical``; identical results."""
    from itertools import permutations
    if p > MAXL or q > MAXL or p * q > MAXN:
        raise ValueError("matrix exceeds compiled kernel limits")
    cdef _Canon cn = _Canon()
    cdef int a, j
    cn.p = p
    cn.q = q
    for a in range(p * q):
        cn.cells[a] = cells[a]
        if cells[a] < 1 or cells[a] > MAXN:
            raise ValueError("canonical form needs a total matrix")
    cn.have_best = False
    best_sigma = None
    memset(cn.label, 0, sizeof(cn.label))
    memset(cn.used, 0, sizeof(cn.used))
    for sigma in permutations(range(q)):
        for j in range(q):
            cn.sigma[j] = sigma[j]
        cn.improved = False
        cn.rec(0, 1)
        if cn.improved:
            best_sigma = sigma
    flat = tuple([cn.best[a] for a in range(p * q)])
    rho = tuple([cn.best_rho[a] for a in range(p)])
    pi = {x: cn.best_label[x] for x in set(cells)}
    return flat, rho, tuple(best_sigma), pi
