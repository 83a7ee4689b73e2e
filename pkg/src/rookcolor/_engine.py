"""Pure-Python search and canonicalization kernels.

This module is the reference implementation; ``_ckernel.pyx`` mirrors the
generic search and the canonicalizer with identical node accounting, so both
backends report the same node counts for the same inputs.

Cells are visited in column-major order.  Colours are 1..k; 0 is empty.
"""
from __future__ import annotations

import random
import time
from itertools import permutations

FOUND, EXHAUSTED, BUDGET = 0, 1, 2

# prune-rule counters, shared with the compiled kernel
RULES = ("freq-cap", "min-freq", "pair-potential", "colour-potential", "symmetry")
R_FREQ, R_MINF, R_PAIR, R_COLOUR, R_SYM = range(5)


def _popcount(x: int) -> int:
    return bin(x).count("1")


class Engine:
    """Depth-first search for proper complete k-colourings of a p x q grid."""

    def __init__(self, p, q, k, min_freq, max_freq, max_at_least, prio,
                 symmetry=True, node_budget=0, deadline=0.0, max_solutions=1):
        self.p, self.q, self.k = p, q, k
        self.n = p * q
        self.minf, self.maxf = min_freq, max_freq
        self.max_at_least = list(max_at_least)
        self.prio = list(prio)
        self.sym = symmetry
        self.node_budget = node_budget
        self.deadline = deadline
        self.max_solutions = max_solutions

        self.grid = [0] * self.n  # row-major
        self.order = [(t % p, t // p) for t in range(self.n)]
        self.rowmask = [0] * p
        self.colmask = [0] * q
        self.row_filled = [0] * p
        self.col_filled = [0] * q
        self.freerow = [(1 << q) - 1] * p
        self.rows_of = [0] * (k + 1)
        self.cols_of = [0] * (k + 1)
        self.cnt = [0] * (k + 1)
        self.cap = [max_freq] * (k + 1)
        self.need = [min_freq] * (k + 1)
        self.pair = [0] * ((k + 1) * (k + 1))
        self.covdeg = [0] * (k + 1)
        self.at_least = [0] * (max_freq + 2)
        self.newcount = [0] * q
        self.uncovered = k * (k - 1) // 2
        self.slots = p * q * (q - 1) // 2 + q * p * (p - 1) // 2
        self.deficit = k * min_freq
        self.nused = 0
        self.reach = p + q - 2

        self.nodes = 0
        self.prunes = [0] * len(RULES)
        self.solutions: list[tuple[int, ...]] = []
        self.status = EXHAUSTED

    # -- incremental state ----------------------------------------------------

    def assign(self, i, j, c):
        p, q, k1 = self.p, self.q, self.k + 1
        grid, pair, covdeg = self.grid, self.pair, self.covdeg
        base = c * k1
        for jj in range(q):
            d = grid[i * q + jj]
            if d:
                if pair[base + d] == 0:
                    covdeg[c] += 1
                    covdeg[d] += 1
                    self.uncovered -= 1
                pair[base + d] += 1
                pair[d * k1 + c] += 1
        for ii in range(p):
            d = grid[ii * q + j]
            if d:
                if pair[base + d] == 0:
                    covdeg[c] += 1
                    covdeg[d] += 1
                    self.uncovered -= 1
                pair[base + d] += 1
                pair[d * k1 + c] += 1
        self.slots -= self.row_filled[i] + self.col_filled[j]
        grid[i * q + j] = c
        self.rowmask[i] |= 1 << c
        self.colmask[j] |= 1 << c
        self.row_filled[i] += 1
        self.col_filled[j] += 1
        self.freerow[i] &= ~(1 << j)
        self.rows_of[c] |= 1 << i
        self.cols_of[c] |= 1 << j
        if self.cnt[c] < self.need[c]:
            self.deficit -= 1
        self.cnt[c] += 1
        self.at_least[self.cnt[c]] += 1
        if c > self.nused:
            self.nused = c
        if c > p:
            self.newcount[j] += 1

    def unassign(self, i, j, c, was_new):
        p, q, k1 = self.p, self.q, self.k + 1
        grid, pair, covdeg = self.grid, self.pair, self.covdeg
        if c > p:
            self.newcount[j] -= 1
        if was_new:
            self.nused = c - 1
        self.at_least[self.cnt[c]] -= 1
        self.cnt[c] -= 1
        if self.cnt[c] < self.need[c]:
            self.deficit += 1
        self.rows_of[c] &= ~(1 << i)
        self.cols_of[c] &= ~(1 << j)
        self.freerow[i] |= 1 << j
        self.row_filled[i] -= 1
        self.col_filled[j] -= 1
        self.rowmask[i] &= ~(1 << c)
        self.colmask[j] &= ~(1 << c)
        grid[i * q + j] = 0
        self.slots += self.row_filled[i] + self.col_filled[j]
        base = c * k1
        for jj in range(q):
            d = grid[i * q + jj]
            if d:
                pair[base + d] -= 1
                pair[d * k1 + c] -= 1
                if pair[base + d] == 0:
                    covdeg[c] -= 1
                    covdeg[d] -= 1
                    self.uncovered += 1
        for ii in range(p):
            d = grid[ii * q + j]
            if d:
                pair[base + d] -= 1
                pair[d * k1 + c] -= 1
                if pair[base + d] == 0:
                    covdeg[c] -= 1
                    covdeg[d] -= 1
                    self.uncovered += 1

    # -- pruning --------------------------------------------------------------

    def colour_ok(self, d):
        if self.cnt[d] == 0:
            return True
        missing = self.k - 1 - self.covdeg[d]
        room = (self.cap[d] - self.cnt[d]) * self.reach
        if missing <= room:
            return True
        rows, cols = self.rows_of[d], self.cols_of[d]
        free = 0
        for i in range(self.p):
            if rows >> i & 1:
                free += _popcount(self.freerow[i])
            else:
                free += _popcount(self.freerow[i] & cols)
        return missing <= room + free

    def check(self, t, i, j, c):
        """Generic admissibility tests after placing c at (i, j); returns a rule id or -1."""
        if self.at_least[self.cnt[c]] > self.max_at_least[self.cnt[c]]:
            return R_FREQ
        remaining = self.n - t - 1
        if self.deficit > remaining:
            return R_MINF
        if self.uncovered > self.slots:
            return R_PAIR
        if not self.colour_ok(c):
            return R_COLOUR
        q = self.q
        for jj in range(q):
            d = self.grid[i * q + jj]
            if d and d != c and not self.colour_ok(d):
                return R_COLOUR
        for ii in range(self.p):
            d = self.grid[ii * q + j]
            if d and d != c and not self.colour_ok(d):
                return R_COLOUR
        return -1

    def symmetry_ok(self, i, j, c):
        if not self.sym or j == 0:
            return True
        if c <= self.p:
            return True
        if j == 1:
            # rows holding a colour absent from column 0 come first in column 1
            return self.newcount[1] == self.col_filled[1]
        return self.newcount[j] + 1 <= self.newcount[j - 1]

    def candidates(self, i, j):
        banned = self.rowmask[i] | self.colmask[j]
        k1 = self.k
        used = [c for c in range(1, self.nused + 1)
                if not banned >> c & 1 and self.cnt[c] < self.cap[c]]
        used.sort(key=lambda c: (k1 - 1 - self.covdeg[c], self.prio[c]))
        if self.nused < self.k:
            used.append(self.nused + 1)
        return used

    # -- driver ---------------------------------------------------------------

    def replay(self, prefix):
        """Apply a prefix of forced colours; False if it is already infeasible."""
        for t, c in enumerate(prefix):
            i, j = self.order[t]
            if (self.rowmask[i] | self.colmask[j]) >> c & 1 or c > self.nused + 1:
                return False
            if self.cnt[c] >= self.cap[c] or not self.symmetry_ok(i, j, c):
                return False
            self.assign(i, j, c)
            if self.check(t, i, j, c) >= 0:
                return False
        return True

    def tick(self):
        self.nodes += 1
        if self.node_budget and self.nodes > self.node_budget:
            raise _Budget
        if self.deadline and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            raise _Budget

    def accept(self):
        if self.uncovered == 0 and self.nused == self.k:
            self.solutions.append(tuple(self.grid))
            if self.max_solutions and len(self.solutions) >= self.max_solutions:
                raise _Done

    def dfs(self, t):
        if t == self.n:
            self.accept()
            return
        i, j = self.order[t]
        for c in self.candidates(i, j):
            if not self.symmetry_ok(i, j, c):
                self.prunes[R_SYM] += 1
                continue
            was_new = c > self.nused
            self.assign(i, j, c)
            rule = self.check(t, i, j, c)
            if rule >= 0:
                self.prunes[rule] += 1
            else:
                self.tick()
                self.branch(t, i, j, c)
            self.unassign(i, j, c, was_new)

    def branch(self, t, i, j, c):
        self.dfs(t + 1)

    def run(self, prefix=()):
        if self.k > self.n or max(self.p, self.q) > self.k:
            return self._result()
        try:
            if self.replay(prefix):
                self.dfs(len(prefix))
        except _Done:
            self.status = FOUND
        except _Budget:
            self.status = BUDGET
        else:
            self.status = FOUND if self.solutions else EXHAUSTED
        return self._result()

    def _result(self):
        return self.status, self.solutions, self.nodes, self.prunes


class _Budget(Exception):
    pass


class _Done(Exception):
    pass


def split_prefixes(engine: Engine, depth: int) -> list[tuple[int, ...]]:
    """Enumerate the surviving assignments of the first ``depth`` cells."""
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def rec(t):
        if t == depth or t == engine.n:
            out.append(tuple(stack))
            return
        i, j = engine.order[t]
        for c in engine.candidates(i, j):
            if not engine.symmetry_ok(i, j, c):
                continue
            was_new = c > engine.nused
            engine.assign(i, j, c)
            if engine.check(t, i, j, c) < 0:
                stack.append(c)
                rec(t + 1)
                stack.pop()
            engine.unassign(i, j, c, was_new)

    rec(0)
    return out


# --- canonical form ----------------------------------------------------------

def canonical(cells, p, q):
    """Lexicographically least relabelled matrix over all row/column orders.

    ``cells`` is a row-major flat sequence.  Colours are renamed in order of
    first appearance (row-major).  Returns (flat cells, rho, sigma, pi) where
    pi maps original colour -> canonical colour.
    """
    best = None
    cert = None
    for sigma in permutations(range(q)):
        found = _best_rows(cells, p, q, sigma, best)
        if found is not None:
            best, rho, pi = found
            cert = (tuple(rho), sigma, pi)
    return (tuple(best),) + cert


def _best_rows(cells, p, q, sigma, bound):
    """Best row order for a fixed column order, if it beats ``bound``."""
    best = [bound, None]
    used = [False] * p
    flat: list[int] = []
    rho: list[int] = []

    def rec(depth, label, nxt):
        if depth == p:
            if best[0] is None or flat < best[0]:
                best[0] = list(flat)
                best[1] = (list(flat), list(rho), dict(label))
            return
        options = []
        for r in range(p):
            if used[r]:
                continue
            new = {}
            n = nxt
            row = []
            for j in range(q):
                x = cells[r * q + sigma[j]]
                y = label.get(x) or new.get(x)
                if y is None:
                    y = new[x] = n
                    n += 1
                row.append(y)
            options.append((row, r, new, n))
        options.sort(key=lambda o: o[0])
        lo, hi = depth * q, (depth + 1) * q
        for row, r, new, n in options:
            ref = best[0]
            if ref is not None and flat + row > ref[:hi]:
                break
            used[r] = True
            rho.append(r)
            flat.extend(row)
            rec(depth + 1, {**label, **new}, n)
            del flat[lo:]
            rho.pop()
            used[r] = False

    rec(0, {}, 1)
    return best[1]
