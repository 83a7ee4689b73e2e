"""Independent reference computations used by the tests.

Nothing here imports the search engine or the bounds module.
"""
from itertools import combinations, product


def _complete(grid, p, q, k):
    seen = set()
    lines = [grid[i * q:(i + 1) * q] for i in range(p)]
    lines += [grid[j::q] for j in range(q)]
    for line in lines:
        for a, b in combinations(line, 2):
            seen.add((min(a, b), max(a, b)))
    return len(set(grid)) == k and len(seen) == k * (k - 1) // 2


def feasible_palettes(p, q):
    """Every k admitting a complete proper colouring of the p x q grid.

    Enumerates all proper colourings up to renaming colours (restricted
    growth order) and tests completeness at the leaves.
    """
    n = p * q
    grid = [0] * n
    out = set()

    def rec(t, used):
        if t == n:
            if _complete(grid, p, q, used):
                out.add(used)
            return
        i, j = divmod(t, q)
        banned = set(grid[i * q:i * q + j]) | {grid[ii * q + j] for ii in range(i)}
        for c in range(1, used + 2):
            if c not in banned:
                grid[t] = c
                rec(t + 1, max(used, c))
        grid[t] = 0

    rec(0, 0)
    return sorted(out)


def naive_feasible(p, q, k):
    """Literal scan over all k^(pq) assignments (tiny grids only)."""
    for cells in product(range(1, k + 1), repeat=p * q):
        grid = list(cells)
        lines = [grid[i * q:(i + 1) * q] for i in range(p)] + [grid[j::q] for j in range(q)]
        if all(len(set(l)) == len(l) for l in lines) and _complete(grid, p, q, k):
            return True
    return False


def neighbourhood_counts(p, q):
    """For each l, the set of neighbourhood sizes over all placements of l
    cells in distinct rows and columns of the p x q rook's graph."""
    nbr = []
    for i in range(p):
        for j in range(q):
            m = 0
            for ii in range(p):
                for jj in range(q):
                    if (ii == i) != (jj == j):
                        m |= 1 << (ii * q + jj)
            nbr.append(m)
    sizes: dict[int, set[int]] = {}

    def rec(row, used_cols, union, mine, l):
        if l:
            sizes.setdefault(l, set()).add(bin(union & ~mine).count("1"))
        for i in range(row, p):
            for j in range(q):
                if not used_cols >> j & 1:
                    cell = i * q + j
                    rec(i + 1, used_cols | 1 << j, union | nbr[cell], mine | 1 << cell, l + 1)

    rec(0, 0, 0, 0, 0)
    return sizes


# forbidden layouts as {colour: cells}; colours 1..3 are the planted 2-colours
LAYOUTS = {
    "(1^4, 2^2)": {1: [(0, 0), (2, 1)], 2: [(1, 0), (3, 1)]},
    "(2^1 1^2, 2^2)": {1: [(0, 0), (1, 1)], 2: [(1, 0), (2, 1)]},
    "(2^2, 1^4)": {1: [(0, 0), (1, 2)], 2: [(0, 1), (1, 3)]},
    "(2^2, 2^1 1^2)": {1: [(0, 0), (1, 1)], 2: [(0, 1), (1, 2)]},
    "(3^1 2^1 1^1, 3^1 2^1 1^1)": {1: [(0, 0), (1, 1)], 2: [(0, 1), (2, 0)],
                                   3: [(0, 2), (1, 0)]},
}


def plant(layout, rng, p=6, q=7, k=19):
    """Random total proper p x q matrix containing ``layout`` under random
    row/column permutations; other colours fill the rest greedily."""
    rho = rng.sample(range(p), p)
    sigma = rng.sample(range(q), q)
    grid = [[0] * q for _ in range(p)]
    for c, cells in layout.items():
        for i, j in cells:
            grid[rho[i]][sigma[j]] = c
    fillers = list(range(len(layout) + 1, k + 1))
    for i in range(p):
        for j in range(q):
            if grid[i][j]:
                continue
            banned = set(grid[i]) | {grid[ii][j] for ii in range(p)}
            grid[i][j] = rng.choice([c for c in fillers if c not in banned])
    return grid
