"""Independent reference computations used by the tests.

Nothing here imports polyih: these are deliberately naive and separate
implementations to compare the package against.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple


def naive_smith(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors by textbook elimination on a dense copy.

    Pivot on the entry of least absolute value in the remaining block, clear
    its row and column with Euclidean steps, then force divisibility of the
    rest of the block by adding rows.
    """
    a = [list(map(int, r)) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    for t in range(min(m, n)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not nz:
                return out
            _, i, j = min(nz)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                for r in a:
                    r[j] -= q * r[t]
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = [i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))]
            if bad:
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            out.append(abs(p))
            break
    return out


def determinantal_divisors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Invariant factors as ratios of gcds of k x k minors (small matrices only)."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    prev, out = 1, []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, _det([[matrix[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _det(a: List[List[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def random_matrix(rng: random.Random, max_dim: int = 12, lo: int = -5, hi: int = 5) -> List[List[int]]:
    """Random small integer matrix; some are rank deficient or have a common factor."""
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    kind = rng.random()
    if kind < 0.2:
        vals = [v for v in range(lo, hi + 1) if v % 2 == 0]
        return [[rng.choice(vals) for _ in range(n)] for _ in range(m)]
    a = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]
    if kind < 0.5 and m > 1:
        for i in range(1, m, 2):
            a[i] = list(a[i - 1]) if rng.random() < 0.5 else [0] * n
    return a


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(a[0]) if a else 0
    while rank < len(a) and col < ncols:
        piv = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        col += 1
    return rank


def simplicial_betti(tops: Sequence[Sequence[str]]) -> List[int]:
    """Rational betti numbers of a simplicial complex given by its top simplexes."""
    cells: Dict[int, List[Tuple[str, ...]]] = {}
    seen = set()
    for t in tops:
        t = tuple(sorted(t))
        for k in range(1, len(t) + 1):
            for f in itertools.combinations(t, k):
                if f not in seen:
                    seen.add(f)
                    cells.setdefault(k - 1, []).append(f)
    top = max(cells)
    index = {k: {s: i for i, s in enumerate(sorted(v))} for k, v in cells.items()}
    ranks = {}
    for k in range(1, top + 1):
        rows = [[0] * len(index[k]) for _ in index[k - 1]]
        for s, j in index[k].items():
            for i in range(len(s)):
                rows[index[k - 1][s[:i] + s[i + 1:]]][j] = (-1) ** i
        ranks[k] = rational_rank(rows)
    return [len(index[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(top + 1)]
