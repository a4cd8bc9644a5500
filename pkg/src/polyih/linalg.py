"""Exact linear algebra over Q, Z and Z/p.

Rational routines work on lists of lists of ``Fraction``.  Integer Smith
normal form accepts sparse column dictionaries, strips unit pivots first and
finishes the remaining core densely.  Dense modular work uses int64 numpy
arrays, so the modulus must stay below 2**31.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

SparseColumns = Dict[int, Dict[int, int]]

# ---------------------------------------------------------------- rationals


def rref(matrix: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return len(rref(matrix)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One solution of ``a x = b`` (free variables set to zero), or None."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    if not aug:
        return [Fraction(0)] * n
    red, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return x


def nullspace(matrix: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    if ncols is None:
        ncols = len(matrix[0])
    if not matrix:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(matrix)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


# ------------------------------------------------------------------ integers


def _dense_invariants(a: List[List[int]]) -> List[int]:
    """Invariant factors of a dense integer matrix (modified in place)."""
    m = len(a)
    n = len(a[0]) if m else 0
    factors: List[int] = []
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        moved = True
                        break
            if moved:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        factors.append(abs(a[t][t]))
        t += 1
    return factors


class _SparseEliminator:
    """Row/column bookkeeping for unit-pivot elimination."""

    def __init__(self, columns: SparseColumns, modulus: Optional[int] = None):
        self.p = modulus
        self.rows: Dict[int, Dict[int, int]] = {}
        self.cols: Dict[int, set] = {}
        for c, col in columns.items():
            for r, v in col.items():
                if modulus:
                    v %= modulus
                if v:
                    self.rows.setdefault(r, {})[c] = v
                    self.cols.setdefault(c, set()).add(r)

    def _is_unit(self, v: int) -> bool:
        return v != 0 if self.p else v in (1, -1)

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows.pop(r)
        e = prow[c]
        inv = pow(e, -1, self.p) if self.p else e
        for cc in prow:
            self.cols[cc].discard(r)
        for i in list(self.cols[c]):
            row = self.rows[i]
            f = row[c] * inv
            if self.p:
                f %= self.p
            for cc, vv in prow.items():
                nv = row.get(cc, 0) - f * vv
                if self.p:
                    nv %= self.p
                if nv:
                    if cc not in row:
                        self.cols[cc].add(i)
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    self.cols[cc].discard(i)
            if not row:
                del self.rows[i]
        for cc in prow:
            if not self.cols[cc]:
                del self.cols[cc]
        self.cols.pop(c, None)

    def eliminate(self) -> int:
        count = 0
        progress = True
        while progress:
            progress = False
            for c in sorted(self.cols):
                rs = self.cols.get(c)
                if not rs:
                    continue
                best = None
                for r in rs:
                    if self._is_unit(self.rows[r][c]) and (
                        best is None or len(self.rows[r]) < len(self.rows[best])
                    ):
                        best = r
                if best is not None:
                    self.pivot(best, c)
                    count += 1
                    progress = True
        return count

    def dense_rest(self) -> List[List[int]]:
        cols = sorted(self.cols)
        index = {c: k for k, c in enumerate(cols)}
        return [
            [0] * 0 + [row.get(c, 0) for c in cols]
            for _, row in sorted(self.rows.items())
            if any(c in index for c in row)
        ]


def invariant_factors(columns: SparseColumns) -> List[int]:
    """Nonzero Smith invariant factors of a sparse integer matrix.

    ``columns`` maps column index to ``{row index: value}``.
    """
    elim = _SparseEliminator(columns)
    ones = elim.eliminate()
    rest = elim.dense_rest()
    core = _dense_invariants(rest) if rest else []
    return [1] * ones + core


def dense_to_columns(matrix: Sequence[Sequence[int]]) -> SparseColumns:
    cols: SparseColumns = {}
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            if v:
                cols.setdefault(j, {})[i] = int(v)
    return cols


def smith_invariants(matrix: Sequence[Sequence[int]]) -> List[int]:
    return invariant_factors(dense_to_columns(matrix))


def rank_mod_p(columns: SparseColumns, p: int) -> int:
    elim = _SparseEliminator(columns, modulus=p)
    return elim.eliminate()


def integer_kernel_basis(matrix: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of the integer lattice ``{x in Z^n : A x = 0}`` via unimodular column ops.

    Columns that share no nonzero row with the rest form independent blocks,
    and the kernel is the direct sum of the block kernels."""
    rows = [list(map(int, row)) for row in matrix]
    parent = list(range(ncols))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for row in rows:
        nz = [j for j, x in enumerate(row) if x]
        for j in nz[1:]:
            parent[find(j)] = find(nz[0])
    blocks: Dict[int, List[int]] = {}
    for j in range(ncols):
        blocks.setdefault(find(j), []).append(j)
    out: List[List[int]] = []
    for cols in blocks.values():
        sub = [[row[j] for j in cols] for row in rows if any(row[j] for j in cols)]
        for v in _block_kernel(sub, len(cols)):
            full = [0] * ncols
            for j, x in zip(cols, v):
                full[j] = x
            out.append(full)
    return out


def _block_kernel(rows: List[List[int]], ncols: int) -> List[List[int]]:
    # sparse columns: a[j] is column j of A, u[j] column j of the transform
    a: List[Dict[int, int]] = [{} for _ in range(ncols)]
    for r, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                a[j][r] = x
    u: List[Dict[int, int]] = [{j: 1} for j in range(ncols)]

    def colop(dst: Dict[int, int], src: Dict[int, int], q: int) -> None:
        # dst -= q * src, in place
        for i, y in src.items():
            v = dst.get(i, 0) - q * y
            if v:
                dst[i] = v
            else:
                dst.pop(i, None)

    piv = 0
    for r in range(len(rows)):
        if piv >= ncols:
            break
        while True:
            nz = [j for j in range(piv, ncols) if r in a[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(a[j][r]))
            a[piv], a[j0] = a[j0], a[piv]
            u[piv], u[j0] = u[j0], u[piv]
            done = True
            p = a[piv][r]
            for j in nz:
                j = piv if j == j0 else (j0 if j == piv else j)
                if j == piv:
                    continue
                q = a[j][r] // p
                colop(a[j], a[piv], q)
                colop(u[j], u[piv], q)
                if r in a[j]:
                    done = False
            if done:
                piv += 1
                break
    return [[u[j].get(i, 0) for i in range(ncols)] for j in range(piv, ncols)]


# ------------------------------------------------------------------- modular


def rref_mod_p(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the kernel of ``a`` over Z/p."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    red, piv = rref_mod_p(a, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, c in zip(red, piv):
            basis[c, k] = (-row[f]) % p
    return basis


def matrix_rank_mod_p(a: np.ndarray, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(rref_mod_p(a, p)[1])


def solve_mod_p(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """A solution of ``a x = b`` over Z/p (b may be a matrix), or None."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.zeros((n,) if vec else (n, b.shape[1]), dtype=np.int64)
    red, piv = rref_mod_p(np.hstack([a, b]), p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for row, c in zip(red, piv):
        x[c] = row[n:]
    return x[:, 0] if vec else x


def column_basis_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Independent columns of ``a`` spanning its column space mod p."""
    a = np.asarray(a, dtype=np.int64) % p
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    _, piv = rref_mod_p(a, p)
    return a[:, piv]


def iter_columns(columns: SparseColumns) -> Iterable[Tuple[int, Dict[int, int]]]:
    return sorted(columns.items())
