"""Smith normal form over Z with unimodular transforms.

Matrices are plain lists of lists of Python ints (arbitrary precision).
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["SmithForm", "smith_normal_form", "invariant_factors", "integer_inverse", "matmul", "determinant"]


@dataclass(frozen=True)
class SmithForm:
    """``U * m * V == D`` with ``D`` diagonal and ``d1 | d2 | ...``."""

    diagonal: tuple[int, ...]
    U: list[list[int]]
    V: list[list[int]]
    D: list[list[int]]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        line = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        line[j] += x * brow[j]
        out.append(line)
    return out


def _reduce(A, U=None, V=None):
    """In-place diagonalisation; returns the diagonal (not yet divisibility-fixed).

    Pivot: smallest nonzero absolute value in the remaining block, earliest
    row then column on ties.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            A[t], A[pi] = A[pi], A[t]
            if U is not None:
                U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in A:
                row[t], row[pj] = row[pj], row[t]
            if V is not None:
                for row in V:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            dirty = False
            # clear column t with row operations
            for i in range(t + 1, nrows):
                v = A[i][t]
                if v:
                    q = v // p
                    if q:
                        Ai, At = A[i], A[t]
                        for j in range(t, ncols):
                            if At[j]:
                                Ai[j] -= q * At[j]
                        if U is not None:
                            Ui, Ut = U[i], U[t]
                            for j in range(nrows):
                                if Ut[j]:
                                    Ui[j] -= q * Ut[j]
                    if A[i][t]:
                        dirty = True
            # clear row t with column operations
            At = A[t]
            for j in range(t + 1, ncols):
                v = At[j]
                if v:
                    q = v // p
                    if q:
                        for row in A:
                            if row[t]:
                                row[j] -= q * row[t]
                        if V is not None:
                            for row in V:
                                if row[t]:
                                    row[j] -= q * row[t]
                    if At[j]:
                        dirty = True
            if not dirty:
                break
            # a remainder survived: move the smallest entry of row/column t to the pivot
            cand = [(abs(A[i][t]), 0, i) for i in range(t + 1, nrows) if A[i][t]]
            cand += [(abs(A[t][j]), 1, j) for j in range(t + 1, ncols) if A[t][j]]
            _, kind, idx = min(cand)
            if kind == 0:
                A[t], A[idx] = A[idx], A[t]
                if U is not None:
                    U[t], U[idx] = U[idx], U[t]
            else:
                for row in A:
                    row[t], row[idx] = row[idx], row[t]
                if V is not None:
                    for row in V:
                        row[t], row[idx] = row[idx], row[t]
        t += 1
    return [A[i][i] for i in range(min(nrows, ncols))]


def _fix_divisibility(A, U, V):
    """Enforce d1 | d2 | ... and non-negative diagonal."""
    from math import gcd

    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    k = min(nrows, ncols)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            for j in range(i + 1, k):
                a, b = A[i][i], A[j][j]
                if a == 0 and b != 0:
                    # swap so zeros go last
                    _swap_diag(A, U, V, i, j)
                    changed = True
                    continue
                if a == 0 or b == 0 or b % a == 0:
                    continue
                # diag(a, b) -> diag(g, ab/g) via column add + 2x2 reduction
                for row in A:
                    row[i] += row[j]
                if V is not None:
                    for row in V:
                        row[i] += row[j]
                sub = [[A[i][i], A[i][j]], [A[j][i], A[j][j]]]
                Us, Vs = _identity(2), _identity(2)
                _reduce(sub, Us, Vs)
                _apply_2x2(A, U, V, i, j, Us, Vs)
                changed = True
    for i in range(k):
        if A[i][i] < 0:
            A[i] = [-x for x in A[i]]
            if U is not None:
                U[i] = [-x for x in U[i]]
    return [A[i][i] for i in range(k)]


def _swap_diag(A, U, V, i, j):
    A[i], A[j] = A[j], A[i]
    for row in A:
        row[i], row[j] = row[j], row[i]
    if U is not None:
        U[i], U[j] = U[j], U[i]
    if V is not None:
        for row in V:
            row[i], row[j] = row[j], row[i]


def _apply_2x2(A, U, V, i, j, Us, Vs):
    def left(M):
        ri, rj = M[i], M[j]
        M[i] = [Us[0][0] * x + Us[0][1] * y for x, y in zip(ri, rj)]
        M[j] = [Us[1][0] * x + Us[1][1] * y for x, y in zip(ri, rj)]

    def right(M):
        for row in M:
            x, y = row[i], row[j]
            row[i] = x * Vs[0][0] + y * Vs[1][0]
            row[j] = x * Vs[0][1] + y * Vs[1][1]

    left(A)
    right(A)
    if U is not None:
        left(U)
    if V is not None:
        right(V)


def smith_normal_form(m: list[list[int]]) -> SmithForm:
    """Smith normal form with unimodular ``U``, ``V`` such that ``U m V = D``."""
    A = [list(map(int, row)) for row in m]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    U, V = _identity(nrows), _identity(ncols)
    _reduce(A, U, V)
    diag = _fix_divisibility(A, U, V)
    return SmithForm(tuple(diag), U, V, A)


def invariant_factors(m: list[list[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors (no transforms tracked)."""
    A = [list(map(int, row)) for row in m]
    if not A or not A[0]:
        return ()
    _reduce(A)
    diag = _fix_divisibility(A, None, None)
    return tuple(d for d in diag if d)


def determinant(m: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def integer_inverse(m: list[list[int]]) -> list[list[int]] | None:
    """Inverse of a unimodular integer matrix, or ``None`` if not unimodular."""
    n = len(m)
    if n == 0:
        return []
    if any(len(row) != n for row in m):
        return None
    snf = smith_normal_form(m)
    if any(d != 1 for d in snf.diagonal):
        return None
    # U m V = I  =>  m^-1 = V U
    return matmul(snf.V, snf.U)
