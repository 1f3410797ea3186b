"""Smith normal form over the integers, with unimodular transforms."""

from __future__ import annotations

from math import gcd

__all__ = ["smith_normal_form", "integer_kernel"]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: list[list[int]]):
    """Return ``(D, U, V)`` with ``U * M * V = D`` diagonal.

    ``U`` (rows x rows) and ``V`` (cols x cols) are unimodular.  Diagonal
    entries are nonnegative and each divides the next.  Plain Python ints,
    no overflow concerns for the tiny matrices used here.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    A = [list(map(int, row)) for row in matrix]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row[dst] += k * row[src]
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: pivot must divide the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


def integer_kernel(matrix: list[list[int]], n: int) -> list[list[int]]:
    """Basis of the integer vectors ``w`` (length ``n``) with ``M w = 0``."""
    if not matrix:
        return _identity(n)
    D, _, V = smith_normal_form(matrix)
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    basis = []
    for j in range(rank, n):
        col = [V[i][j] for i in range(n)]
        g = 0
        for c in col:
            g = gcd(g, c)
        basis.append([c // g for c in col] if g else col)
    return basis
