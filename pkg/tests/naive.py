"""Independent brute-force oracles used only by the tests.

These deliberately avoid the production shortcuts: rectangle optima come
from enumerating *all* (X, Y) pairs, the relaxation optimum from both sign
vectors, and rank from Gaussian elimination over Fractions.  Everything is
exact; values are integers scaled by m*n unless stated otherwise.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from lowrankdisc import BinaryMatrix
from lowrankdisc.oracle import Rectangle


def _indicator_table(size: int) -> np.ndarray:
    """Row k is the 0/1 indicator of bitmask k (all 2^size masks)."""
    masks = np.arange(1 << size, dtype=np.int64)
    return (masks[:, None] >> np.arange(size, dtype=np.int64)[None, :]) & 1


def naive_best_rect(M: BinaryMatrix, sign: str) -> Rectangle:
    """Optimum of disc(X, Y) by enumerating every (X, Y) pair."""
    E = M.int_entries()
    mn = M.m * M.n
    IX = _indicator_table(M.m)
    IY = _indicator_table(M.n)
    counts = IX @ E @ IY.T
    sizes = np.outer(IX.sum(axis=1), IY.sum(axis=1))
    scaled = mn * counts - M.ones * sizes
    if sign == "+":
        flat = int(np.argmax(scaled))
    else:
        flat = int(np.argmin(scaled))
    xm, ym = divmod(flat, 1 << M.n)
    X = tuple(i for i in range(M.m) if (xm >> i) & 1)
    Y = tuple(j for j in range(M.n) if (ym >> j) & 1)
    return Rectangle(X=X, Y=Y, value=Fraction(int(scaled.flat[flat]), mn))


def naive_best_half_rect(M: BinaryMatrix, sign: str) -> Fraction:
    """Optimal disc over |X| = m/2, |Y| = n/2 by full enumeration."""
    assert M.m % 2 == 0 and M.n % 2 == 0
    E = M.int_entries()
    mn = M.m * M.n
    IX = _indicator_table(M.m)
    IY = _indicator_table(M.n)
    keep_x = IX.sum(axis=1) == M.m // 2
    keep_y = IY.sum(axis=1) == M.n // 2
    counts = IX[keep_x] @ E @ IY[keep_y].T
    scaled = mn * counts - M.ones * (M.m // 2) * (M.n // 2)
    val = int(scaled.max()) if sign == "+" else int(scaled.min())
    return Fraction(val, mn)


def naive_disc0(M: BinaryMatrix) -> Fraction:
    """max x^T (M - pJ) y over sign vectors, by enumerating both sides."""
    E = M.int_entries()
    mn = M.m * M.n
    SX = 2 * _indicator_table(M.m) - 1
    SY = 2 * _indicator_table(M.n) - 1
    scaled_M = mn * E - M.ones
    vals = SX @ scaled_M @ SY.T
    return Fraction(int(vals.max()), mn)


def fraction_rank(M: BinaryMatrix) -> int:
    """Rank over the rationals by plain Gaussian elimination on Fractions."""
    rows = [[Fraction(int(v)) for v in row] for row in M.entries]
    m, n = M.m, M.n
    r = 0
    for c in range(n):
        pivot_row = None
        for i in range(r, m):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            if rows[i][c] != 0:
                factor = rows[i][c] / piv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def minor_rank(M: BinaryMatrix) -> int:
    """Largest k with a nonzero k x k minor (determinants over ints).

    Exponential; only for matrices up to ~6x6.
    """
    from itertools import combinations

    def det(rows, cols):
        k = len(rows)
        if k == 1:
            return int(M.entries[rows[0], cols[0]])
        total = 0
        for t, c in enumerate(cols):
            a = int(M.entries[rows[0], c])
            if a:
                rest = cols[:t] + cols[t + 1:]
                total += (-1) ** t * a * det(rows[1:], rest)
        return total

    best = 0
    for k in range(1, min(M.m, M.n) + 1):
        found = False
        for rows in combinations(range(M.m), k):
            for cols in combinations(range(M.n), k):
                if det(rows, cols) != 0:
                    found = True
                    break
            if found:
                break
        if found:
            best = k
        else:
            break
    return best
