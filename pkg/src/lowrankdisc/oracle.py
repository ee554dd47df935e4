"""Exact discrepancy oracles for small matrices.

For a 0/1 matrix M with density p = |M|/(mn), the rectangle discrepancy is

    disc(X, Y) = |M[X x Y]| - p * |X| * |Y|.

Everything here is computed in integers scaled by mn (so disc values are
Fractions with denominator dividing mn) and is exact: the subset
enumeration iterates over the smaller side, and for a fixed row set the
optimal column set follows from per-column scores, which makes the oracle
exact rather than heuristic.  Tie-breaking is deterministic everywhere:
candidates are scanned in increasing bitmask order and ties keep the first
(smallest-mask) winner; column ties prefer the lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Config
from .errors import CapacityError
from .matrix import BinaryMatrix

_CHUNK = 1 << 14


@dataclass(frozen=True)
class Rectangle:
    """A rectangle X x Y together with its exact disc value."""

    X: tuple[int, ...]
    Y: tuple[int, ...]
    value: Fraction

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.X), len(self.Y))

    def verify(self, M: BinaryMatrix) -> bool:
        return disc_value(M, self.X, self.Y) == self.value

    def to_json_obj(self, sign: str) -> dict:
        return {"sign": sign, "X": list(self.X), "Y": list(self.Y),
                "value_num": self.value.numerator,
                "value_den": self.value.denominator}


@dataclass(frozen=True)
class SignVectorPair:
    """x in {-1,+1}^m, y in {-1,+1}^n and the exact value x^T (M - pJ) y."""

    x: tuple[int, ...]
    y: tuple[int, ...]
    value: Fraction

    def verify(self, M: BinaryMatrix) -> bool:
        E = M.int_entries()
        mn = M.m * M.n
        x = np.array(self.x, dtype=np.int64)
        y = np.array(self.y, dtype=np.int64)
        scaled = mn * (x @ E @ y) - M.ones * int(x.sum()) * int(y.sum())
        return Fraction(int(scaled), mn) == self.value


def disc_value(M: BinaryMatrix, X, Y) -> Fraction:
    """Exact disc(X, Y); empty selections are allowed and give 0."""
    Xs = tuple(int(i) for i in X)
    Ys = tuple(int(j) for j in Y)
    for i in Xs:
        if not 0 <= i < M.m:
            raise IndexError(f"row index {i} out of range")
    for j in Ys:
        if not 0 <= j < M.n:
            raise IndexError(f"column index {j} out of range")
    if not Xs or not Ys:
        return Fraction(0)
    sub_ones = int(M.entries[np.ix_(Xs, Ys)].sum(dtype=np.int64))
    mn = M.m * M.n
    return Fraction(mn * sub_ones - M.ones * len(Xs) * len(Ys), mn)


def _mask_bits(masks: np.ndarray, m: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1)


def _mask_tuple(mask: int, m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m) if (mask >> i) & 1)


def _require_oracle_size(m: int, cfg: Config) -> None:
    if m > cfg.oracle_limit:
        raise CapacityError(
            f"exact enumeration over {m} rows exceeds the oracle limit of "
            f"{cfg.oracle_limit}; use the spectral/heuristic path instead")


def _scaled_scores(bits: np.ndarray, E: np.ndarray, ones: int, mn: int):
    """Column scores mn*s_j(X) for every mask in the chunk; also |X| sizes.

    The count matmul runs in float64 to hit BLAS; every intermediate is an
    integer below 2^53, so the result is exact.
    """
    counts = (bits.astype(np.float64) @ E.astype(np.float64)).astype(np.int64)
    sizes = bits.sum(axis=1)
    return mn * counts - ones * sizes[:, None], sizes


def best_rect(M: BinaryMatrix, sign: str, cfg: Config = DEFAULT) -> Rectangle:
    """Exact optimum of disc(X, Y) over all rectangles.

    sign '+' maximizes disc, '-' minimizes it (so the negative discrepancy
    is -best_rect(M, '-').value).  Enumerates subsets of the smaller side;
    for fixed X the optimal Y is {j : s_j(X) > 0} (resp. < 0).
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if M.m > M.n:
        r = best_rect(M.transpose(), sign, cfg)
        return Rectangle(X=r.Y, Y=r.X, value=r.value)
    _require_oracle_size(M.m, cfg)

    E = M.int_entries()
    mn = M.m * M.n
    best_val = 0
    best_mask = 0
    for start in range(0, 1 << M.m, _CHUNK):
        stop = min(start + _CHUNK, 1 << M.m)
        masks = np.arange(start, stop, dtype=np.int64)
        scores, _ = _scaled_scores(_mask_bits(masks, M.m), E, M.ones, mn)
        if sign == "+":
            vals = np.where(scores > 0, scores, 0).sum(axis=1)
            idx = int(np.argmax(vals))
            v = int(vals[idx])
            better = v > best_val
        else:
            vals = np.where(scores < 0, scores, 0).sum(axis=1)
            idx = int(np.argmin(vals))
            v = int(vals[idx])
            better = v < best_val
        if better:
            best_val = v
            best_mask = start + idx

    X = _mask_tuple(best_mask, M.m)
    bits = _mask_bits(np.array([best_mask], dtype=np.int64), M.m)
    scores, _ = _scaled_scores(bits, E, M.ones, mn)
    if sign == "+":
        Y = tuple(int(j) for j in np.nonzero(scores[0] > 0)[0])
    else:
        Y = tuple(int(j) for j in np.nonzero(scores[0] < 0)[0])
    return Rectangle(X=X, Y=Y, value=Fraction(best_val, mn))


def disc_plus(M: BinaryMatrix, cfg: Config = DEFAULT) -> Fraction:
    return best_rect(M, "+", cfg).value


def disc_minus(M: BinaryMatrix, cfg: Config = DEFAULT) -> Fraction:
    """Negative discrepancy as a nonnegative Fraction."""
    return -best_rect(M, "-", cfg).value


def disc_max(M: BinaryMatrix, cfg: Config = DEFAULT) -> Fraction:
    return max(disc_plus(M, cfg), disc_minus(M, cfg))


def _popcount_masks(m: int, k: int):
    """All m-bit masks of popcount k, ascending, in numpy chunks."""
    if k == 0:
        yield np.zeros(1, dtype=np.int64)
        return
    mask = (1 << k) - 1
    limit = 1 << m
    buf = []
    while mask < limit:
        buf.append(mask)
        if len(buf) == _CHUNK:
            yield np.array(buf, dtype=np.int64)
            buf = []
        # Gosper's hack: next mask with the same popcount
        low = mask & -mask
        ripple = mask + low
        mask = ripple | (((mask ^ ripple) >> 2) // low)
    if buf:
        yield np.array(buf, dtype=np.int64)


def best_half_rect(M: BinaryMatrix, sign: str,
                   row_size: int | None = None, col_size: int | None = None,
                   cfg: Config = DEFAULT) -> Rectangle:
    """Exact optimum of disc(X, Y) over |X| = row_size, |Y| = col_size.

    Defaults to half sizes, which requires even dimensions.  For fixed X the
    optimal Y consists of the col_size largest (sign '+') or smallest
    (sign '-') column scores, ties to the lowest index.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if row_size is None or col_size is None:
        if M.m % 2 or M.n % 2:
            raise ValueError(
                f"half-rectangle oracle needs even dimensions, got {M.m}x{M.n}")
        row_size = M.m // 2 if row_size is None else row_size
        col_size = M.n // 2 if col_size is None else col_size
    if not (0 < row_size <= M.m and 0 < col_size <= M.n):
        raise ValueError("sizes out of range")
    _require_oracle_size(M.m, cfg)

    E = M.int_entries()
    mn = M.m * M.n
    best_val = None
    best_mask = None
    for masks in _popcount_masks(M.m, row_size):
        scores, _ = _scaled_scores(_mask_bits(masks, M.m), E, M.ones, mn)
        if sign == "+":
            # sum of the col_size largest scores per row
            part = -np.partition(-scores, col_size - 1, axis=1)[:, :col_size]
            vals = part.sum(axis=1)
            idx = int(np.argmax(vals))
            v = int(vals[idx])
            better = best_val is None or v > best_val
        else:
            part = np.partition(scores, col_size - 1, axis=1)[:, :col_size]
            vals = part.sum(axis=1)
            idx = int(np.argmin(vals))
            v = int(vals[idx])
            better = best_val is None or v < best_val
        if better:
            best_val = v
            best_mask = int(masks[idx])

    X = _mask_tuple(best_mask, M.m)
    bits = _mask_bits(np.array([best_mask], dtype=np.int64), M.m)
    scores, _ = _scaled_scores(bits, E, M.ones, mn)
    if sign == "+":
        order = np.argsort(-scores[0], kind="stable")
    else:
        order = np.argsort(scores[0], kind="stable")
    Y = tuple(sorted(int(j) for j in order[:col_size]))
    return Rectangle(X=X, Y=Y, value=Fraction(best_val, mn))


def disc0_plus(M: BinaryMatrix, cfg: Config = DEFAULT) -> SignVectorPair:
    """Exact max of x^T (M - pJ) y over x in [-1,1]^m, y in [-1,1]^n.

    The objective is linear in every coordinate, so the optimum sits at a
    +-1 vertex; for fixed x the optimal y_j is the sign of the column score
    (zero scores get +1).
    """
    if M.m > M.n:
        pair = disc0_plus(M.transpose(), cfg)
        return SignVectorPair(x=pair.y, y=pair.x, value=pair.value)
    _require_oracle_size(M.m, cfg)
    E = M.int_entries()
    mn = M.m * M.n
    colsum = M.col_deg.astype(np.int64)
    best_val = -1
    best_mask = 0
    for start in range(0, 1 << M.m, _CHUNK):
        stop = min(start + _CHUNK, 1 << M.m)
        masks = np.arange(start, stop, dtype=np.int64)
        bits = _mask_bits(masks, M.m)
        counts = (bits.astype(np.float64)
                  @ E.astype(np.float64)).astype(np.int64)
        sizes = bits.sum(axis=1)
        # x has +1 on mask bits and -1 elsewhere
        signed_counts = 2 * counts - colsum[None, :]
        signed_sizes = 2 * sizes - M.m
        scores = mn * signed_counts - M.ones * signed_sizes[:, None]
        vals = np.abs(scores).sum(axis=1)
        idx = int(np.argmax(vals))
        v = int(vals[idx])
        if v > best_val:
            best_val = v
            best_mask = start + idx

    xbits = [(best_mask >> i) & 1 for i in range(M.m)]
    x = tuple(1 if b else -1 for b in xbits)
    xv = np.array(x, dtype=np.int64)
    scores = mn * (xv @ E) - M.ones * int(xv.sum())
    y = tuple(1 if s >= 0 else -1 for s in scores)
    return SignVectorPair(x=x, y=y, value=Fraction(best_val, mn))


def heuristic_rect(M: BinaryMatrix, sign: str, seed: int = 0, restarts: int = 8,
                   cfg: Config = DEFAULT) -> Rectangle:
    """Alternating best-response search for a large-|disc| rectangle.

    Not an oracle: the returned value is an exact disc value for the
    returned rectangle, hence a valid one-sided bound, but it is not
    certified optimal.  Works at any size.  Deterministic given seed.
    """
    from .rng import STREAM_SEARCH, generator  # local import to avoid cycle

    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    E = M.int_entries()
    mn = M.m * M.n
    want_pos = sign == "+"

    def respond_rows(ymask: np.ndarray) -> np.ndarray:
        marg = mn * (E @ ymask) - M.ones * int(ymask.sum())
        return (marg > 0) if want_pos else (marg < 0)

    def respond_cols(xmask: np.ndarray) -> np.ndarray:
        marg = mn * (xmask @ E) - M.ones * int(xmask.sum())
        return (marg > 0) if want_pos else (marg < 0)

    def value_of(xmask, ymask) -> int:
        sub = int(E[xmask][:, ymask].sum()) if xmask.any() and ymask.any() else 0
        return mn * sub - M.ones * int(xmask.sum()) * int(ymask.sum())

    def descend(ymask: np.ndarray):
        xmask = np.zeros(M.m, dtype=bool)
        val = 0
        for _ in range(64):
            xmask = respond_rows(ymask)
            ymask = respond_cols(xmask)
            new = value_of(xmask, ymask)
            if new == val:
                break
            val = new
        return val, xmask, ymask

    starts = [np.ones(M.n, dtype=bool)]
    gen = generator(seed, STREAM_SEARCH)
    for _ in range(max(restarts - 1, 0)):
        starts.append(gen.random(M.n) < 0.5)

    best = (0, np.zeros(M.m, dtype=bool), np.zeros(M.n, dtype=bool))
    for ymask in starts:
        val, xm, ym = descend(ymask)
        if (want_pos and val > best[0]) or (not want_pos and val < best[0]):
            best = (val, xm, ym)
    val, xm, ym = best
    X = tuple(int(i) for i in np.nonzero(xm)[0])
    Y = tuple(int(j) for j in np.nonzero(ym)[0])
    return Rectangle(X=X, Y=Y, value=Fraction(val, mn))
