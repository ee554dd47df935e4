"""Density decrement and monochromatic-submatrix extraction.

The pipeline: while the current square matrix is denser than 1/(8r), find a
half-by-half submatrix of strictly smaller density (exact enumeration when
affordable, otherwise spectral certificate -> Gram vectors -> hyperplane
rounding -> half-size adjustment, with a local-search fallback); once the
density drops below 1/(8r), a greedy dichotomy either extracts an all-zero
quarter block or exhibits a permutation submatrix larger than the rank,
which is impossible when the rank bound is genuine.

All randomness is derived from one seed through counter-based streams, so
traces are reproducible across runs and worker counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Config
from .errors import CapacityError, CertificateError, DecrementStalled, RankWitnessError
from .matrix import BinaryMatrix, WeightedBinaryMatrix, complement, rank, submatrix
from .oracle import Rectangle, best_half_rect
from .rng import STREAM_ROUND, STREAM_SEARCH, generator
from .spectral import DiscCertificate, lower_bound_disc


# -- Gram vectors and rounding -------------------------------------------------

def gram_vectors(C: DiscCertificate, cfg: Config = DEFAULT):
    """Unit-ball vectors whose Gram matrix is the witness X.

    Returns (row_vectors, col_vectors) of shapes (n, k) and (n, k); the
    i-th row is the vector attached to row/column vertex i.  Norms are
    bounded by sqrt(1 + diag_tol) since X_ii <= 1 + diag_tol.
    """
    if C.diag_max > 1.0 + cfg.diag_tol:
        raise CertificateError(
            f"certificate diagonal {C.diag_max:.9f} exceeds 1 + {cfg.diag_tol}")
    if C.coeffs is not None and float(np.min(C.coeffs, initial=0.0)) < 0:
        raise CertificateError("negative eigenbasis coefficient in certificate")
    n = C.n_side
    return C.factor[:n], C.factor[n:]


def round_to_rect(M: BinaryMatrix, grams, trials: int, seed: int,
                  stream: tuple[int, ...] = (), cfg: Config = DEFAULT) -> Rectangle:
    """Random-hyperplane rounding of Gram vectors to a negative rectangle.

    Each trial draws a Gaussian direction g, signs the vertices by the side
    of the hyperplane their vector falls on, and scores the four quadrant
    rectangles; the most negative rectangle over all trials wins (ties:
    earliest trial, then quadrant order).  Deterministic given seed.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    V, W = grams
    m, n = M.shape
    if V.shape[0] != m or W.shape[0] != n:
        raise ValueError("gram vector blocks do not match the matrix shape")
    E = M.int_entries()
    mn = m * n
    ones = M.ones

    best_val = 0
    best_rect = Rectangle(X=(), Y=(), value=Fraction(0))
    k = V.shape[1]
    for t in range(trials):
        g = generator(seed, STREAM_ROUND, *stream, t).standard_normal(k)
        x_pos = (V @ g) >= 0
        y_pos = (W @ g) >= 0
        for xmask in (x_pos, ~x_pos):
            nx = int(xmask.sum())
            if nx == 0:
                continue
            colcounts = E[xmask].sum(axis=0)
            for ymask in (y_pos, ~y_pos):
                ny = int(ymask.sum())
                if ny == 0:
                    continue
                sub = int(colcounts[ymask].sum())
                val = mn * sub - ones * nx * ny
                if val < best_val:
                    best_val = val
                    best_rect = Rectangle(
                        X=tuple(int(i) for i in np.nonzero(xmask)[0]),
                        Y=tuple(int(j) for j in np.nonzero(ymask)[0]),
                        value=Fraction(val, mn))
    return best_rect


def adjust_to_half(M: BinaryMatrix, R: Rectangle, seed: int = 0,
                   row_size: int | None = None,
                   col_size: int | None = None) -> Rectangle:
    """Resize a rectangle to exact half (or given) sizes, greedily.

    Rows first: grow X with the smallest-marginal missing rows, or shrink
    it by dropping the largest-marginal members; then the same for columns
    against the final X.  Marginals are exact and additive, so the greedy
    choice dominates the averaging argument over random extensions; ties
    prefer the lowest index.  The seed parameter is accepted for interface
    stability but unused: the procedure is fully derandomized.
    """
    del seed
    m, n = M.shape
    if row_size is None or col_size is None:
        if m % 2 or n % 2:
            raise ValueError("default half sizes require even dimensions")
        row_size = m // 2 if row_size is None else row_size
        col_size = n // 2 if col_size is None else col_size
    E = M.int_entries()
    mn = m * n
    ones = M.ones

    xmask = np.zeros(m, dtype=bool)
    if R.X:
        xmask[list(R.X)] = True
    ymask = np.zeros(n, dtype=bool)
    if R.Y:
        ymask[list(R.Y)] = True

    def resize(mask, marg, target):
        have = int(mask.sum())
        if have < target:
            cand = np.nonzero(~mask)[0]
            order = cand[np.argsort(marg[cand], kind="stable")]
            mask = mask.copy()
            mask[order[:target - have]] = True
        elif have > target:
            members = np.nonzero(mask)[0]
            order = members[np.argsort(-marg[members], kind="stable")]
            mask = mask.copy()
            mask[order[:have - target]] = False
        return mask

    row_marg = mn * (E @ ymask.astype(np.int64)) - ones * int(ymask.sum())
    xmask = resize(xmask, row_marg, row_size)
    col_marg = mn * (xmask.astype(np.int64) @ E) - ones * int(xmask.sum())
    ymask = resize(ymask, col_marg, col_size)

    sub = int(E[xmask][:, ymask].sum())
    val = mn * sub - ones * row_size * col_size
    return Rectangle(X=tuple(int(i) for i in np.nonzero(xmask)[0]),
                     Y=tuple(int(j) for j in np.nonzero(ymask)[0]),
                     value=Fraction(val, mn))


# -- local search ---------------------------------------------------------------

def _half_local_search(M: BinaryMatrix, start: Rectangle, row_size: int,
                       col_size: int, seed: int, stream: tuple[int, ...],
                       budget: int, cfg: Config = DEFAULT) -> Rectangle:
    """Alternating best-response descent with seeded random restarts.

    One descent round replaces X by the exact best row set of size row_size
    for the current Y (a batch of optimal swaps) and then Y likewise; the
    value never increases and the round costs O(mn).  Restarts perturb the
    best known rectangle.  The swap budget caps total work.
    """
    m, n = M.shape
    E = M.int_entries()
    mn = m * n
    ones = M.ones

    def best_rows_for(ymask):
        marg = mn * (E @ ymask.astype(np.int64)) - ones * int(ymask.sum())
        order = np.argsort(marg, kind="stable")
        mask = np.zeros(m, dtype=bool)
        mask[order[:row_size]] = True
        return mask

    def best_cols_for(xmask):
        marg = mn * (xmask.astype(np.int64) @ E) - ones * int(xmask.sum())
        order = np.argsort(marg, kind="stable")
        mask = np.zeros(n, dtype=bool)
        mask[order[:col_size]] = True
        return mask

    def value_of(xmask, ymask):
        return mn * int(E[xmask][:, ymask].sum()) - ones * row_size * col_size

    def descend(ymask, budget_left):
        xmask = best_rows_for(ymask)
        ymask = best_cols_for(xmask)
        val = value_of(xmask, ymask)
        budget_left -= m + n
        while budget_left > 0:
            x2 = best_rows_for(ymask)
            y2 = best_cols_for(x2)
            v2 = value_of(x2, y2)
            budget_left -= m + n
            if v2 >= val:
                break
            xmask, ymask, val = x2, y2, v2
        return val, xmask, ymask, budget_left

    ymask0 = np.zeros(n, dtype=bool)
    if start.Y:
        ymask0[list(start.Y)] = True
    else:
        ymask0[np.argsort(M.col_deg, kind="stable")[:col_size]] = True

    best_val, best_x, best_y, budget = descend(ymask0, budget)

    restart = 0
    while budget > 0:
        gen = generator(seed, STREAM_SEARCH, *stream, restart)
        flips = gen.integers(0, n, size=max(2, n // 8))
        ymask = best_y.copy()
        ymask[flips] = ~ymask[flips]
        # repair size after the perturbation
        diff = int(ymask.sum()) - col_size
        if diff > 0:
            on = np.nonzero(ymask)[0]
            ymask[gen.choice(on, size=diff, replace=False)] = False
        elif diff < 0:
            off = np.nonzero(~ymask)[0]
            ymask[gen.choice(off, size=-diff, replace=False)] = True
        val, xm, ym, budget = descend(ymask, budget)
        if val < best_val:
            best_val, best_x, best_y = val, xm, ym
        restart += 1

    return Rectangle(X=tuple(int(i) for i in np.nonzero(best_x)[0]),
                     Y=tuple(int(j) for j in np.nonzero(best_y)[0]),
                     value=Fraction(best_val, mn))


# -- one decrement step ----------------------------------------------------------

@dataclass(frozen=True)
class DecrementStep:
    """Outcome of one density-decrement step."""

    rect: Rectangle
    strategy: str
    p_before: Fraction
    p_after: Fraction

    @property
    def decrement(self) -> Fraction:
        return self.p_before - self.p_after


def decrement_step(M: BinaryMatrix, r: int | None = None, seed: int = 0,
                   step_index: int = 0, cfg: Config = DEFAULT) -> DecrementStep:
    """Find a half-by-half submatrix of strictly smaller density.

    Strategy ladder, first success wins: exact half-rectangle oracle when
    the side is within the oracle limit; spectral certificate -> Gram
    rounding -> half-size adjustment; alternating local search from the
    best candidate.  Raises DecrementStalled (carrying the best candidate)
    if no strictly negative half-rectangle is found within budget.
    """
    if M.m != M.n:
        raise ValueError("decrement_step expects a square matrix")
    n = M.n
    if n < 2:
        raise ValueError("cannot halve a 1x1 matrix")
    if r is None:
        r = rank(M)
    p = M.density()
    if not Fraction(1, 8 * r) <= p <= Fraction(1, 2):
        raise ValueError(
            f"density {p} outside the decrement regime [1/(8r), 1/2] for r={r}")
    target = n // 2

    def finish(rect: Rectangle, strategy: str) -> DecrementStep:
        p_after = p + Fraction(rect.value, target * target)
        return DecrementStep(rect=rect, strategy=strategy,
                             p_before=p, p_after=p_after)

    if n <= cfg.oracle_limit:
        rect = best_half_rect(M, "-", target, target, cfg)
        if rect.value < 0:
            return finish(rect, "exact")
        raise DecrementStalled(
            "exact oracle found no density-decreasing half-rectangle "
            "(the rank precondition is likely violated)", best=rect)

    cert = lower_bound_disc(M, r=r, cfg=cfg)
    grams = gram_vectors(cert, cfg)
    rough = round_to_rect(M, grams, trials=cfg.rounding_trials, seed=seed,
                          stream=(step_index,), cfg=cfg)
    rect = adjust_to_half(M, rough, row_size=target, col_size=target)
    if rect.value < 0:
        return finish(rect, "rounding")

    budget = cfg.local_budget_factor * n
    rect2 = _half_local_search(M, rect, target, target, seed,
                               (step_index,), budget, cfg)
    if rect2.value < 0:
        return finish(rect2, "local_search")
    best = rect2 if rect2.value <= rect.value else rect
    raise DecrementStalled(
        f"no strictly density-decreasing half-rectangle found at n={n} "
        f"within budget", best=best)


# -- sparse endgame ---------------------------------------------------------------

@dataclass(frozen=True)
class MonoResult:
    """A monochromatic submatrix: rows X, columns Y, constant color."""

    X: tuple[int, ...]
    Y: tuple[int, ...]
    color: int

    @property
    def dims(self) -> tuple[int, int]:
        return (len(self.X), len(self.Y))

    def verify(self, M: BinaryMatrix) -> bool:
        if not self.X or not self.Y:
            return False
        sub = M.entries[np.ix_(list(self.X), list(self.Y))]
        return bool((sub == self.color).all())

    def to_json_obj(self) -> dict:
        return {"color": self.color, "X": list(self.X), "Y": list(self.Y),
                "dims": list(self.dims)}


@dataclass(frozen=True)
class PermutationWitness:
    """Rows A and columns B with M[A x B] a k x k permutation matrix.

    Certifies rank(M) >= k: a permutation submatrix has full rank.
    Pairs are matched positionally: M[rows[t], cols[t]] = 1.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.rows)

    def verify(self, M: BinaryMatrix) -> bool:
        sub = M.entries[np.ix_(list(self.rows), list(self.cols))]
        return bool((sub == np.eye(self.k, dtype=np.uint8)).all())


def zero_submatrix_sparse(M: BinaryMatrix, r: int, cfg: Config = DEFAULT):
    """Sparse-regime dichotomy: all-zero quarter block or permutation witness.

    Requires p(M) <= 1/(8r).  Rows/columns with more than n/(4r) ones are
    set aside; on the rest, a permutation submatrix is grown greedily while
    excluding rows/columns already hit.  If the survivors ever form an
    all-zero block, the lowest-index quarter of them is returned; if the
    permutation reaches size r+1, it is returned instead and certifies that
    rank(M) > r.
    """
    if M.m != M.n:
        raise ValueError("sparse dichotomy expects a square matrix")
    if r < 1:
        raise ValueError("rank bound must be at least 1")
    n = M.n
    if M.ones * 8 * r > n * n:
        raise ValueError(
            f"density {M.density()} exceeds the sparse regime bound 1/(8r) "
            f"= 1/{8 * r}")
    E = M.entries
    light_r = np.asarray(M.row_deg * 4 * r <= n)
    light_c = np.asarray(M.col_deg * 4 * r <= n)
    assert int((~light_r).sum()) <= n // 2 and int((~light_c).sum()) <= n // 2

    A: list[int] = []
    B: list[int] = []
    quarter = -(-n // 4)
    while True:
        if A:
            alive_r = light_r & ~(E[:, B].any(axis=1))
            alive_c = light_c & ~(E[A, :].any(axis=0))
        else:
            alive_r = light_r
            alive_c = light_c
        rows_alive = np.nonzero(alive_r)[0]
        cols_alive = np.nonzero(alive_c)[0]
        assert len(rows_alive) >= quarter and len(cols_alive) >= quarter
        sub = E[np.ix_(rows_alive, cols_alive)]
        hits = np.argwhere(sub)
        if hits.size == 0:
            return MonoResult(
                X=tuple(int(i) for i in rows_alive[:quarter]),
                Y=tuple(int(j) for j in cols_alive[:quarter]),
                color=0)
        i, j = hits[0]
        A.append(int(rows_alive[i]))
        B.append(int(cols_alive[j]))
        if len(A) == r + 1:
            return PermutationWitness(rows=tuple(A), cols=tuple(B))


# -- full pipeline -----------------------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    """One trace entry of the decrement loop."""

    index: int
    n_i: int
    p_i: Fraction
    rect: Rectangle
    strategy: str

    def to_json_obj(self) -> dict:
        return {"i": self.index, "n_i": self.n_i,
                "p_num": self.p_i.numerator, "p_den": self.p_i.denominator,
                "strategy_used": self.strategy,
                "disc_num": self.rect.value.numerator,
                "disc_den": self.rect.value.denominator}


@dataclass(frozen=True)
class DecrementTrace:
    """Per-iteration log of the decrement loop plus the terminal result."""

    steps: tuple[StepRecord, ...]
    terminal: MonoResult

    @property
    def iterations(self) -> int:
        return len(self.steps)

    def to_json_lines(self) -> str:
        lines = [json.dumps(s.to_json_obj(), sort_keys=True) for s in self.steps]
        lines.append(json.dumps(self.terminal.to_json_obj(), sort_keys=True))
        return "\n".join(lines) + "\n"


def _expand_mono(M: BinaryMatrix, X: tuple[int, ...], Y: tuple[int, ...],
                 color: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Grow a monochromatic block greedily, keeping the sides balanced.

    Alternates between adding the lowest-index row consistent with the
    current columns and vice versa, preferring the smaller side, until no
    addition is possible.  Candidate masks are maintained incrementally, so
    the whole expansion costs O(mn) plus O(m+n) per added index.
    Deterministic, and never shrinks the block.
    """
    E = M.entries
    xmask = np.zeros(M.m, dtype=bool)
    xmask[list(X)] = True
    ymask = np.zeros(M.n, dtype=bool)
    ymask[list(Y)] = True
    row_ok = ~xmask & (E[:, ymask] == color).all(axis=1)
    col_ok = ~ymask & (E[xmask] == color).all(axis=0)
    nx, ny = int(xmask.sum()), int(ymask.sum())
    while True:
        rows_can = bool(row_ok.any())
        cols_can = bool(col_ok.any())
        if not rows_can and not cols_can:
            break
        if rows_can and (nx <= ny or not cols_can):
            i = int(np.nonzero(row_ok)[0][0])
            xmask[i] = True
            row_ok[i] = False
            col_ok &= E[i] == color
            nx += 1
        else:
            j = int(np.nonzero(col_ok)[0][0])
            ymask[j] = True
            col_ok[j] = False
            row_ok &= E[:, j] == color
            ny += 1
    return (tuple(int(i) for i in np.nonzero(xmask)[0]),
            tuple(int(j) for j in np.nonzero(ymask)[0]))


def find_mono(M: BinaryMatrix, seed: int = 0,
              cfg: Config = DEFAULT) -> tuple[MonoResult, DecrementTrace]:
    """Extract a large monochromatic submatrix from a low-rank matrix.

    Dense inputs are complemented first (the result color flips to 1);
    rectangular inputs are squared through the smallest uniform blow-up and
    the answer is mapped back by dividing out the repetition factors.  The
    found block is then expanded greedily and verified entrywise against
    the original matrix.
    """
    work = M
    color = 0
    if M.density() > Fraction(1, 2):
        work = complement(M)
        color = 1
    r = rank(work)
    if r == 0:
        result = MonoResult(X=tuple(range(M.m)), Y=tuple(range(M.n)),
                            color=color)
        trace = DecrementTrace(steps=(), terminal=result)
        return result, trace

    if work.m != work.n:
        square = WeightedBinaryMatrix.squared(work)
        try:
            S = square.materialize(cfg.dense_capacity)
        except CapacityError as exc:
            raise CapacityError(
                f"squaring a {work.m}x{work.n} matrix needs side "
                f"{square.eff_rows}; {exc}") from exc
        a_rep = S.m // work.m
        b_rep = S.n // work.n
    else:
        S = work
        a_rep = b_rep = 1

    threshold = Fraction(1, 8 * r)
    rows = np.arange(S.m)
    cols = np.arange(S.n)
    current = S
    steps: list[StepRecord] = []
    while current.density() >= threshold:
        try:
            step = decrement_step(current, r=r, seed=seed,
                                  step_index=len(steps), cfg=cfg)
        except DecrementStalled as exc:
            exc.trace = tuple(steps)
            raise
        steps.append(StepRecord(index=len(steps), n_i=current.n,
                                p_i=current.density(), rect=step.rect,
                                strategy=step.strategy))
        rows = rows[list(step.rect.X)]
        cols = cols[list(step.rect.Y)]
        current = submatrix(current, step.rect.X, step.rect.Y)

    terminal = zero_submatrix_sparse(current, r, cfg)
    if isinstance(terminal, PermutationWitness):
        # unreachable when r is the exact rank; kept as a loud failure
        raise RankWitnessError(
            f"found a {terminal.k}x{terminal.k} permutation submatrix, so the "
            f"rank bound {r} was violated", witness=terminal)

    X_sq = rows[list(terminal.X)]
    Y_sq = cols[list(terminal.Y)]
    X = tuple(sorted({int(x) // a_rep for x in X_sq}))
    Y = tuple(sorted({int(y) // b_rep for y in Y_sq}))
    X, Y = _expand_mono(M, X, Y, color)
    result = MonoResult(X=X, Y=Y, color=color)
    if not result.verify(M):
        raise AssertionError(
            "internal error: extracted submatrix is not monochromatic")
    trace = DecrementTrace(steps=tuple(steps), terminal=result)
    return result, trace
