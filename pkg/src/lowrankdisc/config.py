"""Tunable constants: tolerances, enumeration limits, measured constants.

Asymptotic statements about discrepancy come with unspecified constants;
the ones exposed here (c0_exact_disc, c_decrement, c_band) were measured on
the generator families shipped in `constructions` and are deliberately
conservative.  Tests treat them as configuration, not as proven bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction


@dataclass(frozen=True)
class Config:
    # eigensolver acceptance: residual / orthonormality / pairing must be
    # below eig_tol_factor * ||A||_F (with a small absolute floor).
    eig_tol_factor: float = 1e-10
    eig_tol_floor: float = 1e-13
    # PSD witnesses: diagonal entries may exceed 1 by at most diag_tol.
    diag_tol: float = 1e-8
    # generic numeric slack for certificate inequalities, scaled by value.
    num_tol_base: float = 1e-7
    # exact subset enumeration is refused above this many rows.
    oracle_limit: int = 26
    # dense matrices are refused above this many entries (4096 x 4096).
    dense_capacity: int = 1 << 24
    # hyperplane-rounding trials per certificate.
    rounding_trials: int = 64
    # local search: total pair-swap budget is this factor times n.
    local_budget_factor: int = 50
    # degree-truncation threshold delta (rows/cols above (1+delta)*d go).
    truncate_delta: Fraction = Fraction(1, 100)
    # strip-vs-witness case split fires when t_r + t_c >= strip_frac * D.
    strip_frac: float = 0.01
    # Grothendieck constant upper bound used in sandwich sanity tests.
    grothendieck_k: float = 1.7823
    # measured constant for the exact-discrepancy lower-bound sweep:
    # disc(M) >= c0_exact_disc * mn * min(p, sqrt(p)/sqrt(r)).
    c0_exact_disc: float = 0.01
    # measured per-step density decrement: >= c_decrement * sqrt(p)/sqrt(r)
    # on exactly solvable sizes (observed minimum 0.45; pinned well below).
    c_decrement: float = 0.05
    # measured dyadic band-occupancy constant for decrement traces:
    # number of steps with p_i in [x, 2x] is <= c_band * sqrt(r) * sqrt(x)
    # (observed maximum 2.31; pinned well above).
    c_band: float = 12.0

    def num_tol(self, value: float) -> float:
        return self.num_tol_base * (1.0 + abs(value))

    def with_overrides(self, **kwargs) -> "Config":
        return replace(self, **kwargs)


DEFAULT = Config()
