"""Exact rational linear programming over equality constraints.

Solves ``max/min c.x  s.t.  A x = b, x >= 0`` with a dense two-phase tableau
simplex. Entering columns are priced by most negative reduced cost; after a
run of degenerate pivots the solver falls back to Bland's rule, which cannot
cycle. The tableau is kept in integer form (Edmonds' fraction-free pivoting):
every entry is an integer and the real tableau is ``T / d`` for the current
basis determinant ``d``, so results carry no rounding of any kind.

Dual values are read from the artificial columns, which stay in the tableau
and hold ``d * B^-1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .rational import RationalLike, to_fraction

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


# consecutive degenerate pivots tolerated before switching to Bland's rule
STALL_LIMIT = 50


class LpError(ValueError):
    """Raised for malformed programs (inconsistent dimensions, bad sense)."""


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple[Fraction, ...]
    eq_matrix: tuple[tuple[Fraction, ...], ...]
    eq_rhs: tuple[Fraction, ...]
    sense: str = "max"

    def __post_init__(self) -> None:
        if self.sense not in ("max", "min"):
            raise LpError(f"sense must be 'max' or 'min', got {self.sense!r}")
        nvars = len(self.objective)
        if len(self.eq_matrix) != len(self.eq_rhs):
            raise LpError("eq_matrix and eq_rhs have different row counts")
        for row in self.eq_matrix:
            if len(row) != nvars:
                raise LpError("eq_matrix column count differs from objective length")

    @classmethod
    def build(
        cls,
        objective: Sequence[RationalLike],
        eq_matrix: Sequence[Sequence[RationalLike]],
        eq_rhs: Sequence[RationalLike],
        sense: str = "max",
    ) -> "LinearProgram":
        return cls(
            tuple(to_fraction(v) for v in objective),
            tuple(tuple(to_fraction(v) for v in row) for row in eq_matrix),
            tuple(to_fraction(v) for v in eq_rhs),
            sense,
        )

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    pivots: int = field(default=0, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _integer_rows(lp: LinearProgram):
    """Integer form of ``A x = b``.

    Each row is scaled by the lcm of its coefficient denominators (negated
    when the rhs is negative) and the whole rhs by one common denominator
    ``L``; the solver then works with ``x' = L x``. Keeping rhs denominators
    out of the matrix keeps basis determinants, and hence entry sizes, small.
    """
    rows, scaled_rhs, scales = [], [], []
    for arow, b in zip(lp.eq_matrix, lp.eq_rhs):
        den = lcm(*(a.denominator for a in arow)) if arow else 1
        s = Fraction(den) if b >= 0 else Fraction(-den)
        rows.append([int(a * s) for a in arow])
        scaled_rhs.append(b * s)
        scales.append(s)
    big = lcm(*(b.denominator for b in scaled_rhs)) if scaled_rhs else 1
    rhs = [int(b * big) for b in scaled_rhs]
    return rows, rhs, scales, big


def _pivot(T: list[list[int]], r: int, c: int, d: int) -> int:
    """Fraction-free Gauss-Jordan pivot on T[r][c]; returns the new determinant."""
    prow = T[r]
    p = prow[c]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [(p * a - f * b) // d for a, b in zip(row, prow)]
        elif p != d:
            T[i] = [p * a // d for a in row]
    if p < 0:
        for i, row in enumerate(T):
            T[i] = [-a for a in row]
        p = -p
    return p


def _ratio_row(T, nrows: int, col: int, rhs: int, basis: list[int]) -> int | None:
    """Minimum ratio test; ties go to the smallest basic index (Bland)."""
    best = None
    for i in range(nrows):
        a = T[i][col]
        if a <= 0:
            continue
        if best is None:
            best = i
            continue
        # compare T[i][rhs]/a against T[best][rhs]/T[best][col]
        lhs = T[i][rhs] * T[best][col]
        rhs_ = T[best][rhs] * a
        if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
            best = i
    return best


def _run(T, obj: int, nrows: int, ncols: int, rhs: int, basis, d: int, verbose: bool):
    """Run simplex iterations minimising row ``obj``; returns (status, d, pivots)."""
    pivots = 0
    stall = 0
    while True:
        orow = T[obj]
        if stall >= STALL_LIMIT:
            col = next((j for j in range(ncols) if orow[j] < 0), None)
        else:
            col = min(range(ncols), key=orow.__getitem__)
            if orow[col] >= 0:
                col = None
        if col is None:
            return OPTIMAL, d, pivots
        row = _ratio_row(T, nrows, col, rhs, basis)
        if row is None:
            return UNBOUNDED, d, pivots
        if verbose:
            log.debug("pivot row=%d col=%d leaving=%d d=%d", row, col, basis[row], d)
        stall = stall + 1 if T[row][rhs] == 0 else 0
        d = _pivot(T, row, col, d)
        basis[row] = col
        pivots += 1


def solve(lp: LinearProgram, verbose: bool = False) -> LpSolution:
    """Solve ``lp`` exactly.

    Returns an LpSolution whose status is ``optimal``, ``infeasible`` or
    ``unbounded``. On ``optimal`` the primal is exactly feasible and the dual
    (one value per equality row) has ``b . y == value``.
    """
    n = lp.num_vars
    m = len(lp.eq_rhs)
    sign = -1 if lp.sense == "max" else 1
    cden = lcm(*(c.denominator for c in lp.objective)) if n else 1
    cint = [int(sign * c * cden) for c in lp.objective]

    rows, b, scales, big = _integer_rows(lp)
    width = n + m + 1
    rhs = n + m
    T: list[list[int]] = []
    for i in range(m):
        row = rows[i] + [0] * m + [b[i]]
        row[n + i] = 1
        T.append(row)
    phase1 = [-sum(T[i][j] for i in range(m)) for j in range(n)] + [0] * m + [-sum(b)]
    phase2 = cint + [0] * (m + 1)
    T.append(phase2)
    T.append(phase1)
    basis = list(range(n, n + m))
    d = 1
    if verbose:
        log.debug("tableau %d x %d", m, width)

    status, d, piv1 = _run(T, m + 1, m, n, rhs, basis, d, verbose)
    if T[m + 1][rhs] != 0:
        return LpSolution(INFEASIBLE, pivots=piv1)

    # drive remaining (zero-level) artificials out; rows with no structural
    # entry are redundant and keep their artificial harmlessly at zero
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if T[r][j] != 0), None)
            if col is not None:
                d = _pivot(T, r, col, d)
                basis[r] = col
                piv1 += 1
    T.pop()  # phase-1 row

    status, d, piv2 = _run(T, m, m, n, rhs, basis, d, verbose)
    pivots = piv1 + piv2
    if status != OPTIMAL:
        return LpSolution(status, pivots=pivots)

    x = [Fraction(0)] * n
    for i, v in enumerate(basis):
        if v < n:
            x[v] = Fraction(int(T[i][rhs]), int(d) * big)
    obj = T[m]
    dual = tuple(
        Fraction(int(-sign * obj[n + k]), int(d * cden)) * scales[k] for k in range(m)
    )
    value = sum((c * xi for c, xi in zip(lp.objective, x)), Fraction(0))
    return LpSolution(OPTIMAL, value, tuple(x), dual, pivots)


def residual(lp: LinearProgram, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """A x - b, exactly."""
    return tuple(
        sum((a * xi for a, xi in zip(row, x)), Fraction(0)) - bi
        for row, bi in zip(lp.eq_matrix, lp.eq_rhs)
    )


def dual_slack(lp: LinearProgram, y: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Per-column dual slack, signed so that feasibility means every entry >= 0.

    For ``max`` this is ``A^T y - c``; for ``min`` it is ``c - A^T y``.
    """
    out = []
    for j, c in enumerate(lp.objective):
        aty = sum((row[j] * yi for row, yi in zip(lp.eq_matrix, y)), Fraction(0))
        out.append(aty - c if lp.sense == "max" else c - aty)
    return tuple(out)


def verify(lp: LinearProgram, sol: LpSolution) -> bool:
    """Exact optimality check: primal feasible, dual feasible, value matches both."""
    if not sol.optimal:
        return False
    if any(v < 0 for v in sol.primal) or any(residual(lp, sol.primal)):
        return False
    if sum((c * xi for c, xi in zip(lp.objective, sol.primal)), Fraction(0)) != sol.value:
        return False
    if any(s < 0 for s in dual_slack(lp, sol.dual)):
        return False
    dual_value = sum((bi * yi for bi, yi in zip(lp.eq_rhs, sol.dual)), Fraction(0))
    return dual_value == sol.value
