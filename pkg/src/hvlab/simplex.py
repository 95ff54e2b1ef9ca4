"""Exact two-phase simplex over Q(sqrt(2)).

Solves  maximize c.q  subject to  A.q <= b, q >= 0  with every pivot
decided by exact Scalar comparisons.  Bland's anti-cycling rule is used
throughout (entering: lowest eligible column index; leaving: minimum
ratio, ties broken by lowest basic variable index), so termination is
guaranteed.

Rows with negative right-hand side are negated and given an artificial
variable; phase one drives the artificials to zero or proves the
program infeasible.  On optimal termination the reduced costs of the
slack columns provide the dual vector, giving an exact strong-duality
certificate that :func:`check_certificate` verifies by plain
arithmetic, independent of the pivoting code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch
from .scalar import ONE, ZERO, Scalar, as_scalar

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """maximize c.q subject to A.q <= b, q >= 0."""

    c: tuple[Scalar, ...]
    A: tuple[tuple[Scalar, ...], ...]
    b: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", tuple(as_scalar(v) for v in self.c))
        object.__setattr__(self, "A", tuple(tuple(as_scalar(v) for v in row) for row in self.A))
        object.__setattr__(self, "b", tuple(as_scalar(v) for v in self.b))
        n = len(self.c)
        if len(self.A) != len(self.b):
            raise DimensionMismatch(f"{len(self.A)} constraint rows but {len(self.b)} right-hand sides")
        for row in self.A:
            if len(row) != n:
                raise DimensionMismatch(f"constraint row has {len(row)} entries, expected {n}")


@dataclass(frozen=True)
class LpSolution:
    """Solver outcome; q, value and dual are present only when optimal."""

    status: str
    q: tuple[Scalar, ...] | None = None
    value: Scalar | None = None
    dual: tuple[Scalar, ...] | None = None


class _Tableau:
    """Dense simplex tableau with an explicit reduced-cost row."""

    def __init__(self, rows: list[list[Scalar]], rhs: list[Scalar], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.zrow: list[Scalar] = []
        self.zval: Scalar = ZERO

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def set_objective(self, cost: Sequence[Scalar]) -> None:
        """Recompute reduced costs z_j - c_j for the current basis."""
        zrow = [-c for c in cost]
        zval = ZERO
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb.is_zero():
                continue
            row = self.rows[i]
            for j in range(len(zrow)):
                if not row[j].is_zero():
                    zrow[j] = zrow[j] + cb * row[j]
            zval = zval + cb * self.rhs[i]
        self.zrow = zrow
        self.zval = zval

    def pivot(self, r: int, c: int) -> None:
        rows, rhs, zrow = self.rows, self.rhs, self.zrow
        piv = rows[r][c]
        inv = ONE / piv
        rows[r] = [v * inv for v in rows[r]]
        rhs[r] = rhs[r] * inv
        pivot_row = rows[r]
        pivot_rhs = rhs[r]
        for i in range(len(rows)):
            if i == r:
                continue
            factor = rows[i][c]
            if factor.is_zero():
                continue
            rows[i] = [v - factor * p for v, p in zip(rows[i], pivot_row)]
            rhs[i] = rhs[i] - factor * pivot_rhs
        factor = zrow[c]
        if not factor.is_zero():
            self.zrow = [v - factor * p for v, p in zip(zrow, pivot_row)]
            self.zval = self.zval - factor * pivot_rhs
        self.basis[r] = c

    def run_bland(self, allowed: Sequence[bool]) -> str:
        """Pivot until optimal or unbounded; allowed masks enterable columns."""
        while True:
            entering = -1
            for j in range(self.ncols):
                if allowed[j] and self.zrow[j].sign() < 0:
                    entering = j
                    break
            if entering < 0:
                return OPTIMAL
            leaving = -1
            best_ratio: Scalar | None = None
            for i, row in enumerate(self.rows):
                coeff = row[entering]
                if coeff.sign() <= 0:
                    continue
                ratio = self.rhs[i] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
            if leaving < 0:
                return UNBOUNDED
            self.pivot(leaving, entering)


def solve_lp(problem: LpProblem) -> LpSolution:
    """Exact simplex; see the module docstring for conventions."""
    n = len(problem.c)
    m = len(problem.b)
    if m == 0:
        # Only q >= 0 remains: unbounded along any rewarded coordinate.
        if any(cj.sign() > 0 for cj in problem.c):
            return LpSolution(UNBOUNDED)
        return LpSolution(OPTIMAL, (ZERO,) * n, ZERO, ())

    negated = [problem.b[i].sign() < 0 for i in range(m)]
    artificial_rows = [i for i in range(m) if negated[i]]
    n_art = len(artificial_rows)
    ncols = n + m + n_art

    rows: list[list[Scalar]] = []
    rhs: list[Scalar] = []
    basis: list[int] = []
    art_col = {row: n + m + k for k, row in enumerate(artificial_rows)}
    for i in range(m):
        sign = -ONE if negated[i] else ONE
        row = [sign * problem.A[i][j] for j in range(n)]
        row += [sign if k == i else ZERO for k in range(m)]
        row += [ONE if art_col.get(i) == n + m + k else ZERO for k in range(n_art)]
        rows.append(row)
        rhs.append(sign * problem.b[i])
        basis.append(art_col[i] if negated[i] else n + i)

    tableau = _Tableau(rows, rhs, basis)

    if n_art:
        phase1_cost = [ZERO] * (n + m) + [-ONE] * n_art
        tableau.set_objective(phase1_cost)
        status = tableau.run_bland([True] * ncols)
        assert status == OPTIMAL  # phase one is bounded above by zero
        if tableau.zval.sign() < 0:
            return LpSolution(INFEASIBLE)
        # Drive zero-valued artificials out of the basis; rows where no
        # structural or slack column can pivot are redundant and dropped.
        drop: list[int] = []
        for i in range(len(tableau.basis)):
            if tableau.basis[i] < n + m:
                continue
            pivot_col = -1
            for j in range(n + m):
                if not tableau.rows[i][j].is_zero():
                    pivot_col = j
                    break
            if pivot_col >= 0:
                tableau.pivot(i, pivot_col)
            else:
                drop.append(i)
        for i in reversed(drop):
            del tableau.rows[i]
            del tableau.rhs[i]
            del tableau.basis[i]
        for i in range(len(tableau.rows)):
            tableau.rows[i] = tableau.rows[i][: n + m]

    phase2_cost = list(problem.c) + [ZERO] * m
    tableau.set_objective(phase2_cost)
    status = tableau.run_bland([True] * (n + m))
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED)

    q = [ZERO] * n
    for i, bi in enumerate(tableau.basis):
        if bi < n:
            q[bi] = tableau.rhs[i]
    # Reduced cost of slack i is the dual multiplier of constraint i;
    # for dropped redundant rows the slack column is zero, giving dual 0.
    dual = tuple(tableau.zrow[n + i] for i in range(m))
    return LpSolution(OPTIMAL, tuple(q), tableau.zval, dual)


def check_certificate(problem: LpProblem, solution: LpSolution) -> bool:
    """Verify the strong-duality certificate by direct arithmetic.

    Requires primal feasibility (A.q <= b, q >= 0), dual feasibility
    (y >= 0, y.A >= c componentwise) and matching objectives
    (c.q == y.b == value).  Deliberately shares no code with the solver.
    """
    if solution.status != OPTIMAL:
        return False
    if solution.q is None or solution.value is None or solution.dual is None:
        return False
    n = len(problem.c)
    m = len(problem.b)
    if len(solution.q) != n or len(solution.dual) != m:
        return False
    q, y = solution.q, solution.dual
    if any(v.sign() < 0 for v in q) or any(v.sign() < 0 for v in y):
        return False
    for i in range(m):
        lhs = ZERO
        for j in range(n):
            lhs = lhs + problem.A[i][j] * q[j]
        if (lhs - problem.b[i]).sign() > 0:
            return False
    for j in range(n):
        lhs = ZERO
        for i in range(m):
            lhs = lhs + y[i] * problem.A[i][j]
        if (lhs - problem.c[j]).sign() < 0:
            return False
    primal_value = ZERO
    for j in range(n):
        primal_value = primal_value + problem.c[j] * q[j]
    dual_value = ZERO
    for i in range(m):
        dual_value = dual_value + y[i] * problem.b[i]
    return primal_value == solution.value and dual_value == solution.value
