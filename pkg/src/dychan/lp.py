"""Exact linear programming over the rationals.

Two-phase primal simplex with Bland's rule, so termination is guaranteed.
The tableau is an integer matrix with one shared positive denominator
(integer pivoting): every tableau entry equals ``T[i][j] / den`` exactly,
comparisons reduce to integer sign tests, and the divisions performed by
the pivot update are exact by Cramer's rule.  No floating point anywhere.

The solver handles ``max c.x`` subject to rows ``a.x (<=|>=|==) b`` with the
implicit requirement ``x >= 0``, which covers everything this package
needs (rate polytopes and convex-combination feasibility).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE = "<="
GE = ">="
EQ = "=="

Row = tuple[Sequence, str, object]  # (coefficients, relation, rhs)


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def _scale_to_int(values: Iterable[Fraction]) -> list[int]:
    values = list(values)
    mult = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * mult) for v in values]


class _Tableau:
    """Integer simplex tableau with a shared positive denominator."""

    def __init__(self, rows: list[list[int]], rhs: list[int], basis: list[int]):
        self.rows = rows          # m x ncols integer matrix
        self.rhs = rhs            # length m
        self.basis = basis        # basic variable index per row
        self.den = 1              # > 0; true value of any cell is cell / den

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def pivot(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        if piv <= 0:
            raise AssertionError("pivot element must be positive")
        den = self.den
        prow = self.rows[r]
        prhs = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                self.rows[i] = [(piv * row[j] - f * prow[j]) // den for j in range(len(row))]
                self.rhs[i] = (piv * self.rhs[i] - f * prhs) // den
            else:
                self.rows[i] = [(piv * v) // den for v in row]
                self.rhs[i] = (piv * self.rhs[i]) // den
        self.den = piv
        self.basis[r] = c

    def reduced_costs(self, cost: list[int]) -> tuple[list[int], int]:
        """Scaled reduced costs and scaled objective value for integer costs.

        Returned entries equal ``den * cbar_j`` and ``den * value`` where
        ``cbar`` and ``value`` are the true rational quantities.
        """
        red = [c * self.den for c in cost]
        val = 0
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(len(red)):
                    red[j] -= cb * row[j]
                val += cb * self.rhs[i]
        return red, val

    def solve(self, cost: list[int], allowed: list[bool]) -> str:
        """Maximize ``cost . x`` from the current basic feasible point.

        Only columns with ``allowed[j]`` may enter the basis.  Returns
        OPTIMAL or UNBOUNDED; the tableau is left at the final basis.
        """
        while True:
            red, _ = self.reduced_costs(cost)
            enter = -1
            for j in range(self.ncols):
                if allowed[j] and j not in self.basis and red[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            # Ratio test; Bland tie-break on the basic variable index.
            leave = -1
            best_num = best_den = 0  # best ratio = best_num / best_den
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    num, den = self.rhs[i], a
                    if leave < 0 or num * best_den < best_num * den or (
                        num * best_den == best_num * den and self.basis[i] < self.basis[leave]
                    ):
                        leave, best_num, best_den = i, num, den
            if leave < 0:
                return UNBOUNDED
            self.pivot(leave, enter)


def solve_lp(objective: Sequence, constraints: Iterable[Row], *, maximize: bool = True) -> LpResult:
    """Optimize a linear objective over ``{x >= 0 : every constraint holds}``.

    ``objective`` and all coefficients may be ints, Fractions or rational
    strings.  Returns an :class:`LpResult` whose status is one of
    ``optimal``, ``infeasible`` or ``unbounded``.
    """
    obj = [Fraction(v) for v in objective]
    if not maximize:
        obj = [-v for v in obj]
    n = len(obj)

    norm_rows: list[tuple[list[Fraction], str, Fraction]] = []
    for coeffs, rel, rhs in constraints:
        coeffs = [Fraction(v) for v in coeffs]
        if len(coeffs) != n:
            raise ValueError(f"constraint width {len(coeffs)} != {n} variables")
        if rel not in (LE, GE, EQ):
            raise ValueError(f"unknown relation {rel!r}")
        norm_rows.append((coeffs, rel, Fraction(rhs)))

    # Clear denominators row by row and make every right-hand side >= 0.
    int_rows: list[tuple[list[int], str, int]] = []
    for coeffs, rel, rhs in norm_rows:
        ints = _scale_to_int(coeffs + [rhs])
        row, b = ints[:-1], ints[-1]
        if b < 0:
            row = [-v for v in row]
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        int_rows.append((row, rel, b))

    m = len(int_rows)
    n_slack = sum(1 for _, rel, _ in int_rows if rel in (LE, GE))
    n_art = sum(1 for _, rel, _ in int_rows if rel in (GE, EQ))
    ncols = n + n_slack + n_art

    rows: list[list[int]] = []
    rhs: list[int] = []
    basis: list[int] = [-1] * m
    slack_at = n
    art_at = n + n_slack
    art_cols: list[int] = []
    for i, (coeffs, rel, b) in enumerate(int_rows):
        row = [0] * ncols
        row[:n] = coeffs
        if rel in (LE, GE):
            row[slack_at] = 1 if rel == LE else -1
            if rel == LE:
                basis[i] = slack_at
            slack_at += 1
        if rel in (GE, EQ):
            row[art_at] = 1
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1
        rows.append(row)
        rhs.append(b)

    tab = _Tableau(rows, rhs, basis)
    obj_mult = lcm(*(v.denominator for v in obj)) if obj else 1

    if art_cols:
        phase1 = [0] * ncols
        for c in art_cols:
            phase1[c] = -1
        status = tab.solve(phase1, [True] * ncols)
        if status != OPTIMAL:  # cannot happen: phase-1 objective is bounded
            raise AssertionError("phase 1 reported unbounded")
        _, val = tab.reduced_costs(phase1)
        if val != 0:  # max of -(sum of artificials) below zero
            return LpResult(INFEASIBLE)
        _drive_out_artificials(tab, art_cols)

    allowed = [True] * ncols
    for c in art_cols:
        allowed[c] = False
    cost = [0] * ncols
    cost[:n] = [int(v * obj_mult) for v in obj]
    status = tab.solve(cost, allowed)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)

    _, val = tab.reduced_costs(cost)
    value = Fraction(val, tab.den) / obj_mult
    point = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            point[b] = Fraction(tab.rhs[i], tab.den)
    if not maximize:
        value = -value
    return LpResult(OPTIMAL, value, tuple(point))


def _drive_out_artificials(tab: _Tableau, art_cols: list[int]) -> None:
    """Pivot zero-valued artificial variables out of the basis.

    After a feasible phase 1 every basic artificial sits at value zero.
    Each one is swapped for any usable non-artificial column; if its row
    has none, the row encodes a redundant constraint and is dropped.
    """
    art = set(art_cols)
    for i in list(range(len(tab.rows) - 1, -1, -1)):
        if tab.basis[i] not in art:
            continue
        pivot_col = -1
        for j in range(tab.ncols):
            if j not in art and tab.rows[i][j] != 0:
                pivot_col = j
                break
        if pivot_col < 0:
            del tab.rows[i], tab.rhs[i], tab.basis[i]
            continue
        if tab.rows[i][pivot_col] < 0:
            # Row carries an all-zero basic solution value, so negating it
            # keeps the represented equation and makes the pivot positive.
            tab.rows[i] = [-v for v in tab.rows[i]]
            tab.rhs[i] = -tab.rhs[i]
        tab.pivot(i, pivot_col)


def maximize(objective: Sequence, constraints: Iterable[Row]) -> LpResult:
    return solve_lp(objective, constraints, maximize=True)


def feasible(constraints: Iterable[Row], nvars: int) -> bool:
    """Whether ``{x >= 0 : constraints}`` is non-empty."""
    res = solve_lp([0] * nvars, constraints, maximize=True)
    return res.status == OPTIMAL
