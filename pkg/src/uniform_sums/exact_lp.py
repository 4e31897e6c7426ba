"""Exact rational linear programming for equality-form problems.

Solves ``min c^T x  s.t.  A x = b, x >= 0`` with a two-phase revised simplex
method in rational arithmetic (``gmpy2.mpq``), using Bland's smallest-index
rule for both the entering and the leaving variable. The basis is
refactorised with a sparse LU at every iteration.

A floating-point solve (HiGHS dual simplex through :func:`scipy.optimize.linprog`)
may be used to propose a starting basis. It only decides where the exact
method starts: every verdict, witness and dual vector is computed and
checked in exact arithmetic, and a rejected crash basis falls back to the
all-artificial start.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from gmpy2 import mpq
from scipy import sparse
from scipy.optimize import linprog

log = logging.getLogger(__name__)

ZERO = mpq(0)
ONE = mpq(1)

Column = Sequence[tuple[int, object]]


class SingularBasisError(ArithmeticError):
    pass


class IterationLimitError(RuntimeError):
    pass


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class SparseLU:
    """Sparse Gaussian elimination of a square matrix given by columns.

    ``columns[k]`` maps row index to value for basis position ``k``. Pivots
    are chosen Markowitz-style (shortest column, then shortest row), which
    keeps fill-in low on the 0/1 constraint matrices used here.
    """

    def __init__(self, columns: list[dict[int, mpq]], nrows: int):
        if len(columns) != nrows:
            raise ValueError("basis must be square")
        rows: dict[int, dict[int, mpq]] = {}
        colrows: dict[int, set[int]] = {}
        for k, col in enumerate(columns):
            colrows[k] = set()
            for r, v in col.items():
                if v:
                    rows.setdefault(r, {})[k] = v
                    colrows[k].add(r)
        self.steps = []  # (pivot_row, pivot_col, pivot, urow, lmults)
        remaining = set(colrows)
        while remaining:
            c = min(remaining, key=lambda k: (len(colrows[k]), k))
            if not colrows[c]:
                raise SingularBasisError("basis matrix is singular")
            r = min(colrows[c], key=lambda i: (len(rows[i]), i))
            prow = rows.pop(r)
            piv = prow[c]
            lmults = {}
            for i in list(colrows[c]):
                if i == r:
                    continue
                row_i = rows[i]
                mult = row_i[c] / piv
                lmults[i] = mult
                for j, v in prow.items():
                    nv = row_i.get(j, ZERO) - mult * v
                    if nv:
                        if j not in row_i:
                            colrows[j].add(i)
                        row_i[j] = nv
                    elif j in row_i:
                        del row_i[j]
                        colrows[j].discard(i)
            for j in prow:
                colrows[j].discard(r)
            remaining.discard(c)
            self.steps.append((r, c, piv, prow, lmults))
        ucols: dict[int, list[tuple[int, mpq]]] = {}
        for r, c, piv, prow, _ in self.steps:
            for j, v in prow.items():
                if j != c:
                    ucols.setdefault(j, []).append((r, v))
        self._ucols = ucols

    def solve(self, rhs: dict[int, mpq]) -> dict[int, mpq]:
        """Solve ``B x = rhs``; rhs indexed by row, result by basis position."""
        w = dict(rhs)
        for r, _, _, _, lmults in self.steps:
            v = w.get(r)
            if v:
                for i, mult in lmults.items():
                    w[i] = w.get(i, ZERO) - mult * v
        x: dict[int, mpq] = {}
        for r, c, piv, prow, _ in reversed(self.steps):
            s = w.get(r, ZERO)
            for j, v in prow.items():
                if j != c:
                    xj = x.get(j)
                    if xj:
                        s -= v * xj
            x[c] = s / piv
        return x

    def solve_transpose(self, cvec: dict[int, mpq]) -> dict[int, mpq]:
        """Solve ``B^T y = cvec``; cvec indexed by basis position, result by row."""
        z: dict[int, mpq] = {}
        for r, c, piv, _, _ in self.steps:
            s = cvec.get(c, ZERO)
            for rj, v in self._ucols.get(c, ()):
                zr = z.get(rj)
                if zr:
                    s -= zr * v
            z[r] = s / piv
        for r, _, _, _, lmults in reversed(self.steps):
            s = z.get(r, ZERO)
            for i, mult in lmults.items():
                zi = z.get(i)
                if zi:
                    s -= mult * zi
            z[r] = s
        return z


@dataclass
class LPResult:
    """Outcome of :meth:`ExactLP.solve`.

    ``status`` is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
    For infeasible problems ``farkas`` holds ``y`` with ``A^T y >= 0`` and
    ``b^T y < 0``. For optimal problems ``duals`` holds ``y`` with
    ``c - A^T y >= 0`` and ``b^T y = c^T x``.
    """

    status: str
    x: Optional[list[Fraction]] = None
    objective: Optional[Fraction] = None
    duals: Optional[list[Fraction]] = None
    farkas: Optional[list[Fraction]] = None
    iterations: int = 0
    crash_used: bool = False
    info: dict = field(default_factory=dict)


class ExactLP:
    """Equality-form LP ``A x = b, x >= 0`` over the rationals.

    ``columns[j]`` lists the ``(row, value)`` nonzeros of column ``j``.
    """

    def __init__(self, columns: Sequence[Column], b: Sequence, nrows: Optional[int] = None):
        self.nrows = len(b) if nrows is None else nrows
        if len(b) != self.nrows:
            raise ValueError("right-hand side length does not match the row count")
        self.ncols = len(columns)
        self.columns = [{int(r): mpq(v) for r, v in col if v} for col in columns]
        for col in self.columns:
            for r in col:
                if not 0 <= r < self.nrows:
                    raise ValueError(f"row index {r} out of range")
        self.b = [mpq(v) for v in b]
        self._phase1_duals = None

    # -- float crash --------------------------------------------------------

    def _float_matrix(self, sign: list[int]):
        data, ri, ci = [], [], []
        for j, col in enumerate(self.columns):
            for r, v in col.items():
                data.append(float(v) * sign[r])
                ri.append(r)
                ci.append(j)
        return sparse.csc_matrix((data, (ri, ci)), shape=(self.nrows, self.ncols))

    def _float_crash(self, sign, cost) -> Optional[list[int]]:
        """Candidate basis columns from a floating-point vertex.

        Returns the support of the vertex followed by the columns whose float
        reduced cost vanishes (artificial columns are numbered from ``ncols``).
        Completing the support from the second group yields a basis whose
        exact duals are feasible whenever the float duals were accurate.
        """
        R, N = self.nrows, self.ncols
        self._phase1_duals = None
        A = self._float_matrix(sign)
        b = np.array([float(v * s) for v, s in zip(self.b, sign)])
        tol = 1e-9
        try:
            if cost is not None:
                c = np.array([float(v) for v in cost])
                res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs-ds")
                if res.status == 0:
                    y = res.eqlin.marginals
                    rc = c - A.T @ y
                    support = [j for j in range(N) if res.x[j] > tol]
                    tight = [j for j in range(N) if res.x[j] <= tol and abs(rc[j]) <= tol]
                    return support + tight
            A1 = sparse.hstack([A, sparse.identity(R, format="csc")], format="csc")
            c1 = np.concatenate([np.zeros(N), np.ones(R)])
            res = linprog(c1, A_eq=A1, b_eq=b, bounds=(0, None), method="highs-ds")
        except ValueError as exc:  # pragma: no cover - solver rejected the model
            log.debug("float crash failed: %s", exc)
            return None
        if res.status != 0:
            return None
        y = res.eqlin.marginals
        if res.fun > tol:
            self._phase1_duals = y
        rc = c1 - A1.T @ y
        support = [j for j in range(N + R) if res.x[j] > tol]
        tight = [j for j in range(N + R) if res.x[j] <= tol and abs(rc[j]) <= tol]
        return support + tight

    def _rounded_farkas(self, sign) -> Optional[list[Fraction]]:
        """Round the float phase-1 duals to small rationals and keep them only
        if they certify infeasibility exactly."""
        y = self._phase1_duals
        if y is None:
            return None
        scale = float(np.max(np.abs(y))) or 1.0
        for den in (1, 2, 6, 12, 60, 720, 10**4, 10**6):
            z = [-Fraction(float(v) / scale).limit_denominator(den) * s for v, s in zip(y, sign)]
            if _is_farkas(self.columns, self.b, [mpq(v) for v in z]):
                return z
        return None

    # -- helpers ------------------------------------------------------------

    def _column(self, j: int, sign) -> dict[int, mpq]:
        if j >= self.ncols:
            return {j - self.ncols: ONE}
        return {r: v * sign[r] for r, v in self.columns[j].items()}

    def _complete_basis(self, support: list[int], sign) -> Optional[list[int]]:
        """Greedy independent subset of the candidates, completed with artificials."""
        R = self.nrows
        chosen: list[int] = []
        pivot_rows: set[int] = set()
        # incremental elimination: reduce each candidate against pivots so far
        pivots: list[tuple[int, dict[int, mpq]]] = []
        for j in support:
            vec = dict(self._column(j, sign))
            for pr, prow in pivots:
                v = vec.get(pr)
                if v:
                    for i, w in prow.items():
                        nv = vec.get(i, ZERO) - v * w
                        if nv:
                            vec[i] = nv
                        else:
                            vec.pop(i, None)
            if not vec:
                continue
            r = min(vec, key=lambda i: (i in pivot_rows, i))
            if r in pivot_rows:
                continue
            pv = vec[r]
            prow = {i: w / pv for i, w in vec.items()}
            pivots.append((r, prow))
            pivot_rows.add(r)
            chosen.append(j)
            if len(chosen) == R:
                break
        for r in range(R):
            if r not in pivot_rows:
                chosen.append(self.ncols + r)
        if len(chosen) != R:
            return None
        return chosen

    # -- simplex ------------------------------------------------------------

    def solve(
        self,
        cost: Optional[Sequence] = None,
        use_crash: bool = True,
        max_iterations: int = 100000,
    ) -> LPResult:
        R, N = self.nrows, self.ncols
        sign = [1 if v >= 0 else -1 for v in self.b]
        b = {r: self.b[r] * sign[r] for r in range(R) if self.b[r]}
        cost_q = None if cost is None else [mpq(v) for v in cost]
        if cost_q is not None and len(cost_q) != N:
            raise ValueError("cost length does not match the column count")

        basis: Optional[list[int]] = None
        crash_used = False
        if use_crash:
            support = self._float_crash(sign, cost_q)
            if support is not None:
                basis = self._complete_basis(support, sign)
                if basis is not None:
                    try:
                        lu = SparseLU([self._column(j, sign) for j in basis], R)
                        xb = lu.solve(b)
                        if all(v >= 0 for v in xb.values()):
                            crash_used = True
                        else:
                            basis = None
                    except SingularBasisError:
                        basis = None
            farkas = self._rounded_farkas(sign)
            if farkas is not None:
                return LPResult("infeasible", farkas=farkas, iterations=0, crash_used=True,
                                info={"certificate": "rounded float duals"})
        if basis is None:
            basis = [N + r for r in range(R)]

        iterations = 0

        def run(phase_cost, allowed) -> tuple[str, SparseLU, dict, dict]:
            nonlocal iterations
            while True:
                lu = SparseLU([self._column(j, sign) for j in basis], R)
                xb = lu.solve(b)
                cb = {k: phase_cost(j) for k, j in enumerate(basis)}
                y = lu.solve_transpose({k: v for k, v in cb.items() if v})
                in_basis = set(basis)
                entering = None
                for j in range(N + R):
                    if j in in_basis or not allowed(j):
                        continue
                    d = phase_cost(j)
                    for r, v in self._column(j, sign).items():
                        yr = y.get(r)
                        if yr:
                            d -= yr * v
                    if d < 0:
                        entering = j
                        break
                if entering is None:
                    return "optimal", lu, xb, y
                if iterations >= max_iterations:
                    raise IterationLimitError("simplex iteration limit reached")
                iterations += 1
                direction = lu.solve(self._column(entering, sign))
                leave, best = None, None
                for k, dk in direction.items():
                    if dk > 0:
                        ratio = xb.get(k, ZERO) / dk
                        if (
                            best is None
                            or ratio < best
                            or (ratio == best and basis[k] < basis[leave])
                        ):
                            leave, best = k, ratio
                if leave is None:
                    return "unbounded", lu, xb, y
                basis[leave] = entering

        # phase 1: minimise the sum of artificials
        _, lu, xb, y = run(lambda j: ONE if j >= N else ZERO, lambda j: True)
        infeas = sum((xb.get(k, ZERO) for k, j in enumerate(basis) if j >= N), ZERO)
        if infeas > 0:
            farkas = [to_fraction(-y.get(r, ZERO) * sign[r]) for r in range(R)]
            return LPResult("infeasible", farkas=farkas, iterations=iterations,
                            crash_used=crash_used, info={"phase1_value": to_fraction(infeas)})

        if cost_q is not None:
            # pivot zero-level artificials out where a structural column allows it
            for k in range(R):
                if basis[k] < N:
                    continue
                rho = lu.solve_transpose({k: ONE})
                in_basis = set(basis)
                for j in range(N):
                    if j in in_basis:
                        continue
                    alpha = sum((rho.get(r, ZERO) * v for r, v in self._column(j, sign).items()), ZERO)
                    if alpha:
                        basis[k] = j
                        lu = SparseLU([self._column(jj, sign) for jj in basis], R)
                        break
            status, lu, xb, y = run(lambda j: cost_q[j] if j < N else ZERO, lambda j: j < N)
            if status == "unbounded":
                return LPResult("unbounded", iterations=iterations, crash_used=crash_used)

        x = [Fraction(0)] * N
        for k, j in enumerate(basis):
            if j < N:
                x[j] = to_fraction(xb.get(k, ZERO))
        result = LPResult("optimal", x=x, iterations=iterations, crash_used=crash_used)
        if cost_q is not None:
            result.objective = sum((to_fraction(cost_q[j]) * x[j] for j in range(N) if x[j]), Fraction(0))
            result.duals = [to_fraction(y.get(r, ZERO) * sign[r]) for r in range(R)]
        return result


def _is_farkas(columns: list[dict[int, mpq]], b: list[mpq], z: list[mpq]) -> bool:
    if sum((bv * zv for bv, zv in zip(b, z) if zv), ZERO) >= 0:
        return False
    return all(sum((v * z[r] for r, v in col.items()), ZERO) >= 0 for col in columns)


def check_primal(columns: Sequence[Column], b: Sequence, x: Sequence) -> bool:
    """Independent check that ``x >= 0`` and ``A x = b`` exactly."""
    if any(v < 0 for v in x):
        return False
    lhs = [Fraction(0)] * len(b)
    for j, col in enumerate(columns):
        if x[j]:
            for r, v in col:
                lhs[r] += Fraction(v) * x[j]
    return all(l == Fraction(r) for l, r in zip(lhs, b))


def check_farkas(columns: Sequence[Column], b: Sequence, y: Sequence) -> bool:
    """Independent check of ``A^T y >= 0`` and ``b^T y < 0``."""
    for col in columns:
        if sum((Fraction(v) * y[r] for r, v in col), Fraction(0)) < 0:
            return False
    return sum((Fraction(bi) * yi for bi, yi in zip(b, y)), Fraction(0)) < 0


def check_optimal(columns: Sequence[Column], b: Sequence, cost: Sequence, x: Sequence, y: Sequence) -> bool:
    """Primal feasibility, dual feasibility and a zero duality gap."""
    if not check_primal(columns, b, x):
        return False
    for j, col in enumerate(columns):
        if Fraction(cost[j]) - sum((Fraction(v) * y[r] for r, v in col), Fraction(0)) < 0:
            return False
    primal = sum((Fraction(c) * xj for c, xj in zip(cost, x)), Fraction(0))
    dual = sum((Fraction(bi) * yi for bi, yi in zip(b, y)), Fraction(0))
    return primal == dual
