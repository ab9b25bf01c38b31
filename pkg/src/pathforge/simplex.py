"""Revised primal simplex for bounded LPs with dual values and certificates.

The solver works on ``A x + s = b`` where every row owns a slack ``s`` whose
bounds encode the row sense (``<=``: s >= 0, ``>=``: s <= 0, ``=``: s = 0).
Phase 1 minimises the sum of artificial variables added only for rows whose
slack cannot absorb the initial residual. The basis is held as a sparse LU
factorisation plus a product-form eta file, refactorised periodically.

Dual values are reported as ``-d(objective)/d(rhs)``: the value of relaxing a
row's right-hand side upwards. A binding ``<=`` row in a minimisation
therefore has a nonnegative dual.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .lp import LinearProgram

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
FAILED = "failed"

_BASIC, _AT_LB, _AT_UB, _FREE = 0, 1, 2, 3


@dataclass(frozen=True)
class Tolerances:
    feas_abs: float = 1e-9
    feas_rel: float = 1e-9
    gap: float = 1e-6
    optimality: float = 1e-9
    pivot: float = 1e-7
    stall_threshold: int = 50
    refactor_interval: int = 30
    max_iterations: int = 1_000_000
    scale: bool = True


@dataclass
class LpSolution:
    status: str
    objective: float
    primal: np.ndarray
    dual: np.ndarray
    reduced_costs: np.ndarray
    activity: np.ndarray
    col_names: list
    row_names: list
    iterations: int = 0
    farkas: np.ndarray | None = None
    ray: np.ndarray | None = None
    message: str = ""
    _cidx: dict = field(default=None, repr=False)
    _ridx: dict = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def value(self, column: str) -> float:
        if self._cidx is None:
            self._cidx = {n: j for j, n in enumerate(self.col_names)}
        return float(self.primal[self._cidx[column]])

    def row_dual(self, row: str) -> float:
        if self._ridx is None:
            self._ridx = {n: i for i, n in enumerate(self.row_names)}
        try:
            i = self._ridx[row]
        except KeyError:
            raise ValueError(f"unknown row {row!r}") from None
        return float(self.dual[i])

    def values(self) -> dict[str, float]:
        return {n: float(v) for n, v in zip(self.col_names, self.primal)}


def shadow_price(solution: LpSolution, row: str) -> float:
    """Dual value of ``row``: cost saved per unit of right-hand-side relaxation.

    For an emissions cap written as ``emissions - residual <= cap`` this is
    the CO2 price in objective units per emission unit.
    """
    if solution.status != OPTIMAL:
        raise ValueError(f"shadow price needs an optimal solution, status is {solution.status}")
    return solution.row_dual(row)


class _Breakdown(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# public entry point
# ---------------------------------------------------------------------------

def solve(lp: LinearProgram, tol: Tolerances | None = None) -> LpSolution:
    """Solve ``lp`` to optimality, or prove it infeasible or unbounded."""
    tol = tol or Tolerances()
    problems = lp.validate()
    if problems:
        raise ValueError("invalid linear program: " + "; ".join(problems[:5]))
    A, b, c, lb, ub, senses = lp.arrays()
    A = A.tocsc()
    m, n = A.shape
    sl = np.array([0.0 if s != ">=" else -math.inf for s in senses])
    su = np.array([math.inf if s == "<=" else 0.0 for s in senses])

    pre = _presolve(A, b, c, lb, ub, sl, su)
    x = pre.x_fixed.copy()
    pi = np.zeros(m)
    iterations = 0
    farkas = ray = None
    message = ""
    if pre.status == INFEASIBLE:
        status = INFEASIBLE
        farkas = pre.farkas
        message = pre.message
    elif pre.status == UNBOUNDED:
        status = UNBOUNDED
        ray = pre.ray
        message = pre.message
    else:
        rows, cols = pre.rows, pre.cols
        sub = _Problem(A[rows][:, cols].tocsc() if len(rows) and len(cols) else sp.csc_matrix((len(rows), len(cols))),
                       pre.b[rows], c[cols], lb[cols], ub[cols], sl[rows], su[rows])
        try:
            res = _solve_core(sub, tol)
        except _Breakdown as exc:
            res = _CoreResult(FAILED, np.zeros(len(cols)), np.zeros(len(rows)), 0, message=str(exc))
        status = res.status
        iterations = res.iterations
        message = res.message
        x[cols] = res.x
        pi[rows] = res.pi
        if status == INFEASIBLE:
            farkas = np.zeros(m)
            farkas[rows] = res.farkas
            # round-off entries would carry arbitrary signs
            farkas[np.abs(farkas) <= 1e-12 * max(np.abs(farkas).max(initial=0.0), 1.0)] = 0.0
        elif status == UNBOUNDED:
            ray = np.zeros(n)
            ray[cols] = res.ray
    d = c - A.T @ pi
    activity = A @ x
    objective = float(c @ x) + lp.objective_offset if status == OPTIMAL else math.nan
    # report -dz/db: relaxing a binding <= row lowers cost
    return LpSolution(status, objective, x, -pi, d, activity, list(lp.col_names), list(lp.row_names),
                      iterations, farkas=farkas, ray=ray, message=message)


# ---------------------------------------------------------------------------
# presolve: empty rows, empty columns, fixed columns
# ---------------------------------------------------------------------------

@dataclass
class _Presolved:
    status: str
    rows: np.ndarray
    cols: np.ndarray
    b: np.ndarray
    x_fixed: np.ndarray
    farkas: np.ndarray | None = None
    ray: np.ndarray | None = None
    message: str = ""


def _presolve(A, b, c, lb, ub, sl, su) -> _Presolved:
    m, n = A.shape
    b = b.astype(float).copy()
    x = np.zeros(n)
    col_nnz = np.diff(A.indptr)
    keep_col = np.ones(n, dtype=bool)
    for j in range(n):
        if lb[j] == ub[j]:
            x[j] = lb[j]
            keep_col[j] = False
        elif col_nnz[j] == 0:
            if c[j] > 0:
                val = lb[j]
            elif c[j] < 0:
                val = ub[j]
            else:
                val = min(max(0.0, lb[j]), ub[j])
            if not math.isfinite(val):
                ray = np.zeros(n)
                ray[j] = 1.0 if c[j] < 0 else -1.0
                return _Presolved(UNBOUNDED, np.arange(0), np.arange(0), b, x, ray=ray,
                                  message=f"empty column {j} improves without bound")
            x[j] = val
            keep_col[j] = False
    fixed = ~keep_col
    if fixed.any():
        b = b - A[:, np.flatnonzero(fixed)] @ x[fixed]
    cols = np.flatnonzero(keep_col)
    Ak = A[:, cols].tocsr()
    row_nnz = np.diff(Ak.indptr)
    keep_row = np.ones(m, dtype=bool)
    for i in range(m):
        if row_nnz[i] == 0:
            # 0 + s = b with s in [sl, su]
            scale = 1.0 + abs(b[i])
            if b[i] < sl[i] - 1e-9 * scale or b[i] > su[i] + 1e-9 * scale:
                farkas = np.zeros(m)
                farkas[i] = 1.0 if b[i] > su[i] else -1.0
                return _Presolved(INFEASIBLE, np.arange(0), cols, b, x, farkas=farkas,
                                  message=f"row {i} has no coefficients but rhs {b[i]:g}")
            keep_row[i] = False
    return _Presolved(OPTIMAL, np.flatnonzero(keep_row), cols, b, x)


# ---------------------------------------------------------------------------
# core
# ---------------------------------------------------------------------------

@dataclass
class _Problem:
    A: sp.csc_matrix
    b: np.ndarray
    c: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    sl: np.ndarray
    su: np.ndarray


@dataclass
class _CoreResult:
    status: str
    x: np.ndarray
    pi: np.ndarray
    iterations: int
    farkas: np.ndarray | None = None
    ray: np.ndarray | None = None
    message: str = ""


def _geometric_scaling(A: sp.csc_matrix, passes: int = 6):
    m, n = A.shape
    r = np.ones(m)
    s = np.ones(n)
    if A.nnz == 0:
        return r, s
    coo = A.tocoo()
    rows, cols, absval = coo.row, coo.col, np.abs(coo.data)
    logv = np.log2(absval)
    for _ in range(passes):
        cur = logv + np.log2(r)[rows] + np.log2(s)[cols]
        rmax = np.full(m, -np.inf)
        rmin = np.full(m, np.inf)
        np.maximum.at(rmax, rows, cur)
        np.minimum.at(rmin, rows, cur)
        ok = np.isfinite(rmax)
        r[ok] *= np.exp2(-np.round((rmax[ok] + rmin[ok]) / 2))
        cur = logv + np.log2(r)[rows] + np.log2(s)[cols]
        cmax = np.full(n, -np.inf)
        cmin = np.full(n, np.inf)
        np.maximum.at(cmax, cols, cur)
        np.minimum.at(cmin, cols, cur)
        ok = np.isfinite(cmax)
        s[ok] *= np.exp2(-np.round((cmax[ok] + cmin[ok]) / 2))
    return r, s


def _solve_core(p: _Problem, tol: Tolerances) -> _CoreResult:
    m, n = p.A.shape
    if tol.scale:
        rs, cs = _geometric_scaling(p.A)
    else:
        rs, cs = np.ones(m), np.ones(n)
    A = sp.diags(rs) @ p.A @ sp.diags(cs)
    A = A.tocsc()
    b = rs * p.b
    c = cs * p.c
    # a typical rather than the largest cost, so that penalty columns do not
    # push ordinary costs below the pricing tolerance
    nz = np.abs(c[c != 0.0])
    obj_scale = 1.0 / float(np.median(nz)) if len(nz) else 1.0
    c = c * obj_scale
    with np.errstate(divide="ignore", invalid="ignore"):
        lb = np.where(np.isfinite(p.lb), p.lb / cs, p.lb)
        ub = np.where(np.isfinite(p.ub), p.ub / cs, p.ub)
    engine = _Engine(A, b, c, lb, ub, p.sl.copy(), p.su.copy(), tol)
    res = engine.run()
    x = res.x * cs
    pi = res.pi * rs / obj_scale
    farkas = res.farkas * rs if res.farkas is not None else None
    ray = res.ray * cs if res.ray is not None else None
    return _CoreResult(res.status, x, pi, res.iterations, farkas, ray, res.message)


class _Engine:
    """Bounded revised simplex on a scaled problem."""

    def __init__(self, A, b, c, lb, ub, sl, su, tol: Tolerances):
        self.tol = tol
        self.m, self.n = A.shape
        m, n = self.m, self.n
        self.b = b
        x_struct = np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))
        resid = b - A @ x_struct if n else b.copy()
        slack_val = np.clip(resid, sl, su)
        gap = resid - slack_val
        feas_tol = tol.feas_abs + tol.feas_rel * np.abs(b)
        need_art = np.abs(gap) > feas_tol
        art_rows = np.flatnonzero(need_art)
        k = len(art_rows)
        sign = np.sign(gap[art_rows])
        self.art_rows = art_rows
        art = sp.csc_matrix((sign, (art_rows, np.arange(k))), shape=(m, k))
        self.M = sp.hstack([A, sp.identity(m, format="csc"), art], format="csc")
        self.Mt = self.M.T.tocsr()
        N = n + m + k
        self.N = N
        self.lo = np.concatenate([lb, sl, np.zeros(k)])
        self.hi = np.concatenate([ub, su, np.full(k, math.inf)])
        self.c2 = np.concatenate([c, np.zeros(m + k)])
        self.c1 = np.concatenate([np.zeros(n + m), np.ones(k)])
        self.x = np.concatenate([x_struct, slack_val, np.abs(gap[art_rows])])
        self.stat = np.empty(N, dtype=np.int8)
        self.stat[:n] = np.where(np.isfinite(lb), _AT_LB, np.where(np.isfinite(ub), _AT_UB, _FREE))
        self.stat[n:n + m] = np.where(slack_val == sl, _AT_LB, _AT_UB)
        basis = np.arange(n, n + m)
        basis[art_rows] = n + m + np.arange(k)
        self.basis = basis
        self.stat[basis] = _BASIC
        for i in art_rows:  # slack of an artificial row is nonbasic at the violated bound
            j = n + i
            self.stat[j] = _AT_LB if self.x[j] == self.lo[j] else _AT_UB
        self.movable = self.lo < self.hi
        self.iterations = 0
        self.lu = None
        self.etas: list = []
        self.strict = 1.0
        self.strict_left = 0

    # -- linear algebra ---------------------------------------------------------
    def _refactor(self):
        B = self.M[:, self.basis].tocsc()
        try:
            self.lu = splu(B, permc_spec="COLAMD", diag_pivot_thresh=0.1,
                           options={"SymmetricMode": False})
        except RuntimeError as exc:
            raise _Breakdown(f"basis factorisation failed: {exc}") from exc
        self.etas = []
        xn = self.x.copy()
        xn[self.basis] = 0.0
        rhs = self.b - self.M @ xn
        xb = self.lu.solve(rhs)
        if not np.all(np.isfinite(xb)):
            raise _Breakdown("non-finite basic solution after refactorisation")
        resid = B @ xb - rhs
        if np.max(np.abs(resid), initial=0.0) > 1e-6 * (1.0 + np.max(np.abs(rhs), initial=0.0)):
            raise _Breakdown("ill-conditioned basis: residual %.3g" % np.max(np.abs(resid)))
        self.x[self.basis] = xb
        self._snapshot = (self.basis.copy(), self.stat.copy(), self.x.copy())

    def _refresh(self):
        """Refactorise; on a singular basis return to the last good one.

        After a rollback the ratio test demands larger pivots for a while.
        """
        try:
            self._refactor()
        except _Breakdown:
            basis, stat, x = self._snapshot
            self.basis, self.stat, self.x = basis.copy(), stat.copy(), x.copy()
            self._refactor()
            self.strict = max(self.strict, 1) * 100
            self.strict_left = 2 * self.tol.refactor_interval
            log.debug("singular basis, rolled back; pivot tolerance x%g", self.strict)

    def _ftran(self, v):
        y = self.lu.solve(v)
        for r, idx, vals, piv in self.etas:
            yr = y[r] / piv
            if yr != 0.0:
                y[idx] -= vals * yr
            y[r] = yr
        return y

    def _btran(self, v):
        z = v.astype(float).copy()
        for r, idx, vals, piv in reversed(self.etas):
            z[r] = (z[r] - vals @ z[idx]) / piv
        return self.lu.solve(z, trans="T")

    def _column(self, j):
        col = np.zeros(self.m)
        s, e = self.M.indptr[j], self.M.indptr[j + 1]
        col[self.M.indices[s:e]] = self.M.data[s:e]
        return col

    # -- driver ------------------------------------------------------------
    def run(self) -> _CoreResult:
        m, n = self.m, self.n
        if m == 0:
            return self._solve_unconstrained()
        self._refactor()
        k = len(self.art_rows)
        if k:
            status = self._iterate(self.c1, phase=1)
            if status == FAILED:
                return self._result(FAILED)
            infeas = float(np.sum(self.x[n + m:]))
            tol = self.tol.feas_abs + self.tol.feas_rel * float(np.max(np.abs(self.b), initial=0.0))
            if status == UNBOUNDED or infeas > max(tol, 1e-9 * k):
                farkas = self._btran(self.c1[self.basis])
                return self._result(INFEASIBLE, farkas=farkas,
                                    message=f"phase 1 ended with infeasibility {infeas:.3g}")
            art = np.arange(n + m, n + m + k)
            self.hi[art] = 0.0
            self.movable[art] = False
            self.x[art] = np.where(self.stat[art] == _BASIC, self.x[art], 0.0)
            self.stat[art] = np.where(self.stat[art] == _BASIC, _BASIC, _AT_LB)
        for attempt in range(3):
            status = self._iterate(self.c2, phase=2)
            if status != OPTIMAL:
                break
            self._refactor()
            if self._primal_ok() and self._dual_ok():
                break
        if status == OPTIMAL and not self._primal_ok():
            return self._result(FAILED, message="lost primal feasibility")
        if status == UNBOUNDED:
            return self._result(UNBOUNDED, ray=self._ray, message="improving ray found")
        return self._result(status)

    def _solve_unconstrained(self):
        x = self.x[:self.n].copy()
        for j in range(self.n):
            cj = self.c2[j]
            target = self.lo[j] if cj > 0 else self.hi[j] if cj < 0 else x[j]
            if not math.isfinite(target):
                ray = np.zeros(self.n)
                ray[j] = -np.sign(cj)
                return _CoreResult(UNBOUNDED, x, np.zeros(0), 0, ray=ray)
            x[j] = target
        return _CoreResult(OPTIMAL, x, np.zeros(0), 0)

    def _primal_ok(self) -> bool:
        xb = self.x[self.basis]
        lo, hi = self.lo[self.basis], self.hi[self.basis]
        t = 1e-7 * (1.0 + np.abs(xb))
        return bool(np.all(xb >= lo - t) and np.all(xb <= hi + t))

    def _dual_ok(self) -> bool:
        pi = self._btran(self.c2[self.basis])
        d = self.c2 - self.Mt @ pi
        return self._entering(d, bland=False) is None

    def _result(self, status, farkas=None, ray=None, message=""):
        pi = np.zeros(self.m)
        if status == OPTIMAL and self.m:
            pi = self._btran(self.c2[self.basis])
        x = self.x[:self.n].copy()
        if status == OPTIMAL:
            x = np.clip(x, self.lo[:self.n], self.hi[:self.n])
        return _CoreResult(status, x, pi, self.iterations, farkas=farkas,
                           ray=None if ray is None else ray[:self.n], message=message)

    def _entering(self, d, bland: bool, weights=None):
        stat = self.stat
        score = np.where(stat == _AT_LB, -d,
                         np.where(stat == _AT_UB, d, np.where(stat == _FREE, np.abs(d), -np.inf)))
        score[~self.movable] = -np.inf
        score[stat == _BASIC] = -np.inf
        thr = self.tol.optimality
        if bland:
            cand = np.flatnonzero(score > thr)
            return int(cand[0]) if len(cand) else None
        if weights is None:
            q = int(np.argmax(score))
            return q if score[q] > thr else None
        eligible = score > thr
        if not eligible.any():
            return None
        merit = np.where(eligible, score * score / weights, -1.0)
        return int(np.argmax(merit))

    def _reduced_costs(self, cost):
        pi = self._btran(cost[self.basis])
        d = cost - self.Mt @ pi
        d[self.basis] = 0.0
        return d

    def _iterate(self, cost, phase: int) -> str:
        """Primal simplex with Devex pricing and updated reduced costs."""
        tol = self.tol
        degenerate = 0
        bland = False
        since_refactor = 0
        weights = np.ones(self.N)
        d = self._reduced_costs(cost)
        fresh = True
        while True:
            if self.iterations >= tol.max_iterations:
                log.warning("iteration limit reached")
                return FAILED
            if since_refactor >= tol.refactor_interval:
                self._refresh()
                since_refactor = 0
                d = self._reduced_costs(cost)
                fresh = True
            q = self._entering(d, bland, None if bland else weights)
            if q is None:
                if fresh:
                    return OPTIMAL
                # confirm optimality on recomputed duals
                d = self._reduced_costs(cost)
                fresh = True
                continue
            if self.stat[q] == _AT_LB or (self.stat[q] == _FREE and d[q] < 0):
                direction = 1.0
            else:
                direction = -1.0
            w = self._ftran(self._column(q))
            delta = -direction * w
            theta, r = self._ratio(delta, bland)
            span = self.hi[q] - self.lo[q]
            if r is None and not math.isfinite(span):
                if since_refactor > 0 or not fresh:
                    # only trust an unbounded ray priced on a fresh factorisation
                    self._refresh()
                    since_refactor = 0
                    d = self._reduced_costs(cost)
                    fresh = True
                    continue
                ray = np.zeros(self.N)
                ray[q] = direction
                ray[self.basis] = delta
                self._ray = ray
                return UNBOUNDED
            self.iterations += 1
            since_refactor += 1
            fresh = False
            if r is None or span <= theta:
                # bound flip, basis and reduced costs unchanged
                theta = span
                self.x[self.basis] += theta * delta
                if direction > 0:
                    self.x[q], self.stat[q] = self.hi[q], _AT_UB
                else:
                    self.x[q], self.stat[q] = self.lo[q], _AT_LB
            else:
                piv = w[r]
                e = np.zeros(self.m)
                e[r] = 1.0
                alpha = self.Mt @ self._btran(e)
                if abs(alpha[q] - piv) > 1e-7 * (1.0 + abs(piv)):
                    # row and column disagree: refresh the factorisation first
                    self._refresh()
                    since_refactor = 0
                    d = self._reduced_costs(cost)
                    fresh = True
                    self.iterations -= 1
                    continue
                self.x[self.basis] += theta * delta
                self.x[q] += direction * theta
                leave = self.basis[r]
                if delta[r] < 0:
                    self.x[leave], self.stat[leave] = self.lo[leave], _AT_LB
                else:
                    self.x[leave], self.stat[leave] = self.hi[leave], _AT_UB
                if self.lo[leave] == -math.inf and self.hi[leave] == math.inf:
                    self.stat[leave] = _FREE
                self.basis[r] = q
                self.stat[q] = _BASIC
                # reduced costs and Devex reference weights
                d -= (d[q] / piv) * alpha
                ratio2 = (alpha / piv) ** 2
                wq = weights[q]
                np.maximum(weights, ratio2 * wq, out=weights)
                weights[leave] = max(wq / (piv * piv), 1.0)
                d[self.basis] = 0.0
                if weights.max() > 1e8:
                    weights[:] = 1.0
                if abs(piv) < 1e-11:
                    self._refresh()
                    since_refactor = 0
                    d = self._reduced_costs(cost)
                    fresh = True
                else:
                    idx = np.flatnonzero(w)
                    idx = idx[idx != r]
                    self.etas.append((r, idx, w[idx], piv))
            if theta <= 1e-12:
                degenerate += 1
                if degenerate >= tol.stall_threshold:
                    bland = True
            else:
                degenerate = 0
                bland = False

    def _ratio(self, delta, bland: bool):
        """Two-pass Harris ratio test; returns (step, leaving row) or (inf, None)."""
        ptol = self.tol.pivot * max(1.0, float(np.max(np.abs(delta), initial=0.0)))
        if self.strict_left > 0:
            self.strict_left -= 1
            ptol *= self.strict
            if self.strict_left == 0:
                self.strict = 1.0
        basis = self.basis
        xb = self.x[basis]
        lo = self.lo[basis]
        hi = self.hi[basis]
        dec = delta < -ptol
        inc = delta > ptol
        with np.errstate(divide="ignore", invalid="ignore"):
            exact = np.full(self.m, np.inf)
            exact[dec] = (xb[dec] - lo[dec]) / -delta[dec]
            exact[inc] = (hi[inc] - xb[inc]) / delta[inc]
        exact = np.maximum(exact, 0.0)
        if not np.any(np.isfinite(exact)):
            return math.inf, None
        if bland:
            tmin = np.min(exact)
            ties = np.flatnonzero(exact <= tmin + 1e-12 * (1.0 + tmin))
            r = int(ties[np.argmin(basis[ties])])
            return float(exact[r]), r
        with np.errstate(divide="ignore", invalid="ignore"):
            relaxed = np.full(self.m, np.inf)
            ftol = self.tol.feas_abs + self.tol.feas_rel * np.abs(lo[dec])
            relaxed[dec] = (xb[dec] - lo[dec] + ftol) / -delta[dec]
            ftol = self.tol.feas_abs + self.tol.feas_rel * np.abs(hi[inc])
            relaxed[inc] = (hi[inc] - xb[inc] + ftol) / delta[inc]
        # a basic variable already past its bound blocks at a zero step
        bound = max(float(np.min(relaxed)), 0.0)
        cand = np.flatnonzero(exact <= bound)
        if not len(cand):
            r = int(np.argmin(exact))
            return float(exact[r]), r
        r = int(cand[np.argmax(np.abs(delta[cand]))])
        return float(exact[r]), r


# ---------------------------------------------------------------------------
# certificates and checks
# ---------------------------------------------------------------------------

def dual_objective(lp: LinearProgram, sol: LpSolution, zero_tol: float = 1e-9) -> float:
    """Lagrangian dual bound built from the reported duals and column bounds."""
    A, b, c, lb, ub, senses = lp.arrays()
    pi = -sol.dual
    d = c - A.T @ pi
    total = float(pi @ b) + lp.objective_offset
    scale = 1.0 + np.abs(c)
    for j in range(len(c)):
        dj = d[j]
        if abs(dj) <= zero_tol * scale[j]:
            continue
        bound = lb[j] if dj > 0 else ub[j]
        if not math.isfinite(bound):
            return -math.inf
        total += dj * bound
    return total


def verify_farkas(lp: LinearProgram, farkas: np.ndarray) -> float:
    """Return a positive number when ``farkas`` proves ``lp`` infeasible.

    With multipliers ``y`` on ``A x + s = b`` the value
    ``y.b - max over bounds of y.(A x + s)`` is positive exactly when no
    point inside the column and slack bounds satisfies every row.
    """
    A, b, c, lb, ub, senses = lp.arrays()
    y = np.asarray(farkas, dtype=float)
    g = A.T @ y
    total = float(y @ b)
    for j, gj in enumerate(g):
        if gj > 0:
            total -= gj * ub[j] if math.isfinite(ub[j]) else math.inf
        elif gj < 0:
            total -= gj * lb[j] if math.isfinite(lb[j]) else math.inf
    for i, s in enumerate(senses):
        yi = y[i]
        if s == "<=" and yi > 0:
            return -math.inf
        if s == ">=" and yi < 0:
            return -math.inf
    return total


def check_solution(lp: LinearProgram, sol: LpSolution) -> dict[str, float]:
    """Residual report: primal feasibility, dual feasibility, gap, slackness."""
    A, b, c, lb, ub, senses = lp.arrays()
    x = sol.primal
    act = A @ x
    viol = np.zeros(len(b))
    for i, s in enumerate(senses):
        if s == "<=":
            viol[i] = max(0.0, act[i] - b[i])
        elif s == ">=":
            viol[i] = max(0.0, b[i] - act[i])
        else:
            viol[i] = abs(act[i] - b[i])
    row_viol = float(np.max(viol / (1.0 + np.abs(b)), initial=0.0))
    bound_viol = float(np.max(np.maximum(lb - x, 0.0) + np.maximum(x - ub, 0.0), initial=0.0))
    y = sol.dual
    dual_viol = 0.0
    for i, s in enumerate(senses):
        if s == "<=":
            dual_viol = max(dual_viol, -y[i])
        elif s == ">=":
            dual_viol = max(dual_viol, y[i])
    d = c - A.T @ (-y)
    cs = 0.0
    for j in range(len(c)):
        at_lb = math.isfinite(lb[j]) and abs(x[j] - lb[j]) <= 1e-7 * (1 + abs(lb[j]))
        at_ub = math.isfinite(ub[j]) and abs(x[j] - ub[j]) <= 1e-7 * (1 + abs(ub[j]))
        if at_lb and at_ub:
            continue
        if at_lb:
            dual_viol = max(dual_viol, -d[j])
        elif at_ub:
            dual_viol = max(dual_viol, d[j])
        else:
            cs = max(cs, abs(d[j]) * min(1.0, abs(x[j]) + 1e-300))
            dual_viol = max(dual_viol, abs(d[j]))
    slack = b - act
    for i in range(len(b)):
        cs = max(cs, abs(y[i] * slack[i]) if senses[i] != "=" else 0.0)
    primal_obj = float(c @ x) + lp.objective_offset
    dual_obj = dual_objective(lp, sol)
    gap = abs(primal_obj - dual_obj) / (1.0 + abs(primal_obj))
    return {"row_violation": row_viol, "bound_violation": bound_viol,
            "dual_violation": float(dual_viol), "complementary_slackness": float(cs),
            "relative_gap": gap}


def read_solution_csv(path) -> dict[str, float]:
    """Read an external solver's solution: ``name,value`` rows after a header.

    Column and row names share one file; a name may appear once.
    """
    import csv
    out: dict[str, float] = {}
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    for i, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) < 2:
            raise ValueError(f"{path}:{i}: expected name,value")
        name = row[0].strip()
        if name in out:
            raise ValueError(f"{path}:{i}: duplicate name {name!r}")
        out[name] = float(row[1])
    return out


def compare_external(lp: LinearProgram, values: dict[str, float],
                     reference: LpSolution | None = None) -> dict[str, float]:
    """Objective and feasibility of external primal values on ``lp``.

    Columns missing from ``values`` count as zero. With ``reference`` the
    objective difference to that solution is included.
    """
    A, b, c, lb, ub, senses = lp.arrays()
    x = np.array([values.get(n, 0.0) for n in lp.col_names])
    act = A @ x
    viol = 0.0
    for i, s in enumerate(senses):
        r = act[i] - b[i]
        v = max(r, 0.0) if s == "<=" else max(-r, 0.0) if s == ">=" else abs(r)
        viol = max(viol, v / (1.0 + abs(b[i])))
    bound = float(np.max(np.maximum(lb - x, 0.0) + np.maximum(x - ub, 0.0), initial=0.0))
    obj = float(c @ x) + lp.objective_offset
    out = {"objective": obj, "row_violation": viol, "bound_violation": bound,
           "missing_columns": float(sum(n not in values for n in lp.col_names))}
    if reference is not None and reference.optimal:
        out["objective_difference"] = abs(obj - reference.objective) / (1.0 + abs(obj))
    return out
