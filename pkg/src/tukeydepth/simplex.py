"""Dense bounded-variable revised simplex solver.

Two phases with one artificial variable per row, Dantzig pricing with a
Bland's-rule fallback after a degenerate-iteration budget, explicit basis
inverse refactorized on a fixed pivot cadence, and lowest-index tie-breaking
everywhere so identical inputs give identical output.  Problem sizes in this
project stay small (a few hundred rows and columns), so dense algebra is
adequate and much simpler than a factorized sparse kernel.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Sense",
    "LpStatus",
    "LpModel",
    "LpSolution",
    "LpNumericsError",
    "LpCounter",
    "solve_lp",
    "solve_with_fixings",
]

INF = float("inf")

# Nonbasic status codes.
_AT_LOWER = 0
_AT_UPPER = 1
_FREE = 2
_BASIC = 3

_REFACTOR_EVERY = 100
_DEGENERATE_BUDGET = 60
_PIVOT_TOL = 1e-10
_RATIO_TIE = 1e-12


class Sense(str, Enum):
    GE = ">="
    LE = "<="
    EQ = "="


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpNumericsError(RuntimeError):
    """Raised when the solver cannot make progress even under Bland's rule."""


@dataclass
class LpModel:
    """min objective . v subject to row_coeffs v (sense) rhs, lower <= v <= upper.

    All arrays are dense; +-inf bounds are allowed.  ``warm`` optionally
    suggests a starting point: variables open nonbasic at the bound nearest
    the suggestion (free ones exactly on it), which lets a nearly feasible
    guess skip most of phase 1.
    """

    objective: np.ndarray
    row_coeffs: np.ndarray
    senses: list[Sense]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    warm: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.shape[0]
        self.row_coeffs = np.asarray(self.row_coeffs, dtype=float).reshape(-1, n)
        m = self.row_coeffs.shape[0]
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(m)
        if len(self.senses) != m:
            raise ValueError("one sense per row required")
        self.lower = np.asarray(self.lower, dtype=float).reshape(n)
        self.upper = np.asarray(self.upper, dtype=float).reshape(n)
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound above upper bound")
        if self.warm is not None:
            self.warm = np.asarray(self.warm, dtype=float).reshape(n)

    @property
    def columns(self) -> int:
        return self.objective.shape[0]

    @property
    def n_rows(self) -> int:
        return self.row_coeffs.shape[0]


@dataclass
class LpSolution:
    status: LpStatus
    primal: np.ndarray
    objective_value: float
    duals: np.ndarray
    reduced_costs: np.ndarray
    basis: tuple[int, ...]


class LpCounter:
    """Shared counter so callers can report how many LPs a pipeline solved;
    locked because search workers may tick it concurrently."""

    def __init__(self):
        self.count = 0
        self._lock = threading.Lock()

    def tick(self) -> None:
        with self._lock:
            self.count += 1


def solve_lp(model: LpModel, feas_tol: float = 1e-9,
             opt_tol: float = 1e-9, counter: LpCounter | None = None) -> LpSolution:
    """Solve the LP; status is always one of optimal/infeasible/unbounded.

    On infeasibility the returned duals are the phase-1 multipliers, which
    for pure >=-row systems with free variables form a Farkas certificate
    (y >= 0, y.A = 0, y.b > 0).
    """

    if counter is not None:
        counter.tick()
    return _Simplex(model, feas_tol, opt_tol).solve()


def solve_with_fixings(model: LpModel, fixed: dict[int, float],
                       feas_tol: float = 1e-9, opt_tol: float = 1e-9,
                       counter: LpCounter | None = None) -> LpSolution:
    """Solve with selected variables pinned (both bounds set to the value)."""

    lower = model.lower.copy()
    upper = model.upper.copy()
    for j, v in fixed.items():
        if not (model.lower[j] - feas_tol <= v <= model.upper[j] + feas_tol):
            raise ValueError(f"fixed value {v} outside bounds of variable {j}")
        lower[j] = upper[j] = v
    pinned = LpModel(model.objective, model.row_coeffs, list(model.senses),
                     model.rhs, lower, upper, warm=model.warm)
    return solve_lp(pinned, feas_tol, opt_tol, counter)


class _Simplex:
    """Working state for one solve.

    Variable layout: [structural | slack | artificial].  Every row gets a
    slack whose bounds encode the sense (<=: [0, inf), >=: (-inf, 0], =: [0, 0])
    and one artificial, so the initial basis is always the signed identity.
    """

    def __init__(self, model: LpModel, feas_tol: float, opt_tol: float):
        self.model = model
        self.feas_tol = feas_tol
        self.opt_tol = opt_tol

        n, m = model.columns, model.n_rows
        self.n_struct = n
        self.m = m
        self.n_total = n + 2 * m

        A = np.zeros((m, self.n_total))
        A[:, :n] = model.row_coeffs
        lo = np.zeros(self.n_total)
        up = np.full(self.n_total, INF)
        lo[:n] = model.lower
        up[:n] = model.upper
        for i, sense in enumerate(model.senses):
            A[i, n + i] = 1.0
            if sense is Sense.LE:
                lo[n + i], up[n + i] = 0.0, INF
            elif sense is Sense.GE:
                lo[n + i], up[n + i] = -INF, 0.0
            else:
                lo[n + i], up[n + i] = 0.0, 0.0

        self.A = A
        self.lower = lo
        self.upper = up
        self.b = model.rhs.astype(float).copy()
        self.art0 = n + m

        # Structural start: bound nearest the warm suggestion (origin when no
        # suggestion), free variables exactly on it.
        self.status = np.full(self.n_total, _AT_LOWER, dtype=np.int8)
        self.values = np.zeros(self.n_total)
        hint = model.warm if model.warm is not None else np.zeros(n)
        for j in range(n):
            if lo[j] == -INF and up[j] == INF:
                self.status[j] = _FREE
                self.values[j] = hint[j]
            elif lo[j] == -INF:
                self.status[j] = _AT_UPPER
                self.values[j] = up[j]
            elif up[j] == INF:
                self.status[j] = _AT_LOWER
                self.values[j] = lo[j]
            elif abs(hint[j] - lo[j]) <= abs(hint[j] - up[j]):
                self.status[j] = _AT_LOWER
                self.values[j] = lo[j]
            else:
                self.status[j] = _AT_UPPER
                self.values[j] = up[j]

        # Row basis: the slack itself wherever the structural start leaves it
        # inside its bounds, an artificial carrying the excess otherwise; both
        # column shapes are signed unit vectors, so the basis stays diagonal.
        resid = self.b - A[:, :n] @ self.values[:n] if m else np.zeros(0)
        basis = np.empty(m, dtype=int)
        diag = np.ones(m)
        for i in range(m):
            js, ja = n + i, self.art0 + i
            clamped = min(max(resid[i], lo[js]), up[js])
            excess = resid[i] - clamped
            if excess == 0.0:
                A[i, ja] = 1.0
                self.lower[ja] = self.upper[ja] = 0.0
                self.values[js] = resid[i]
                self.status[js] = _BASIC
                basis[i] = js
            else:
                A[i, ja] = 1.0 if excess > 0 else -1.0
                self.values[js] = clamped
                self.status[js] = (_AT_UPPER if clamped == up[js]
                                   else _AT_LOWER)
                self.values[ja] = abs(excess)
                self.status[ja] = _BASIC
                basis[i] = ja
                diag[i] = A[i, ja]

        self.basis = basis
        self.binv = np.diag(1.0 / diag) if m else np.zeros((0, 0))
        self.pivots_since_refactor = 0

    # -- linear algebra helpers -------------------------------------------

    def _refactorize(self):
        if self.m == 0:
            return
        B = self.A[:, self.basis]
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise LpNumericsError("singular basis") from exc
        self._recompute_basic_values()
        self.pivots_since_refactor = 0

    def _recompute_basic_values(self):
        if self.m == 0:
            return
        nb_mask = self.status != _BASIC
        rhs = self.b - self.A[:, nb_mask] @ self.values[nb_mask]
        self.values[self.basis] = self.binv @ rhs

    def _duals(self, cost: np.ndarray) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0)
        return cost[self.basis] @ self.binv

    # -- core iteration ----------------------------------------------------

    def _price(self, rc: np.ndarray, bland: bool) -> int:
        st = self.status
        from_lower = ((st == _AT_LOWER) | (st == _FREE)) & (rc < -self.opt_tol)
        from_upper = ((st == _AT_UPPER) | (st == _FREE)) & (rc > self.opt_tol)
        eligible = from_lower | from_upper
        if not eligible.any():
            return -1
        if bland:
            return int(np.argmax(eligible))
        score = np.where(eligible, np.abs(rc), -1.0)
        return int(np.argmax(score))

    def _iterate(self, cost: np.ndarray, phase: int) -> str:
        degenerate_run = 0
        bland = False
        iterations = 0
        max_iter = 2000 + 200 * (self.m + self.n_struct)

        while True:
            iterations += 1
            if iterations > max_iter:
                raise LpNumericsError("iteration limit exceeded")
            if self.pivots_since_refactor >= _REFACTOR_EVERY:
                self._refactorize()

            y = self._duals(cost)
            rc = cost - y @ self.A if self.m else cost.copy()
            entering = self._price(rc, bland)
            if entering < 0:
                return "optimal"

            # Direction: +1 increases the entering variable, -1 decreases it.
            if self.status[entering] == _AT_UPPER:
                direction = -1.0
            elif self.status[entering] == _FREE:
                direction = 1.0 if rc[entering] < 0 else -1.0
            else:
                direction = 1.0

            col = self.binv @ self.A[:, entering] if self.m else np.zeros(0)
            w = direction * col

            # Two-pass ratio test.  Pass 1 finds the blocking step with each
            # bound relaxed by feas_tol; pass 2 picks, among candidates whose
            # true ratio fits under that relaxed limit, the one with the
            # largest pivot magnitude (tiny pivots poison the basis inverse).
            # The step taken is the chosen candidate's own true ratio, so the
            # leaving variable lands exactly on its bound and every other
            # basic stays within feas_tol of its own.
            if self.m:
                vb = self.values[self.basis]
                lb = self.lower[self.basis]
                ub = self.upper[self.basis]
                true_r = np.full(self.m, INF)
                relax_r = np.full(self.m, INF)
                down = (w > _PIVOT_TOL) & (lb != -INF)
                true_r[down] = (vb[down] - lb[down]) / w[down]
                relax_r[down] = (vb[down] - lb[down] + self.feas_tol) / w[down]
                upw = (w < -_PIVOT_TOL) & (ub != INF)
                true_r[upw] = (vb[upw] - ub[upw]) / w[upw]
                relax_r[upw] = (vb[upw] - ub[upw] - self.feas_tol) / w[upw]
                np.maximum(true_r, 0.0, out=true_r)
                limit_relaxed = float(relax_r.min())
            else:
                true_r = np.zeros(0)
                limit_relaxed = INF

            rng = self.upper[entering] - self.lower[entering]
            flip = rng if (rng != INF and self.status[entering] != _FREE) else INF

            if limit_relaxed == INF and flip == INF:
                if phase == 1:
                    raise LpNumericsError("phase-1 ray should not exist")
                return "unbounded"

            if limit_relaxed == INF:
                step_bound = INF
                leave_pos = -1
            else:
                cands = np.where(true_r <= max(limit_relaxed, 0.0))[0]
                if cands.size == 0:
                    cands = np.array([int(np.argmin(true_r))])
                if bland:
                    # Lowest variable index, unless its pivot is hopeless.
                    wmax = float(np.abs(w[cands]).max())
                    solid = cands[np.abs(w[cands]) >= 1e-7 * wmax]
                    pick = solid if solid.size else cands
                    leave_pos = int(pick[np.argmin(self.basis[pick])])
                else:
                    mags = np.abs(w[cands])
                    best = float(mags.max())
                    solid = cands[mags >= 0.5 * best]
                    leave_pos = int(solid[np.argmin(self.basis[solid])])
                step_bound = float(true_r[leave_pos])

            if flip < step_bound:
                # Bound flip: no basis change.
                self.values[entering] = (self.upper[entering] if direction > 0
                                         else self.lower[entering])
                self.status[entering] = (_AT_UPPER if direction > 0 else _AT_LOWER)
                if self.m:
                    self.values[self.basis] -= w * flip
                step = flip
            else:
                leave_to_upper = w[leave_pos] < 0
                jl = int(self.basis[leave_pos])
                step = step_bound
                self.values[self.basis] -= w * step
                self.values[entering] = (self._entering_origin(entering)
                                         + direction * step)
                self.values[jl] = self.upper[jl] if leave_to_upper else self.lower[jl]
                self.status[jl] = _AT_UPPER if leave_to_upper else _AT_LOWER
                self.status[entering] = _BASIC
                self.basis[leave_pos] = entering
                self._update_binv(col, leave_pos)
                self.pivots_since_refactor += 1

            if step <= _RATIO_TIE:
                degenerate_run += 1
                if degenerate_run >= _DEGENERATE_BUDGET:
                    bland = True
            else:
                degenerate_run = 0
                bland = False

    def _entering_origin(self, j: int) -> float:
        if self.status[j] == _AT_UPPER:
            return self.upper[j]
        if self.status[j] == _AT_LOWER:
            return self.lower[j]
        return self.values[j]

    def _update_binv(self, col: np.ndarray, pos: int):
        piv = col[pos]
        if abs(piv) < 1e-8:
            # A near-singular product update would poison the inverse;
            # rebuilding from the actual basis is always safe.
            self._refactorize()
            return
        self.binv[pos, :] /= piv
        other = np.abs(col) > 1e-14
        other[pos] = False
        if other.any():
            self.binv[other, :] -= np.outer(col[other], self.binv[pos, :])

    # -- driver -------------------------------------------------------------

    def solve(self) -> LpSolution:
        n, m = self.n_struct, self.m

        phase1_cost = np.zeros(self.n_total)
        phase1_cost[self.art0:] = 1.0
        self._iterate(phase1_cost, phase=1)
        infeas = float(self.values[self.art0:].sum()) if m else 0.0

        if infeas > self.feas_tol * max(1.0, float(np.abs(self.b).sum())):
            y = self._duals(phase1_cost)
            rc = phase1_cost - y @ self.A if m else phase1_cost
            return LpSolution(
                status=LpStatus.INFEASIBLE,
                primal=self.values[:n].copy(),
                objective_value=infeas,
                duals=y.copy(),
                reduced_costs=rc[:n].copy(),
                basis=tuple(sorted(int(j) for j in self.basis)),
            )

        # Artificials can never re-enter once clamped to zero.
        self.lower[self.art0:] = 0.0
        self.upper[self.art0:] = 0.0
        nonbasic_art = (self.status[self.art0:] != _BASIC)
        self.status[self.art0:][nonbasic_art] = _AT_LOWER
        self.values[self.art0:][nonbasic_art] = 0.0

        phase2_cost = np.zeros(self.n_total)
        phase2_cost[:n] = self.model.objective
        outcome = self._iterate(phase2_cost, phase=2)

        y = self._duals(phase2_cost)
        rc = phase2_cost - y @ self.A if m else phase2_cost
        primal = self.values[:n].copy()
        obj = float(self.model.objective @ primal)
        basis = tuple(sorted(int(j) for j in self.basis))
        if outcome == "unbounded":
            return LpSolution(LpStatus.UNBOUNDED, primal, -INF, y.copy(),
                              rc[:n].copy(), basis)
        return LpSolution(LpStatus.OPTIMAL, primal, obj, y.copy(),
                          rc[:n].copy(), basis)
