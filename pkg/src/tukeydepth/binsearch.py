"""Exact depth by bisection over guess-form programs.

Each probe asks "can at most `guess` weighted rows be removed while the rest
keep a strictly positive margin?" and the engine answers by maximizing that
margin under the cardinality cap, stopping at the first positive witness.
No a-priori epsilon is needed, and the certified margin of the final answer
is itself a usable epsilon for the fixed-epsilon program.  Cuts found while
answering one probe are pooled and seed all later probes.
"""

from __future__ import annotations

import time
from dataclasses import replace

import numpy as np

from .cuts import CutPool
from .elastic import chinneck_cover
from .engine import (BranchCutEngine, BudgetExhausted, DepthResult,
                     EngineConfig, MipForm, MipModel, SolveStats,
                     _finalize, _trivial_result)
from .model import InfeasibleSystem, ParamBounds
from .simplex import LpCounter

__all__ = ["solve_depth_binary"]


def _box_scaled_margin(sys: InfeasibleSystem, cover, direction: np.ndarray,
                       c: float) -> float:
    """Smallest non-cover row margin after scaling the direction into the
    [-c, c] box, i.e. an epsilon the fixed-epsilon program could safely use."""

    non_cover = [j for j in range(sys.n_rows) if j not in cover]
    if not non_cover or not np.any(direction):
        return 0.0
    scaled = direction * (c / np.max(np.abs(direction)))
    return float(np.min(sys.rows[non_cover] @ scaled))


def solve_depth_binary(sys: InfeasibleSystem, cfg: EngineConfig | None = None,
                       pool: CutPool | None = None) -> DepthResult:
    """Bisection driver: lower = 1, upper = heuristic cover weight, probe the
    midpoint guess until the interval closes.

    A probe that ends with margin at most eps_pos (or an infeasible program)
    proves the depth exceeds the guess; a positive witness pulls the upper
    bound down and is remembered as the certificate.  At most
    ceil(log2(initial upper)) + 1 probes run.
    """

    cfg = cfg or EngineConfig()
    counter = LpCounter()
    stats = SolveStats()
    t0 = time.monotonic()
    pool = pool if pool is not None else CutPool()

    if sys.n_rows == 0:
        stats.wall_time = time.monotonic() - t0
        return _trivial_result(sys, stats, 0.0)

    bounds = ParamBounds.for_system(sys, cfg.c, cfg.epsilon)
    cover = frozenset(chinneck_cover(sys, cfg.heuristic_variant,
                                     cfg.heuristic_k, bounds,
                                     cfg.viol_tol, counter))
    weight = sys.weight_of(cover)
    stats.heuristic_weight = weight

    if weight <= 1:
        result = _finalize(sys, cover, stats, cfg, True, weight, 0.0, counter)
        result.epsilon = _box_scaled_margin(sys, cover, result.direction, cfg.c)
        result.stats.wall_time = time.monotonic() - t0
        return result

    lower, upper = 1, weight
    best_cover = cover
    exact = True
    while lower < upper:
        guess = (lower + upper) // 2
        stats.guesses += 1
        stats.guess_values.append(guess)
        probe_cfg = cfg
        if cfg.time_limit is not None:
            # The node budget is cumulative automatically (shared stats);
            # the time budget needs the remaining allowance passed down.
            remaining = cfg.time_limit - (time.monotonic() - t0)
            if remaining <= 0:
                exact = False
                break
            probe_cfg = replace(cfg, time_limit=remaining)
        mip = MipModel(sys, bounds, MipForm.GUESS, guess=guess)
        engine = BranchCutEngine(mip, probe_cfg, pool, counter, stats)
        try:
            witness = engine.run_guess()
        except BudgetExhausted:
            exact = False
            break
        if witness is None:
            lower = guess + 1
        else:
            w_cover, _, _ = witness
            upper = guess
            best_cover = w_cover

    result = _finalize(sys, best_cover, stats, cfg, exact,
                       lower if not exact else upper, 0.0, counter)
    result.epsilon = _box_scaled_margin(sys, best_cover, result.direction,
                                        cfg.c)
    result.stats.wall_time = time.monotonic() - t0
    return result
