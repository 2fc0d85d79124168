"""Projected steepest descent with Armijo backtracking, shared by both anneals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ARMIJO_C1 = 1e-4
ALPHA_FLOOR = 1e-18


@dataclass
class DescentResult:
    x: np.ndarray
    value: float
    grad: np.ndarray
    grad_inf: float
    iterations: int
    converged: bool
    stalled: bool = False


def armijo_descent(x0, value_and_grad, project, tol, max_iter,
                   effective_grad=None) -> DescentResult:
    """Minimize by steepest descent with halving backtracking line search.

    Accepted steps satisfy the Armijo sufficient-decrease condition with
    c1 = 1e-4, so the objective is non-increasing along the run. Trial points
    pass through ``project`` before evaluation (clamping or folding into the
    feasible domain).

    ``effective_grad(x, g)``, when given, masks gradient components that
    cannot produce feasible progress (components pinned at a box bound); the
    masked gradient drives the step direction, the Armijo model and the
    convergence test, which is the KKT-correct measure for a clamped domain.

    Stops at effective-gradient inf-norm <= tol, at ``max_iter``, or at the
    numerical floor, reported as converged-by-stall: either backtracking
    reaches a step too small to change the iterate, or several consecutive
    accepted steps decrease the objective by less than its float64
    resolution. Without the floor exits, problems whose objective magnitude
    makes the gradient tolerance unrepresentable would burn the full
    iteration budget chasing 1-ulp decreases.
    """
    x = project(np.asarray(x0, dtype=np.float64))
    f, g = value_and_grad(x)
    d = effective_grad(x, g) if effective_grad else g
    g_inf = float(np.max(np.abs(d))) if d.size else 0.0
    alpha = 1.0
    it = 0
    stalled = False
    floor_hits = 0
    x_prev = d_prev = None
    while g_inf > tol and it < max_iter:
        it += 1
        dd = float(np.dot(d, d))
        # Barzilai-Borwein (short variant) initial step where defined; curbs
        # zig-zagging on ill-conditioned landscapes and is rarely rejected.
        # Backtracking below keeps it safe.
        alpha = min(1.0, 2.0 * alpha)
        if x_prev is not None:
            sy = d - d_prev
            syy = float(np.dot(sy, sy))
            sxy = float(np.dot(x - x_prev, sy))
            if sxy > 0.0 and syy > 0.0:
                alpha = min(sxy / syy, 1e3)
        x_prev, d_prev = x, d
        accepted = False
        while alpha >= ALPHA_FLOOR:
            trial = project(x - alpha * d)
            f_t, g_t = value_and_grad(trial)
            if f_t <= f - ARMIJO_C1 * alpha * dd and f_t < f:
                accepted = True
                break
            if np.array_equal(trial, x):
                # step too small to move the iterate: float64 floor
                stalled = True
                break
            alpha *= 0.5
        if not accepted:
            stalled = True
            break
        if f - f_t <= 4.0 * np.finfo(np.float64).eps * (abs(f) + 1.0):
            floor_hits += 1
            if floor_hits >= 3:
                x, f, g = trial, f_t, g_t
                stalled = True
                break
        else:
            floor_hits = 0
        x, f, g = trial, f_t, g_t
        d = effective_grad(x, g) if effective_grad else g
        g_inf = float(np.max(np.abs(d)))
    return DescentResult(x=x, value=f, grad=g, grad_inf=g_inf, iterations=it,
                         converged=g_inf <= tol or stalled, stalled=stalled)
