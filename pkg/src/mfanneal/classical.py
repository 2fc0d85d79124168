"""Statistical-physics mean-field annealing.

The variational free energy of the factorized spin distribution is

    F(m, T) = -1/2 sum_ij J_ij m_i m_j - sum_i h_i m_i
              + T sum_i [ (1+m_i)/2 ln((1+m_i)/2) + (1-m_i)/2 ln((1-m_i)/2) ]

(plus the model's constant offset, so converted models keep exact energy
bookkeeping). Lowering T while tracking the minimizer anneals the continuous
state toward a low-energy spin configuration. Two inner solvers are offered:
the fixed-point iteration m_i = tanh((h_i + (Jm)_i)/T), which is cheap but
stops converging below the spectral-radius temperature, and a gradient
descent that has no such breakdown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._descent import armijo_descent
from .model import CouplingMatrix, IsingModel, ising_energy, round_magnetization
from .spectral import lambda_abs_max, lambda_max

LN2 = math.log(2.0)
M_CLAMP = 1.0 - 1e-12
BREAKDOWN_RATIO = 1e-3
BREAKDOWN_WINDOW = 100

MODE_SELF_CONSISTENT = "self_consistent"
MODE_GRADIENT = "gradient"


@dataclass(frozen=True)
class ClassicalAnnealConfig:
    """Temperature schedule and inner-loop settings.

    Unset schedule fields are resolved from the coupling spectrum:
    ``t_start = 1.5 * T*`` (spectral radius), ``t_end = 1e-3 * T_c`` (largest
    algebraic eigenvalue) and ``dt = t_start / 1000``.
    """

    t_start: float | None = None
    t_end: float | None = None
    dt: float | None = None
    inner_tol: float = 1e-8
    inner_max_iter: int = 1000
    mode: str = MODE_GRADIENT

    def __post_init__(self):
        if self.mode not in (MODE_SELF_CONSISTENT, MODE_GRADIENT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_start is not None and self.t_end is not None:
            if not (self.t_start > self.t_end > 0):
                raise ValueError("need t_start > t_end > 0")


@dataclass
class ClassicalAnnealResult:
    m: np.ndarray
    spins: np.ndarray
    energy: float
    mode: str
    t_final: float
    breakdown_temperature: float | None
    temperatures: np.ndarray
    free_energies: np.ndarray
    inner_iterations: np.ndarray
    all_converged: bool
    non_converged_temperatures: list = field(default_factory=list)

    @property
    def broke_down(self) -> bool:
        return self.breakdown_temperature is not None


def _check_interior(m):
    if np.any(np.abs(m) >= 1.0):
        raise ValueError("magnetizations must satisfy |m_i| < 1 strictly")


def _entropy_sum(m):
    return float(np.sum(0.5 * ((1.0 + m) * (np.log1p(m) - LN2)
                               + (1.0 - m) * (np.log1p(-m) - LN2))))


def mf_free_energy(model: IsingModel, m, T: float) -> float:
    """Variational free energy of the factorized distribution at temperature T."""
    m = np.asarray(m, dtype=np.float64)
    _check_interior(m)
    if T <= 0:
        raise ValueError("temperature must be positive")
    quad = float(np.dot(m, model.J.matvec(m)))
    return -0.5 * quad - float(np.dot(model.h, m)) + model.offset + T * _entropy_sum(m)


def mf_gradient(model: IsingModel, m, T: float) -> np.ndarray:
    """Gradient: -(Jm)_i - h_i + (T/2) ln((1+m_i)/(1-m_i))."""
    m = np.asarray(m, dtype=np.float64)
    _check_interior(m)
    return -model.J.matvec(m) - model.h + T * np.arctanh(m)


def mf_hessian_quotient(model: IsingModel, m, T: float, probe) -> float:
    """Rayleigh quotient of the free-energy Hessian -J + T diag(1/(1-m^2))."""
    m = np.asarray(m, dtype=np.float64)
    v = np.asarray(probe, dtype=np.float64)
    num = -float(np.dot(v, model.J.matvec(v))) + T * float(np.sum(v * v / (1.0 - m * m)))
    return num / float(np.dot(v, v))


def self_consistent_step(model: IsingModel, m, T: float) -> np.ndarray:
    """One fixed-point update m'_i = tanh((h_i + (Jm)_i) / T)."""
    m = np.asarray(m, dtype=np.float64)
    return np.tanh((model.h + model.J.matvec(m)) / T)


def iteration_stability(model: IsingModel, m, T: float, tol=1e-10,
                        max_iter=10000, seed=0) -> float:
    """Spectral radius of the fixed-point Jacobian (1 - m_i^2) J_ij / T.

    Values above 1 signal that the self-consistent iteration oscillates
    instead of converging. The non-symmetric Jacobian D J / T shares its
    spectrum with sqrt(D) J sqrt(D) / T, which the power iteration handles.
    """
    m = np.asarray(m, dtype=np.float64)
    _check_interior(m)
    J = model.J
    if J.nnz_pairs == 0:
        return 0.0
    d = np.sqrt(1.0 - m * m)
    sym = CouplingMatrix(J.n, J.rows, J.cols,
                         J.weights * d[J.rows] * d[J.cols] / T)
    return lambda_abs_max(sym, tol=tol, max_iter=max_iter, seed=seed).lambda_abs_max


def _clip_project(m):
    return np.clip(m, -M_CLAMP, M_CLAMP)


def _pinned_grad(m, g):
    """Zero gradient components pushing a clamped coordinate out of the box."""
    out = g.copy()
    out[(m >= M_CLAMP) & (g < 0.0)] = 0.0
    out[(m <= -M_CLAMP) & (g > 0.0)] = 0.0
    return out


def _free_energy_value_and_grad(model, T):
    J, h, off = model.J, model.h, model.offset

    def vg(m):
        Jm = J.matvec(m)
        f = -0.5 * float(np.dot(m, Jm)) - float(np.dot(h, m)) + off + T * _entropy_sum(m)
        g = -Jm - h + T * np.arctanh(m)
        return f, g

    return vg


def _self_consistent_inner(model, m, T, tol, max_iter):
    """Fixed-point iteration with period-2 oscillation detection.

    Returns (m, converged, broke_down, iterations). Breakdown is declared
    after BREAKDOWN_WINDOW consecutive iterations in which the two-step
    displacement collapses relative to the one-step displacement (the
    signature of a period-2 cycle) while the one-step residual stays above
    tolerance.
    """
    prev = m
    cur = self_consistent_step(model, prev, T)
    streak = 0
    for it in range(1, max_iter + 1):
        nxt = self_consistent_step(model, cur, T)
        r1 = float(np.max(np.abs(cur - prev)))
        if r1 <= tol:
            return cur, True, False, it
        r2 = float(np.max(np.abs(nxt - prev)))
        if r2 < r1 * BREAKDOWN_RATIO:
            streak += 1
            if streak >= BREAKDOWN_WINDOW:
                return cur, False, True, it
        else:
            streak = 0
        prev, cur = cur, nxt
    return cur, False, False, max_iter


def minimize_free_energy(model: IsingModel, T: float, m0=None,
                         tol: float = 1e-8, max_iter: int = 1000) -> np.ndarray:
    """Equilibrium magnetization at one temperature by gradient descent.

    Starts from the high-temperature solution tanh(h/T) unless ``m0`` is
    given. Returns the converged (or best-effort) state.
    """
    if T <= 0:
        raise ValueError("temperature must be positive")
    m = np.tanh(model.h / T) if m0 is None else np.asarray(m0, dtype=np.float64)
    res = armijo_descent(_clip_project(m), _free_energy_value_and_grad(model, T),
                         _clip_project, tol, max_iter, effective_grad=_pinned_grad)
    return res.x


def resolve_schedule(model: IsingModel, cfg: ClassicalAnnealConfig, seed=0):
    """Fill unset schedule fields from the coupling spectrum."""
    t_start, t_end, dt = cfg.t_start, cfg.t_end, cfg.dt
    if t_start is None or t_end is None:
        spec = lambda_max(model.J, tol=1e-8, max_iter=100_000, seed=seed)
        if t_start is None:
            if spec.lambda_abs_max <= 0:
                raise ValueError("zero coupling matrix: specify t_start explicitly")
            t_start = 1.5 * spec.lambda_abs_max
        if t_end is None:
            t_c = spec.lambda_max
            t_end = 1e-3 * (t_c if t_c > 0 else spec.lambda_abs_max)
    if dt is None:
        dt = t_start / 1000.0
    if not (t_start > t_end > 0):
        raise ValueError(f"resolved schedule invalid: t_start={t_start}, t_end={t_end}")
    return t_start, t_end, dt


def classical_anneal(model: IsingModel, cfg: ClassicalAnnealConfig | None = None,
                     seed: int = 0) -> ClassicalAnnealResult:
    """Anneal the magnetization from high temperature down the schedule.

    Starts from the high-temperature solution m_i = tanh(h_i / t_start) and
    re-converges at each temperature with the configured inner solver,
    warm-starting from the previous state. In self-consistent mode a detected
    period-2 oscillation stops the anneal and reports the breakdown
    temperature; gradient mode runs to t_end. Symmetry breaking is the
    caller's job: with h = 0 the state stays pinned at m = 0.
    """
    cfg = cfg or ClassicalAnnealConfig()
    t_start, t_end, dt = resolve_schedule(model, cfg, seed=seed)
    n_steps = max(1, int(round((t_start - t_end) / dt)))
    temperatures = np.linspace(t_start, t_end, n_steps + 1)

    m = np.tanh(model.h / t_start)
    m = _clip_project(m)

    temps_done = []
    free_energies = []
    inner_iters = []
    non_converged = []
    breakdown_t = None

    for T in temperatures:
        if cfg.mode == MODE_GRADIENT:
            res = armijo_descent(m, _free_energy_value_and_grad(model, T),
                                 _clip_project, cfg.inner_tol, cfg.inner_max_iter,
                                 effective_grad=_pinned_grad)
            m = res.x
            temps_done.append(T)
            free_energies.append(res.value)
            inner_iters.append(res.iterations)
            if not res.converged:
                non_converged.append(float(T))
        else:
            m, converged, broke, iters = _self_consistent_inner(
                model, m, T, cfg.inner_tol, cfg.inner_max_iter)
            temps_done.append(T)
            free_energies.append(mf_free_energy(model, _clip_project(m), T))
            inner_iters.append(iters)
            if broke:
                breakdown_t = float(T)
                break
            if not converged:
                non_converged.append(float(T))

    m = _clip_project(m)
    spins = round_magnetization(m)
    return ClassicalAnnealResult(
        m=m,
        spins=spins,
        energy=ising_energy(model, spins),
        mode=cfg.mode,
        t_final=float(temps_done[-1]),
        breakdown_temperature=breakdown_t,
        temperatures=np.array(temps_done),
        free_energies=np.array(free_energies),
        inner_iterations=np.array(inner_iters),
        all_converged=not non_converged and breakdown_t is None,
        non_converged_temperatures=non_converged,
    )


def mixing_term_table(t_over_delta: float, n_points: int) -> np.ndarray:
    """Tabulate the two mixing terms on a magnetization grid.

    Columns: m, the entropy derivative term (T/2) ln((1+m)/(1-m)) at
    T = t_over_delta, and the transverse term m / sqrt(1 - m^2) at unit
    transverse strength. Both vanish at m = 0 with slopes T and 1, and both
    diverge toward the boundary.
    """
    if n_points < 2:
        raise ValueError("need at least two sample points")
    if t_over_delta <= 0:
        raise ValueError("temperature ratio must be positive")
    eps = 1e-6
    m = np.linspace(-1.0 + eps, 1.0 - eps, n_points)
    if n_points % 2 == 1:
        m[n_points // 2] = 0.0
    entropy_term = t_over_delta * np.arctanh(m)
    transverse_term = m / np.sqrt(1.0 - m * m)
    return np.column_stack([m, entropy_term, transverse_term])
