"""Extreme-eigenvalue estimation for coupling matrices.

Power iteration with a Gershgorin shift delivers the largest algebraic
eigenvalue; running it on both shifted ends gives the spectral radius. The
shift ``sigma = max_i sum_j |J_ij|`` makes ``J + sigma I`` positive
semidefinite, so plain power iteration converges to the extreme eigenvalue
after unshifting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CouplingMatrix, IsingModel


class PowerIterationError(RuntimeError):
    """Power iteration failed to reach the residual tolerance."""


class RescaleError(ValueError):
    """Largest algebraic eigenvalue is not positive; rescaling is degenerate."""


@dataclass(frozen=True)
class SpectralSummary:
    """Extreme eigenvalues of a coupling matrix.

    ``lambda_max`` is the largest algebraic eigenvalue (the critical
    temperature of the h=0 model); ``lambda_abs_max`` is the spectral radius
    (the temperature below which the self-consistent iteration stops
    converging). ``vector`` is the eigenvector associated with the quantity
    the calling operation asked for.
    """

    lambda_max: float
    lambda_abs_max: float
    iterations: int
    residual: float
    vector: np.ndarray

    def __post_init__(self):
        if self.lambda_abs_max + 1e-12 < abs(self.lambda_max):
            raise ValueError("spectral radius below |lambda_max|")


def _shifted_power_iteration(J, sigma, tol, max_iter, rng):
    """Largest eigenvalue of J + sigma*I by power iteration; returns it unshifted.

    Residual criterion: ||A v - theta v|| <= tol * max(|theta|, sigma, 1)
    where theta is the Rayleigh quotient of the shifted matrix.
    """
    n = J.n
    if J.nnz_pairs == 0:
        return 0.0, np.full(n, 1.0 / np.sqrt(n)), 0, 0.0
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    scale = max(sigma, 1.0)
    for it in range(1, max_iter + 1):
        av = J.matvec(v) + sigma * v
        theta = float(np.dot(v, av))
        resid = float(np.linalg.norm(av - theta * v))
        if resid <= tol * max(abs(theta), scale):
            return theta - sigma, v, it, resid
        norm = np.linalg.norm(av)
        if norm == 0.0:
            # v is in the null space of the PSD shifted matrix: eigenvalue 0
            return -sigma, v, it, 0.0
        v = av / norm
    raise PowerIterationError(
        f"no convergence after {max_iter} iterations (residual {resid:.3e})"
    )


def _two_sided(J: CouplingMatrix, tol, max_iter, seed):
    """Both ends of the spectrum: (hi, v_hi, lo, v_lo, iterations, residual)."""
    rng = np.random.default_rng(seed)
    sigma = float(J.row_abs_sums().max()) if J.nnz_pairs else 0.0
    hi, v_hi, it_hi, r_hi = _shifted_power_iteration(J, sigma, tol, max_iter, rng)
    # largest eigenvalue of sigma*I - J is sigma - lambda_min
    lo_neg, v_lo, it_lo, r_lo = _shifted_power_iteration(
        J.scaled(-1.0), sigma, tol, max_iter, rng
    )
    return hi, v_hi, -lo_neg, v_lo, it_hi + it_lo, max(r_hi, r_lo)


def lambda_max(J: CouplingMatrix, tol=1e-10, max_iter=10000, seed=0) -> SpectralSummary:
    """Largest algebraic eigenvalue of J (Gershgorin-shifted power iteration)."""
    hi, v_hi, lo, _, iters, resid = _two_sided(J, tol, max_iter, seed)
    return SpectralSummary(
        lambda_max=hi,
        lambda_abs_max=max(abs(hi), abs(lo)),
        iterations=iters,
        residual=resid,
        vector=v_hi,
    )


def lambda_abs_max(J: CouplingMatrix, tol=1e-10, max_iter=10000, seed=0) -> SpectralSummary:
    """Spectral radius of J: the larger in magnitude of the two spectrum ends."""
    hi, v_hi, lo, v_lo, iters, resid = _two_sided(J, tol, max_iter, seed)
    return SpectralSummary(
        lambda_max=hi,
        lambda_abs_max=max(abs(hi), abs(lo)),
        iterations=iters,
        residual=resid,
        vector=v_hi if abs(hi) >= abs(lo) else v_lo,
    )


def rescale_model(model: IsingModel, tol=1e-10, max_iter=10000, seed=0,
                  fallback_abs=False):
    """Rescale so the largest eigenvalue of J is exactly 1.

    Returns ``(scaled_model, scale)`` with ``J' = J/scale``, ``h' = h/scale``
    and ``offset' = offset/scale``, so every energy scales by ``1/scale`` and
    the ground-state configuration is unchanged.

    When ``lambda_max <= 0`` (possible for purely antiferromagnetic spectra)
    the operation reports the degeneracy; with ``fallback_abs=True`` it
    rescales by the spectral radius instead.
    """
    summary = lambda_max(model.J, tol, max_iter, seed)
    scale = summary.lambda_max
    if scale <= 0.0:
        if not fallback_abs:
            raise RescaleError(
                f"largest algebraic eigenvalue {scale:.6g} is not positive; "
                "pass fallback_abs=True to rescale by the spectral radius"
            )
        scale = summary.lambda_abs_max
        if scale <= 0.0:
            raise RescaleError("zero coupling matrix cannot be rescaled")
    scaled = IsingModel(
        J=model.J.scaled(1.0 / scale),
        h=model.h / scale,
        offset=model.offset / scale,
    )
    return scaled, scale
