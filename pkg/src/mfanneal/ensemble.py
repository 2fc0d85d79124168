"""Noise-field trial ensembles: the benchmark protocol behind the G-set runs.

With no external field the solver is pinned at the symmetric trivial state,
so each trial draws a random field — uniform per component on (-A, A) against
the rescaled couplings — anneals under it, and scores the rounded spins on
the ORIGINAL objective with the noise excluded. Trials use counter-based
per-trial random substreams derived from (master_seed, trial index), so
results are bit-identical no matter how many workers execute them.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .model import IsingModel, WeightedGraph, cut_value, ising_energy
from .quantum import QuantumAnnealConfig, quantum_anneal
from .spectral import rescale_model

OBJECTIVE_CUT = "cut"
OBJECTIVE_ENERGY = "energy"


@dataclass(frozen=True)
class NoiseSpec:
    """Random-field ensemble parameters.

    ``amplitude`` is the half-width of the per-component uniform field drawn
    against the rescaled model (whose largest coupling eigenvalue is 1, so
    this matches an amplitude-over-lambda-max scaling of the raw problem).
    """

    amplitude: float
    master_seed: int = 0
    n_trials: int = 200

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        if self.n_trials < 1:
            raise ValueError("need at least one trial")


@dataclass(frozen=True)
class TrialRecord:
    index: int
    value: float
    spin_digest: str
    failed: bool = False
    error: str | None = None


@dataclass
class TrialBatchResult:
    """Per-trial values plus summary statistics for one noise amplitude."""

    amplitude: float
    objective: str
    per_trial: list
    mean: float
    best: float
    std: float
    ecdf: np.ndarray
    n_trials: int
    n_failed: int
    best_spins: np.ndarray | None = None

    def values(self) -> np.ndarray:
        return np.array([t.value for t in self.per_trial if not t.failed])


def _spin_digest(spins) -> str:
    packed = np.packbits(np.asarray(spins) > 0)
    return hashlib.sha256(packed.tobytes()).hexdigest()[:16]


def _run_one_trial(args):
    (k, seed_seq, scaled, cfg, graph, original, amplitude) = args
    try:
        rng = np.random.Generator(np.random.Philox(seed_seq))
        noise = rng.uniform(-1.0, 1.0, scaled.n) * amplitude
        trial_model = IsingModel(J=scaled.J, h=scaled.h + noise, offset=scaled.offset)
        result = quantum_anneal(trial_model, cfg, assume_rescaled=True,
                                keep_history=False)
        if graph is not None:
            value = cut_value(graph, result.spins)
        else:
            value = ising_energy(original, result.spins)
        record = TrialRecord(index=k, value=value,
                             spin_digest=_spin_digest(result.spins))
        return record, result.spins
    except Exception as exc:  # noqa: BLE001 - per-trial isolation is the contract
        return TrialRecord(index=k, value=float("nan"), spin_digest="",
                           failed=True, error=str(exc)), None


def _aggregate(amplitude, objective, outcomes):
    records = [rec for rec, _ in outcomes]
    ok = [(rec, spins) for rec, spins in outcomes if not rec.failed]
    values = np.array([rec.value for rec, _ in ok])
    best_spins = None
    if values.size:
        pick = int(np.argmax(values) if objective == OBJECTIVE_CUT else np.argmin(values))
        best = float(values[pick])
        best_spins = ok[pick][1]
        mean = float(values.mean())
        std = float(values.std())
        uniq, counts = np.unique(np.sort(values), return_counts=True)
        ecdf = np.column_stack([uniq, np.cumsum(counts) / values.size])
    else:
        best = mean = std = float("nan")
        ecdf = np.zeros((0, 2))
    return TrialBatchResult(
        amplitude=amplitude,
        objective=objective,
        per_trial=records,
        mean=mean,
        best=best,
        std=std,
        ecdf=ecdf,
        n_trials=len(records),
        n_failed=len(records) - len(ok),
        best_spins=best_spins,
    )


def run_trials(model: IsingModel, noise: NoiseSpec,
               cfg: QuantumAnnealConfig | None = None,
               graph: WeightedGraph | None = None,
               n_workers: int = 1) -> TrialBatchResult:
    """Run the noise ensemble and aggregate statistics in trial order.

    When ``graph`` is given the reported values are cut values on the
    original weights; otherwise they are Ising energies of the noiseless
    model. Either way the noise field never enters the score. Failed trials
    are recorded and excluded from the statistics, never silently dropped.
    """
    cfg = cfg or QuantumAnnealConfig()
    if graph is not None and graph.n_vertices != model.n:
        raise ValueError("graph and model dimensions differ")
    objective = OBJECTIVE_CUT if graph is not None else OBJECTIVE_ENERGY

    scaled, _ = rescale_model(model, tol=1e-8, max_iter=100_000,
                              seed=noise.master_seed, fallback_abs=True)
    children = np.random.SeedSequence(noise.master_seed).spawn(noise.n_trials)
    tasks = [(k, children[k], scaled, cfg, graph, model, noise.amplitude)
             for k in range(noise.n_trials)]

    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(_run_one_trial, tasks, chunksize=4))
    else:
        outcomes = [_run_one_trial(t) for t in tasks]
    outcomes.sort(key=lambda pair: pair[0].index)
    return _aggregate(noise.amplitude, objective, outcomes)


def amplitude_sweep(model: IsingModel, amplitudes, noise_base: NoiseSpec,
                    cfg: QuantumAnnealConfig | None = None,
                    graph: WeightedGraph | None = None,
                    n_workers: int = 1) -> list:
    """One trial batch per amplitude, all sharing the master-seed substreams.

    Reusing the same substreams across amplitudes gives common random
    numbers: batch k differs between amplitudes only through the field
    scaling, which sharpens the mean/std comparison across the sweep.
    """
    amplitudes = list(amplitudes)
    if not amplitudes:
        raise ValueError("amplitude list must be non-empty")
    return [
        run_trials(model, replace(noise_base, amplitude=float(a)), cfg,
                   graph=graph, n_workers=n_workers)
        for a in amplitudes
    ]
