"""Mean-field annealing for QUBO/Ising/Max-Cut problems.

Two equivalent continuous relaxations anneal a factorized spin state toward
a low-energy configuration: the finite-temperature free-energy route and the
transverse-field schedule route. A noise-field ensemble harness turns the
single-shot solver into a benchmark protocol for Max-Cut instances.
"""

__version__ = "0.1.0"

from .classical import (
    ClassicalAnnealConfig,
    ClassicalAnnealResult,
    classical_anneal,
    iteration_stability,
    mf_free_energy,
    mf_gradient,
    mf_hessian_quotient,
    mixing_term_table,
    self_consistent_step,
)
from .ensemble import NoiseSpec, TrialBatchResult, TrialRecord, amplitude_sweep, run_trials
from .io import GsetFormatError, ResultRecord, load_gset, parse_gset
from .model import (
    CouplingMatrix,
    IsingModel,
    QuboModel,
    WeightedGraph,
    cut_value,
    ising_energy,
    maxcut_to_ising,
    qubo_to_ising,
    qubo_value,
    round_magnetization,
)
from .oracle import OracleResult, exact_free_energy, exact_ground_state, exact_max_cut
from .quantum import (
    QuantumAnnealConfig,
    QuantumAnnealResult,
    energy_mz,
    energy_theta,
    grad_theta,
    hessian_mz_quotient,
    quantum_anneal,
    s_threshold,
)
from .spectral import (
    PowerIterationError,
    RescaleError,
    SpectralSummary,
    lambda_abs_max,
    lambda_max,
    rescale_model,
)
