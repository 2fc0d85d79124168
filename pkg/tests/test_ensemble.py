"""Tests for the noise-field trial ensemble."""

import numpy as np
import pytest

import mfanneal.ensemble as ensemble_mod
from mfanneal.ensemble import NoiseSpec, amplitude_sweep, run_trials
from mfanneal.model import (
    CouplingMatrix,
    IsingModel,
    WeightedGraph,
    cut_value,
    ising_energy,
    maxcut_to_ising,
)
from mfanneal.oracle import exact_max_cut
from mfanneal.quantum import QuantumAnnealConfig


def triangle_graph():
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])


def random_graph(n, seed, p=0.5):
    rng = np.random.default_rng(seed)
    edges = [(i, j, 1.0) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return WeightedGraph.from_edges(n, edges)


FAST_CFG = QuantumAnnealConfig(ds=0.005)


class TestRunTrials:
    def test_zero_amplitude_degenerate(self):
        # no symmetry breaking: every trial rounds the trivial state the same way
        g = triangle_graph()
        model = maxcut_to_ising(g)
        batch = run_trials(model, NoiseSpec(amplitude=0.0, n_trials=5), FAST_CFG, graph=g)
        values = batch.values()
        assert np.all(values == values[0])
        assert batch.std == 0.0

    def test_triangle_reaches_optimum(self):
        g = triangle_graph()
        model = maxcut_to_ising(g)
        batch = run_trials(model, NoiseSpec(amplitude=0.3, master_seed=7, n_trials=10),
                           FAST_CFG, graph=g)
        assert batch.best == pytest.approx(2.0)
        assert batch.n_failed == 0

    def test_best_spins_attain_best_value(self):
        g = random_graph(8, 3)
        model = maxcut_to_ising(g)
        batch = run_trials(model, NoiseSpec(amplitude=0.2, master_seed=1, n_trials=8),
                           FAST_CFG, graph=g)
        assert cut_value(g, batch.best_spins) == pytest.approx(batch.best)

    def test_energy_objective_scores_noiseless_model(self):
        J = CouplingMatrix.from_entries(2, [(0, 1, 1.0)])
        model = IsingModel(J=J, h=np.zeros(2))
        batch = run_trials(model, NoiseSpec(amplitude=0.2, master_seed=2, n_trials=6),
                           FAST_CFG)
        assert batch.objective == "energy"
        assert batch.best == pytest.approx(-1.0)
        assert ising_energy(model, batch.best_spins) == pytest.approx(batch.best)

    def test_statistics_relations(self):
        g = random_graph(8, 5)
        model = maxcut_to_ising(g)
        batch = run_trials(model, NoiseSpec(amplitude=0.4, master_seed=3, n_trials=12),
                           FAST_CFG, graph=g)
        values = batch.values()
        assert batch.best >= batch.mean
        assert batch.std ** 2 == pytest.approx(np.var(values), abs=1e-9)
        assert batch.ecdf[-1, 1] == 1.0
        assert np.all(np.diff(batch.ecdf[:, 1]) > 0)
        assert batch.ecdf[-1, 0] == pytest.approx(batch.best)

    def test_determinism_across_worker_counts(self):
        g = random_graph(8, 9)
        model = maxcut_to_ising(g)
        spec = NoiseSpec(amplitude=0.3, master_seed=11, n_trials=6)
        serial = run_trials(model, spec, FAST_CFG, graph=g, n_workers=1)
        parallel = run_trials(model, spec, FAST_CFG, graph=g, n_workers=3)
        assert [t.value for t in serial.per_trial] == [t.value for t in parallel.per_trial]
        assert [t.spin_digest for t in serial.per_trial] == \
            [t.spin_digest for t in parallel.per_trial]

    def test_failed_trials_recorded_not_dropped(self, monkeypatch):
        g = triangle_graph()
        model = maxcut_to_ising(g)
        real = ensemble_mod.quantum_anneal
        calls = {"n": 0}

        def flaky(*args, **kwargs):
            calls["n"] += 1
            if calls["n"] == 2:
                raise RuntimeError("synthetic failure")
            return real(*args, **kwargs)

        monkeypatch.setattr(ensemble_mod, "quantum_anneal", flaky)
        batch = run_trials(model, NoiseSpec(amplitude=0.3, master_seed=1, n_trials=4),
                           FAST_CFG, graph=g)
        assert batch.n_trials == 4
        assert batch.n_failed == 1
        assert len(batch.values()) == 3
        failed = [t for t in batch.per_trial if t.failed]
        assert failed[0].error == "synthetic failure"

    def test_dimension_check(self):
        g = triangle_graph()
        J = CouplingMatrix.from_entries(2, [(0, 1, 1.0)])
        model = IsingModel(J=J, h=np.zeros(2))
        with pytest.raises(ValueError, match="dimensions"):
            run_trials(model, NoiseSpec(amplitude=0.1), FAST_CFG, graph=g)


class TestAmplitudeSweep:
    def test_shape(self):
        g = random_graph(6, 13)
        model = maxcut_to_ising(g)
        results = amplitude_sweep(model, [0.1, 0.2, 0.3],
                                  NoiseSpec(amplitude=0.0, master_seed=5, n_trials=4),
                                  FAST_CFG, graph=g)
        assert len(results) == 3
        assert all(r.n_trials == 4 for r in results)
        assert [r.amplitude for r in results] == [0.1, 0.2, 0.3]

    def test_single_amplitude_matches_run_trials(self):
        g = random_graph(6, 17)
        model = maxcut_to_ising(g)
        base = NoiseSpec(amplitude=0.25, master_seed=23, n_trials=5)
        direct = run_trials(model, base, FAST_CFG, graph=g)
        swept = amplitude_sweep(model, [0.25], base, FAST_CFG, graph=g)[0]
        assert [t.value for t in direct.per_trial] == [t.value for t in swept.per_trial]
        assert direct.best == swept.best

    def test_empty_sweep_rejected(self):
        g = triangle_graph()
        with pytest.raises(ValueError, match="non-empty"):
            amplitude_sweep(maxcut_to_ising(g), [], NoiseSpec(amplitude=0.1), FAST_CFG,
                            graph=g)


class TestOracleCalibration:
    def test_moderate_noise_finds_small_optima(self):
        # desk-scale sanity: 12 trials on an 8-vertex instance reach the
        # exhaustive optimum
        g = random_graph(8, 29)
        model = maxcut_to_ising(g)
        exact = exact_max_cut(g).best_value
        batch = run_trials(model, NoiseSpec(amplitude=0.25, master_seed=31, n_trials=12),
                           QuantumAnnealConfig(), graph=g)
        assert batch.best == pytest.approx(exact)
