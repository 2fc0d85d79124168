"""Tests for G-set parsing and result serialization."""

import numpy as np
import pytest

from mfanneal.ensemble import TrialBatchResult, TrialRecord
from mfanneal.io import (
    GsetFormatError,
    ResultRecord,
    parse_gset,
    read_results_csv,
    read_results_json,
    write_ecdf_csv,
    write_results_csv,
    write_results_json,
)


class TestParseGset:
    def test_minimal(self):
        g = parse_gset("2 1\n1 2 1\n")
        assert g.n_vertices == 2
        assert g.n_edges == 1
        assert (g.u[0], g.v[0], g.w[0]) == (0, 1, 1.0)

    def test_signed_and_real_weights(self):
        g = parse_gset("3 2\n1 2 -1\n2 3 0.5\n")
        assert list(g.w) == [-1.0, 0.5]

    def test_blank_lines_ignored(self):
        g = parse_gset("\n2 1\n\n1 2 1\n\n")
        assert g.n_edges == 1

    def test_count_mismatch_too_few(self):
        with pytest.raises(GsetFormatError, match="declared 2 edges but found 1"):
            parse_gset("2 2\n1 2 1\n")

    def test_count_mismatch_too_many(self):
        with pytest.raises(GsetFormatError, match="more than the declared"):
            parse_gset("3 1\n1 2 1\n2 3 1\n")

    def test_malformed_header(self):
        with pytest.raises(GsetFormatError, match="line 1"):
            parse_gset("2\n")

    def test_index_out_of_range(self):
        with pytest.raises(GsetFormatError, match="line 2.*out of range"):
            parse_gset("2 1\n1 3 1\n")

    def test_self_loop(self):
        with pytest.raises(GsetFormatError, match="self-loop"):
            parse_gset("2 1\n2 2 1\n")

    def test_duplicate_edge(self):
        with pytest.raises(GsetFormatError, match="duplicate"):
            parse_gset("2 2\n1 2 1\n2 1 3\n")

    def test_non_numeric(self):
        with pytest.raises(GsetFormatError, match="non-numeric"):
            parse_gset("2 1\n1 2 x\n")

    def test_empty(self):
        with pytest.raises(GsetFormatError, match="empty"):
            parse_gset("")

    def test_line_numbers_reported(self):
        try:
            parse_gset("3 2\n1 2 1\n3 3 1\n")
        except GsetFormatError as exc:
            assert exc.line_no == 3
        else:
            pytest.fail("expected GsetFormatError")


def sample_record(n_trials=3):
    rng = np.random.default_rng(0)
    values = np.sort(rng.uniform(10, 20, n_trials))
    trials = [TrialRecord(index=k, value=float(values[k]), spin_digest=f"d{k:02x}")
              for k in range(n_trials)]
    uniq, counts = np.unique(values, return_counts=True)
    batch = TrialBatchResult(
        amplitude=0.1,
        objective="cut",
        per_trial=trials,
        mean=float(values.mean()),
        best=float(values.max()),
        std=float(values.std()),
        ecdf=np.column_stack([uniq, np.cumsum(counts) / n_trials]),
        n_trials=n_trials,
        n_failed=0,
        best_spins=np.array([1.0, -1.0]),
    )
    return ResultRecord(problem="sample", solver="quantum",
                        config={"ds": 0.001, "trials": n_trials}, seed=7,
                        batches=[batch], wall_clock_s=1.25)


class TestJson:
    def test_round_trip_exact(self):
        record = sample_record()
        doc = read_results_json(write_results_json(record))
        batch = doc["batches"][0]
        for k, t in enumerate(record.batches[0].per_trial):
            assert batch["trials"][k]["value"] == t.value
        assert batch["mean"] == record.batches[0].mean
        assert batch["std"] == record.batches[0].std
        assert batch["ecdf"][-1][1] == 1.0

    def test_schema_guard(self):
        with pytest.raises(ValueError, match="schema"):
            read_results_json('{"schema": "other/v9"}')

    def test_config_echo(self):
        doc = read_results_json(write_results_json(sample_record()))
        assert doc["config"] == {"ds": 0.001, "trials": 3}
        assert doc["seed"] == 7


class TestCsv:
    def test_row_count(self):
        record = sample_record(200)
        text = write_results_csv(record)
        data_rows = text.strip().splitlines()[1:]
        assert len(data_rows) == 201  # 200 trials + 1 summary

    def test_round_trip_exact(self):
        record = sample_record()
        rows = read_results_csv(write_results_csv(record))
        trial_rows = [r for r in rows if r["kind"] == "trial"]
        for row, t in zip(trial_rows, record.batches[0].per_trial):
            assert row["value"] == t.value
        summary = [r for r in rows if r["kind"] == "summary"][0]
        assert summary["mean"] == record.batches[0].mean
        assert summary["best"] == record.batches[0].best
        assert summary["std"] == record.batches[0].std

    def test_empty_batch_summary_only(self):
        record = sample_record()
        record.batches[0].per_trial = []
        record.batches[0].n_trials = 0
        text = write_results_csv(record)
        rows = read_results_csv(text)
        assert len(rows) == 1
        assert rows[0]["kind"] == "summary"
        assert rows[0]["n_trials"] == 0

    def test_ecdf_export(self):
        record = sample_record()
        lines = write_ecdf_csv(record).strip().splitlines()
        assert lines[0] == "amplitude,value,fraction"
        assert len(lines) == 1 + record.batches[0].ecdf.shape[0]
        last = lines[-1].split(",")
        assert float(last[2]) == 1.0
