"""Tests for CSV and Markdown table emission."""

from __future__ import annotations

import csv
import io

import pytest

from adaptive_sprt import ExperimentConfig, HypothesisPair, Normal, Procedure, run_experiment
from adaptive_sprt.config import TableSpec, preset_table
from adaptive_sprt.reporting import CSV_COLUMNS, emit_table, render_csv, render_markdown


@pytest.fixture(scope="module")
def adaptive_summary():
    cfg = ExperimentConfig(
        pair=HypothesisPair(Normal(0.1), Normal(0.0)),
        alpha=1e-3,
        beta=1e-3,
        master_seed=11,
        replications=3,
        label="normal-0.1-0",
    )
    return run_experiment(cfg, workers=1)


@pytest.fixture(scope="module")
def classical_summary():
    cfg = ExperimentConfig(
        pair=HypothesisPair(Normal(0.5), Normal(0.0)),
        alpha=1e-2,
        beta=1e-2,
        master_seed=12,
        replications=3,
        procedure=Procedure.CLASSICAL,
        label="normal-0.5-0-classical",
    )
    return run_experiment(cfg, workers=1)


class TestCsv:
    def test_single_row_shape(self, adaptive_summary):
        text = render_csv([adaptive_summary])
        lines = text.strip().split("\n")
        assert len(lines) == 2
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines[1].split(",")) == 14

    def test_round_trip_exact(self, adaptive_summary):
        text = render_csv([adaptive_summary])
        row = next(csv.DictReader(io.StringIO(text)))
        s = adaptive_summary
        assert float(row["pcs"]) == s.pcs
        assert float(row["se_asn"]) == s.se_asn
        assert float(row["e_n1"]) == s.mean_n_inferior
        assert float(row["n1_star_closed"]) == s.n1_star_closed
        assert float(row["n1_star_series"]) == s.n1_star_series
        assert float(row["asn_wald_k0"]) == s.asn_wald_k0
        assert float(row["alpha"]) == s.config.alpha
        assert int(row["master_seed"]) == s.config.master_seed
        assert int(row["replications"]) == 3
        assert row["scenario_id"] == "normal-0.1-0"

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            render_csv([])


class TestMarkdown:
    def test_caption_carries_allocation_limit(self, adaptive_summary):
        text = render_markdown([adaptive_summary])
        assert "normal-0.1-0" in text
        assert "N1* = 400.000" in text
        assert "| PCS | E(N1) | ASN |" in text

    def test_classical_dual_accounting(self, classical_summary):
        text = render_markdown([classical_summary])
        assert "rounds" in text and "total_draws" in text
        assert "E(N1)" not in text


class TestEmitTable:
    def test_writes_csv(self, adaptive_summary, tmp_path):
        spec = TableSpec(
            scenarios=preset_table("table1").scenarios,
            format="csv",
            path=str(tmp_path / "out.csv"),
        )
        path = emit_table([adaptive_summary], spec)
        assert path.read_text() == render_csv([adaptive_summary])

    def test_writes_markdown(self, classical_summary, tmp_path):
        spec = TableSpec(
            scenarios=preset_table("table4").scenarios,
            format="markdown",
            path=str(tmp_path / "out.md"),
        )
        path = emit_table([classical_summary], spec)
        assert "total_draws" in path.read_text()

    def test_unwritable_path_raises(self, adaptive_summary):
        spec = TableSpec(
            scenarios=preset_table("table1").scenarios,
            format="csv",
            path="/nonexistent-dir/out.csv",
        )
        with pytest.raises(OSError):
            emit_table([adaptive_summary], spec)
