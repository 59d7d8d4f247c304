"""Tests for the benchmark harness, histograms, and exports."""

import json

import numpy as np
import pytest

from oimsim import (BenchmarkSpec, Complete, DynamicsParams, IsingProblem,
                    KsSchedule, SpecificationError, WeightedGraph,
                    ablation_compare, default_catalog, export, hamiltonian,
                    histogram, maxcut_to_ising, random_ising, random_spins,
                    run_benchmark, write_export)


def quick_params(cycles=20.0):
    return DynamicsParams(cycles=cycles)


@pytest.fixture(scope="module")
def ferro_summary():
    p = IsingProblem(2, [(0, 1, 1.0)])
    spec = BenchmarkSpec(problems=(("ferro2", p, 1),), params=quick_params(300.0),
                         runs=20, seed_base=0, oracle="brute")
    return run_benchmark(spec)


class TestRunBenchmark:
    def test_success_vs_brute(self, ferro_summary):
        stats = ferro_summary.stats("ferro2")
        assert stats.runs == 20
        assert stats.success >= 19
        assert stats.best_H == -1

    def test_ordering_invariants(self, ferro_summary):
        s = ferro_summary.stats("ferro2")
        assert s.best_H <= s.median_H <= s.worst_H
        assert len(s.records) == s.runs
        assert [r.seed for r in s.records] == list(range(20))

    def test_parallelism_does_not_change_records(self):
        p = random_ising(12, Complete(), seed=0)
        spec = BenchmarkSpec(problems=(("r12", p),), params=quick_params(5.0),
                             runs=24, seed_base=100)
        a = run_benchmark(spec, parallelism=1)
        b = run_benchmark(spec, parallelism=2)
        ra = [(r.seed, r.H) for r in a.stats("r12").records]
        rb = [(r.seed, r.H) for r in b.stats("r12").records]
        assert ra == rb

    def test_rerun_reproduces_records(self):
        p = random_ising(10, Complete(), seed=3)
        spec = BenchmarkSpec(problems=(("q", p),), params=quick_params(5.0),
                             runs=7, seed_base=42)
        a = run_benchmark(spec)
        b = run_benchmark(spec)
        assert [(r.seed, r.H) for r in a.stats("q").records] == \
               [(r.seed, r.H) for r in b.stats("q").records]

    def test_catalog_oracle(self):
        g = WeightedGraph(2, [(0, 1, 1)], name="tiny")
        cat_text = "name,best_cut,source\ntiny,1,exact\n"
        from oimsim import load_catalog
        spec = BenchmarkSpec(problems=(("tiny", maxcut_to_ising(g), 1),),
                             params=quick_params(), runs=5,
                             oracle=load_catalog(cat_text))
        summary = run_benchmark(spec)
        stats = summary.stats("tiny")
        assert stats.success == sum(1 for r in stats.records if r.cut >= 1)

    def test_mode_validation(self):
        p = IsingProblem(2, [(0, 1, 1.0)])
        with pytest.raises(SpecificationError):
            BenchmarkSpec(problems=(("x", p),), runs=0)
        with pytest.raises(SpecificationError):
            BenchmarkSpec(problems=(("x", p),), mode="nope")
        with pytest.raises(SpecificationError):
            BenchmarkSpec(problems=(("x", p),), mode="variability")

    def test_no_sync_mode_forces_flag(self):
        p = IsingProblem(2, [(0, 1, 1.0)])
        spec = BenchmarkSpec(problems=(("x", p),), mode="no_sync",
                             params=quick_params())
        assert spec.effective_params.sync_enabled is False


class TestHistogram:
    def test_single_bin(self):
        h = histogram([0, 0, 0], bins=1)
        assert list(h.counts) == [3]

    def test_reference_distances(self):
        h = histogram([-10, 0], reference=-10, bins=2)
        assert list(h.counts) == [1, 1]
        assert list(h.edges) == [0, 5, 10]

    def test_max_in_last_bin(self):
        h = histogram([0, 1, 2, 3, 4], bins=4)
        assert h.counts.sum() == 5
        assert h.counts[-1] >= 1

    def test_empty_rejected(self):
        with pytest.raises(SpecificationError):
            histogram([])

    def test_random_energy_baseline_centered(self):
        # mean H of random spins on a random +-1/0 instance is ~0
        p = random_ising(240, Complete(), seed=0)
        rng = np.random.default_rng(1)
        vals = [hamiltonian(p, random_spins(240, rng)) for _ in range(1000)]
        h = histogram(vals, bins=30)
        assert h.counts.sum() == 1000
        assert abs(np.mean(vals)) <= 3 * np.std(vals) / np.sqrt(1000)


class TestAblationCompare:
    def test_variants_pair_seeds(self):
        p = random_ising(64, o_topology(), seed=0)
        res = ablation_compare(p, quick_params(30.0), runs=4, seed_base=0,
                               variability_pcts=(0.01,))
        assert set(res.variants) == {"standard", "no_sync", "variability_0.01"}
        for stats in res.variants.values():
            assert [r.seed for r in stats.records] == [0, 1, 2, 3]

    def test_zero_variability_equals_standard(self):
        p = random_ising(16, Complete(), seed=1)
        prm = quick_params(10.0)
        std = ablation_compare(p, prm, runs=3, seed_base=5,
                               variability_pcts=())["standard"]
        import dataclasses
        spec = BenchmarkSpec(problems=(("problem", p),),
                             params=dataclasses.replace(prm, variability_pct=0.0),
                             runs=3, seed_base=5)
        again = run_benchmark(spec).stats("problem")
        assert [r.H for r in std.records] == [r.H for r in again.records]


def o_topology():
    from oimsim import Torus
    return Torus(8, 8)


class TestExport:
    def test_summary_csv_schema(self, ferro_summary):
        text = export(ferro_summary, "csv")
        lines = text.strip().split("\n")
        assert lines[0] == ("name,runs,best_H,mean_H,median_H,worst_H,"
                            "best_cut,success,secs_per_run")
        assert lines[1].startswith("ferro2,20,-1,")

    def test_summary_json_round_trip(self, ferro_summary):
        obj = json.loads(export(ferro_summary, "json"))
        assert obj["meta"]["runs"] == 20
        assert obj["meta"]["params"]["cycles"] == 300.0
        assert obj["meta"]["seeds"] == list(range(20))
        prob = obj["problems"][0]
        assert prob["name"] == "ferro2"
        assert len(prob["per_run"]) == 20
        assert "timing" in obj

    def test_reexport_byte_identical(self, ferro_summary):
        assert export(ferro_summary, "json") == export(ferro_summary, "json")
        assert export(ferro_summary, "csv") == export(ferro_summary, "csv")

    def test_histogram_csv(self):
        h = histogram([-10, 0], reference=-10, bins=2)
        text = export(h, "csv")
        assert text == "bin_lo,bin_hi,count\n0,5,1\n5,10,1\n"

    def test_histogram_json(self):
        h = histogram([1.0, 2.0], bins=2)
        obj = json.loads(export(h, "json"))
        assert obj["counts"] == [1, 1]

    def test_write_with_sidecar(self, ferro_summary, tmp_path):
        out = tmp_path / "summary.csv"
        write_export(ferro_summary, "csv", out)
        assert out.exists()
        meta = json.loads((tmp_path / "summary.csv.meta.json").read_text())
        assert meta["seed_base"] == 0
        assert len(meta["per_run"]) == 20
        assert meta["params"]["steps_per_cycle"] == 100

    def test_bad_format(self, ferro_summary):
        with pytest.raises(SpecificationError):
            export(ferro_summary, "xml")
