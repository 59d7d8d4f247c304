"""Multi-run experiment harness: seeded sweeps, ablations, histograms, export.

Runs are fanned out over a process pool in fixed seed chunks; chunking and
seeding depend only on the spec, so results are identical for any
parallelism degree, and rerunning a spec reproduces every per-run record.
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__ as _version
from .dynamics import DynamicsParams, run_seeds
from .errors import SpecificationError
from .io import BestKnownCatalog
from .oracles import brute_force
from .problems import IsingProblem

__all__ = [
    "BenchmarkSpec", "RunRecord", "ProblemStats", "RunSummary",
    "EnergyHistogram", "run_benchmark", "histogram", "ablation_compare",
    "AblationResult", "export", "write_export",
]

_SEED_CHUNK = 10  # runs per vectorized batch; fixed so batching never depends
                  # on the parallelism degree

MODES = ("standard", "no_sync", "variability")


@dataclass(frozen=True)
class BenchmarkSpec:
    """What to run: problems, dynamics parameters, seeds, mode, reference.

    problems entries are (name, IsingProblem) or (name, IsingProblem,
    total_weight); a total_weight enables cut reporting. oracle is None,
    "brute" (exact minimum, small n), or a BestKnownCatalog keyed by
    problem name.
    """

    problems: tuple
    params: DynamicsParams = field(default_factory=DynamicsParams)
    runs: int = 100
    seed_base: int = 0
    mode: str = "standard"
    variability_pct: float = 0.0
    oracle: object = None

    def __post_init__(self):
        if self.runs < 1:
            raise SpecificationError("runs must be >= 1")
        if self.mode not in MODES:
            raise SpecificationError(f"mode must be one of {MODES}")
        if self.mode == "variability" and self.variability_pct <= 0:
            raise SpecificationError("variability mode needs variability_pct > 0")
        norm = []
        for entry in self.problems:
            if len(entry) == 2:
                name, problem = entry
                tw = None
            else:
                name, problem, tw = entry
            if not isinstance(problem, IsingProblem):
                raise SpecificationError(f"problem {name!r} is not an IsingProblem")
            norm.append((str(name), problem, tw))
        object.__setattr__(self, "problems", tuple(norm))

    @property
    def effective_params(self):
        """Params with the mode applied (no_sync forces sync off, etc.)."""
        p = self.params
        if self.mode == "no_sync":
            p = p.without_sync()
        elif self.mode == "variability":
            p = replace(p, variability_pct=self.variability_pct)
        return p

    def seeds(self):
        return [self.seed_base + k for k in range(self.runs)]


@dataclass(frozen=True)
class RunRecord:
    problem: str
    seed: int
    H: float
    cut: float | None
    secs: float


@dataclass(frozen=True)
class ProblemStats:
    name: str
    runs: int
    best_H: float
    mean_H: float
    median_H: float
    worst_H: float
    best_cut: float | None
    mean_cut: float | None
    median_cut: float | None
    worst_cut: float | None
    success: int | None
    secs_per_run: float
    best_spins: np.ndarray
    records: tuple


@dataclass(frozen=True)
class RunSummary:
    problems: tuple
    runs: int
    seed_base: int
    mode: str
    params_config: dict
    total_secs: float

    def stats(self, name):
        for p in self.problems:
            if p.name == name:
                return p
        raise KeyError(name)


def _run_chunk(args):
    problem, params, seeds, total_weight = args
    return run_seeds(problem, params, seeds, total_weight=total_weight)


def _success_count(spec, name, problem, records):
    oracle = spec.oracle
    if oracle is None:
        return None
    if isinstance(oracle, BestKnownCatalog):
        ref = oracle.best_cut(name)
        if ref is None:
            return None
        return sum(1 for r in records if r.cut is not None and r.cut >= ref)
    if oracle == "brute":
        min_H = brute_force(problem).min_H
        return sum(1 for r in records if r.H <= min_H + 1e-9)
    raise SpecificationError(f"unknown oracle {oracle!r}")


def _aggregate(spec, name, problem, total_weight, results):
    records = tuple(RunRecord(name, r.seed, r.final_H, r.final_cut, r.wall_time)
                    for r in results)
    hs = [r.H for r in records]
    best_idx = int(np.argmin(hs))
    cuts = [r.cut for r in records]
    have_cut = total_weight is not None
    return ProblemStats(
        name=name,
        runs=len(records),
        best_H=min(hs),
        mean_H=statistics.fmean(hs),
        median_H=statistics.median(hs),
        worst_H=max(hs),
        best_cut=max(cuts) if have_cut else None,
        mean_cut=statistics.fmean(cuts) if have_cut else None,
        median_cut=statistics.median(cuts) if have_cut else None,
        worst_cut=min(cuts) if have_cut else None,
        success=_success_count(spec, name, problem, records),
        secs_per_run=statistics.fmean(r.secs for r in records),
        best_spins=results[best_idx].final_spins,
        records=records,
    )


def run_benchmark(spec, parallelism=1):
    """Execute a BenchmarkSpec; results do not depend on parallelism."""
    if parallelism < 1:
        raise SpecificationError("parallelism must be >= 1")
    params = spec.effective_params
    seeds = spec.seeds()
    chunks = [seeds[k:k + _SEED_CHUNK] for k in range(0, len(seeds), _SEED_CHUNK)]
    tasks = [(problem, params, chunk, tw)
             for (name, problem, tw) in spec.problems
             for chunk in chunks]

    if parallelism == 1 or len(tasks) == 1:
        outputs = [_run_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            outputs = list(pool.map(_run_chunk, tasks))

    stats = []
    per_problem = len(chunks)
    for p, (name, problem, tw) in enumerate(spec.problems):
        results = [r for out in outputs[p * per_problem:(p + 1) * per_problem]
                   for r in out]
        stats.append(_aggregate(spec, name, problem, tw, results))
    total = sum(r.secs for s in stats for r in s.records)
    return RunSummary(problems=tuple(stats), runs=spec.runs,
                      seed_base=spec.seed_base, mode=spec.mode,
                      params_config=params.to_config(), total_secs=total)


# --- histograms ---------------------------------------------------------------

@dataclass(frozen=True)
class EnergyHistogram:
    """Equal-width binned energies (or distances to a reference)."""

    edges: np.ndarray
    counts: np.ndarray
    reference: float | None = None


def histogram(values, reference=None, bins=10):
    """Bin values (minus the reference, when given) into equal-width bins."""
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise SpecificationError("histogram needs at least one value")
    if bins < 1:
        raise SpecificationError("bins must be >= 1")
    if reference is not None:
        vals = vals - reference
    counts, edges = np.histogram(vals, bins=bins)
    return EnergyHistogram(edges=edges, counts=counts,
                           reference=None if reference is None else float(reference))


# --- ablations ---------------------------------------------------------------

@dataclass(frozen=True)
class AblationResult:
    """Per-variant summaries from identical seeds (paired comparison)."""

    variants: dict

    def __getitem__(self, key):
        return self.variants[key]


def ablation_compare(problem, params, runs, seed_base, *, total_weight=None,
                     variability_pcts=(0.01, 0.05), parallelism=1, name="problem"):
    """Run SYNC vs no-SYNC and nominal vs frequency-variability variants.

    Every variant uses the same seed list, so differences are paired.
    """
    variants = {}
    configs = [("standard", "standard", 0.0), ("no_sync", "no_sync", 0.0)]
    configs += [(f"variability_{pct:g}", "variability", pct) for pct in variability_pcts]
    for label, mode, pct in configs:
        spec = BenchmarkSpec(problems=((name, problem, total_weight),),
                             params=params, runs=runs, seed_base=seed_base,
                             mode=mode, variability_pct=pct)
        variants[label] = run_benchmark(spec, parallelism=parallelism).stats(name)
    return AblationResult(variants)


# --- export --------------------------------------------------------------------

SUMMARY_CSV_HEADER = "name,runs,best_H,mean_H,median_H,worst_H,best_cut,success,secs_per_run"
HISTOGRAM_CSV_HEADER = "bin_lo,bin_hi,count"


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


def _check_consistency(stats):
    hs = [r.H for r in stats.records]
    if len(hs) != stats.runs:
        raise SpecificationError("record count disagrees with runs")
    recomputed = (min(hs), statistics.fmean(hs), statistics.median(hs), max(hs))
    stored = (stats.best_H, stats.mean_H, stats.median_H, stats.worst_H)
    if recomputed != stored:
        raise SpecificationError("aggregates disagree with per-run records")


def summary_metadata(summary):
    return {
        "oimsim_version": _version,
        "params": summary.params_config,
        "runs": summary.runs,
        "seed_base": summary.seed_base,
        "seeds": [summary.seed_base + k for k in range(summary.runs)],
        "mode": summary.mode,
    }


def _summary_csv(summary):
    lines = [SUMMARY_CSV_HEADER]
    for s in summary.problems:
        _check_consistency(s)
        lines.append(",".join(_fmt(v) for v in (
            s.name, s.runs, s.best_H, s.mean_H, s.median_H, s.worst_H,
            s.best_cut, s.success, s.secs_per_run)))
    return "\n".join(lines) + "\n"


def _summary_json(summary, extra_meta=None):
    for s in summary.problems:
        _check_consistency(s)
    meta = summary_metadata(summary)
    if extra_meta:
        meta.update(extra_meta)
    obj = {
        "meta": meta,
        "problems": [{
            "name": s.name,
            "runs": s.runs,
            "best_H": s.best_H,
            "mean_H": s.mean_H,
            "median_H": s.median_H,
            "worst_H": s.worst_H,
            "best_cut": s.best_cut,
            "mean_cut": s.mean_cut,
            "median_cut": s.median_cut,
            "worst_cut": s.worst_cut,
            "success": s.success,
            "best_spins": [int(v) for v in s.best_spins],
            "per_run": [{"seed": r.seed, "H": r.H, "cut": r.cut}
                        for r in s.records],
        } for s in summary.problems],
        "timing": {
            "total_secs": summary.total_secs,
            "per_problem_secs_per_run": {s.name: s.secs_per_run
                                         for s in summary.problems},
        },
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _histogram_csv(hist):
    lines = [HISTOGRAM_CSV_HEADER]
    for k in range(len(hist.counts)):
        lines.append(",".join(_fmt(v) for v in
                              (float(hist.edges[k]), float(hist.edges[k + 1]),
                               int(hist.counts[k]))))
    return "\n".join(lines) + "\n"


def _histogram_json(hist):
    obj = {
        "meta": {"oimsim_version": _version, "reference": hist.reference},
        "edges": [float(e) for e in hist.edges],
        "counts": [int(c) for c in hist.counts],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def export(obj, format="json", extra_meta=None):
    """Serialize a RunSummary or EnergyHistogram to 'csv' or 'json' text."""
    if format not in ("csv", "json"):
        raise SpecificationError("format must be 'csv' or 'json'")
    if isinstance(obj, RunSummary):
        return _summary_csv(obj) if format == "csv" else _summary_json(obj, extra_meta)
    if isinstance(obj, EnergyHistogram):
        return _histogram_csv(obj) if format == "csv" else _histogram_json(obj)
    raise SpecificationError(f"cannot export {type(obj).__name__}")


def write_export(obj, format, path, extra_meta=None):
    """Write an export; CSV gets a JSON metadata sidecar at <path>.meta.json."""
    text = export(obj, format, extra_meta)
    with open(path, "w") as fh:
        fh.write(text)
    if format == "csv" and isinstance(obj, RunSummary):
        meta = dict(summary_metadata(obj))
        if extra_meta:
            meta.update(extra_meta)
        meta["per_run"] = [{"problem": r.problem, "seed": r.seed, "H": r.H,
                            "cut": r.cut}
                           for s in obj.problems for r in s.records]
        with open(f"{path}.meta.json", "w") as fh:
            fh.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")
