"""Run the MAX-CUT benchmark protocol on G-set instances.

Needs the published instance files (see README for the source URL); point
OIM_GSET_DIR at them or drop them into data/gset/. Each instance is mapped
to an Ising problem and simulated with many seeds; the summary compares
best cuts against the shipped best-known catalog.
"""

import os
import sys
from pathlib import Path

from oimsim import (BenchmarkSpec, DynamicsParams, default_catalog, export,
                    load_gset, maxcut_to_ising, run_benchmark)

gset_dir = Path(os.environ.get("OIM_GSET_DIR",
                               Path(__file__).resolve().parent.parent / "data" / "gset"))
wanted = ["G11", "G1"]
available = [n for n in wanted if (gset_dir / n).is_file()]
if not available:
    sys.exit(f"no G-set files in {gset_dir}; fetch them first (see README)")

problems = []
for name in available:
    graph = load_gset(gset_dir / name)
    problems.append((name, maxcut_to_ising(graph), graph.total_weight))
    print(f"{name}: {graph.n_vertices} vertices, {graph.num_edges} edges")

spec = BenchmarkSpec(problems=tuple(problems), params=DynamicsParams(),
                     runs=20, seed_base=0, oracle=default_catalog())
summary = run_benchmark(spec, parallelism=os.cpu_count() or 1)

print()
print(export(summary, "csv"))
catalog = default_catalog()
for s in summary.problems:
    ref = catalog.best_cut(s.name)
    print(f"{s.name}: best cut {s.best_cut:g} / best known {ref} "
          f"({100.0 * s.best_cut / ref:.2f}%), {s.secs_per_run:.1f}s per run")
