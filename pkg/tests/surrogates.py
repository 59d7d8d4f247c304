"""Fixed surrogate benchmark instances for tests that need G-set stand-ins.

Two generated graphs with the dimensions of the published 800-vertex
benchmarks: a 20x40 toroidal grid with +-1 weights and an Erdos-Renyi
graph with 19176 unit edges. SURROGATE_REFS holds their long-anneal
reference cuts (SaParams.long_run, 1e7 flips, best of seeds 0 and 1),
frozen so the suite does not pay for re-annealing; rerun this module
(python tests/surrogates.py) to recompute them.
"""

import numpy as np

from oimsim import Torus, WeightedGraph, random_ising

SURROGATE_REFS = {
    "torus_800": 534,
    "er_800": 11631,
}


def torus_800_graph():
    problem = random_ising(800, Torus(20, 40), seed=0)
    ei, ej, jv = problem.edge_arrays
    edges = [(int(i), int(j), int(v)) for i, j, v in zip(ei, ej, jv)]
    return WeightedGraph(800, edges, name="torus20x40-seed0")


def er_800_graph():
    rng = np.random.default_rng(0)
    seen = set()
    while len(seen) < 19176:
        u, v = rng.integers(0, 800, 2)
        if u != v:
            seen.add((min(u, v), max(u, v)))
    edges = [(int(u), int(v), 1) for u, v in sorted(seen)]
    return WeightedGraph(800, edges, name="er800-19176-seed0")


def _recompute_references():
    from oimsim import SaParams, maxcut_to_ising, simulated_annealing
    for key, graph in (("torus_800", torus_800_graph()),
                       ("er_800", er_800_graph())):
        problem = maxcut_to_ising(graph)
        best = None
        for seed in range(2):
            _, H = simulated_annealing(problem, SaParams.long_run(10_000_000, seed=seed))
            cut = (graph.total_weight - H) / 2
            best = cut if best is None else max(best, cut)
        print(f"{key}: reference cut {best:g}")


if __name__ == "__main__":
    _recompute_references()
