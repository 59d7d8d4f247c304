"""Ising problems, weighted graphs, and their energy functions.

The Ising energy minimized throughout this package is

    H(s) = - sum_{i<j} J_ij s_i s_j - sum_i h_i s_i,    s_i in {-1, +1}.

MAX-CUT instances map onto this form with J = -w and h = 0; the cut value
is then recovered as (total_weight - H) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError, SpecificationError

__all__ = [
    "IsingProblem",
    "WeightedGraph",
    "as_spins",
    "random_spins",
    "hamiltonian",
    "cut_value",
    "maxcut_to_ising",
    "cut_from_hamiltonian",
]


def _canonical_edges(n, edges, *, what="coupling"):
    """Validate and sort an (i, j, value) edge list; returns int/float arrays.

    Entries are normalized to i < j and sorted by (i, j). Self-loops,
    out-of-range indices, duplicate pairs, zero or non-finite values are
    rejected.
    """
    if len(edges) == 0:
        return (np.empty(0, dtype=np.int32), np.empty(0, dtype=np.int32),
                np.empty(0, dtype=np.float64))
    arr = np.asarray(edges, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise SpecificationError(f"{what} list must be (i, j, value) triples")
    ii = arr[:, 0]
    jj = arr[:, 1]
    vv = arr[:, 2]
    if not (np.all(ii == np.round(ii)) and np.all(jj == np.round(jj))):
        raise SpecificationError(f"{what} indices must be integers")
    ii = ii.astype(np.int64)
    jj = jj.astype(np.int64)
    lo = np.minimum(ii, jj)
    hi = np.maximum(ii, jj)
    if np.any(lo == hi):
        k = int(np.argmax(lo == hi))
        raise SpecificationError(f"self-{what} at vertex {lo[k]}")
    if lo.min() < 0 or hi.max() >= n:
        raise SpecificationError(f"{what} index out of range [0, {n})")
    if not np.all(np.isfinite(vv)):
        raise SpecificationError(f"non-finite {what} value")
    if np.any(vv == 0):
        raise SpecificationError(f"zero {what} values are not stored; drop them")
    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    key = key[order]
    if np.any(np.diff(key) == 0):
        k = int(np.argmax(np.diff(key) == 0))
        raise SpecificationError(
            f"duplicate {what} for pair ({key[k] // n}, {key[k] % n})")
    return (lo[order].astype(np.int32), hi[order].astype(np.int32), vv[order])


@dataclass(frozen=True, eq=False)
class IsingProblem:
    """A sparse Ising problem: couplings J_ij (i < j) and local fields h_i.

    Couplings are stored exactly as given, as a sorted edge list; a symmetric
    CSR adjacency is built once at construction for the dynamics and solvers.
    Instances are immutable and safe to share across workers.
    """

    n: int
    couplings: object = field(default=(), repr=False)
    fields: object = field(default=None, repr=False)
    name: str | None = None

    # filled in __post_init__
    _ei: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _ej: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _jv: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _h: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _adj: object = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise SpecificationError("n must be a positive integer")
        ei, ej, jv = _canonical_edges(self.n, list(self.couplings))
        if self.fields is None:
            h = np.zeros(self.n)
        else:
            h = np.asarray(self.fields, dtype=np.float64).copy()
            if h.shape != (self.n,):
                raise DimensionError(f"fields must have length {self.n}")
            if not np.all(np.isfinite(h)):
                raise SpecificationError("non-finite field value")
        adj = sp.csr_matrix(
            (np.concatenate([jv, jv]),
             (np.concatenate([ei, ej]), np.concatenate([ej, ei]))),
            shape=(self.n, self.n),
        )
        adj.sort_indices()
        for a in (ei, ej, jv, h):
            a.setflags(write=False)
        object.__setattr__(self, "_ei", ei)
        object.__setattr__(self, "_ej", ej)
        object.__setattr__(self, "_jv", jv)
        object.__setattr__(self, "_h", h)
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "couplings",
                           tuple((int(i), int(j), float(v))
                                 for i, j, v in zip(ei, ej, jv)))

    # --- views -----------------------------------------------------------
    @property
    def edge_arrays(self):
        """(i, j, J) as three read-only arrays, sorted by (i, j)."""
        return self._ei, self._ej, self._jv

    @property
    def h(self):
        """Local field vector (read-only, length n)."""
        return self._h

    @property
    def adjacency(self):
        """Symmetric sparse CSR coupling matrix (J_ij = J_ji)."""
        return self._adj

    @property
    def num_couplings(self):
        return len(self._jv)

    @property
    def max_degree(self):
        """Largest number of couplings on any one spin (>= 1 for scaling)."""
        if len(self._jv) == 0:
            return 1
        return int(np.diff(self._adj.indptr).max())

    @property
    def has_fields(self):
        return bool(np.any(self._h != 0.0))

    def coupling_weight_bound(self):
        """sum |J| + sum |h|: an upper bound on |H| over all spins."""
        return float(np.abs(self._jv).sum() + np.abs(self._h).sum())

    def __eq__(self, other):
        if not isinstance(other, IsingProblem):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self._ei, other._ei)
                and np.array_equal(self._ej, other._ej)
                and np.array_equal(self._jv, other._jv)
                and np.array_equal(self._h, other._h))


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected weighted graph with integer, nonzero edge weights."""

    n_vertices: int
    edges: object = field(default=(), repr=False)
    name: str | None = None

    _eu: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _ev: np.ndarray = field(init=False, repr=False, compare=False, default=None)
    _ew: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if not isinstance(self.n_vertices, (int, np.integer)) or self.n_vertices < 1:
            raise SpecificationError("n_vertices must be a positive integer")
        eu, ev, ew = _canonical_edges(self.n_vertices, list(self.edges), what="edge")
        if not np.all(ew == np.round(ew)):
            raise SpecificationError("edge weights must be integers")
        ew = ew.astype(np.int64)
        ew.setflags(write=False)
        object.__setattr__(self, "_eu", eu)
        object.__setattr__(self, "_ev", ev)
        object.__setattr__(self, "_ew", ew)
        object.__setattr__(self, "edges",
                           tuple((int(u), int(v), int(w))
                                 for u, v, w in zip(eu, ev, ew)))

    @property
    def edge_arrays(self):
        return self._eu, self._ev, self._ew

    @property
    def num_edges(self):
        return len(self._ew)

    @property
    def total_weight(self):
        return int(self._ew.sum())

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n_vertices == other.n_vertices
                and np.array_equal(self._eu, other._eu)
                and np.array_equal(self._ev, other._ev)
                and np.array_equal(self._ew, other._ew))


# --- spin configurations --------------------------------------------------

def as_spins(spins, n):
    """Validate a length-n vector of +/-1 entries; returns an int8 array."""
    s = np.asarray(spins)
    if s.shape != (n,):
        raise DimensionError(f"expected {n} spins, got shape {s.shape}")
    s = s.astype(np.int8, copy=False)
    if not np.all(np.abs(s) == 1):
        raise SpecificationError("spins must be -1 or +1")
    return s


def random_spins(n, rng):
    """Uniform random spin configuration from a numpy Generator."""
    return (rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1).astype(np.int8)


# --- energies -------------------------------------------------------------

def hamiltonian(problem, spins):
    """Ising energy H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i.

    Exact (integer-valued) whenever all J and h are integers.
    """
    s = as_spins(spins, problem.n)
    ei, ej, jv = problem.edge_arrays
    sf = s.astype(np.float64)
    pair = float(jv @ (sf[ei] * sf[ej])) if len(jv) else 0.0
    return -pair - float(problem.h @ sf)


def cut_value(graph, spins):
    """Total weight of edges crossing the +/- partition encoded by spins."""
    s = as_spins(spins, graph.n_vertices)
    eu, ev, ew = graph.edge_arrays
    if len(ew) == 0:
        return 0
    crossed = s[eu] != s[ev]
    return int(ew[crossed].sum())


def maxcut_to_ising(graph):
    """Map a MAX-CUT instance to an Ising problem with J = -w, h = 0.

    For every spin configuration s,
        cut_value(graph, s) == (graph.total_weight - H(s)) / 2.
    """
    eu, ev, ew = graph.edge_arrays
    couplings = np.column_stack([eu, ev, -ew.astype(np.float64)]) if len(ew) else []
    return IsingProblem(graph.n_vertices, couplings, name=graph.name)


def cut_from_hamiltonian(H, total_weight):
    """Recover a cut value from the mapped problem's energy: (W - H) / 2."""
    return (total_weight - H) / 2
