"""Stochastic phase dynamics of SHIL-binarized coupled oscillators.

Each Ising spin is an oscillator phase phi_i (radians), simulated in the
rotating frame of the common natural frequency so time is measured in
oscillation cycles. The drift is

    d phi_i / dt = dw_i - K * [ sum_j J_ij sin(phi_i - phi_j)
                                + h_i sin(phi_i) ]
                   - Ks(t) * sin(2 phi_i)

where dw_i are per-oscillator frequency detunings and Ks(t) is the strength
of the double-frequency SYNC injection. The sin(2 phi) term creates two
stable locks 180 degrees apart (the physical bit); without detuning and
noise the flow descends the Lyapunov function

    E(phi) = -K * [ sum_{i<j} J_ij cos(phi_i - phi_j)
                    + sum_i h_i cos(phi_i) ]
             - Ks(t)/2 * sum_i cos(2 phi_i)

whose value at binary phases is K * H(s) - n * Ks/2, so phase minima
coincide with Ising minima. Integration is fixed-step Euler-Maruyama:

    phi <- wrap(phi + drift * dt + noise_amp * sqrt(dt) * xi)

Randomness is split into independent substreams of the run seed,
Generator(PCG64(SeedSequence((seed, stream)))), with stream 0 = initial
phases, 1 = detuning, 2 = integration noise. Runs are bit-reproducible for
a fixed (problem, params, seed) on a given platform.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import DimensionError, NumericalDivergenceError, SpecificationError
from .problems import hamiltonian, cut_from_hamiltonian

__all__ = [
    "DEFAULTS",
    "KsSchedule",
    "DynamicsParams",
    "PhaseState",
    "RunResult",
    "EnergyTrace",
    "ks_value",
    "sample_detuning",
    "drift",
    "lyapunov",
    "step",
    "round_phases",
    "simulate",
    "run_seeds",
]

TWO_PI = 2.0 * np.pi

_STREAM_INIT = 0
_STREAM_DETUNE = 1
_STREAM_NOISE = 2

# noise is pregenerated in blocks for speed; numpy Generators produce the
# same stream regardless of block shape, so this never changes results
_MAX_NOISE_DOUBLES = 4_000_000


@lru_cache(maxsize=1)
def load_defaults():
    """The versioned simulation defaults shipped with the package."""
    text = resources.files("oimsim").joinpath("data/defaults.json").read_text()
    return json.loads(text)


DEFAULTS = load_defaults()


def _substream(seed, stream):
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence((int(seed), stream))))


@dataclass(frozen=True)
class KsSchedule:
    """SYNC strength Ks(t): constant, or a linear ramp 0 -> level.

    The ramp is 0 before t0, `level` after t1, and linear in between.
    """

    level: float
    t0: float = 0.0
    t1: float = 0.0
    kind: str = "constant"

    def __post_init__(self):
        if not (math.isfinite(self.level) and self.level >= 0):
            raise SpecificationError("Ks level must be finite and >= 0")
        if self.kind not in ("constant", "ramp"):
            raise SpecificationError(f"unknown Ks schedule kind {self.kind!r}")
        if self.kind == "ramp" and not (0 <= self.t0 <= self.t1):
            raise SpecificationError("ramp needs 0 <= t0 <= t1")

    @classmethod
    def constant(cls, level):
        return cls(level=float(level))

    @classmethod
    def ramp(cls, t0, t1, level):
        return cls(level=float(level), t0=float(t0), t1=float(t1), kind="ramp")

    @classmethod
    def from_config(cls, cfg):
        if cfg["kind"] == "constant":
            return cls.constant(cfg["level"])
        return cls.ramp(cfg["t0"], cfg["t1"], cfg["level"])

    def to_config(self):
        if self.kind == "constant":
            return {"kind": "constant", "level": self.level}
        return {"kind": "ramp", "t0": self.t0, "t1": self.t1, "level": self.level}

    def value(self, t):
        """Ks at time t (scalar or array)."""
        if self.kind == "constant":
            return self.level * np.ones_like(np.asarray(t, dtype=np.float64))
        t = np.asarray(t, dtype=np.float64)
        width = self.t1 - self.t0
        if width == 0.0:
            frac = (t >= self.t1).astype(np.float64)
        else:
            frac = np.clip((t - self.t0) / width, 0.0, 1.0)
        return self.level * frac


def ks_value(schedule, t):
    """Evaluate a Ks schedule at time t."""
    out = schedule.value(t)
    return float(out) if np.isscalar(t) else out


def _default_ks():
    return KsSchedule.from_config(DEFAULTS["ks"])


@dataclass(frozen=True)
class DynamicsParams:
    """All knobs of one simulation; defaults come from data/defaults.json.

    The same parameter set is meant to be used unchanged across problems.
    """

    K: float = DEFAULTS["K"]
    ks_schedule: KsSchedule = field(default_factory=_default_ks)
    noise_amp: float = DEFAULTS["noise_amp"]
    variability_pct: float = DEFAULTS["variability_pct"]
    cycles: float = DEFAULTS["cycles"]
    steps_per_cycle: int = DEFAULTS["steps_per_cycle"]
    sync_enabled: bool = DEFAULTS["sync_enabled"]
    normalize_by_degree: bool = DEFAULTS.get("normalize_by_degree", False)

    def __post_init__(self):
        if not (math.isfinite(self.K) and self.K > 0):
            raise SpecificationError("K must be finite and > 0")
        if not (math.isfinite(self.noise_amp) and self.noise_amp >= 0):
            raise SpecificationError("noise_amp must be finite and >= 0")
        if not (math.isfinite(self.variability_pct) and self.variability_pct >= 0):
            raise SpecificationError("variability_pct must be finite and >= 0")
        if not (math.isfinite(self.cycles) and self.cycles > 0):
            raise SpecificationError("cycles must be finite and > 0")
        if int(self.steps_per_cycle) != self.steps_per_cycle or self.steps_per_cycle < 1:
            raise SpecificationError("steps_per_cycle must be a positive integer")

    @property
    def dt(self):
        return 1.0 / self.steps_per_cycle

    @property
    def total_steps(self):
        return int(math.ceil(round(self.cycles * self.steps_per_cycle, 9)))

    def ks_at(self, t):
        if not self.sync_enabled:
            return np.zeros_like(np.asarray(t, dtype=np.float64))
        return self.ks_schedule.value(t)

    def effective_K(self, problem):
        """K as applied to this problem (divided by max degree when the
        normalization flag is on; the default is parameter-free)."""
        return self.K / problem.max_degree if self.normalize_by_degree else self.K

    def without_sync(self):
        return replace(self, sync_enabled=False)

    def to_config(self):
        return {
            "K": self.K,
            "ks": self.ks_schedule.to_config(),
            "noise_amp": self.noise_amp,
            "variability_pct": self.variability_pct,
            "cycles": self.cycles,
            "steps_per_cycle": self.steps_per_cycle,
            "sync_enabled": self.sync_enabled,
            "normalize_by_degree": self.normalize_by_degree,
        }

    @classmethod
    def from_config(cls, cfg):
        return cls(
            K=cfg["K"],
            ks_schedule=KsSchedule.from_config(cfg["ks"]),
            noise_amp=cfg["noise_amp"],
            variability_pct=cfg["variability_pct"],
            cycles=cfg["cycles"],
            steps_per_cycle=cfg["steps_per_cycle"],
            sync_enabled=cfg["sync_enabled"],
            normalize_by_degree=cfg.get("normalize_by_degree", False),
        )


@dataclass(frozen=True)
class PhaseState:
    """Oscillator phases (radians) at a simulation time (cycles)."""

    phases: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.phases, dtype=np.float64)
        if p.ndim != 1:
            raise DimensionError("phases must be a 1D vector")
        if not np.all(np.isfinite(p)):
            raise SpecificationError("phases must be finite")
        object.__setattr__(self, "phases", p)


@dataclass(frozen=True)
class EnergyTrace:
    """Sampled (time, Lyapunov value, rounded Ising energy) series."""

    times: np.ndarray
    lyapunov: np.ndarray
    rounded_H: np.ndarray


@dataclass(frozen=True)
class RunResult:
    """Outcome of one simulation run."""

    final_spins: np.ndarray
    final_H: float
    final_cut: float | None
    seed: int
    wall_time: float
    trajectory_energy: EnergyTrace | None = None


def sample_detuning(n, variability_pct, seed):
    """Per-oscillator frequency offsets, radians per cycle.

    dw_i = 2*pi*delta_i with delta_i ~ Normal(0, variability_pct^2), i.i.d.
    Deterministic in seed; exactly zero when variability_pct == 0.
    """
    if variability_pct < 0:
        raise SpecificationError("variability_pct must be >= 0")
    if variability_pct == 0:
        return np.zeros(n)
    rng = _substream(seed, _STREAM_DETUNE)
    return TWO_PI * rng.normal(0.0, variability_pct, size=n)


def round_phases(state):
    """Threshold phases to spins: +1 where cos(phi) >= 0, else -1."""
    phases = getattr(state, "phases", state)
    return np.where(np.cos(phases) >= 0.0, 1, -1).astype(np.int8)


def _round_cols(Phi):
    return np.where(np.cos(Phi) >= 0.0, 1, -1).astype(np.int8)


def drift(problem, state, params, detuning=None):
    """Deterministic part of d phi / dt at the state's time."""
    phi = state.phases
    if phi.shape != (problem.n,):
        raise DimensionError(f"state has {phi.shape[0]} phases, problem has n={problem.n}")
    adj = problem.adjacency
    c = np.cos(phi)
    s = np.sin(phi)
    coupling = s * (adj @ c) - c * (adj @ s)  # sum_j J_ij sin(phi_i - phi_j)
    if problem.has_fields:
        coupling = coupling + problem.h * s
    ks = float(params.ks_at(state.time))
    d = -params.effective_K(problem) * coupling - ks * np.sin(2.0 * phi)
    if detuning is not None:
        dw = np.asarray(detuning, dtype=np.float64)
        if dw.shape != (problem.n,):
            raise DimensionError("detuning length must equal n")
        d = d + dw
    return d


def lyapunov(problem, state, params):
    """Global energy function E(phi); the noiseless flow descends it."""
    phi = state.phases
    if phi.shape != (problem.n,):
        raise DimensionError(f"state has {phi.shape[0]} phases, problem has n={problem.n}")
    adj = problem.adjacency
    c = np.cos(phi)
    s = np.sin(phi)
    pair = 0.5 * (c @ (adj @ c) + s @ (adj @ s))  # sum_{i<j} J_ij cos(phi_i-phi_j)
    e = -params.effective_K(problem) * (pair + problem.h @ c)
    ks = float(params.ks_at(state.time))
    if ks != 0.0:
        e -= 0.5 * ks * np.sum(np.cos(2.0 * phi))
    return float(e)


def _lyapunov_cols(problem, Phi, K, ks):
    adj = problem.adjacency
    C = np.cos(Phi)
    S = np.sin(Phi)
    pair = 0.5 * (np.sum(C * (adj @ C), axis=0) + np.sum(S * (adj @ S), axis=0))
    e = -K * (pair + problem.h @ C)
    if ks != 0.0:
        e = e - 0.5 * ks * np.sum(np.cos(2.0 * Phi), axis=0)
    return e


def _hamiltonian_cols(problem, S):
    ei, ej, jv = problem.edge_arrays
    Sf = S.astype(np.float64)
    pair = jv @ (Sf[ei] * Sf[ej]) if len(jv) else 0.0
    return -pair - problem.h @ Sf


def _advance(Phi, adj, h_col, Kdt, ks2dt, dt_dw, incr):
    """One Euler-Maruyama step, in place, on an (n, B) phase matrix.

    ks2dt = 2*Ks(t)*dt (the sin(2 phi) term is computed as 2 sin cos);
    dt_dw is the precomputed dt * detuning column(s); incr the pre-scaled
    noise increment. This single kernel serves both step() and the batch
    integrator so their arithmetic is identical.
    """
    c = np.cos(Phi)
    s = np.sin(Phi)
    g = s * (adj @ c)
    g -= c * (adj @ s)
    if h_col is not None:
        g += h_col * s
    g *= Kdt
    if ks2dt != 0.0:
        g += ks2dt * (s * c)
    np.subtract(Phi, g, out=Phi)
    if dt_dw is not None:
        Phi += dt_dw
    if incr is not None:
        Phi += incr
    np.mod(Phi, TWO_PI, out=Phi)


def step(state, problem, params, detuning=None, rng=None):
    """Advance one Euler-Maruyama step of size dt = 1/steps_per_cycle.

    `rng` supplies the noise draws (one standard normal per oscillator);
    when omitted and noise_amp > 0, it is required.
    """
    phi = state.phases
    if phi.shape != (problem.n,):
        raise DimensionError(f"state has {phi.shape[0]} phases, problem has n={problem.n}")
    dt = params.dt
    Phi = phi.reshape(-1, 1).copy()
    h_col = problem.h.reshape(-1, 1) if problem.has_fields else None
    ks = float(params.ks_at(state.time))
    incr = None
    if params.noise_amp > 0:
        if rng is None:
            raise SpecificationError("rng is required when noise_amp > 0")
        incr = (params.noise_amp * math.sqrt(dt)) * rng.standard_normal(problem.n)
        incr = incr.reshape(-1, 1)
    dt_dw = None
    if detuning is not None:
        dw = np.asarray(detuning, dtype=np.float64)
        if dw.shape != (problem.n,):
            raise DimensionError("detuning length must equal n")
        if np.any(dw != 0.0):
            dt_dw = (dt * dw).reshape(-1, 1)
    _advance(Phi, problem.adjacency, h_col, params.effective_K(problem) * dt,
             2.0 * dt * ks, dt_dw, incr)
    return PhaseState(Phi[:, 0], state.time + dt)


def _integrate_batch(problem, params, seeds, initial_phases=None, trace_steps=None):
    """Integrate several independent runs as columns of one phase matrix.

    Per-run randomness comes from each run's own seed substreams, so the
    result for a given seed does not depend on which runs share the batch.
    Returns (Phi, trace) with Phi of shape (n, B); trace is None or
    (times, E, H) with E, H of shape (num_samples, B).
    """
    n = problem.n
    B = len(seeds)
    dt = params.dt
    total_steps = params.total_steps

    Phi = np.empty((n, B))
    if initial_phases is None:
        for b, seed in enumerate(seeds):
            Phi[:, b] = _substream(seed, _STREAM_INIT).random(n) * TWO_PI
    else:
        init = np.asarray(initial_phases, dtype=np.float64)
        if init.shape == (n,):
            Phi[:] = init[:, None]
        elif init.shape == (n, B):
            Phi[:] = init
        else:
            raise DimensionError(f"initial_phases must have shape ({n},) or ({n}, {B})")
        Phi %= TWO_PI

    dt_dw = None
    if params.variability_pct > 0:
        dw = np.column_stack([sample_detuning(n, params.variability_pct, seed)
                              for seed in seeds])
        dt_dw = dt * dw

    noise_gens = None
    scale = params.noise_amp * math.sqrt(dt)
    if params.noise_amp > 0:
        noise_gens = [_substream(seed, _STREAM_NOISE) for seed in seeds]

    h_col = problem.h.reshape(-1, 1) if problem.has_fields else None
    adj = problem.adjacency
    K_eff = params.effective_K(problem)
    Kdt = K_eff * dt

    if trace_steps is not None:
        trace_steps = np.asarray(trace_steps, dtype=np.int64)
        tr_times = trace_steps * dt
        tr_E = np.empty((len(trace_steps), B))
        tr_H = np.empty((len(trace_steps), B))
        tr_pos = 0

        def record(k):
            nonlocal tr_pos
            while tr_pos < len(trace_steps) and trace_steps[tr_pos] == k:
                ks_now = float(params.ks_at(k * dt))
                tr_E[tr_pos] = _lyapunov_cols(problem, Phi, K_eff, ks_now)
                tr_H[tr_pos] = _hamiltonian_cols(problem, _round_cols(Phi))
                tr_pos += 1

        record(0)

    chunk = max(1, min(256, _MAX_NOISE_DOUBLES // max(1, n * B)))
    done = 0
    while done < total_steps:
        L = min(chunk, total_steps - done)
        buf = None
        if noise_gens is not None:
            buf = np.empty((L, n, B))
            for b, gen in enumerate(noise_gens):
                buf[:, :, b] = gen.standard_normal((L, n))
            buf *= scale
        ks2dt = 2.0 * dt * np.asarray(params.ks_at((done + np.arange(L)) * dt),
                                      dtype=np.float64)
        for k in range(L):
            _advance(Phi, adj, h_col, Kdt, float(ks2dt[k]), dt_dw,
                     None if buf is None else buf[k])
            if trace_steps is not None:
                record(done + k + 1)
        done += L
        if not np.all(np.isfinite(Phi)):
            bad = ~np.isfinite(Phi).all(axis=0)
            raise NumericalDivergenceError(
                "non-finite phases", step=done, seed=seeds[int(np.argmax(bad))])

    if trace_steps is not None:
        return Phi, (tr_times, tr_E, tr_H)
    return Phi, None


def _trace_indices(total_steps, max_points):
    count = min(int(max_points), total_steps + 1)
    return np.unique(np.round(np.linspace(0, total_steps, count)).astype(np.int64))


def simulate(problem, params=None, seed=0, *, total_weight=None,
             trace_points=0, initial_phases=None, polish=False):
    """Run one full simulation and threshold the final phases to spins.

    Phases start i.i.d. uniform on [0, 2*pi) (from the seed's init stream,
    unless `initial_phases` overrides them), detuning and noise come from
    the seed's other substreams, and the state advances until time reaches
    params.cycles. Deterministic given (problem, params, seed).

    total_weight, when given, also reports the MAX-CUT value of the final
    spins. trace_points > 0 samples (time, Lyapunov, rounded H) at at most
    that many uniformly spaced steps. polish=True applies single-flip
    greedy descent to the rounded spins (off by default: raw thresholded
    dynamics output).
    """
    if params is None:
        params = DynamicsParams()
    t0 = time.perf_counter()
    trace_steps = _trace_indices(params.total_steps, trace_points) if trace_points else None
    Phi, trace = _integrate_batch(problem, params, [seed],
                                  initial_phases=initial_phases,
                                  trace_steps=trace_steps)
    spins = _round_cols(Phi)[:, 0]
    if polish:
        from .oracles import greedy_descent
        spins, _ = greedy_descent(problem, spins)
    wall = time.perf_counter() - t0
    H = hamiltonian(problem, spins)
    cut = cut_from_hamiltonian(H, total_weight) if total_weight is not None else None
    energy_trace = None
    if trace is not None:
        times, E, Hs = trace
        energy_trace = EnergyTrace(times, E[:, 0], Hs[:, 0])
    return RunResult(final_spins=spins, final_H=H, final_cut=cut, seed=seed,
                     wall_time=wall, trajectory_energy=energy_trace)


def run_seeds(problem, params, seeds, *, total_weight=None, polish=False):
    """Simulate several seeds batched as one vectorized integration.

    Results are identical to calling simulate() per seed; batching only
    amortizes per-step overhead. Used by the benchmark harness.
    """
    if len(seeds) == 0:
        return []
    t0 = time.perf_counter()
    Phi, _ = _integrate_batch(problem, params, list(seeds))
    spins_mat = _round_cols(Phi)
    wall = (time.perf_counter() - t0) / len(seeds)
    out = []
    for b, seed in enumerate(seeds):
        spins = spins_mat[:, b]
        if polish:
            from .oracles import greedy_descent
            spins, _ = greedy_descent(problem, spins)
        H = hamiltonian(problem, spins)
        cut = cut_from_hamiltonian(H, total_weight) if total_weight is not None else None
        out.append(RunResult(final_spins=spins, final_H=H, final_cut=cut,
                             seed=seed, wall_time=wall))
    return out
