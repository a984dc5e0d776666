"""Cooling-cycle orchestration: traces, fixed points, and delay sweeps.

One cooling cycle is an entropy compression followed by a reset step.  The
compression is the fixed two-sort permutation (TSAC) or a descending
population sort (PPA).  The reset step either waits a configurable delay
while every spin relaxes with its own T1 (timed mode) or swaps the reset
spins for fresh bath spins (ideal mode).  In timed mode the finite
duration of the compression circuit itself also contributes relaxation,
which is what makes the reset-delay sweep non-monotone with a finite
optimum; in ideal mode the cycle is the exact mathematical protocol and
its fixed point matches the closed-form cooling limit.

Traces record the register after every completed cycle.  Delay sweeps
report the steady-state polarization measured right after the compression
(the within-cycle peak, which is what an experiment observes when it
acquires immediately after the gate sequence).
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .compression import apply_circuit_traced, apply_permutation, ppa_sort, two_sort_circuit3, two_sort_unitary
from .relaxation import ResetMode, ResetModel, reset_replace, t1_relax
from .spin_model import SpinSystem
from .state_engine import DiagState

__all__ = [
    "ProtocolKind",
    "ProtocolConfig",
    "CoolingTrace",
    "SweepResult",
    "ConvergenceError",
    "run_cycle",
    "run_protocol",
    "steady_state",
    "sweep_reset_delay",
]

MAX_CYCLES = 10_000
STEADY_TOL = 1e-6


class ProtocolKind(enum.Enum):
    TSAC = "tsac"
    PPA = "ppa"


class ConvergenceError(RuntimeError):
    """Raised when a fixed-point iteration hits its cycle cap."""

    def __init__(self, cycles: int, last_delta: float, tol: float):
        self.cycles = cycles
        self.last_delta = last_delta
        self.tol = tol
        super().__init__(
            f"no steady state after {cycles} cycles: last delta {last_delta:.3e} (tol {tol:.3e})"
        )


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of a cooling run."""

    kind: ProtocolKind
    cycles: int
    reset: ResetModel
    reset_repeats: int = 1
    record_gate_trace: bool = False

    def __post_init__(self):
        if not 0 <= self.cycles <= MAX_CYCLES:
            raise ValueError(f"cycles must lie in 0..{MAX_CYCLES}")
        if self.reset_repeats < 1:
            raise ValueError("reset_repeats must be >= 1")


@dataclass
class CoolingTrace:
    """Per-cycle record of a protocol run.

    Row 0 is the initial thermal state; row k the state after cycle k.
    ``gate_eps`` (cycles x gates x spins), present when gate tracing was
    requested, holds the polarizations after each gate of each cycle's
    compression circuit.
    """

    labels: tuple[str, ...]
    eps_eq: tuple[float, ...]
    target_index: int
    bath_temperature: float
    eps: np.ndarray
    entropy_bits: np.ndarray
    steady_state_cycle: int | None = None
    gate_eps: np.ndarray | None = None
    gate_kinds: tuple[str, ...] | None = None

    @property
    def cycles(self) -> int:
        return self.eps.shape[0] - 1

    @property
    def target_eps(self) -> np.ndarray:
        return self.eps[:, self.target_index]

    def temperatures_kelvin(self) -> np.ndarray:
        """Per-row |spin temperature| via T_eq * eps_eq / eps (inf at eps=0)."""
        eq = np.asarray(self.eps_eq)
        with np.errstate(divide="ignore"):
            return np.abs(self.bath_temperature * eq / self.eps)

    def final_eps(self) -> np.ndarray:
        return self.eps[-1].copy()


@dataclass
class SweepResult:
    """Steady-state target polarization as a function of reset delay."""

    delays: np.ndarray
    eps_target: np.ndarray
    target_label: str

    @property
    def argmax_index(self) -> int:
        return int(np.argmax(self.eps_target))

    @property
    def argmax_delay(self) -> float:
        return float(self.delays[self.argmax_index])


def _compress(state: DiagState, system: SpinSystem, kind: ProtocolKind) -> DiagState:
    if kind is ProtocolKind.TSAC:
        return apply_permutation(state, two_sort_unitary(system.n))
    sorted_state, _ = ppa_sort(state)
    return sorted_state


def _reset(state: DiagState, system: SpinSystem, config: ProtocolConfig) -> DiagState:
    r = config.reset
    if r.mode is ResetMode.IDEAL_REPLACE:
        for _ in range(config.reset_repeats):
            state = reset_replace(state, system, r.bath_eps)
        return state
    if system.compression_time_s > 0:
        state = t1_relax(state, system, system.compression_time_s)
    for _ in range(config.reset_repeats):
        state = t1_relax(state, system, r.delay_s)
    return state


def run_cycle(state: DiagState, system: SpinSystem, config: ProtocolConfig) -> DiagState:
    """One full cooling iteration: compress, then reset."""
    return _reset(_compress(state, system, config.kind), system, config)


def thermal_state(system: SpinSystem) -> DiagState:
    return DiagState.product(system.eps_eq)


def run_protocol(
    system: SpinSystem,
    config: ProtocolConfig,
    *,
    until_steady: bool = False,
    steady_tol: float = STEADY_TOL,
) -> CoolingTrace:
    """Run cooling cycles from the thermal state and record a full trace.

    With ``until_steady`` the loop stops once the largest per-spin
    polarization change over a cycle drops below ``steady_tol`` (raising
    :class:`ConvergenceError` if that never happens within the cycle
    budget); otherwise exactly ``config.cycles`` cycles run and
    ``steady_state_cycle`` reports where the tolerance was first met, if
    anywhere.
    """
    state = thermal_state(system)
    trace_gates = config.record_gate_trace and config.kind is ProtocolKind.TSAC and system.n == 3
    circuit = two_sort_circuit3() if trace_gates else None

    eps_rows = [state.polarizations()]
    entropy = [state.entropy_bits()]
    gate_rows = [] if trace_gates else None
    steady_cycle = None

    for k in range(1, config.cycles + 1):
        if trace_gates:
            compressed, rows = apply_circuit_traced(state, circuit)
            gate_rows.append(rows)
        else:
            compressed = _compress(state, system, config.kind)
        state = _reset(compressed, system, config)
        cur = state.polarizations()
        delta = float(np.max(np.abs(cur - eps_rows[-1])))
        eps_rows.append(cur)
        entropy.append(state.entropy_bits())
        if steady_cycle is None and delta < steady_tol:
            steady_cycle = k
            if until_steady:
                break
    else:
        if until_steady and config.cycles > 0 and steady_cycle is None:
            raise ConvergenceError(config.cycles, delta, steady_tol)

    return CoolingTrace(
        labels=system.labels,
        eps_eq=system.eps_eq,
        target_index=system.target_index,
        bath_temperature=system.bath_temperature,
        eps=np.array(eps_rows),
        entropy_bits=np.array(entropy),
        steady_state_cycle=steady_cycle,
        gate_eps=np.array(gate_rows) if gate_rows else None,
        gate_kinds=tuple(g.kind.value for g in circuit.gates) if trace_gates else None,
    )


def steady_state(
    system: SpinSystem,
    config: ProtocolConfig,
    tol: float = STEADY_TOL,
    cap: int = MAX_CYCLES,
) -> tuple[np.ndarray, int]:
    """Iterate cycles to the fixed point; return (polarizations, cycles used).

    Raises :class:`ConvergenceError` if the largest per-spin change never
    drops below ``tol`` within ``cap`` cycles.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    state = thermal_state(system)
    prev = state.polarizations()
    for k in range(1, cap + 1):
        state = run_cycle(state, system, config)
        cur = state.polarizations()
        delta = float(np.max(np.abs(cur - prev)))
        if delta < tol:
            return cur, k
        prev = cur
    raise ConvergenceError(cap, delta, tol)


def _sweep_point(system: SpinSystem, kind: ProtocolKind, delay: float,
                 repeats: int, cycles: int, tol: float) -> float:
    config = ProtocolConfig(kind, 0, ResetModel(ResetMode.T1_EXPONENTIAL, delay_s=delay),
                            reset_repeats=repeats)
    state = thermal_state(system)
    prev = state.polarizations()
    target = system.target_index
    compressed = state
    for _ in range(cycles):
        compressed = _compress(state, system, kind)
        state = _reset(compressed, system, config)
        cur = state.polarizations()
        if float(np.max(np.abs(cur - prev))) < tol:
            break
        prev = cur
    return compressed.polarization(target)


def _worker_count(n_points: int) -> int:
    raw = os.environ.get("HBAC_SIM_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_points))


def sweep_reset_delay(
    system: SpinSystem,
    kind: ProtocolKind,
    delays,
    cycles: int = MAX_CYCLES,
    reset_repeats: int = 1,
    steady_tol: float = STEADY_TOL,
) -> SweepResult:
    """Saturated target polarization for each reset delay.

    Each delay runs the timed protocol to saturation and reports the
    target's polarization right after the final compression.  Points are
    independent and run on a small thread pool (capped by the
    HBAC_SIM_THREADS environment variable, 0 = auto); results are
    assembled in delay order regardless of completion order.
    """
    delays = np.asarray(list(delays), dtype=float)
    if delays.size == 0:
        raise ValueError("delay list must be non-empty")
    if np.any(delays < 0):
        raise ValueError("delays must be >= 0")

    label = system.labels[system.target_index]
    workers = _worker_count(delays.size)
    if workers == 1:
        vals = [_sweep_point(system, kind, d, reset_repeats, cycles, steady_tol) for d in delays]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_sweep_point, system, kind, d, reset_repeats, cycles, steady_tol)
                    for d in delays]
            vals = [f.result() for f in futs]
    return SweepResult(delays, np.array(vals), label)
