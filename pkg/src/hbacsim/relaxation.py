"""Bath contact: longitudinal relaxation and the idealized replace reset.

Relaxation is modeled as independent per-spin T1 channels.  On a single
spin the population bias decays exponentially toward its equilibrium
value, ``eps(t) = (eps0 - eps_eq) exp(-t/T1) + eps_eq``; on the register
the joint action is the tensor product of the per-spin 2x2 stochastic
maps, which reproduces that decay exactly on every marginal.  Every spin
relaxes during a delay -- the target is protected only by its long T1.

Cross-relaxation between spins is not modeled, and T2 plays no role
because protocol states never carry coherences.

The heat bath has infinite capacity: the idealized reset discards the
reset spins and tensors in fresh ones at the bath polarization, leaving
the remaining spins' marginals and mutual correlations untouched.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .spin_model import SpinSystem
from .state_engine import DiagState, FullState

__all__ = ["ResetMode", "ResetModel", "t1_relax", "reset_replace"]


class ResetMode(enum.Enum):
    IDEAL_REPLACE = "ideal"
    T1_EXPONENTIAL = "t1"


@dataclass(frozen=True)
class ResetModel:
    """How the reset step of a cooling cycle is performed.

    ``T1_EXPONENTIAL`` waits ``delay_s`` seconds while every spin relaxes;
    ``IDEAL_REPLACE`` swaps the reset spins for fresh ones at ``bath_eps``
    with no time passing (the mathematical idealization).
    """

    mode: ResetMode
    delay_s: float = 0.0
    bath_eps: float = 1.0

    def __post_init__(self):
        if self.delay_s < 0:
            raise ValueError("delay_s must be >= 0")
        if abs(self.bath_eps) > 1:
            raise ValueError("|bath_eps| must be <= 1")


def _stochastic_map(eps_eq: float, decay: float) -> np.ndarray:
    # column-stochastic 2x2: p(t) = decay * p0 + (1 - decay) * p_eq
    peq = np.array([(1 + eps_eq) / 2, (1 - eps_eq) / 2])
    return decay * np.eye(2) + (1 - decay) * np.column_stack([peq, peq])


def _gad_kraus(eps_eq: float, decay: float) -> list[np.ndarray]:
    # generalized amplitude damping with stationary bias eps_eq and
    # population decay factor `decay` = exp(-t/T1)
    gamma = 1.0 - decay
    p = (1 + eps_eq) / 2
    sg = math.sqrt(gamma)
    s1g = math.sqrt(decay)
    k = [
        math.sqrt(p) * np.array([[1, 0], [0, s1g]]),
        math.sqrt(p) * np.array([[0, sg], [0, 0]]),
        math.sqrt(1 - p) * np.array([[s1g, 0], [0, 1]]),
        math.sqrt(1 - p) * np.array([[0, 0], [sg, 0]]),
    ]
    return k


def t1_relax(state: DiagState | FullState, system: SpinSystem, t: float):
    """Relax every spin toward its equilibrium polarization for t seconds.

    On a :class:`DiagState` each spin's 2x2 stochastic map is applied along
    its tensor axis; on a :class:`FullState` the equivalent generalized
    amplitude damping channel is applied via Kraus operators (the dense
    path exists for cross-validation).
    """
    if t < 0:
        raise ValueError("relaxation time must be >= 0")
    if state.n != system.n:
        raise ValueError(f"state width {state.n} != system width {system.n}")
    if isinstance(state, FullState):
        out = state
        for i, spin in enumerate(system.spins):
            out = out.apply_kraus(i, _gad_kraus(spin.eps_eq, math.exp(-t / spin.t1)))
        return out
    arr = state.as_tensor()
    for i, spin in enumerate(system.spins):
        m = _stochastic_map(spin.eps_eq, math.exp(-t / spin.t1))
        arr = np.moveaxis(np.tensordot(m, np.moveaxis(arr, i, 0), axes=1), 0, i)
    return DiagState(state.n, arr.reshape(-1))


def reset_replace(state: DiagState, system: SpinSystem, bath_eps: float) -> DiagState:
    """Replace every reset-role spin with a fresh one at ``bath_eps``.

    Traces out the reset spins and tensors fresh single-spin states back in
    at the same positions.  Idempotent.
    """
    if abs(bath_eps) > 1:
        raise ValueError("|bath_eps| must be <= 1")
    if state.n != system.n:
        raise ValueError(f"state width {state.n} != system width {system.n}")
    reset = system.reset_indices
    if not reset:
        raise ValueError("system has no reset spin")
    keep = [i for i in range(state.n) if i not in reset]
    fresh = np.array([(1 + bath_eps) / 2, (1 - bath_eps) / 2])
    marg = state.as_tensor().sum(axis=tuple(reset))
    out = marg
    for _ in reset:
        out = np.tensordot(out, fresh, axes=0)
    # axes are (keep..., reset...); restore original register order
    inv = np.argsort(np.array(keep + list(reset)))
    return DiagState(state.n, np.transpose(out, inv).reshape(-1))
