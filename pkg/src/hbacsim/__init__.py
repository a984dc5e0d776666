"""Heat-bath algorithmic cooling simulator for small nuclear-spin registers.

The package simulates iterative entropy-compression cooling on registers
of up to 16 spins: a fast diagonal-state engine, the fixed two-sort
compression unitary and its 3-qubit gate decomposition, the
partner-pairing baseline, a T1 relaxation/reset model, and the closed-form
cooling limits, plus a CLI that emits reproducible CSV traces and figures.
"""

__version__ = "0.1.0"

from .compression import (
    Circuit,
    Gate,
    GateKind,
    PermutationUnitary,
    apply_circuit_traced,
    apply_permutation,
    find_circuit3_wirings,
    gate_permutation,
    ppa_sort,
    two_sort_circuit3,
    two_sort_unitary,
    two_sort_unitary3_approx,
)
from .protocol import (
    ConvergenceError,
    CoolingTrace,
    ProtocolConfig,
    ProtocolKind,
    SweepResult,
    run_cycle,
    run_protocol,
    steady_state,
    sweep_reset_delay,
    thermal_state,
)
from .relaxation import ResetMode, ResetModel, reset_replace, t1_relax
from .spin_model import (
    ConfigError,
    Role,
    ShannonBound,
    Spin,
    SpinSpecies,
    SpinSystem,
    SpinTemperature,
    equilibrium_polarization,
    information_content,
    information_content_quadratic,
    load_preset,
    load_system,
    ppa_limit,
    preset_document,
    preset_names,
    shannon_bound,
    shannon_bound_exact,
    spin_temperature,
)
from .state_engine import DiagState, FullState

__all__ = [
    "__version__",
    "Circuit",
    "Gate",
    "GateKind",
    "PermutationUnitary",
    "apply_circuit_traced",
    "apply_permutation",
    "find_circuit3_wirings",
    "gate_permutation",
    "ppa_sort",
    "two_sort_circuit3",
    "two_sort_unitary",
    "two_sort_unitary3_approx",
    "ConvergenceError",
    "CoolingTrace",
    "ProtocolConfig",
    "ProtocolKind",
    "SweepResult",
    "run_cycle",
    "run_protocol",
    "steady_state",
    "sweep_reset_delay",
    "thermal_state",
    "ResetMode",
    "ResetModel",
    "reset_replace",
    "t1_relax",
    "ConfigError",
    "Role",
    "ShannonBound",
    "Spin",
    "SpinSpecies",
    "SpinSystem",
    "SpinTemperature",
    "equilibrium_polarization",
    "information_content",
    "information_content_quadratic",
    "load_preset",
    "load_system",
    "ppa_limit",
    "preset_document",
    "preset_names",
    "shannon_bound",
    "shannon_bound_exact",
    "spin_temperature",
    "DiagState",
    "FullState",
]
