"""Entropy-compression unitaries and their gate-level form.

The two-sort compression step is a fixed, state-independent basis
permutation: it leaves the first and last diagonal entries of the density
matrix alone and swaps every other neighboring pair, i.e. basis states
(1,2), (3,4), ..., (2^n-3, 2^n-2).  Because the protocol states are
diagonal, only the induced permutation matters; an experimentally cheaper
variant that flips the sign of one matrix element induces the same
permutation and is provided for cross-validation.

For three qubits the permutation decomposes into eight NOT/CNOT/Toffoli
gates: a cyclic shift down in basis index (gates 1-3), a conditional bit
flip (gates 4-5), and a cyclic shift up (gates 6-8).  The wiring below is
the unique assignment satisfying that structure; ``find_circuit3_wirings``
re-derives it by exhaustive search.

The partner-pairing baseline's compression is also here: a full descending
sort of the populations, returning the (state-dependent) permutation used.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
import numpy as np

from .state_engine import DiagState

__all__ = [
    "GateKind",
    "Gate",
    "Circuit",
    "PermutationUnitary",
    "gate_permutation",
    "two_sort_unitary",
    "two_sort_unitary3_approx",
    "two_sort_circuit3",
    "find_circuit3_wirings",
    "cyclic_shift_permutation",
    "apply_permutation",
    "apply_circuit_traced",
    "ppa_sort",
]


class GateKind(enum.Enum):
    NOT = "NOT"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"


_N_CONTROLS = {GateKind.NOT: 0, GateKind.CNOT: 1, GateKind.TOFFOLI: 2}


@dataclass(frozen=True)
class Gate:
    """A classical reversible gate: flip ``target`` iff all controls are 1."""

    kind: GateKind
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        want = _N_CONTROLS[self.kind]
        if len(self.controls) != want:
            raise ValueError(f"{self.kind.value} takes {want} controls, got {len(self.controls)}")
        wires = (*self.controls, self.target)
        if len(set(wires)) != len(wires):
            raise ValueError("controls and target must be pairwise distinct")
        if min(wires) < 0:
            raise ValueError("wire indices must be non-negative")

    def to_text(self) -> str:
        if self.controls:
            return f"{self.kind.value} c={','.join(map(str, self.controls))} t={self.target}"
        return f"{self.kind.value} t={self.target}"

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        parts = line.split()
        if not parts:
            raise ValueError("empty gate line")
        try:
            kind = GateKind(parts[0].upper())
        except ValueError:
            raise ValueError(f"unknown gate kind {parts[0]!r}") from None
        controls: tuple[int, ...] = ()
        target = None
        for tok in parts[1:]:
            if tok.startswith("c="):
                controls = tuple(int(x) for x in tok[2:].split(","))
            elif tok.startswith("t="):
                target = int(tok[2:])
            else:
                raise ValueError(f"unrecognized token {tok!r} in gate line")
        if target is None:
            raise ValueError(f"gate line {line!r} missing target")
        return cls(kind, controls, target)


@dataclass(frozen=True)
class Circuit:
    """An ordered gate sequence on a register of width n."""

    gates: tuple[Gate, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max((*g.controls, g.target)) >= self.n:
                raise ValueError(f"gate {g.to_text()!r} does not fit width {self.n}")

    def __len__(self) -> int:
        return len(self.gates)

    def permutation(self) -> "PermutationUnitary":
        """Compose the per-gate basis permutations in time order."""
        u = PermutationUnitary.identity(self.n)
        for g in self.gates:
            u = gate_permutation(g, self.n).after(u)
        return u

    def truncated(self, k: int) -> "Circuit":
        """First k gates only.

        Truncation changes the induced permutation; for the three-qubit
        compression circuit, stopping after gate 7 preserves the target
        spin's outcome but not the full two-sort permutation.
        """
        if not 0 <= k <= len(self.gates):
            raise ValueError(f"cannot truncate at {k} of {len(self.gates)} gates")
        return Circuit(self.gates[:k], self.n)

    def to_text(self) -> str:
        return "\n".join(g.to_text() for g in self.gates) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int) -> "Circuit":
        gates = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                gates.append(Gate.from_text(line))
        return cls(tuple(gates), n)


@dataclass(frozen=True)
class PermutationUnitary:
    """A basis permutation with a per-input-state sign.

    The matrix action is ``U|b> = phases[b] |perm[b]>``.  Conjugating a
    diagonal state moves population from b to perm[b]; the phases cancel,
    so the diagonal engine ignores them.  They are kept so the dense oracle
    can verify sign-variant matrices induce identical diagonal dynamics.
    """

    n: int
    perm: np.ndarray
    phases: np.ndarray | None = None

    def __post_init__(self):
        perm = np.array(self.perm, dtype=np.int64, copy=True)
        dim = 1 << self.n
        if perm.shape != (dim,):
            raise ValueError(f"permutation must have length {dim}")
        if not np.array_equal(np.sort(perm), np.arange(dim)):
            raise ValueError("perm is not a bijection on the basis states")
        phases = self.phases
        if phases is None:
            phases = np.ones(dim)
        phases = np.array(phases, dtype=float, copy=True)
        if phases.shape != (dim,) or not np.all(np.isin(phases, (-1.0, 1.0))):
            raise ValueError("phases must be a vector of +-1 per basis state")
        perm.setflags(write=False)
        phases.setflags(write=False)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def identity(cls, n: int) -> "PermutationUnitary":
        return cls(n, np.arange(1 << n))

    def after(self, first: "PermutationUnitary") -> "PermutationUnitary":
        """Composite applying ``first`` and then ``self``."""
        if self.n != first.n:
            raise ValueError("width mismatch")
        return PermutationUnitary(
            self.n, self.perm[first.perm], self.phases[first.perm] * first.phases
        )

    def inverse(self) -> "PermutationUnitary":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.perm.size)
        return PermutationUnitary(self.n, inv, self.phases[inv] * 1.0)

    def is_involution(self) -> bool:
        return bool(np.array_equal(self.perm[self.perm], np.arange(self.perm.size)))

    def fixed_points(self) -> np.ndarray:
        return np.flatnonzero(self.perm == np.arange(self.perm.size))

    def same_permutation(self, other: "PermutationUnitary") -> bool:
        return self.n == other.n and bool(np.array_equal(self.perm, other.perm))

    def to_matrix(self) -> np.ndarray:
        dim = self.perm.size
        m = np.zeros((dim, dim), dtype=complex)
        m[self.perm, np.arange(dim)] = self.phases
        return m


def gate_permutation(gate: Gate, n: int) -> PermutationUnitary:
    """Basis permutation of a NOT/CNOT/Toffoli gate on an n-qubit register."""
    wires = (*gate.controls, gate.target)
    if max(wires) >= n:
        raise ValueError(f"gate {gate.to_text()!r} does not fit width {n}")
    b = np.arange(1 << n)
    mask = np.ones(1 << n, dtype=bool)
    for c in gate.controls:
        mask &= (b >> (n - 1 - c)) & 1 == 1
    flip = np.where(mask, 1 << (n - 1 - gate.target), 0)
    return PermutationUnitary(n, b ^ flip)


def two_sort_unitary(n: int) -> PermutationUnitary:
    """The fixed compression permutation: swap neighbors, pin the ends.

    Fixes basis states 0 and 2^n - 1 and swaps (1,2), (3,4), ...,
    (2^n-3, 2^n-2).  It is its own inverse.
    """
    if n < 2:
        raise ValueError("need at least 2 qubits")
    perm = np.arange(1 << n)
    perm[1:-1] = perm[1:-1].reshape(-1, 2)[:, ::-1].reshape(-1)
    return PermutationUnitary(n, perm)


def two_sort_unitary3_approx() -> PermutationUnitary:
    """Sign-variant of the 3-qubit compression matrix.

    Using an approximate Toffoli in the decomposition flips the sign of the
    |110> -> |101> matrix element.  The induced basis permutation -- and
    hence the action on any diagonal state -- is identical to
    ``two_sort_unitary(3)``.
    """
    base = two_sort_unitary(3)
    phases = np.ones(8)
    phases[6] = -1.0
    return PermutationUnitary(3, base.perm, phases)


def cyclic_shift_permutation(n: int, step: int) -> PermutationUnitary:
    """Basis permutation b -> (b + step) mod 2^n."""
    dim = 1 << n
    return PermutationUnitary(n, (np.arange(dim) + step) % dim)


# The unique wiring of the 8-gate decomposition (see find_circuit3_wirings):
# gates 1-3 shift every basis index down by one (the carry ripples from the
# last qubit), gates 4-5 flip qubit 2 unless qubits 0 and 1 are both 1, and
# gates 6-8 shift back up.
_CIRCUIT3_GATES = (
    Gate(GateKind.NOT, (), 2),
    Gate(GateKind.CNOT, (2,), 1),
    Gate(GateKind.TOFFOLI, (1, 2), 0),
    Gate(GateKind.TOFFOLI, (0, 1), 2),
    Gate(GateKind.NOT, (), 2),
    Gate(GateKind.TOFFOLI, (1, 2), 0),
    Gate(GateKind.CNOT, (2,), 1),
    Gate(GateKind.NOT, (), 2),
)

CIRCUIT3_KINDS = tuple(g.kind for g in _CIRCUIT3_GATES)


def two_sort_circuit3(truncate_at: int | None = None) -> Circuit:
    """Eight-gate NOT/CNOT/Toffoli realization of the 3-qubit compression.

    ``truncate_at`` keeps only the first k gates (the target spin's outcome
    is already final after gate 6).
    """
    c = Circuit(_CIRCUIT3_GATES, 3)
    return c if truncate_at is None else c.truncated(truncate_at)


def find_circuit3_wirings() -> list[Circuit]:
    """Exhaustively search wire assignments for the 8-gate decomposition.

    Fixes the gate-kind sequence NOT, CNOT, TOFFOLI, TOFFOLI, NOT, TOFFOLI,
    CNOT, NOT and returns every assignment whose first three gates compose
    to a cyclic +-1 shift of the basis index and whose full composition
    equals ``two_sort_unitary(3)``.  The shipped wiring is the unique
    solution; this routine exists to verify that claim rather than trust it.
    """
    n = 3
    candidates: dict[GateKind, list[Gate]] = {
        GateKind.NOT: [Gate(GateKind.NOT, (), t) for t in range(n)],
        GateKind.CNOT: [
            Gate(GateKind.CNOT, (c,), t) for c in range(n) for t in range(n) if c != t
        ],
        GateKind.TOFFOLI: [
            Gate(GateKind.TOFFOLI, tuple(sorted(set(range(n)) - {t})), t) for t in range(n)
        ],
    }
    perm_of = {g: gate_permutation(g, n).perm for gs in candidates.values() for g in gs}
    shifts = (cyclic_shift_permutation(n, 1).perm, cyclic_shift_permutation(n, -1).perm)
    want = two_sort_unitary(n).perm
    found = []
    for combo in itertools.product(*(candidates[k] for k in CIRCUIT3_KINDS)):
        head = np.arange(1 << n)
        for g in combo[:3]:
            head = perm_of[g][head]
        if not any(np.array_equal(head, s) for s in shifts):
            continue
        full = head
        for g in combo[3:]:
            full = perm_of[g][full]
        if np.array_equal(full, want):
            found.append(Circuit(combo, n))
    return found


# ---------------------------------------------------------------------------
# application to diagonal states

def apply_permutation(state: DiagState, u: PermutationUnitary) -> DiagState:
    """Conjugate a diagonal state: population at b moves to perm[b]."""
    if state.n != u.n:
        raise ValueError(f"state width {state.n} != unitary width {u.n}")
    out = np.empty_like(state.pops)
    out[u.perm] = state.pops
    return DiagState(state.n, out)


def apply_circuit_traced(state: DiagState, circuit: Circuit):
    """Apply a circuit gate by gate, recording polarizations after each gate.

    Returns the final state and an (n_gates x n_spins) array whose row k
    holds every spin's polarization after gate k+1.
    """
    if state.n != circuit.n:
        raise ValueError(f"state width {state.n} != circuit width {circuit.n}")
    rows = np.empty((len(circuit.gates), state.n))
    for k, g in enumerate(circuit.gates):
        state = apply_permutation(state, gate_permutation(g, circuit.n))
        rows[k] = state.polarizations()
    return state, rows


def ppa_sort(state: DiagState) -> tuple[DiagState, PermutationUnitary]:
    """Sort populations into descending order by basis index.

    This is the partner-pairing compression step; unlike the two-sort
    unitary it depends on the state.  Ties break stably by basis index, so
    an already-sorted state yields the identity.  Returns the sorted state
    and the permutation that was applied.
    """
    order = np.argsort(-state.pops, kind="stable")
    perm = np.empty_like(order)
    perm[order] = np.arange(order.size)
    u = PermutationUnitary(state.n, perm)
    return apply_permutation(state, u), u
