"""Register state representations: diagonal population vectors and a dense oracle.

Every state the cooling protocols produce is a classical mixture of
computational basis states, so the workhorse representation is
:class:`DiagState`, a length-2^n population vector.  :class:`FullState`
keeps the full 2^n x 2^n Hermitian matrix and exists to cross-validate the
diagonal engine (and to confirm that permutation circuits never create
off-diagonal elements from diagonal inputs); it is deliberately slow and
capped at small registers.

Basis convention: index ``b`` is read as the bitstring b_0 b_1 ... b_{n-1}
with spin 0 the most significant bit.  A spin's polarization is the
population bias P(bit=0) - P(bit=1) of its marginal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DiagState", "FullState"]

_SUM_TOL = 1e-9       # hard error beyond this drift from unit total
_RENORM_TOL = 1e-12   # silently renormalize drift beyond this
_NEG_TOL = 1e-12      # clamp negatives above this magnitude; error below

_FULL_MAX_QUBITS = 10  # dense oracle limit; the diagonal engine goes to 16


def _validate_index(i: int, n: int):
    if not 0 <= i < n:
        raise IndexError(f"qubit index {i} out of range for {n} qubits")


def _bit_axis(i: int) -> int:
    # spin i occupies tensor axis i once pops is reshaped to (2,)*n
    return i


@dataclass(frozen=True)
class DiagState:
    """Diagonal density matrix as a probability vector over basis states."""

    n: int
    pops: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ValueError(f"qubit count {self.n} outside supported range 1..16")
        pops = np.array(self.pops, dtype=float, copy=True)
        if pops.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} populations, got shape {pops.shape}")
        if np.any(pops < -_NEG_TOL):
            raise ValueError(f"population below -{_NEG_TOL:g}: min {pops.min():.3e}")
        pops = np.where(pops < 0, 0.0, pops)
        total = pops.sum()
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"populations sum to {total!r}, expected 1")
        if abs(total - 1.0) > _RENORM_TOL:
            pops = pops / total
        pops.setflags(write=False)
        object.__setattr__(self, "pops", pops)

    # ---------------------------------------------------------- constructors

    @classmethod
    def product(cls, eps_list) -> "DiagState":
        """Product state with the given per-spin polarizations."""
        eps = [float(e) for e in eps_list]
        for e in eps:
            if abs(e) > 1:
                raise ValueError(f"|eps| must be <= 1, got {e}")
        pops = np.ones(1)
        for e in eps:
            pops = np.kron(pops, np.array([(1 + e) / 2, (1 - e) / 2]))
        return cls(len(eps), pops)

    @classmethod
    def uniform(cls, n: int) -> "DiagState":
        return cls(n, np.full(1 << n, 1.0 / (1 << n)))

    # ------------------------------------------------------------- queries

    def as_tensor(self) -> np.ndarray:
        return self.pops.reshape((2,) * self.n)

    def polarization(self, i: int) -> float:
        """Population bias P(0) - P(1) of spin i's marginal."""
        _validate_index(i, self.n)
        m = np.moveaxis(self.as_tensor(), _bit_axis(i), 0).reshape(2, -1).sum(axis=1)
        return float(m[0] - m[1])

    def polarizations(self) -> np.ndarray:
        return np.array([self.polarization(i) for i in range(self.n)])

    def reduce(self, keep) -> "DiagState":
        """Marginal state over the kept qubit indices (order preserved)."""
        keep = sorted(set(int(k) for k in keep))
        if not keep:
            raise ValueError("keep set must be non-empty")
        for k in keep:
            _validate_index(k, self.n)
        drop = tuple(i for i in range(self.n) if i not in keep)
        marg = self.as_tensor().sum(axis=drop) if drop else self.as_tensor()
        return DiagState(len(keep), marg.reshape(-1))

    def entropy_bits(self) -> float:
        """Shannon entropy of the population vector in bits (0 log 0 = 0)."""
        p = self.pops[self.pops > 0]
        return float(-(p * np.log2(p)).sum())

    def to_csv(self, path):
        """Debug dump as (basis_bitstring, population) rows."""
        lines = ["basis_bitstring,population"]
        for b, p in enumerate(self.pops):
            lines.append(f"{b:0{self.n}b},{p:.12g}")
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")

    def allclose(self, other: "DiagState", tol: float = 1e-10) -> bool:
        return self.n == other.n and bool(np.allclose(self.pops, other.pops, atol=tol, rtol=0))


@dataclass(frozen=True)
class FullState:
    """Dense Hermitian density matrix; the slow cross-validation engine."""

    n: int
    rho: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= _FULL_MAX_QUBITS:
            raise ValueError(f"dense engine supports 1..{_FULL_MAX_QUBITS} qubits, got {self.n}")
        dim = 1 << self.n
        rho = np.array(self.rho, dtype=complex, copy=True)
        if rho.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=1e-12, rtol=0):
            raise ValueError("density matrix must be Hermitian within 1e-12")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"trace is {tr!r}, expected 1")
        evals = np.linalg.eigvalsh(rho)
        if evals.min() < -1e-10:
            raise ValueError(f"negative eigenvalue {evals.min():.3e}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    # ---------------------------------------------------------- constructors

    @classmethod
    def product(cls, eps_list) -> "FullState":
        rho = np.ones((1, 1), dtype=complex)
        for e in eps_list:
            if abs(e) > 1:
                raise ValueError(f"|eps| must be <= 1, got {e}")
            rho = np.kron(rho, np.diag([(1 + e) / 2, (1 - e) / 2]).astype(complex))
        return cls(len(list(eps_list)), rho)

    @classmethod
    def from_diag(cls, state: DiagState) -> "FullState":
        return cls(state.n, np.diag(state.pops).astype(complex))

    # ------------------------------------------------------------- queries

    def diagonal(self) -> DiagState:
        return DiagState(self.n, self.rho.diagonal().real.copy())

    def is_diagonal(self, tol: float = 1e-12) -> bool:
        off = self.rho - np.diag(self.rho.diagonal())
        return bool(np.abs(off).max() <= tol)

    def polarization(self, i: int) -> float:
        return self.diagonal().polarization(i)

    def entropy_bits(self) -> float:
        return self.diagonal().entropy_bits()

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)

    # ----------------------------------------------------------- operations

    def conjugate(self, unitary: np.ndarray) -> "FullState":
        """Apply rho -> U rho U^dagger for an explicit matrix."""
        u = np.asarray(unitary, dtype=complex)
        dim = 1 << self.n
        if u.shape != (dim, dim):
            raise ValueError(f"unitary shape {u.shape} does not match {dim}x{dim}")
        if not np.allclose(u @ u.conj().T, np.eye(dim), atol=1e-12, rtol=0):
            raise ValueError("matrix is not unitary within 1e-12")
        return FullState(self.n, u @ self.rho @ u.conj().T)

    def apply_kraus(self, i: int, kraus_ops) -> "FullState":
        """Apply a single-qubit channel sum_k K rho K^dagger on qubit i."""
        _validate_index(i, self.n)
        ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
        comp = sum(k.conj().T @ k for k in ops)
        if not np.allclose(comp, np.eye(2), atol=1e-10, rtol=0):
            raise ValueError("Kraus operators must satisfy sum K^dag K = I")
        pre = np.eye(1 << i, dtype=complex)
        post = np.eye(1 << (self.n - i - 1), dtype=complex)
        out = np.zeros_like(self.rho)
        for k in ops:
            big = np.kron(pre, np.kron(k, post))
            out += big @ self.rho @ big.conj().T
        return FullState(self.n, out)

    def reduce(self, keep) -> "FullState":
        """Partial trace down to the kept qubits (order preserved)."""
        keep = sorted(set(int(k) for k in keep))
        if not keep:
            raise ValueError("keep set must be non-empty")
        for k in keep:
            _validate_index(k, self.n)
        # reshape to (2,)*n x (2,)*n and trace out dropped row/col axis pairs
        t = self.rho.reshape((2,) * (2 * self.n))
        dropped = 0
        for i in range(self.n):
            if i in keep:
                continue
            row = i - dropped
            col = row + (self.n - dropped)
            t = np.trace(t, axis1=row, axis2=col)
            dropped += 1
        m = len(keep)
        return FullState(m, t.reshape(1 << m, 1 << m))

    def allclose(self, other: "FullState", tol: float = 1e-10) -> bool:
        return self.n == other.n and bool(np.allclose(self.rho, other.rho, atol=tol, rtol=0))
