import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hbacsim import (
    Circuit,
    DiagState,
    FullState,
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
from hbacsim.compression import cyclic_shift_permutation

# The 3-qubit compression matrix and its sign-variant, written out literally.
COMPRESSION3 = np.array(
    [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ],
    dtype=complex,
)
COMPRESSION3_APPROX = COMPRESSION3.copy()
COMPRESSION3_APPROX[5, 6] = -1


def random_diag(rng, n):
    return DiagState(n, rng.dirichlet(np.ones(1 << n)))


# -------------------------------------------------------------------- gates

def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(GateKind.NOT, (0,), 1)          # NOT takes no controls
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (1,), 1)         # control == target
    with pytest.raises(ValueError):
        Gate(GateKind.TOFFOLI, (0,), 2)      # needs two controls


def test_gate_text_round_trip():
    for g in two_sort_circuit3().gates:
        assert Gate.from_text(g.to_text()) == g
    assert Gate.from_text("TOFFOLI c=1,2 t=0") == Gate(GateKind.TOFFOLI, (1, 2), 0)


def test_circuit_text_round_trip():
    c = two_sort_circuit3()
    text = c.to_text()
    again = Circuit.from_text(text + "# trailing comment\n", 3)
    assert again == c


def test_circuit_width_check():
    with pytest.raises(ValueError):
        Circuit((Gate(GateKind.NOT, (), 3),), 3)


def test_not_permutation_single_qubit():
    u = gate_permutation(Gate(GateKind.NOT, (), 0), 1)
    assert u.perm.tolist() == [1, 0]


def test_cnot_permutation_two_qubits():
    # control on the most significant bit flips the target when it is 1
    u = gate_permutation(Gate(GateKind.CNOT, (0,), 1), 2)
    assert u.perm.tolist() == [0, 1, 3, 2]


def test_toffoli_permutation_truth_table():
    u = gate_permutation(Gate(GateKind.TOFFOLI, (1, 2), 0), 3)
    # enumeration: flip bit 0 iff bits 1 and 2 are both set
    expect = []
    for b in range(8):
        b1 = (b >> 1) & 1
        b2 = b & 1
        expect.append(b ^ (4 if (b1 and b2) else 0))
    assert u.perm.tolist() == expect
    assert u.perm.tolist() == [0, 1, 2, 7, 4, 5, 6, 3]


# ------------------------------------------------------- two-sort unitaries

def test_two_sort_n2():
    u = two_sort_unitary(2)
    assert u.perm.tolist() == [0, 2, 1, 3]


def test_two_sort_n3_matches_reference_matrix():
    u = two_sort_unitary(3)
    assert np.array_equal(u.to_matrix(), COMPRESSION3)


def test_two_sort_n4_swaps_and_self_inverse():
    u = two_sort_unitary(4)
    expect = list(range(16))
    for k in range(1, 14, 2):
        expect[k], expect[k + 1] = expect[k + 1], expect[k]
    assert u.perm.tolist() == expect
    m = u.to_matrix()
    assert np.allclose(m @ m.conj().T, np.eye(16))
    assert np.allclose(m @ m, np.eye(16))


@pytest.mark.parametrize("n", range(2, 9))
def test_two_sort_involution_and_fixed_points(n):
    u = two_sort_unitary(n)
    assert u.is_involution()
    assert u.fixed_points().tolist() == [0, (1 << n) - 1]


def test_two_sort_needs_two_qubits():
    with pytest.raises(ValueError):
        two_sort_unitary(1)


def test_approx_variant_same_permutation():
    assert two_sort_unitary3_approx().same_permutation(two_sort_unitary(3))


def test_approx_variant_matrix_and_unitarity():
    m = two_sort_unitary3_approx().to_matrix()
    assert np.array_equal(m, COMPRESSION3_APPROX)
    assert np.allclose(m @ m.conj().T, np.eye(8))


def test_approx_variant_identical_on_diagonal_states():
    # the flipped sign cannot show up in any diagonal conjugation
    rng = np.random.default_rng(42)
    exact = two_sort_unitary(3).to_matrix()
    approx = two_sort_unitary3_approx().to_matrix()
    for _ in range(100):
        s = FullState.from_diag(random_diag(rng, 3))
        a = s.conjugate(exact)
        b = s.conjugate(approx)
        assert np.abs(a.rho - b.rho).max() < 1e-12


def test_approx_variant_dense_matches_fast_engine_thousand_states():
    rng = np.random.default_rng(123)
    u = two_sort_unitary3_approx()
    matrix = u.to_matrix()
    for _ in range(1000):
        s = random_diag(rng, 3)
        fast = apply_permutation(s, u)
        dense = FullState.from_diag(s).conjugate(matrix)
        assert np.abs(dense.rho.diagonal().real - fast.pops).max() < 1e-12


# ------------------------------------------------------ the 8-gate circuit

def test_circuit3_kind_sequence():
    kinds = [g.kind for g in two_sort_circuit3().gates]
    assert kinds == [
        GateKind.NOT, GateKind.CNOT, GateKind.TOFFOLI, GateKind.TOFFOLI,
        GateKind.NOT, GateKind.TOFFOLI, GateKind.CNOT, GateKind.NOT,
    ]


def test_circuit3_equals_two_sort_permutation():
    assert two_sort_circuit3().permutation().same_permutation(two_sort_unitary(3))


def test_circuit3_head_is_cyclic_shift():
    head = two_sort_circuit3(truncate_at=3).permutation()
    assert head.same_permutation(cyclic_shift_permutation(3, -1))


def test_circuit3_fixes_all_zeros():
    pure = DiagState.product([1.0, 1.0, 1.0])
    out, _ = apply_circuit_traced(pure, two_sort_circuit3())
    assert out.allclose(pure, tol=1e-15)


def test_circuit3_wiring_search_unique():
    found = find_circuit3_wirings()
    assert found == [two_sort_circuit3()]


def test_truncated_circuit_preserves_target_column():
    # stopping after gate 7 keeps the target outcome but not the full map
    s = DiagState.product([0.25, 0.25, 1.0])
    full, _ = apply_circuit_traced(s, two_sort_circuit3())
    cut, _ = apply_circuit_traced(s, two_sort_circuit3(truncate_at=7))
    assert cut.polarization(0) == pytest.approx(full.polarization(0), abs=1e-15)
    assert not cut.allclose(full)


def test_truncate_bounds():
    with pytest.raises(ValueError):
        two_sort_circuit3(truncate_at=9)


# ---------------------------------------------------------------- apply

def test_apply_identity():
    s = DiagState.product([0.3, -0.2])
    out = apply_permutation(s, PermutationUnitary.identity(2))
    assert out.allclose(s, tol=1e-16)


def test_apply_reference_compression_gain():
    # dense-oracle value: conjugating the thermal product state by the
    # 8x8 compression matrix lifts the target bias to 0.71875
    s = DiagState.product([0.25, 0.25, 1.0])
    dense = FullState.from_diag(s).conjugate(COMPRESSION3)
    assert dense.polarization(0) == pytest.approx(0.71875, abs=1e-15)
    fast = apply_permutation(s, two_sort_unitary(3))
    assert fast.polarization(0) == pytest.approx(0.71875, abs=1e-15)
    assert np.allclose(dense.rho.diagonal().real, fast.pops, atol=1e-15)


def test_apply_twice_restores_state():
    rng = np.random.default_rng(5)
    s = random_diag(rng, 3)
    u = two_sort_unitary(3)
    assert apply_permutation(apply_permutation(s, u), u).allclose(s, tol=1e-15)


def test_apply_width_mismatch():
    with pytest.raises(ValueError):
        apply_permutation(DiagState.uniform(2), two_sort_unitary(3))


@given(st.integers(0, 2 ** 31 - 1))
@settings(max_examples=50, deadline=None)
def test_apply_preserves_population_multiset(seed):
    rng = np.random.default_rng(seed)
    s = random_diag(rng, 3)
    out = apply_permutation(s, two_sort_unitary(3))
    assert np.allclose(np.sort(out.pops), np.sort(s.pops), atol=0)


def test_traced_empty_circuit():
    s = DiagState.uniform(2)
    out, rows = apply_circuit_traced(s, Circuit((), 2))
    assert rows.shape == (0, 2)
    assert out.allclose(s)


def test_traced_row_count():
    s = DiagState.product([0.25, 0.25, 1.0])
    _, rows = apply_circuit_traced(s, two_sort_circuit3())
    assert rows.shape == (8, 3)


def test_traced_matches_composed_permutation():
    s = DiagState.product([0.1014, 0.2515, 1.0])
    stepped, rows = apply_circuit_traced(s, two_sort_circuit3())
    direct = apply_permutation(s, two_sort_unitary(3))
    assert stepped.allclose(direct, tol=1e-15)
    assert np.allclose(rows[-1], direct.polarizations(), atol=1e-15)


# ------------------------------------------------------------------ ppa sort

def test_ppa_sort_sorted_input_identity():
    s = DiagState(2, np.array([0.4, 0.3, 0.2, 0.1]))
    out, u = ppa_sort(s)
    assert u.perm.tolist() == [0, 1, 2, 3]
    assert out.allclose(s)


def test_ppa_sort_uniform_identity():
    _, u = ppa_sort(DiagState.uniform(3))
    assert u.perm.tolist() == list(range(8))


def test_ppa_sort_output_descending_and_consistent():
    rng = np.random.default_rng(9)
    s = random_diag(rng, 3)
    out, u = ppa_sort(s)
    assert np.all(np.diff(out.pops) <= 0)
    assert apply_permutation(s, u).allclose(out, tol=0)
    assert np.allclose(np.sort(out.pops), np.sort(s.pops), atol=0)


def test_ppa_sort_maximizes_target_bias_brute_force():
    # descending order must beat every one of the 8! basis permutations
    rng = np.random.default_rng(21)
    s = random_diag(rng, 3)
    sorted_state, _ = ppa_sort(s)
    best = sorted_state.polarization(0)
    pops = s.pops
    top = -1.0
    for perm in itertools.permutations(range(8)):
        v = sum(pops[b] for b in perm[:4]) - sum(pops[b] for b in perm[4:])
        top = max(top, v)
    assert best == pytest.approx(top, abs=1e-12)


@given(st.integers(0, 2 ** 31 - 1))
@settings(max_examples=50, deadline=None)
def test_ppa_sort_never_decreases_target_bias(seed):
    rng = np.random.default_rng(seed)
    s = random_diag(rng, int(rng.integers(2, 5)))
    out, _ = ppa_sort(s)
    assert out.polarization(0) >= s.polarization(0) - 1e-15
