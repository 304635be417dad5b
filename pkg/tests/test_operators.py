"""Fermionic algebra, Pauli algebra, and the mode->qubit mapping."""

import numpy as np
import pytest

from conftest import naive_dense, naive_term_matrix
from respsim import (
    FermionOperator,
    InputError,
    PauliOperator,
    ResourceError,
    build_dipole,
    build_hamiltonian,
    eta_dipole_norm,
    jordan_wigner,
    lcu_one_norm,
    number_operator,
    validate_two_body_symmetry,
)


def random_fermion_op(rng, n_modes, n_terms=5, max_len=4):
    terms = {}
    for _ in range(n_terms):
        length = int(rng.integers(0, max_len + 1))
        actions = tuple(
            (int(rng.integers(0, n_modes)), int(rng.integers(0, 2)))
            for _ in range(length))
        terms[actions] = complex(rng.normal(), rng.normal())
    return FermionOperator(n_modes, terms)


# ---------------------------------------------------------------------------
# FermionOperator basics
# ---------------------------------------------------------------------------

def test_fermion_dense_matches_naive_builder():
    rng = np.random.default_rng(3)
    for _ in range(8):
        n = int(rng.integers(1, 5))
        op = random_fermion_op(rng, n)
        assert np.allclose(op.dense().matrix, naive_dense(n, op.terms),
                           atol=1e-12)


def test_anticommutation_relations():
    n = 3
    for p in range(n):
        for q in range(n):
            a_p = naive_term_matrix(n, [(p, 0)])
            adag_q = naive_term_matrix(n, [(q, 1)])
            anti = a_p @ adag_q + adag_q @ a_p
            expected = np.eye(2 ** n) if p == q else np.zeros((2 ** n,) * 2)
            assert np.allclose(anti, expected)
            # and the package dense agrees with the naive one
            op = FermionOperator(n, {((p, 0), (q, 1)): 1.0,
                                     ((q, 1), (p, 0)): 1.0})
            assert np.allclose(op.dense().matrix, expected)


def test_normal_ordering_preserves_the_operator():
    rng = np.random.default_rng(7)
    for _ in range(6):
        n = int(rng.integers(1, 5))
        op = random_fermion_op(rng, n)
        no = op.normal_ordered()
        assert np.allclose(op.dense().matrix, no.dense().matrix, atol=1e-10)
        # normal order is idempotent up to pruning
        again = no.normal_ordered()
        assert np.allclose(no.dense().matrix, again.dense().matrix,
                           atol=1e-10)


def test_adjoint_is_conjugate_transpose():
    rng = np.random.default_rng(11)
    op = random_fermion_op(rng, 4)
    assert np.allclose(op.adjoint().dense().matrix,
                       op.dense().matrix.conj().T, atol=1e-12)


def test_is_hermitian():
    op = FermionOperator(2, {((0, 1), (1, 0)): 1.0, ((1, 1), (0, 0)): 1.0})
    assert op.is_hermitian()
    assert not FermionOperator(2, {((0, 1),): 1.0}).is_hermitian()


def test_operator_validation_errors():
    with pytest.raises(InputError):
        FermionOperator(-1)
    with pytest.raises(InputError):
        FermionOperator(2, {((5, 1),): 1.0})      # mode out of range
    with pytest.raises(ResourceError):
        FermionOperator(3, {((0, 1),): 1.0}).dense(mode_cap=2)


def test_prune_drops_tiny_terms():
    op = FermionOperator(2, {((0, 1), (0, 0)): 1e-16, ((1, 1), (1, 0)): 1.0})
    assert len(op) == 1


def test_scaled_and_add():
    a = FermionOperator(2, {((0, 1), (0, 0)): 2.0})
    b = FermionOperator(2, {((0, 1), (0, 0)): -2.0, ((1, 1), (1, 0)): 1.0})
    combined = a + b
    assert np.allclose(combined.dense().matrix,
                       naive_dense(2, {((1, 1), (1, 0)): 1.0}))
    assert np.allclose(a.scaled(0.5).dense().matrix,
                       naive_dense(2, {((0, 1), (0, 0)): 1.0}))


def test_number_operator_counts_occupation():
    n = 3
    mat = number_operator(n).dense().matrix
    pops = [bin(b).count("1") for b in range(2 ** n)]
    assert np.allclose(mat, np.diag(pops))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def test_build_hamiltonian_matches_naive(dimer):
    H = build_hamiltonian(dimer.T, dimer.V).dense().matrix
    n = dimer.n_orbitals
    naive = np.zeros_like(H)
    for p in range(n):
        for q in range(n):
            if dimer.T[p, q]:
                naive = naive + dimer.T[p, q] * naive_term_matrix(
                    n, [(p, 1), (q, 0)])
    for idx in zip(*np.nonzero(np.abs(dimer.V) > 0)):
        p, q, r, s = (int(i) for i in idx)
        naive = naive + dimer.V[idx] * naive_term_matrix(
            n, [(p, 1), (q, 1), (r, 0), (s, 0)])
    assert np.allclose(H, naive, atol=1e-12)


def test_build_hamiltonian_rejects_asymmetric_inputs():
    T = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(InputError):
        build_hamiltonian(T, np.zeros((2, 2, 2, 2)))
    V = np.zeros((2, 2, 2, 2))
    V[0, 1, 0, 1] = 1.0   # breaks the index symmetry
    with pytest.raises(InputError):
        validate_two_body_symmetry(V)


def test_build_dipole_is_hermitian_one_body(dimer):
    op = build_dipole(dimer.dipole[0])
    assert op.is_hermitian()
    D = op.dense().matrix
    assert np.allclose(D, D.conj().T)


# ---------------------------------------------------------------------------
# Pauli layer
# ---------------------------------------------------------------------------

def test_pauli_matmul_phases():
    x = PauliOperator(1, {"X": 1.0})
    y = PauliOperator(1, {"Y": 1.0})
    z = PauliOperator(1, {"Z": 1.0})
    assert x.matmul(y).terms == {"Z": 1j}
    assert y.matmul(x).terms == {"Z": -1j}
    assert z.matmul(z).terms == {"I": (1 + 0j)}


def test_pauli_dense_known_string():
    op = PauliOperator(2, {"XZ": 2.0})
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.diag([1.0, -1.0]).astype(complex)
    assert np.allclose(op.dense().matrix, 2.0 * np.kron(X, Z))


def test_pauli_validation():
    with pytest.raises(InputError):
        PauliOperator(2, {"XQ": 1.0})
    with pytest.raises(InputError):
        PauliOperator(2, {"X": 1.0})              # wrong length
    with pytest.raises(InputError):
        PauliOperator(1, {"X": 1.0}) + PauliOperator(2, {"XX": 1.0})


def test_jordan_wigner_single_ladder():
    # a_0^dag on one mode: (X - iY)/2 = |1><0|
    jw = jordan_wigner(FermionOperator(1, {((0, 1),): 1.0}))
    expect = np.array([[0, 0], [1, 0]], dtype=complex)
    assert np.allclose(jw.dense().matrix, expect)


def test_jordan_wigner_matches_fermion_dense():
    rng = np.random.default_rng(19)
    for _ in range(10):
        n = int(rng.integers(1, 6))
        op = random_fermion_op(rng, n)
        assert np.allclose(jordan_wigner(op).dense().matrix,
                           op.dense().matrix, atol=1e-12)


def test_jordan_wigner_qubit_cap():
    op = FermionOperator(4, {((0, 1), (1, 0)): 1.0})
    with pytest.raises(ResourceError):
        jordan_wigner(op, qubit_cap=3)


# ---------------------------------------------------------------------------
# encoding norms
# ---------------------------------------------------------------------------

def test_dimer_one_norms(dimer):
    alpha = lcu_one_norm(jordan_wigner(build_hamiltonian(dimer.T, dimer.V)))
    beta = lcu_one_norm(jordan_wigner(build_dipole(dimer.dipole[0])))
    assert alpha == pytest.approx(6.0, abs=1e-12)
    assert beta == pytest.approx(1.0, abs=1e-12)


def test_eta_dipole_norm_oracle_value():
    rng = np.random.default_rng(11)
    A = rng.normal(size=(4, 4))
    A = (A + A.T) / 2
    assert eta_dipole_norm(A, 2) == pytest.approx(3.403979933009, abs=1e-10)


def test_eta_dipole_norm_validation():
    with pytest.raises(InputError):
        eta_dipole_norm(np.zeros((2, 3)), 1)
    with pytest.raises(InputError):
        eta_dipole_norm(np.eye(2), 3)
