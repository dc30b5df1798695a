import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from corrphoton.constants import HBAR
from corrphoton.fock import (
    FockVector,
    LadderKind,
    LadderN,
    ModeGroup,
    TruncationError,
    apply_annihilate_n,
    apply_create_n,
    commutator_defect,
    dense_matrix,
    interior_block,
    number_and_energy,
)


def rule_matrix(N, trunc, create):
    """Brute-force oracle: apply the ladder rule to each basis column by hand."""
    M = np.zeros((trunc + 1, trunc + 1))
    for n in range(trunc + 1):
        if create:
            if n + N <= trunc:
                M[n + N, n] = np.sqrt(n + N)
        elif n >= N:
            M[n - N, n] = np.sqrt(n)
    return M


def ops(N):
    g = ModeGroup(N)
    return LadderN(g, LadderKind.ANNIHILATE), LadderN(g, LadderKind.CREATE)


def basis(N, n, trunc, phys=False):
    return FockVector.basis(ModeGroup(N), n, trunc, physical_sector_only=phys)


def test_annihilate_vacuum_is_zero():
    out = apply_annihilate_n(basis(2, 0, 6, phys=True))
    assert out.is_zero
    assert out.norm_squared == 0.0


def test_b2_on_two_photons():
    out = apply_annihilate_n(basis(2, 2, 6, phys=True))
    assert out.amplitudes[0] == pytest.approx(np.sqrt(2), abs=1e-15)
    assert np.count_nonzero(out.amplitudes) == 1


def test_b3_on_superposition():
    g = ModeGroup(3)
    psi = FockVector.superposition(g, {3: 1, 6: 1}, 9)
    out = apply_annihilate_n(psi).amplitudes
    expected = rule_matrix(3, 9, create=False) @ psi.amplitudes
    np.testing.assert_allclose(out, expected, atol=1e-15)
    np.testing.assert_allclose(out[[0, 3]], np.array([np.sqrt(3), np.sqrt(6)]) / np.sqrt(2), atol=1e-15)


def test_create_examples():
    out = apply_create_n(basis(2, 0, 4, phys=True))
    assert out.amplitudes[2] == pytest.approx(np.sqrt(2))
    out = apply_create_n(basis(4, 4, 8, phys=True))
    assert out.amplitudes[8] == pytest.approx(np.sqrt(8))
    for n in range(6):
        out = apply_create_n(basis(1, n, 6))
        assert out.amplitudes[n + 1] == pytest.approx(np.sqrt(n + 1))


def test_create_overflow_names_occupation():
    with pytest.raises(TruncationError, match="occupation 4") as info:
        apply_create_n(basis(2, 4, 5))
    assert info.value.occupation == 4


def test_physical_sector_rejects_off_multiples():
    with pytest.raises(ValueError, match="physical sector"):
        FockVector(ModeGroup(3), [0, 1, 0, 0])
    FockVector(ModeGroup(3), [0, 1, 0, 0], physical_sector_only=False)


def test_fockvector_is_immutable():
    psi = basis(1, 1, 3)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0
    with pytest.raises(AttributeError):
        psi.truncation = 7


def test_dense_matrix_examples():
    a, _ = ops(1)
    np.testing.assert_array_equal(dense_matrix(a, 2), [[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
    b2, b2d = ops(2)
    M = dense_matrix(b2, 4)
    nz = {(int(i), int(j)): M[i, j] for i, j in zip(*np.nonzero(M))}
    assert set(nz) == {(0, 2), (1, 3), (2, 4)}
    assert nz[(0, 2)] == pytest.approx(np.sqrt(2))
    assert nz[(1, 3)] == pytest.approx(np.sqrt(3))
    assert nz[(2, 4)] == pytest.approx(2.0)
    np.testing.assert_array_equal(dense_matrix(b2d, 4), M.conj().T)


def test_dense_matrix_rejects_small_truncation():
    with pytest.raises(ValueError):
        dense_matrix(ops(3)[0], 2)


@pytest.mark.parametrize("N,trunc", [(1, 8), (2, 16), (5, 40)])
def test_commutator_interior_zero(N, trunc):
    # oracle: products of the hand-built rule matrices
    b, bd = rule_matrix(N, trunc, False), rule_matrix(N, trunc, True)
    oracle = b @ bd - bd @ b - N * np.eye(trunc + 1)
    defect = commutator_defect(N, trunc)
    np.testing.assert_allclose(defect, oracle, atol=1e-12)
    assert np.max(np.abs(interior_block(defect, N))) <= 1e-12


def test_commutator_general_basis_defect_below_n():
    # b_N kills 0 < n < N, so [b, b^dag] = n + N there
    N, trunc = 3, 12
    defect = commutator_defect(N, trunc)
    for n in range(1, N):
        assert defect[n, n] == pytest.approx(n)
    rows = [n for n in range(trunc - N + 1) if n >= N or n == 0]
    assert np.max(np.abs(defect[np.ix_(rows, rows)])) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(N=st.integers(1, 8), extra=st.integers(0, 56))
def test_adjoint_pair_exact(N, extra):
    trunc = min(N + extra, 64)
    b, bd = ops(N)
    np.testing.assert_array_equal(dense_matrix(bd, trunc), dense_matrix(b, trunc).conj().T)


@settings(max_examples=60, deadline=None)
@given(N=st.integers(1, 6), n=st.integers(0, 40))
def test_dense_matches_apply(N, n):
    trunc = 50
    b, bd = ops(N)
    ket = basis(N, n, trunc)
    np.testing.assert_allclose(apply_annihilate_n(ket).amplitudes, dense_matrix(b, trunc)[:, n], atol=0)
    if n + N <= trunc:
        np.testing.assert_allclose(apply_create_n(ket).amplitudes, dense_matrix(bd, trunc)[:, n], atol=0)


@settings(max_examples=60, deadline=None)
@given(N=st.integers(1, 6), k=st.integers(1, 6))
def test_norm_law(N, k):
    for n in (N * k, N * k + N - 1):
        ket = basis(N, n, n + N)
        up = apply_create_n(ket).norm_squared
        down = apply_annihilate_n(ket).norm_squared
        assert up - down == pytest.approx(N, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(N=st.integers(1, 5), weights=st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=5))
def test_sector_preservation(N, weights):
    g = ModeGroup(N)
    trunc = N * (len(weights) + 1)
    w = {N * i: c for i, c in enumerate(weights)}
    assume(np.linalg.norm(list(w.values())) > 1e-100)
    psi = FockVector.superposition(g, w, trunc)
    for out in (apply_annihilate_n(psi), apply_create_n(psi)):
        off = np.arange(trunc + 1) % N != 0
        assert np.all(out.amplitudes[off] == 0)
        assert out.physical_sector_only


def test_superposition_norm_bound():
    psi = FockVector.superposition(ModeGroup(2), {0: 3, 2: 4j, 4: 1}, 8)
    assert 0 <= psi.norm_squared <= 1 + 1e-12


@pytest.mark.parametrize("N", [1, 2, 3, 7])
def test_energy_of_n_quanta(N):
    omega = 2.5e15
    g = ModeGroup(N, omega)
    n_bar, e = number_and_energy(FockVector.basis(g, N, 3 * N))
    assert n_bar == pytest.approx(N)
    # both orderings by hand: b^dag b |N> = N, b b^dag |N> = 2N
    assert e == pytest.approx(0.5 * HBAR * omega * (N + 2 * N), rel=1e-14)


def test_vacuum_energies():
    omega = 1.0e15
    _, e2 = number_and_energy(FockVector.basis(ModeGroup(2, omega), 0, 4))
    assert e2 == pytest.approx(HBAR * omega, rel=1e-14)
    _, e1 = number_and_energy(FockVector.basis(ModeGroup(1, omega), 0, 4))
    assert e1 == pytest.approx(HBAR * omega / 2, rel=1e-14)


def test_energy_requires_normalized_state():
    with pytest.raises(ValueError, match="normalized"):
        number_and_energy(FockVector(ModeGroup(1), [0.5, 0.5]))


@pytest.mark.parametrize("n", range(6))
def test_n1_reduces_to_textbook_oscillator(n):
    omega = 3.0
    ket = FockVector.basis(ModeGroup(1, omega), n, n + 2)
    n_bar, e = number_and_energy(ket)
    assert n_bar == n
    assert e == pytest.approx(HBAR * omega * (n + 0.5))
    assert apply_annihilate_n(ket).norm_squared == pytest.approx(n)


def test_mode_group_invariants():
    with pytest.raises(ValueError):
        ModeGroup(0)
    with pytest.raises(ValueError):
        ModeGroup(2, omega=0.0)
