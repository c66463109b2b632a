import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coinwalk.observables import ReducedDensity
from coinwalk.wigner import (
    GRID_TOTAL,
    WignerGrid,
    classical_phase_grid,
    classical_walk_distribution,
    distance,
    phase_point_operator,
    wigner_from_density,
)


def random_density(rng, M, rank=None):
    rank = rank or M
    a = rng.normal(size=(M, rank)) + 1j * rng.normal(size=(M, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def brute_force_grid(rho):
    M = rho.shape[0]
    return np.array(
        [[np.trace(rho @ phase_point_operator(q, p, M)) / M for p in range(2 * M)] for q in range(2 * M)]
    )


def test_origin_operator_is_reflection():
    R = np.zeros((5, 5))
    R[(-np.arange(5)) % 5, np.arange(5)] = 1
    np.testing.assert_allclose(phase_point_operator(0, 0, 5), R, atol=1e-15)


def test_operator_hermitian_and_unitary():
    A = phase_point_operator(3, 5, 4)
    assert np.abs(A - A.conj().T).max() < 1e-12
    assert np.abs(A @ A.conj().T - np.eye(4)).max() < 1e-12


@pytest.mark.parametrize("M", [2, 3, 4, 5, 6])
def test_operator_trace_orthogonality(M):
    ops = {(q, p): phase_point_operator(q, p, M) for q in range(2 * M) for p in range(2 * M)}
    for (q1, p1), a in ops.items():
        for (q2, p2), b in ops.items():
            tr = np.trace(a @ b)
            dq, dp = (q2 - q1) % (2 * M), (p2 - p1) % (2 * M)
            if dq in (0, M) and dp in (0, M):
                assert abs(abs(tr) - M) < 1e-9
            else:
                assert abs(tr) < 1e-9
    # the first quadrant is a complete orthogonal basis
    basis = np.array([ops[(q, p)].reshape(-1) for q in range(M) for p in range(M)])
    gram = basis.conj() @ basis.T
    np.testing.assert_allclose(gram, M * np.eye(M * M), atol=1e-9)


@pytest.mark.parametrize("M", [2, 3, 4])
def test_grid_total(M):
    rho = random_density(np.random.default_rng(M), M)
    assert abs(wigner_from_density(rho).values.sum() - GRID_TOTAL) < 1e-12


def test_maximally_mixed_grid():
    # W = Tr A(q, p) / M^2 and each trace is a unit phase for odd M
    g = wigner_from_density(np.eye(3) / 3)
    np.testing.assert_allclose(np.abs(g.values), 1 / 9, atol=1e-14)
    np.testing.assert_allclose(g.values[::2], 1 / 9, atol=1e-14)
    np.testing.assert_allclose(g.position_marginal(), 1 / 3, atol=1e-14)


def test_localized_state_marginal():
    rho = np.zeros((2, 2))
    rho[0, 0] = 1
    g = wigner_from_density(rho)
    np.testing.assert_allclose(g.position_marginal(), [1, 0], atol=1e-14)
    np.testing.assert_allclose(g.values.sum(axis=1)[1::2], 0, atol=1e-14)


@pytest.mark.parametrize("M", [2, 3, 5, 6])
def test_fft_matches_operator_traces(M):
    rho = random_density(np.random.default_rng(10 + M), M)
    brute = brute_force_grid(rho)
    assert np.abs(brute.imag).max() < 1e-12
    np.testing.assert_allclose(wigner_from_density(rho).values, brute.real, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(M=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_marginals_recover_probabilities(M, seed):
    rho = random_density(np.random.default_rng(seed), M)
    g = wigner_from_density(rho)
    np.testing.assert_allclose(g.position_marginal(), np.diag(rho).real, atol=1e-10)
    n = np.arange(M)
    Fv = np.exp(2j * np.pi * np.outer(n, n) / M) / np.sqrt(M)  # columns |m>_V
    momentum = np.einsum("nm,nk,km->m", Fv.conj(), rho, Fv).real
    np.testing.assert_allclose(g.momentum_marginal(), momentum, atol=1e-10)
    np.testing.assert_allclose(g.values.sum(axis=1)[1::2], 0, atol=1e-10)
    np.testing.assert_allclose(g.values.sum(axis=0)[1::2], 0, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(M=st.integers(2, 16), seed=st.integers(0, 2**32 - 1))
def test_wigner_is_real(M, seed):
    rho = random_density(np.random.default_rng(seed), M)
    n = np.arange(M)
    q = np.arange(2 * M)
    anti = rho[n[None, :], (q[:, None] - n[None, :]) % M]
    traces = np.fft.fft(anti, axis=1)[:, q % M] * np.exp(1j * np.pi * np.outer(q, q) / M) / M
    assert np.abs(traces.imag).max() < 1e-10


def test_accepts_momentum_density_and_rejects_non_hermitian():
    rng = np.random.default_rng(3)
    rho = random_density(rng, 4)
    F = np.fft.fft(np.eye(4), axis=0, norm="ortho")
    mom = ReducedDensity(F.conj().T @ rho @ F, "momentum")
    np.testing.assert_allclose(wigner_from_density(mom).values, wigner_from_density(rho).values, atol=1e-12)
    bad = rho.copy()
    bad[0, 1] += 0.1
    with pytest.raises(ValueError):
        wigner_from_density(bad)


def test_classical_distribution_examples():
    np.testing.assert_array_equal(classical_walk_distribution(6, 0).probs, [1, 0, 0, 0, 0, 0])
    d = classical_walk_distribution(8, 2)
    expected = np.zeros(8)
    expected[[0, 2, -2]] = [0.5, 0.25, 0.25]
    np.testing.assert_allclose(d.probs, expected)


@pytest.mark.parametrize("t", [1, 7, 30])
def test_classical_distribution_variance(t):
    M = 2 * t + 2
    d = classical_walk_distribution(M, t)
    x = np.where(np.arange(M) < M // 2, np.arange(M), np.arange(M) - M)
    assert abs(d.probs.sum() - 1) < 1e-12
    assert abs(np.dot(d.probs, x**2) - np.dot(d.probs, x) ** 2 - t) < 1e-9


def test_classical_grid_total_and_marginal():
    d = classical_walk_distribution(10, 4)
    g = classical_phase_grid(d)
    assert abs(g.values.sum() - GRID_TOTAL) < 1e-12
    np.testing.assert_allclose(g.position_marginal(), d.probs, atol=1e-14)


def test_distance_properties():
    rng = np.random.default_rng(0)
    a = wigner_from_density(random_density(rng, 4))
    b = wigner_from_density(random_density(rng, 4))
    assert distance(a, a) == 0
    assert distance(a, b) == distance(b, a) > 0
    with pytest.raises(ValueError):
        distance(a, wigner_from_density(np.eye(3) / 3))


def test_grid_text_round_trip(tmp_path):
    g = wigner_from_density(random_density(np.random.default_rng(1), 3), time=5, label="B3_1_i")
    back = WignerGrid.from_text(g.write(tmp_path / "g.txt").read_text())
    assert (back.ring_size, back.time, back.label) == (3, 5, "B3_1_i")
    np.testing.assert_allclose(back.values, g.values, rtol=1e-14, atol=1e-16)


def test_grid_shape_checked():
    with pytest.raises(ValueError):
        WignerGrid(np.zeros((4, 4)), 3)
    with pytest.raises(ValueError):
        phase_point_operator(6, 0, 3)
