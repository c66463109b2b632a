import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coinwalk.baker import BakerSpec, build_baker_applier
from coinwalk.hilbert import ANTIPERIODIC, PERIODIC
from coinwalk.observables import position_distribution
from coinwalk.walker import (
    COIN_3PI4,
    COIN_I,
    COIN_ZERO,
    NumericalGuardError,
    SystemState,
    dense_oracle_evolve,
    dense_step_matrix,
    evolve,
    init_state,
    momentum_state,
    product_coin,
    sector_step,
    shift_operator,
    uniform_product_coin,
)


def test_init_state_sectors():
    s = init_state(4, COIN_ZERO)
    np.testing.assert_allclose(s.sectors, np.tile([0.5, 0], (4, 1)))
    assert s.time == 0


qubit_states = st.sampled_from([COIN_ZERO, COIN_I, COIN_3PI4])


@settings(max_examples=40, deadline=None)
@given(M=st.integers(2, 64), qubits=st.lists(qubit_states, min_size=1, max_size=5))
def test_init_state_normalized(M, qubits):
    s = init_state(M, product_coin(qubits))
    assert abs(s.norm() - 1) < 1e-12


def test_initial_position_is_origin():
    p = position_distribution(init_state(9, product_coin([COIN_I] * 3)))
    expected = np.zeros(9)
    expected[0] = 1
    np.testing.assert_allclose(p, expected, atol=1e-15)


def test_init_state_rejects_bad_input():
    with pytest.raises(ValueError):
        init_state(4, np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        init_state(1, COIN_ZERO)
    with pytest.raises(ValueError):
        product_coin([[1.0, 0.5]])


def test_uniform_product_coin_power_of_two_is_product():
    np.testing.assert_allclose(uniform_product_coin(COIN_I, 8), product_coin([COIN_I] * 3))


def test_uniform_product_coin_even_dim():
    c = uniform_product_coin(COIN_I, 130)
    assert c.shape == (130,)
    assert abs(np.linalg.norm(c) - 1) < 1e-12
    np.testing.assert_allclose(np.abs(c), 130**-0.5)


def test_sector_step_k0_is_baker():
    baker = build_baker_applier(BakerSpec.qubit(3, 2, ANTIPERIODIC))
    v = product_coin([COIN_I] * 3)
    np.testing.assert_allclose(sector_step(v, 0, 7, baker), baker(v), atol=1e-15)


def test_sector_step_hand_example():
    baker = build_baker_applier(BakerSpec.qubit(1, 1))
    got = sector_step(np.array([0.5, 0]), 1, 4, baker)
    want = np.array([np.exp(-0.5j * np.pi), np.exp(0.5j * np.pi)]) / (2 * np.sqrt(2))
    np.testing.assert_allclose(got, want, atol=1e-15)


def test_sector_step_odd_dim():
    with pytest.raises(ValueError):
        sector_step(np.ones(3) / np.sqrt(3), 1, 4, lambda v: v)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), k=st.integers(0, 50), M=st.integers(2, 50))
def test_sector_step_preserves_norm(seed, k, M):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    v /= np.linalg.norm(v)
    w = sector_step(v, k, M, build_baker_applier(BakerSpec.qubit(4, 2, ANTIPERIODIC)))
    assert abs(np.linalg.norm(w) - 1) < 1e-12


def test_evolve_zero_steps():
    s = init_state(6, product_coin([COIN_I] * 2))
    out = evolve(s, 0, build_baker_applier(BakerSpec.qubit(2, 1)))
    np.testing.assert_array_equal(out.sectors, s.sectors)
    assert out.time == 0


def test_hadamard_single_step():
    s = evolve(init_state(64, COIN_ZERO), 1, build_baker_applier(BakerSpec.qubit(1, 1)))
    p = position_distribution(s)
    assert s.time == 1
    assert abs(p[1] - 0.5) < 1e-12 and abs(p[-1] - 0.5) < 1e-12
    assert abs(p.sum() - p[1] - p[-1]) < 1e-12


def test_evolve_matches_oracle_example():
    spec = BakerSpec.qubit(2, 1)
    coin = product_coin([COIN_I] * 2)
    s = evolve(init_state(4, coin), 5, build_baker_applier(spec))
    np.testing.assert_allclose(s.to_position_vector(), dense_oracle_evolve(4, coin, spec, 5), atol=1e-10)


ORACLE_SPECS = [BakerSpec.qubit(N, n, a) for N in (1, 2, 3) for n in range(1, N + 1) for a in (PERIODIC, ANTIPERIODIC)]


@pytest.mark.parametrize("spec", ORACLE_SPECS + [BakerSpec.even(6, ANTIPERIODIC)], ids=lambda s: f"{s.label}@{s.angles}")
@pytest.mark.parametrize("M", [2, 3, 4, 5, 8])
def test_sectors_match_dense_oracle(spec, M):
    coin = uniform_product_coin(COIN_3PI4, spec.dim)
    step = dense_step_matrix(M, spec)
    baker = build_baker_applier(spec)
    psi = np.zeros(M * spec.dim, dtype=complex)
    psi[: spec.dim] = coin
    state = init_state(M, coin)
    np.testing.assert_allclose(state.to_position_vector(), psi, atol=1e-12)
    for _ in range(16):
        psi = step @ psi
        state = evolve(state, 1, baker)
        assert np.abs(state.to_position_vector() - psi).max() < 1e-10


def test_dense_step_unitary():
    step = dense_step_matrix(4, BakerSpec.qubit(2, 1))
    assert np.abs(step.conj().T @ step - np.eye(16)).max() < 1e-10


def test_shift_eigenvalues():
    M = 5
    U = shift_operator(M)
    for k in range(M):
        ket = momentum_state(k, M)
        np.testing.assert_allclose(U @ ket, np.exp(-2j * np.pi * k / M) * ket, atol=1e-12)


def test_dense_oracle_guard():
    with pytest.raises(NumericalGuardError):
        dense_oracle_evolve(64, uniform_product_coin(COIN_I, 128), BakerSpec.qubit(7, 1), 1)


def test_norm_conserved_long_run():
    spec = BakerSpec.qubit(3, 1, ANTIPERIODIC)
    baker = build_baker_applier(spec)
    s = init_state(16, product_coin([COIN_I] * 3))
    for _ in range(10):
        s = evolve(s, 1000, baker)
        assert abs(np.sum(np.abs(s.sectors) ** 2) - 1) < 1e-10
    assert s.time == 10_000


@pytest.mark.parametrize("N,n", [(7, 1), (7, 4), (7, 7), (3, 2)])
def test_reversibility(N, n):
    spec = BakerSpec.qubit(N, n, ANTIPERIODIC)
    s0 = init_state(32, product_coin([COIN_I] * N))
    s = evolve(s0, 500, build_baker_applier(spec))
    back = evolve(s, 500, build_baker_applier(spec, inverse=True), inverse=True)
    assert back.time == 0
    assert np.abs(back.sectors - s0.sectors).max() < 1e-9


def test_sector_order_and_threads_bitwise_identical():
    spec = BakerSpec.qubit(5, 2, ANTIPERIODIC)
    baker = build_baker_applier(spec)
    s0 = init_state(37, product_coin([COIN_I] * 5))
    serial = evolve(s0, 40, baker)
    threaded = evolve(s0, 40, baker, threads=4)
    np.testing.assert_array_equal(serial.sectors, threaded.sectors)
    # each sector alone, visited in reverse order
    alone = np.empty_like(s0.sectors)
    for k in reversed(range(37)):
        v = s0.sectors[k]
        for _ in range(40):
            v = sector_step(v, k, 37, baker)
        alone[k] = v
    np.testing.assert_array_equal(alone, serial.sectors)


def test_system_state_shape_check():
    with pytest.raises(ValueError):
        SystemState(np.zeros(4))
