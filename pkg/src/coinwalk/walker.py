"""Walker on a ring coupled to a complex coin, evolved sector by sector.

In the momentum basis of the walker the one-step operator is block
diagonal, so each momentum ``k`` carries its own coin vector evolving
under ``M_k = diag(exp(-i phi_k), exp(+i phi_k)) B`` with
``phi_k = 2 pi k / M``. The first phase multiplies coin indices below
``D/2`` (most significant qubit in ``|0>``).

Conventions: the momentum states are
``|k> = M^{-1/2} sum_j exp(-2 pi i j k / M) |j>`` and the translation that
the MSQ=0 branch applies satisfies ``U|k> = exp(-2 pi i k / M)|k>``. With
this choice ``U|j> = |j - 1>``, so MSQ=0 steps toward decreasing ``x``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .baker import BakerSpec, baker_matrix

Applier = Callable[[np.ndarray], np.ndarray]

DENSE_ORACLE_LIMIT = 4096


class NumericalGuardError(RuntimeError):
    """A size or validity guard on a numerical computation was violated."""


_SQ = 1 / np.sqrt(2)
COIN_ZERO = np.array([1.0, 0.0], dtype=np.complex128)
COIN_I = np.array([_SQ, 1j * _SQ])
COIN_3PI4 = np.array([_SQ, _SQ * np.exp(3j * np.pi / 4)])

NAMED_COINS = {"zero": COIN_ZERO, "i": COIN_I, "3pi4": COIN_3PI4}


@dataclass
class SystemState:
    """Pure walker-coin state stored as one coin vector per momentum sector.

    ``sectors[k]`` already includes the ``1/sqrt(M)`` weight, so the squared
    norms of all rows sum to one.
    """

    sectors: np.ndarray
    time: int = 0

    def __post_init__(self):
        self.sectors = np.asarray(self.sectors, dtype=np.complex128)
        if self.sectors.ndim != 2 or self.sectors.shape[0] < 1:
            raise ValueError("sectors must be an (M, D) array")

    @property
    def ring_size(self) -> int:
        return self.sectors.shape[0]

    @property
    def coin_dim(self) -> int:
        return self.sectors.shape[1]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.sectors) ** 2)))

    def position_amplitudes(self) -> np.ndarray:
        """``(M, D)`` amplitudes in the position (x) coin basis."""
        return np.fft.fft(self.sectors, axis=0, norm="ortho")

    def to_position_vector(self) -> np.ndarray:
        """Flattened state with index ``x * D + j``."""
        return self.position_amplitudes().reshape(-1)


def _check_qubit(state) -> np.ndarray:
    c = np.asarray(state, dtype=np.complex128).reshape(2)
    if abs(np.vdot(c, c).real - 1.0) > 1e-12:
        raise ValueError(f"single-qubit state {state} is not normalized")
    return c


def product_coin(qubits: Sequence) -> np.ndarray:
    """Tensor product of single-qubit states, first entry is the MSQ."""
    if len(qubits) == 0:
        raise ValueError("need at least one qubit")
    out = np.ones(1, dtype=np.complex128)
    for q in qubits:
        out = np.kron(out, _check_qubit(q))
    return out


def uniform_product_coin(qubit, dim: int) -> np.ndarray:
    """The same single-qubit state on every qubit, for any even ``dim``.

    For ``dim = 2**N`` this is the exact product state. Otherwise it is the
    product state on ``ceil(log2 dim)`` qubits restricted to the first
    ``dim`` basis states and renormalized.
    """
    if dim < 2:
        raise ValueError(f"invalid coin dimension {dim}")
    nbits = int(np.ceil(np.log2(dim)))
    full = product_coin([qubit] * nbits)[:dim]
    norm = np.linalg.norm(full)
    if norm < 1e-12:
        raise ValueError("restricted product state vanishes")
    return full / norm


def init_state(ring_size: int, coin: np.ndarray) -> SystemState:
    """Walker localized at ``x = 0`` with the coin in ``coin``."""
    if ring_size < 2:
        raise ValueError(f"ring size must be >= 2, got {ring_size}")
    coin = np.asarray(coin, dtype=np.complex128)
    if coin.ndim != 1:
        raise ValueError("coin must be a vector")
    if abs(np.linalg.norm(coin) - 1.0) > 1e-12:
        raise ValueError("coin state is not normalized")
    sectors = np.tile(coin / np.sqrt(ring_size), (ring_size, 1))
    return SystemState(sectors, 0)


def momentum_phases(ring_size: int) -> np.ndarray:
    return np.exp(-2j * np.pi * np.arange(ring_size) / ring_size)


def _apply_phases(sectors: np.ndarray, phases: np.ndarray, conj: bool = False) -> None:
    half = sectors.shape[-1] // 2
    ph = phases[:, None]
    if conj:
        ph = ph.conj()
    sectors[:, :half] *= ph
    sectors[:, half:] *= ph.conj()


def sector_step(v: np.ndarray, k: int, ring_size: int, baker: Applier) -> np.ndarray:
    """One step for the coin vector of momentum sector ``k``."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[-1] % 2:
        raise ValueError("coin dimension must be even")
    out = np.array(baker(v), dtype=np.complex128, copy=True).reshape(1, -1)
    _apply_phases(out, momentum_phases(ring_size)[[k % ring_size]])
    return out[0]


def _run_block(sectors, phases, steps, baker, inverse):
    if sectors.shape[-1] % 2:
        raise ValueError("coin dimension must be even")
    for _ in range(steps):
        if inverse:
            _apply_phases(sectors, phases, conj=True)
            sectors = baker(sectors)
        else:
            sectors = baker(sectors)
            _apply_phases(sectors, phases)
    return sectors


def evolve(
    state: SystemState,
    steps: int,
    baker: Applier,
    *,
    inverse: bool = False,
    threads: int = 1,
) -> SystemState:
    """Advance every sector ``steps`` times (backwards if ``inverse``).

    ``baker`` must be the inverse applier when ``inverse`` is set. Sectors
    are independent, so ``threads > 1`` splits them into contiguous blocks
    evolved concurrently; each block sees the same operation order.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    phases = momentum_phases(state.ring_size)
    source = state.sectors
    if steps and threads > 1 and state.ring_size > 1:
        bounds = np.linspace(0, state.ring_size, min(threads, state.ring_size) + 1).astype(int)

        def work(a, b):
            return _run_block(source[a:b].copy(), phases[a:b], steps, baker, inverse)

        with ThreadPoolExecutor(max_workers=len(bounds) - 1) as pool:
            parts = list(pool.map(work, bounds[:-1], bounds[1:]))
        sectors = np.concatenate(parts, axis=0)
    else:
        sectors = _run_block(source.copy(), phases, steps, baker, inverse)
    dt = -steps if inverse else steps
    return SystemState(sectors, state.time + dt)


def shift_operator(ring_size: int) -> np.ndarray:
    """Position translation ``U`` with ``U|k> = exp(-2 pi i k / M)|k>``."""
    return np.roll(np.eye(ring_size), -1, axis=0)


def momentum_state(k: int, ring_size: int) -> np.ndarray:
    j = np.arange(ring_size)
    return np.exp(-2j * np.pi * j * k / ring_size) / np.sqrt(ring_size)


def dense_step_matrix(ring_size: int, spec: BakerSpec) -> np.ndarray:
    """Full ``(U (x) P0 + U^dag (x) P1)(I (x) B)`` on position (x) coin."""
    D = spec.dim
    if ring_size * D > DENSE_ORACLE_LIMIT:
        raise NumericalGuardError(f"dense oracle limited to M*D <= {DENSE_ORACLE_LIMIT}")
    proj0 = np.diag((np.arange(D) < D // 2).astype(float))
    proj1 = np.eye(D) - proj0
    U = shift_operator(ring_size)
    cond = np.kron(U, proj0) + np.kron(U.T, proj1)
    return cond @ np.kron(np.eye(ring_size), baker_matrix(spec))


def dense_oracle_evolve(ring_size: int, coin: np.ndarray, spec: BakerSpec, steps: int) -> np.ndarray:
    """Brute-force evolution in the position (x) coin basis, index ``x * D + j``."""
    step = dense_step_matrix(ring_size, spec)
    psi = np.zeros(ring_size * spec.dim, dtype=np.complex128)
    psi[: spec.dim] = np.asarray(coin, dtype=np.complex128)
    for _ in range(steps):
        psi = step @ psi
    return psi
