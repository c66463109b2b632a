"""Discrete Wigner function of the walker on a ``2M x 2M`` grid.

Phase-point operators are ``A(q, p) = U^q R V^{-p} exp(i pi p q / M)`` with
``U|n> = |n+1>``, ``R|n> = |-n>`` and ``V|n> = exp(2 pi i n / M)|n>``. This
``V`` shifts the states ``|m>_V = M^{-1/2} sum_n exp(2 pi i n m / M)|n>`` by
one (``V|m>_V = |m+1>_V``), and it is the sign for which every ``A(q, p)``
is Hermitian. Momentum marginals below refer to that ``|m>_V`` basis.

``W(q, p) = Tr[rho A(q, p)] / M`` sums to ``GRID_TOTAL`` over the grid for
any unit-trace ``rho``. Line sums at even ``q`` (even ``p``) equal
``GRID_TOTAL`` times the position (momentum) probabilities at ``q/2``
(``p/2``); odd lines sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from pathlib import Path

import numpy as np

from .observables import ReducedDensity

GRID_TOTAL = 2.0
HERMITIAN_TOL = 1e-10


@dataclass
class WignerGrid:
    """Real values indexed ``[q, p]`` for ``q, p = 0 .. 2M-1``."""

    values: np.ndarray
    ring_size: int
    time: int = 0
    label: str = "quantum"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        side = 2 * self.ring_size
        if self.values.shape != (side, side):
            raise ValueError(f"grid must be {side}x{side}, got {self.values.shape}")

    def position_marginal(self) -> np.ndarray:
        return self.values.sum(axis=1)[::2] / GRID_TOTAL

    def momentum_marginal(self) -> np.ndarray:
        return self.values.sum(axis=0)[::2] / GRID_TOTAL

    def to_text(self) -> str:
        lines = [f"{self.ring_size} {self.time} {self.label}"]
        lines += [" ".join(f"{v:.15e}" for v in row) for row in self.values]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> WignerGrid:
        head, *rows = text.strip().splitlines()
        m, t, label = head.split(maxsplit=2)
        values = np.array([[float(v) for v in row.split()] for row in rows])
        return cls(values, int(m), int(t), label)

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.to_text())
        return path


@dataclass
class ClassicalWalkDistribution:
    probs: np.ndarray
    time: int

    @property
    def ring_size(self) -> int:
        return len(self.probs)


def _check_index(q: int, p: int, ring_size: int) -> None:
    if not (0 <= q < 2 * ring_size and 0 <= p < 2 * ring_size):
        raise ValueError(f"({q}, {p}) outside the {2 * ring_size}x{2 * ring_size} grid")


def phase_point_operator(q: int, p: int, ring_size: int) -> np.ndarray:
    """Dense ``A(q, p)`` in the position basis."""
    _check_index(q, p, ring_size)
    M = ring_size
    n = np.arange(M)
    U_q = np.zeros((M, M))
    U_q[(n + q) % M, n] = 1.0
    R = np.zeros((M, M))
    R[(-n) % M, n] = 1.0
    V_minus_p = np.diag(np.exp(-2j * np.pi * p * n / M))
    return U_q @ R @ V_minus_p * np.exp(1j * np.pi * p * q / M)


def _position_matrix(rho) -> np.ndarray:
    if isinstance(rho, ReducedDensity):
        rho = rho.in_position().matrix
    m = np.asarray(rho, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("density matrix must be square")
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    return m


def wigner_from_density(rho, time: int = 0, label: str = "quantum") -> WignerGrid:
    """Discrete Wigner function of a density matrix.

    Accepts a :class:`ReducedDensity` (any basis) or a position-basis array.
    Uses ``Tr[rho U^q R V^{-p}] = sum_n rho[n, q-n] exp(-2 pi i p n / M)``,
    one FFT per column ``q``.
    """
    m = _position_matrix(rho)
    M = m.shape[0]
    n = np.arange(M)
    q = p = np.arange(2 * M)
    anti = m[n[None, :], (q[:, None] - n[None, :]) % M]
    traces = np.fft.fft(anti, axis=1)[:, p % M]
    w = traces * np.exp(1j * np.pi * np.outer(q, p) / M) / M
    return WignerGrid(w.real, M, time, label)


def classical_walk_distribution(ring_size: int, t: int) -> ClassicalWalkDistribution:
    """Binomial random-walk distribution after ``t`` unit steps, folded onto the ring."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    probs = np.zeros(ring_size)
    scale = 2**t
    for right in range(t + 1):
        x = 2 * right - t
        probs[x % ring_size] += comb(t, right) / scale
    return ClassicalWalkDistribution(probs, t)


def classical_phase_grid(dist: ClassicalWalkDistribution, label: str = "classical") -> WignerGrid:
    """Position distribution at even ``q``, uniform in ``p``, same total as quantum grids."""
    M = dist.ring_size
    values = np.zeros((2 * M, 2 * M))
    values[::2, :] = GRID_TOTAL * np.asarray(dist.probs)[:, None] / (2 * M)
    return WignerGrid(values, M, dist.time, label)


def distance(g1: WignerGrid, g2: WignerGrid) -> float:
    """Sum of squared differences between two grids."""
    if g1.ring_size != g2.ring_size:
        raise ValueError(f"ring sizes differ: {g1.ring_size} vs {g2.ring_size}")
    return float(np.sum((g1.values - g2.values) ** 2))
