"""Walker observables: reduced state, entropies, spread, and time-series fits.

Entropies are reported in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .walker import NumericalGuardError, SystemState

EIGEN_CUTOFF = 1e-12
WRAP_TOLERANCE = 1e-8

SERIES_LABELS = ("linear_entropy_bits", "von_neumann_bits", "variance", "std_dev", "wigner_distance")


class WrapAroundError(NumericalGuardError):
    """The walker's support reached the far side of the ring."""


@dataclass
class ReducedDensity:
    """Walker density matrix, in the momentum basis unless stated otherwise."""

    matrix: np.ndarray
    basis: str = "momentum"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError("density matrix must be square")
        if self.basis not in ("momentum", "position"):
            raise ValueError(f"unknown basis {self.basis!r}")

    @property
    def ring_size(self) -> int:
        return self.matrix.shape[0]

    def in_position(self) -> ReducedDensity:
        if self.basis == "position":
            return self
        M = self.ring_size
        F = np.fft.fft(np.eye(M), axis=0, norm="ortho")
        return ReducedDensity(F @ self.matrix @ F.conj().T, "position")

    def in_momentum(self) -> ReducedDensity:
        if self.basis == "momentum":
            return self
        M = self.ring_size
        F = np.fft.fft(np.eye(M), axis=0, norm="ortho")
        return ReducedDensity(F.conj().T @ self.matrix @ F, "momentum")


def _matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, ReducedDensity) else np.asarray(rho)


def reduced_density(state: SystemState) -> ReducedDensity:
    """Trace out the coin: entry ``(k, k')`` is ``<sector_k'|sector_k>``."""
    s = state.sectors
    return ReducedDensity(s @ s.conj().T, "momentum")


def purity(rho) -> float:
    m = _matrix(rho)
    return float(np.sum(np.abs(m) ** 2))


def state_purity(state: SystemState) -> float:
    """``Tr rho_P^2`` from whichever Gram matrix is smaller.

    The walker and coin reduced states of a pure state share their nonzero
    spectrum, so the ``D x D`` Gram matrix gives the same purity.
    """
    s = state.sectors
    gram = s.conj().T @ s if s.shape[1] < s.shape[0] else s @ s.conj().T
    return float(np.sum(np.abs(gram) ** 2))


def linear_entropy(rho) -> float:
    """``-log2 Tr rho^2``."""
    return float(-np.log2(purity(rho)))


def state_linear_entropy(state: SystemState) -> float:
    return float(-np.log2(state_purity(state)))


def von_neumann_entropy(rho) -> float:
    m = _matrix(rho)
    evals = np.linalg.eigvalsh(m)
    evals = evals[evals > EIGEN_CUTOFF]
    return float(-np.sum(evals * np.log2(evals)))


def state_von_neumann_entropy(state: SystemState) -> float:
    """Von Neumann entropy of the walker via the smaller Gram matrix."""
    s = state.sectors
    gram = s.conj().T @ s if s.shape[1] < s.shape[0] else s @ s.conj().T
    return von_neumann_entropy(gram)


def position_distribution(state: SystemState) -> np.ndarray:
    """``p(x, t)`` for ``x = 0 .. M-1`` (index ``x`` means ``x mod M``)."""
    amp = state.position_amplitudes()
    return np.sum(np.abs(amp) ** 2, axis=1)


def signed_positions(ring_size: int) -> np.ndarray:
    """Map ring index to ``x`` in ``[-floor(M/2), ceil(M/2) - 1]``."""
    x = np.arange(ring_size)
    return np.where(x < ring_size - ring_size // 2, x, x - ring_size)


def position_variance(dist: Sequence[float]) -> float:
    """``<x^2> - <x>^2`` with signed positions.

    Raises :class:`WrapAroundError` when probability sits beyond ``M/2 - 1``
    from the origin, where left- and right-moving parts can alias.
    """
    p = np.asarray(dist, dtype=float)
    M = len(p)
    x = signed_positions(M)
    far = np.abs(x) > M / 2 - 1
    if np.any(p[far] > WRAP_TOLERANCE):
        raise WrapAroundError(
            f"probability {p[far].max():.3g} at distance >= {M // 2} on a ring of {M} sites; "
            "use M >= 2 t + 2"
        )
    mean = np.dot(p, x)
    return float(np.dot(p, x * x) - mean * mean)


@dataclass
class ObservableSeries:
    times: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=int)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape or self.times.ndim != 1:
            raise ValueError("times and values must be equal-length 1-d sequences")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.label not in SERIES_LABELS:
            raise ValueError(f"unknown series label {self.label!r}")

    def window(self, lo: float, hi: float) -> ObservableSeries:
        keep = (self.times >= lo) & (self.times <= hi)
        return ObservableSeries(self.times[keep], self.values[keep], self.label)

    def __len__(self):
        return len(self.times)


def sd_slope(series: ObservableSeries, window: tuple[float, float]) -> float:
    """Least-squares slope of the series over ``window`` (inclusive)."""
    w = series.window(*window)
    if len(w) < 10:
        raise ValueError(f"need at least 10 samples in window {window}, got {len(w)}")
    return float(np.polyfit(w.times.astype(float), w.values, 1)[0])


def growth_exponent(series: ObservableSeries, window: tuple[float, float]) -> float:
    """Slope of ``log value`` against ``log t`` over ``window``."""
    w = series.window(*window)
    keep = (w.times > 0) & (w.values > 0)
    if keep.sum() < 2:
        raise ValueError(f"need at least 2 positive samples in window {window}")
    return float(np.polyfit(np.log(w.times[keep]), np.log(w.values[keep]), 1)[0])


def dominant_period(values: Sequence[float], spacing: float = 1.0) -> float | None:
    """Period of the strongest autocorrelation peak, or ``None`` if flat.

    Peaks are located among local maxima at lags up to half the record and
    refined by a parabola through the neighbouring lags.
    """
    x = np.asarray(values, dtype=float)
    x = x - x.mean()
    energy = np.dot(x, x)
    if len(x) < 4 or energy <= 1e-20 * max(1.0, len(x)):
        return None
    max_lag = len(x) // 2
    ac = np.array([np.dot(x[: len(x) - lag], x[lag:]) for lag in range(max_lag + 2)]) / energy
    peaks = [lag for lag in range(1, max_lag + 1) if ac[lag] >= ac[lag - 1] and ac[lag] >= ac[lag + 1]]
    peaks = [lag for lag in peaks if ac[lag] > 0]
    if not peaks:
        return None
    best = max(peaks, key=lambda lag: ac[lag])
    left, mid, right = ac[best - 1], ac[best], ac[best + 1]
    denom = left - 2 * mid + right
    shift = 0.5 * (left - right) / denom if abs(denom) > 1e-15 else 0.0
    return float((best + np.clip(shift, -0.5, 0.5)) * spacing)


def entropy_saturation(
    series: ObservableSeries, window: tuple[float, float], num_qubits: int | None = None
) -> tuple[float, float | None]:
    """Saturation value and oscillation period of an entropy curve.

    Returns ``(mean of the samples in window, dominant period)``; the period
    is ``None`` for a flat record. It is estimated from the leading run of
    evenly spaced samples, so a record that switches to a coarser stride
    still resolves oscillations in its fine part. With ``num_qubits`` the
    window must start after the Ehrenfest time ``N`` and hold at least
    ``3 N`` samples.
    """
    w = series.window(*window)
    needed = 3 * num_qubits if num_qubits else 3
    if len(w) < needed:
        raise ValueError(f"need at least {needed} samples in window {window}, got {len(w)}")
    if num_qubits and window[0] < num_qubits:
        raise ValueError(f"window must start after the Ehrenfest time {num_qubits}")
    steps = np.diff(w.times)
    spacing = float(steps[0]) if len(steps) else 1.0
    uneven = np.flatnonzero(steps != steps[0]) if len(steps) else []
    even = w.values[: uneven[0] + 1] if len(uneven) else w.values
    return float(w.values.mean()), dominant_period(even, spacing)
