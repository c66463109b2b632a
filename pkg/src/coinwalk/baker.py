"""Quantum baker maps and the classical map they quantize.

Two constructions are supported:

* the qubit family ``B_{N,n} = G_{n-1}^{-1} S_n G_n`` on ``N`` qubits,
  interpolating between the BVS baker map (``n = 1``) and independent
  single-qubit coins composed with a register cycle (``n = N``);
* the standard quantized baker (BVS) map ``F_D^{-1} (I_2 (x) F_{D/2})`` on any even
  dimension ``D``.

Both share one set of Floquet angles for every Fourier factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .hilbert import (
    PERIODIC,
    FloquetAngles,
    apply_fourier,
    fourier_matrix,
    partial_fourier,
    partial_fourier_matrix,
    qubit_shift,
    qubit_shift_matrix,
)

Applier = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BakerSpec:
    """Selects one member of the evolution-operator family.

    Use :meth:`qubit` for ``B_{N,n}`` and :meth:`even` for the BVS map on an
    arbitrary even dimension.
    """

    num_qubits: int | None = None
    n: int | None = None
    even_dim: int | None = None
    angles: FloquetAngles = PERIODIC

    def __post_init__(self):
        if self.even_dim is not None:
            if self.num_qubits is not None or self.n is not None:
                raise ValueError("give either (num_qubits, n) or even_dim, not both")
            if self.even_dim < 2 or self.even_dim % 2:
                raise ValueError(f"BVS map needs an even dimension >= 2, got {self.even_dim}")
        else:
            if self.num_qubits is None or self.n is None:
                raise ValueError("qubit family needs num_qubits and n")
            if self.num_qubits < 1 or not 1 <= self.n <= self.num_qubits:
                raise ValueError(f"need 1 <= n <= N, got N={self.num_qubits}, n={self.n}")

    @classmethod
    def qubit(cls, num_qubits: int, n: int, angles: FloquetAngles = PERIODIC) -> BakerSpec:
        return cls(num_qubits=num_qubits, n=n, angles=angles)

    @classmethod
    def even(cls, dim: int, angles: FloquetAngles = PERIODIC) -> BakerSpec:
        return cls(even_dim=dim, angles=angles)

    @property
    def is_qubit_family(self) -> bool:
        return self.even_dim is None

    @property
    def dim(self) -> int:
        return self.even_dim if self.even_dim is not None else 2**self.num_qubits

    @property
    def label(self) -> str:
        if self.is_qubit_family:
            return f"B{self.num_qubits}_{self.n}"
        return f"BVS{self.even_dim}"


def build_baker_applier(spec: BakerSpec, inverse: bool = False) -> Applier:
    """Return a function applying the map (or its inverse) along the last axis."""
    angles = spec.angles
    if spec.is_qubit_family:
        N, n = spec.num_qubits, spec.n

        def forward(v):
            v = partial_fourier(v, N, n, angles)
            v = qubit_shift(v, N, n)
            return partial_fourier(v, N, n - 1, angles, inverse=True)

        def backward(v):
            v = partial_fourier(v, N, n - 1, angles)
            v = qubit_shift(v, N, n, inverse=True)
            return partial_fourier(v, N, n, angles, inverse=True)

    else:
        D = spec.even_dim

        def _halves(v, inv):
            v = np.asarray(v, dtype=np.complex128)
            if v.shape[-1] != D:
                raise ValueError(f"vector has dimension {v.shape[-1]}, map needs {D}")
            lead = v.shape[:-1]
            return apply_fourier(v.reshape(lead + (2, D // 2)), angles, inv).reshape(v.shape)

        def forward(v):
            return apply_fourier(_halves(v, False), angles, inverse=True)

        def backward(v):
            return _halves(apply_fourier(v, angles), True)

    return backward if inverse else forward


def baker_matrix(spec: BakerSpec) -> np.ndarray:
    """Dense matrix assembled from dense Fourier factors (independent of the appliers)."""
    angles = spec.angles
    if spec.is_qubit_family:
        N, n = spec.num_qubits, spec.n
        g_n = partial_fourier_matrix(N, n, angles)
        g_prev = partial_fourier_matrix(N, n - 1, angles)
        return g_prev.conj().T @ qubit_shift_matrix(N, n) @ g_n
    D = spec.even_dim
    half = np.kron(np.eye(2), fourier_matrix(D // 2, angles))
    return fourier_matrix(D, angles).conj().T @ half


# classical baker map and its symbolic dynamics


class PhasePoint(NamedTuple):
    q: float
    p: float


def classical_baker_step(pt: PhasePoint | tuple[float, float]) -> PhasePoint:
    q, p = pt
    if not (0.0 <= q < 1.0 and 0.0 <= p < 1.0):
        raise ValueError(f"point {pt} outside the unit square")
    fold = int(np.floor(2 * q))
    return PhasePoint(2 * q - fold, (p + fold) / 2)


@dataclass(frozen=True)
class SymbolicString:
    """Truncated bi-infinite binary string ``... e-2 e-1 . e0 e1 ...``.

    ``past`` lists ``(e-1, e-2, ...)`` outward from the dot, ``future`` lists
    ``(e0, e1, ...)``.
    """

    past: tuple[int, ...]
    future: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "past", tuple(int(b) for b in self.past))
        object.__setattr__(self, "future", tuple(int(b) for b in self.future))
        if any(b not in (0, 1) for b in self.past + self.future):
            raise ValueError("symbols must be bits")


def symbolic_step(s: SymbolicString) -> SymbolicString:
    """Bernoulli shift: move the dot one symbol to the right."""
    if not s.future:
        raise ValueError("cannot shift an empty future")
    return SymbolicString((s.future[0],) + s.past, s.future[1:])


def encode_point(pt: PhasePoint | tuple[float, float], bits: int) -> SymbolicString:
    q, p = pt
    if not (0.0 <= q < 1.0 and 0.0 <= p < 1.0):
        raise ValueError(f"point {pt} outside the unit square")
    return SymbolicString(_binary_digits(p, bits), _binary_digits(q, bits))


def decode_point(s: SymbolicString) -> PhasePoint:
    q = sum(b * 2.0 ** (-k - 1) for k, b in enumerate(s.future))
    p = sum(b * 2.0 ** (-k - 1) for k, b in enumerate(s.past))
    return PhasePoint(q, p)


def _binary_digits(x: float, bits: int) -> Sequence[int]:
    out = []
    for _ in range(bits):
        x *= 2
        b = int(x >= 1.0)
        out.append(b)
        x -= b
    return tuple(out)
