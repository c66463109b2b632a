"""Floquet-angled Fourier transforms and qubit-register primitives.

Vectors are plain complex numpy arrays. Every applier acts on the last
axis, so a stack of coin vectors (one row per momentum sector) is handled
in a single call.

Qubit 1 is the most significant bit of the basis index:
``j = sum_i x_i 2**(N - i)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FloquetAngles:
    """Phase offsets ``(eta, kappa)`` of the discrete Fourier transform."""

    eta: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.eta) and np.isfinite(self.kappa)):
            raise ValueError(f"Floquet angles must be finite, got {self}")

    def __str__(self):
        return f"{self.eta:g},{self.kappa:g}"


PERIODIC = FloquetAngles(0.0, 0.0)
ANTIPERIODIC = FloquetAngles(0.5, 0.5)


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 1:
        raise ValueError(f"invalid dimension {dim!r}")
    return int(dim)


def register_dim(num_qubits: int) -> int:
    if int(num_qubits) != num_qubits or num_qubits < 0:
        raise ValueError(f"invalid number of qubits {num_qubits!r}")
    return 2 ** int(num_qubits)


def fourier_matrix(dim: int, angles: FloquetAngles = PERIODIC) -> np.ndarray:
    r"""Dense ``F_D^{eta,kappa}`` with entries
    ``F[k, j] = exp(-2 pi i (j + eta)(k + kappa) / D) / sqrt(D)``.
    """
    dim = _check_dim(dim)
    j = np.arange(dim) + angles.eta
    k = np.arange(dim) + angles.kappa
    return np.exp(-2j * np.pi * np.outer(k, j) / dim) / np.sqrt(dim)


def _phases(dim: int, angles: FloquetAngles):
    idx = np.arange(dim)
    pre = np.exp(-2j * np.pi * idx * angles.kappa / dim)
    post = np.exp(-2j * np.pi * idx * angles.eta / dim)
    glob = np.exp(-2j * np.pi * angles.eta * angles.kappa / dim)
    return pre, post, glob


def apply_fourier(
    v: np.ndarray, angles: FloquetAngles = PERIODIC, inverse: bool = False
) -> np.ndarray:
    """Apply ``F_D^{eta,kappa}`` (or its adjoint) along the last axis.

    Uses the factorization into a diagonal phase, an orthonormal FFT, a
    second diagonal phase and a global phase, so the cost is O(D log D)
    for any D.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim == 0:
        raise ValueError("expected a vector, got a scalar")
    dim = _check_dim(v.shape[-1])
    pre, post, glob = _phases(dim, angles)
    if inverse:
        w = np.fft.ifft(v * post.conj(), axis=-1, norm="ortho")
        return w * (pre.conj() * glob.conj())
    w = np.fft.fft(v * pre, axis=-1, norm="ortho")
    return w * (post * glob)


def partial_fourier(
    v: np.ndarray,
    num_qubits: int,
    n: int,
    angles: FloquetAngles = PERIODIC,
    inverse: bool = False,
) -> np.ndarray:
    """Apply ``G_n = I_{2^n} (x) F_{2^(N-n)}`` along the last axis.

    For each value of the first ``n`` qubits, the Fourier transform acts on
    the remaining ``N - n``. ``n = N`` multiplies by the scalar ``F_1``.
    """
    v = np.asarray(v, dtype=np.complex128)
    dim = register_dim(num_qubits)
    if v.shape[-1] != dim:
        raise ValueError(f"vector has dimension {v.shape[-1]}, register needs {dim}")
    if not 0 <= n <= num_qubits:
        raise ValueError(f"n={n} outside [0, {num_qubits}]")
    lead = v.shape[:-1]
    blocks = v.reshape(lead + (2**n, 2 ** (num_qubits - n)))
    return apply_fourier(blocks, angles, inverse).reshape(v.shape)


def qubit_shift(v: np.ndarray, num_qubits: int, n: int, inverse: bool = False) -> np.ndarray:
    """Cyclic left shift of the first ``n`` qubit labels.

    ``|x1 x2 ... xn rest>  ->  |x2 ... xn x1 rest>``. ``inverse`` undoes it.
    """
    v = np.asarray(v)
    dim = register_dim(num_qubits)
    if v.shape[-1] != dim:
        raise ValueError(f"vector has dimension {v.shape[-1]}, register needs {dim}")
    if not 1 <= n <= num_qubits:
        raise ValueError(f"n={n} outside [1, {num_qubits}]")
    if n == 1:
        return v.copy()
    lead = v.shape[:-1]
    base = len(lead)
    x = v.reshape(lead + (2,) * n + (2 ** (num_qubits - n),))
    # out[y1..yn] = in[yn, y1..y(n-1)]: old x1 lands in slot n
    if inverse:
        x = np.moveaxis(x, base + n - 1, base)
    else:
        x = np.moveaxis(x, base, base + n - 1)
    return np.ascontiguousarray(x).reshape(v.shape)


# dense references, used as test oracles and for small fallbacks


def qubit_shift_matrix(num_qubits: int, n: int) -> np.ndarray:
    dim = register_dim(num_qubits)
    if not 1 <= n <= num_qubits:
        raise ValueError(f"n={n} outside [1, {num_qubits}]")
    perm = np.zeros((dim, dim))
    for j in range(dim):
        bits = [(j >> (num_qubits - 1 - i)) & 1 for i in range(num_qubits)]
        moved = bits[1:n] + bits[:1] + bits[n:]
        target = int("".join(map(str, moved)), 2)
        perm[target, j] = 1.0
    return perm


def partial_fourier_matrix(num_qubits: int, n: int, angles: FloquetAngles = PERIODIC) -> np.ndarray:
    if not 0 <= n <= num_qubits:
        raise ValueError(f"n={n} outside [0, {num_qubits}]")
    return np.kron(np.eye(2**n), fourier_matrix(2 ** (num_qubits - n), angles))


def is_unitary(mat: np.ndarray, atol: float = 1e-10) -> bool:
    mat = np.asarray(mat)
    return bool(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max() <= atol)


def as_matrix(apply, dim: int) -> np.ndarray:
    """Dense matrix of a linear applier acting on the last axis."""
    return apply(np.eye(dim, dtype=np.complex128)).T
