"""Dense complex-matrix helpers: tensor products, spectra, trace distance.

All operators are plain numpy arrays of complex128. Matrices are kept small
(the working dimension is capped, default 2**12) because every quantity in
this package is computed exactly rather than sampled.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = [
    "DimensionCapError",
    "DEFAULT_DIM_CAP",
    "dim_cap",
    "check_dim",
    "kron",
    "kron_all",
    "is_hermitian",
    "hermitian_eigenvalues",
    "trace_norm",
    "trace_distance",
    "assert_density_operator",
]

DEFAULT_DIM_CAP = 1 << 12

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
ZERO_EIG_TOL = 1e-12


class DimensionCapError(ValueError):
    """Raised when an operation would exceed the configured dimension cap."""


def dim_cap() -> int:
    """Current dimension cap; the QPKE_DIM_CAP env var overrides the default."""
    raw = os.environ.get("QPKE_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    cap = int(raw)
    if cap < 2:
        raise ValueError(f"QPKE_DIM_CAP must be >= 2, got {cap}")
    return cap


def check_dim(dim: int) -> int:
    if dim > dim_cap():
        raise DimensionCapError(f"dimension {dim} exceeds cap {dim_cap()}")
    return dim


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two arrays, capped on the resulting dimension."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    check_dim(a.shape[0] * b.shape[0])
    return np.kron(a, b)


def kron_all(factors) -> np.ndarray:
    """Tensor product of a sequence of arrays, left to right."""
    factors = list(factors)
    if not factors:
        raise ValueError("kron_all needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = kron(out, f)
    return out


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T)) <= tol


def hermitian_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Raises ValueError if the input is not Hermitian within 1e-10.
    """
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a):
        raise ValueError("input matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(a)[::-1]


def trace_norm(a: np.ndarray) -> float:
    """Trace norm tr|A| = sum of singular values.

    Hermitian inputs take the exact route sum|eig(A)|; squaring through
    A^dag A would cost half the significant digits. Everything else goes
    through the spectrum of A^dag A.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("trace_norm expects a square matrix")
    if is_hermitian(a):
        return float(np.sum(np.abs(np.linalg.eigvalsh(a))))
    gram_eigs = np.linalg.eigvalsh(a.conj().T @ a)
    return float(np.sum(np.sqrt(np.clip(gram_eigs, 0.0, None))))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Trace distance D(rho, sigma) = (1/2) sum |eigenvalues of rho - sigma|.

    Both inputs must be Hermitian with unit trace; the difference is
    diagonalized exactly, so the result is accurate to machine precision.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError("operators must share a dimension")
    for op in (rho, sigma):
        if not is_hermitian(op):
            raise ValueError("trace_distance expects Hermitian operators")
        if abs(np.trace(op).real - 1.0) > TRACE_TOL or abs(np.trace(op).imag) > TRACE_TOL:
            raise ValueError("trace_distance expects unit-trace operators")
    eigs = hermitian_eigenvalues(rho - sigma)
    return float(0.5 * np.sum(np.abs(eigs)))


def assert_density_operator(rho: np.ndarray) -> None:
    """Check Hermiticity, unit trace and positive semidefiniteness.

    Eigenvalues with magnitude below 1e-12 count as zero; anything below
    -1e-9 fails the PSD check.
    """
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise ValueError("density operator must be Hermitian")
    tr = np.trace(rho)
    if abs(tr.real - 1.0) > TRACE_TOL or abs(tr.imag) > TRACE_TOL:
        raise ValueError(f"density operator must have unit trace, got {tr}")
    eigs = np.linalg.eigvalsh(rho)
    low = float(np.min(eigs))
    if abs(low) < ZERO_EIG_TOL:
        low = 0.0
    if low < -PSD_TOL:
        raise ValueError(f"density operator has negative eigenvalue {low}")
