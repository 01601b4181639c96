"""Dense complex matrix arithmetic and the two spectral primitives the rest
of the toolkit is built on: Hermitian eigendecomposition into eigenspace
projections, and the positive-semidefinite square root.

Operators are plain ``numpy`` arrays of ``complex128``.  Every function is
pure and returns fresh arrays; values stored inside domain objects are
frozen read-only.  Dimensions are expected to stay small (d <= ~64), so all
checks are done densely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailureError,
    DimensionMismatchError,
    NotHermitianError,
    NotPSDError,
    ValidationError,
)

# Default tolerances. All overridable per call.
TOL_LIN = 1e-9    # structural identities: Hermiticity, completeness, reconstruction
TOL_PSD = 1e-8    # slack allowed below zero in positive-semidefinite spectra
TOL_STAT = 1e-9   # statistical identities built from products of traces
TOL_REL = 1e-8    # acceptance threshold for affine operator relations


def as_matrix(M, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(
            f"{name} must be a square matrix, got shape {arr.shape}",
            invariant="square", field=name)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries",
                              invariant="finite-entries", field=name)
    return arr


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def max_abs(M: np.ndarray) -> float:
    """Entrywise infinity norm, used for all relative tolerances."""
    return float(np.max(np.abs(M)))


def scale_of(M: np.ndarray) -> float:
    """max(1, ||M||) so tolerances stay meaningful near zero."""
    return max(1.0, max_abs(M))


def _require_same_dim(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}",
            invariant="matching-dims")


def adjoint(M) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(M).conj().T.copy()


def mul(A, B) -> np.ndarray:
    A, B = as_matrix(A, name="A"), as_matrix(B, name="B")
    _require_same_dim(A, B)
    return A @ B


def add(A, B) -> np.ndarray:
    A, B = as_matrix(A, name="A"), as_matrix(B, name="B")
    _require_same_dim(A, B)
    return A + B


def sub(A, B) -> np.ndarray:
    A, B = as_matrix(A, name="A"), as_matrix(B, name="B")
    _require_same_dim(A, B)
    return A - B


def scale(alpha: complex, M) -> np.ndarray:
    return complex(alpha) * as_matrix(M)


def trace(M) -> complex:
    return complex(np.trace(as_matrix(M)))


def commutator(A, B) -> np.ndarray:
    """AB - BA."""
    A, B = as_matrix(A, name="A"), as_matrix(B, name="B")
    _require_same_dim(A, B)
    return A @ B - B @ A


def hermiticity_defect(M: np.ndarray) -> float:
    return max_abs(M - M.conj().T)


def is_hermitian(M, tol: float = TOL_LIN) -> bool:
    M = as_matrix(M)
    return hermiticity_defect(M) <= tol * scale_of(M)


def require_hermitian(M, tol: float = TOL_LIN, *, name: str = "matrix") -> np.ndarray:
    M = as_matrix(M, name=name)
    defect = hermiticity_defect(M)
    if defect > tol * scale_of(M):
        raise NotHermitianError(
            f"{name} is not Hermitian (defect {defect:.3e})",
            invariant="hermitian", violation=defect, field=name)
    return M


def hermitian_eigenvalues(M: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a (validated) Hermitian matrix."""
    try:
        return np.linalg.eigvalsh((M + M.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - d<=64 converges
        raise ConvergenceFailureError(str(exc)) from exc


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition M = sum_i lambda_i P_i over distinct eigenvalues.

    ``eigenvalues`` are strictly increasing after clustering, ``projections``
    are the orthogonal projections onto the corresponding eigenspaces, and
    ``multiplicities`` their ranks.
    """

    eigenvalues: tuple[float, ...]
    projections: tuple[np.ndarray, ...]
    multiplicities: tuple[int, ...]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.projections[0])
        for lam, proj in zip(self.eigenvalues, self.projections):
            out = out + lam * proj
        return out


def default_cluster_tol(M: np.ndarray) -> float:
    return 1e-8 * scale_of(M)


def hermitian_eigendecomposition(M, cluster_tol: float | None = None,
                                 tol: float = TOL_LIN) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix into distinct eigenvalues.

    Raw eigenvalues whose consecutive gap is at most ``cluster_tol`` are
    merged into a single eigenspace whose reported eigenvalue is the mean of
    the merged values.  Projections are sums of eigenvector outer products,
    so they are basis-independent within each cluster.
    """
    M = require_hermitian(M, tol)
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(M)
    try:
        w, V = np.linalg.eigh((M + M.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailureError(str(exc)) from exc

    # Group consecutive eigenvalues with gap <= cluster_tol.
    d = w.shape[0]
    boundaries = [0]
    for i in range(1, d):
        if w[i] - w[i - 1] > cluster_tol:
            boundaries.append(i)
    boundaries.append(d)

    eigenvalues: list[float] = []
    projections: list[np.ndarray] = []
    multiplicities: list[int] = []
    for lo, hi in zip(boundaries[:-1], boundaries[1:]):
        block = V[:, lo:hi]
        P = block @ block.conj().T
        P = (P + P.conj().T) / 2.0
        P.setflags(write=False)
        eigenvalues.append(float(np.mean(w[lo:hi])))
        projections.append(P)
        multiplicities.append(hi - lo)

    return EigenDecomposition(tuple(eigenvalues), tuple(projections),
                              tuple(multiplicities))


def psd_sqrt(M, tol_psd: float = TOL_PSD, tol: float = TOL_LIN) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Eigenvalues in [-tol_psd, 0) are treated as rounding noise and clipped
    to zero; anything lower raises ``NotPSDError``.
    """
    M = require_hermitian(M, tol)
    try:
        w, V = np.linalg.eigh((M + M.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailureError(str(exc)) from exc
    if w[0] < -tol_psd:
        raise NotPSDError(
            f"matrix has eigenvalue {w[0]:.3e} below -{tol_psd:.1e}",
            invariant="psd", violation=float(-w[0]))
    root = (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T
    return (root + root.conj().T) / 2.0


def frozen(M: np.ndarray) -> np.ndarray:
    """Read-only copy, for storage inside immutable domain objects."""
    out = np.array(M, dtype=complex)
    out.setflags(write=False)
    return out
