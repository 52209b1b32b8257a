"""Spectral primitives for PSD matrices.

Everything funnels through one symmetric eigendecomposition. Fractional
powers and logarithms are evaluated on the spectrum with a relative clamp
threshold tau = n * eps * lambda_max: eigenvalues at or below tau count as
zero-rank directions. Off-support values follow the pseudo-inverse
convention (f(lambda) = 0 for both positive and negative powers), which keeps
all spectral functions support-restricted.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ArgumentError, DegenerateMatrixError
from .kernels import GramMatrix

SYMMETRY_RTOL = 1e-12
DEFAULT_SUPPORT_TOL = 1e-8

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum sorted descending plus the aligned orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class SupportReport:
    """Outcome of a support-inclusion test between two PSD matrices.

    rank_1 / rank_2 are the numerical ranks of the first / second positional
    argument of support_included. ``residual`` is the Frobenius norm of the
    first argument's range leaked into the second argument's nullspace.
    """

    rank_1: int
    rank_2: int
    included: bool
    residual: float
    tolerance: float


class SpectralResult(NamedTuple):
    """A spectral function's value plus how many eigenvalues were clamped."""

    values: np.ndarray
    clamp_count: int


def _as_array(G):
    return G.values if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)


def sym_eig(G):
    """Symmetric eigendecomposition with eigenvalues sorted descending.

    Negative eigenvalues are reported as-is (clamping happens in the spectral
    functions, not here).
    """
    A = _as_array(G)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {A.shape}")
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if scale > 0 and float(np.max(np.abs(A - A.T))) > SYMMETRY_RTOL * scale * A.shape[0]:
        raise ArgumentError("matrix is not symmetric within tolerance")
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise DegenerateMatrixError(f"eigendecomposition failed: {exc}") from exc
    return EigenDecomposition(eigenvalues=w[::-1].copy(), eigenvectors=V[:, ::-1].copy())


def clamp_threshold(eigenvalues):
    """Relative numerical-rank cutoff tau = n * eps * lambda_max.

    A relative threshold makes spectral functions exactly scale-covariant:
    scaling the matrix scales tau along with it.
    """
    w = np.asarray(eigenvalues, dtype=float)
    lam_max = float(np.max(w)) if w.size else 0.0
    return w.shape[0] * _EPS * max(lam_max, 0.0)


def _spectral_apply(G, f, *, needs_rank=False, op_name=""):
    eig = sym_eig(G)
    w = eig.eigenvalues
    tau = clamp_threshold(w)
    on_support = w > tau
    rank = int(np.count_nonzero(on_support))
    if needs_rank and rank == 0:
        raise DegenerateMatrixError(f"{op_name}: matrix has numerical rank 0")
    clamped = int(w.shape[0] - rank)
    fw = np.zeros_like(w)
    fw[on_support] = f(w[on_support])
    V = eig.eigenvectors
    M = (V * fw) @ V.T
    M = 0.5 * (M + M.T)  # kill rounding asymmetry from the two matmuls
    return SpectralResult(values=M, clamp_count=clamped)


def matrix_power(G, p):
    """Spectral power G^p restricted to the numerical support.

    Off-support eigenvalues map to 0 for either sign of p (pseudo-inverse
    convention). Returns (matrix, clamp_count).
    """
    p = float(p)
    if p == 1.0:
        A = _as_array(G)
        return SpectralResult(values=A.copy(), clamp_count=0)
    return _spectral_apply(
        G, lambda w: np.power(w, p), needs_rank=(p < 0), op_name="matrix_power"
    )


def matrix_log(G):
    """Spectral logarithm with log(lambda) on the support and 0 off it.

    The off-support value only ever multiplies matrices supported inside G's
    support in the Umegaki trace, so it is immaterial there; 0 keeps the
    output finite everywhere.
    """
    return _spectral_apply(G, np.log, needs_rank=True, op_name="matrix_log")


def support_included(inner, outer, tol=DEFAULT_SUPPORT_TOL):
    """Test whether the support of ``inner`` lies inside the support of ``outer``.

    residual = || P0 @ U ||_F where U spans inner's numerical range and P0
    projects onto outer's numerical nullspace; included iff residual <= tol.
    rank_1 is inner's rank, rank_2 is outer's.
    """
    A = _as_array(inner)
    B = _as_array(outer)
    if A.shape != B.shape:
        raise ArgumentError(f"size mismatch: {A.shape} vs {B.shape}")
    if not (tol > 0):
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    eig_in = sym_eig(A)
    eig_out = sym_eig(B)
    tau_in = clamp_threshold(eig_in.eigenvalues)
    tau_out = clamp_threshold(eig_out.eigenvalues)
    range_in = eig_in.eigenvectors[:, eig_in.eigenvalues > tau_in]
    null_out = eig_out.eigenvectors[:, eig_out.eigenvalues <= tau_out]
    # ||P0 U||_F with P0 = N N^T collapses to ||N^T U||_F since N is orthonormal.
    residual = float(np.linalg.norm(null_out.T @ range_in))
    return SupportReport(
        rank_1=range_in.shape[1],
        rank_2=int(B.shape[0] - null_out.shape[1]),
        included=bool(residual <= tol),
        residual=residual,
        tolerance=float(tol),
    )


def trace_product(A, B):
    """tr(A @ B) for symmetric A, B via the entrywise sum, skipping the product."""
    A = _as_array(A)
    B = _as_array(B)
    if A.shape != B.shape:
        raise ArgumentError(f"size mismatch: {A.shape} vs {B.shape}")
    return float(np.sum(A * B))
