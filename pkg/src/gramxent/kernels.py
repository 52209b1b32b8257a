"""Kernel families and Gram-matrix construction.

Two kernel families are supported:

* ``gaussian``: exp(-sigma * ||s - a||^2). Translation invariant, radial,
  and normalized (diagonal entries are exactly 1).
* ``exponential-inner-product``: exp(sigma * <s, a>). Translation varying;
  evaluations are guarded against exp() overflow.

Gram matrices carry their normalization state (raw vs unit-trace) so the
estimators can enforce their trace contract, plus a count of eigenvalues
clamped by downstream conditioning.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DegenerateMatrixError, KernelOverflowError

GAUSSIAN = "gaussian"
EXP_INNER_PRODUCT = "exponential-inner-product"
FAMILIES = (GAUSSIAN, EXP_INNER_PRODUCT)

# exp() overflows just above 709; stay clear of it so downstream traces
# never see an inf.
OVERFLOW_LIMIT = 700.0


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family selector plus bandwidth.

    Capability flags are derived from the family: the gaussian kernel is
    translation invariant, radial and normalized; the exponential
    inner-product kernel is none of these.
    """

    family: str = GAUSSIAN
    bandwidth: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(
                f"unknown kernel family {self.family!r}; expected one of {FAMILIES}"
            )
        if not (self.bandwidth > 0):
            raise ArgumentError(f"bandwidth must be positive, got {self.bandwidth}")

    @property
    def translation_invariant(self):
        return self.family == GAUSSIAN

    @property
    def radial(self):
        return self.family == GAUSSIAN

    @property
    def normalized(self):
        """True when the kernel evaluates to 1 on identical inputs."""
        return self.family == GAUSSIAN


@dataclass(frozen=True)
class SampleSet:
    """An n x d table of real-valued samples from one distribution."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2:
            raise ArgumentError(f"samples must be a 2-d array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ArgumentError(f"need n >= 1 and d >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ArgumentError("samples contain non-finite entries")
        object.__setattr__(self, "data", arr)

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def d(self):
        return self.data.shape[1]


RAW = "raw"
UNIT_TRACE = "unit-trace"


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric nonnegative kernel matrix with normalization state.

    ``clamp_count`` records how many eigenvalues were clamped while
    conditioning this matrix (0 if it never went through a spectral
    function). Builders guarantee bit-exact symmetry by computing the upper
    triangle once and mirroring it.
    """

    values: np.ndarray
    normalization: str = RAW
    clamp_count: int = 0

    @property
    def n(self):
        return self.values.shape[0]

    def trace(self):
        return float(np.trace(self.values))


@dataclass(frozen=True)
class CrossGram:
    """Rectangular n x m kernel matrix between two sample sets.

    Entry (i, j) = kernel(x_i, y_j). Carries no normalization state: the
    tripartite measure consumes its plain grand mean.
    """

    values: np.ndarray

    @property
    def shape(self):
        return self.values.shape


def eval_kernel(spec, s, a):
    """Evaluate the kernel on a single pair of d-vectors.

    Raises ArgumentError on dimension mismatch and KernelOverflowError when an
    exponential-inner-product exponent exceeds the exp() range.
    """
    s = np.asarray(s, dtype=float).ravel()
    a = np.asarray(a, dtype=float).ravel()
    if s.shape != a.shape:
        raise ArgumentError(f"vector dimensions differ: {s.shape[0]} vs {a.shape[0]}")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(a))):
        raise ArgumentError("kernel inputs contain non-finite entries")
    if spec.family == GAUSSIAN:
        diff = s - a
        return float(np.exp(-spec.bandwidth * float(diff @ diff)))
    exponent = spec.bandwidth * float(s @ a)
    if exponent > OVERFLOW_LIMIT:
        raise KernelOverflowError(0, 0, exponent)
    return float(np.exp(exponent))


def _mirror_upper(K):
    # Copy the strict upper triangle onto the lower one so symmetry holds
    # bit-exactly rather than to rounding.
    iu, ju = np.triu_indices(K.shape[0], k=1)
    K[ju, iu] = K[iu, ju]
    return K


def gram_univariate(spec, X):
    """Build the n x n Gram matrix of all pairwise kernel evaluations.

    Vectorized; entry (i, j) agrees with eval_kernel(spec, x_i, x_j) to
    rounding. The result is raw (not trace normalized).
    """
    data = X.data
    if spec.family == GAUSSIAN:
        sq = np.sum(data * data, axis=1)
        D = sq[:, None] + sq[None, :] - 2.0 * (data @ data.T)
        np.maximum(D, 0.0, out=D)  # rounding can push tiny distances negative
        np.fill_diagonal(D, 0.0)
        K = np.exp(-spec.bandwidth * D)
    else:
        E = spec.bandwidth * (data @ data.T)
        if np.max(E) > OVERFLOW_LIMIT:
            i, j = np.unravel_index(int(np.argmax(E)), E.shape)
            raise KernelOverflowError(i, j, E[i, j])
        K = np.exp(E)
    return GramMatrix(_mirror_upper(K), normalization=RAW)


def gram_cross(spec, X, Y):
    """Build the rectangular n x m Gram matrix between two sample sets."""
    if X.d != Y.d:
        raise ArgumentError(f"sample sets have different dimensions: {X.d} vs {Y.d}")
    if X.n == Y.n and np.array_equal(X.data, Y.data):
        # definition coincides with the square Gram; make the values coincide
        # exactly too (same diagonal and mirrored-triangle rounding)
        return CrossGram(gram_univariate(spec, X).values)
    if spec.family == GAUSSIAN:
        sqx = np.sum(X.data * X.data, axis=1)
        sqy = np.sum(Y.data * Y.data, axis=1)
        D = sqx[:, None] + sqy[None, :] - 2.0 * (X.data @ Y.data.T)
        np.maximum(D, 0.0, out=D)
        K = np.exp(-spec.bandwidth * D)
    else:
        E = spec.bandwidth * (X.data @ Y.data.T)
        if np.max(E) > OVERFLOW_LIMIT:
            i, j = np.unravel_index(int(np.argmax(E)), E.shape)
            raise KernelOverflowError(i, j, E[i, j])
        K = np.exp(E)
    return CrossGram(K)


def normalize_trace(G):
    """Scale a Gram matrix to unit trace.

    Idempotent: a matrix already flagged unit-trace is returned unchanged, so
    repeated normalization is exact, not just within rounding.
    """
    if G.normalization == UNIT_TRACE:
        return G
    tr = G.trace()
    if not (tr > 0):
        raise DegenerateMatrixError(f"cannot trace-normalize: trace = {tr:.6g}")
    return GramMatrix(G.values / tr, normalization=UNIT_TRACE, clamp_count=G.clamp_count)


def hadamard_joint(G1, G2):
    """Entrywise product of two same-size Gram matrices, unit-trace normalized.

    This realizes the product kernel: the Schur product theorem keeps the
    result PSD.
    """
    if G1.values.shape != G2.values.shape:
        raise ArgumentError(
            f"size mismatch: {G1.values.shape} vs {G2.values.shape}"
        )
    P = G1.values * G2.values
    tr = float(np.trace(P))
    if not (tr > 0):
        raise DegenerateMatrixError(f"Hadamard product has trace {tr:.6g}")
    return GramMatrix(P / tr, normalization=UNIT_TRACE)
