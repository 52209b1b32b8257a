"""Matrix-based Renyi alpha-cross-entropies and induced entropies.

Three core measures over kernel Gram matrices:

* nonmirrored:  (a-1)^-1 * [log tr(K1^a K2^(1-a)) - log tr(K1)]
* mirrored:     (a-1)^-1 * [log tr((K2^((1-a)/2a) K1 K2^((1-a)/2a))^a) - log tr(K1)]
* tripartite:   (a-1)^-1 * log(CIP) + (a-1)^-1 * log tr(nt(K1)^a)
  with CIP = mean(K1) + mean(K2) - 2*mean(K12), the biased squared-MMD
  estimate, and nt = trace normalization.

Bipartite measures return +inf when the support of K1 is not contained in
the support of K2; this is exact for every order (negative powers of K2 only
arise for a > 1, but the sentinel convention is uniform).

Under the unit-trace input contract the log tr(K1) term is identically zero
and is skipped; ``raw=True`` lifts the contract check and evaluates the full
formula, which makes the scaling law C(r1*K1 || r2*K2) = C + log(r1/r2)
exact on raw inputs.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ContractError, DegenerateMatrixError, NumericalDegeneracyError
from .kernels import RAW, UNIT_TRACE, GramMatrix, hadamard_joint, normalize_trace
from .psd_linalg import (
    SupportReport,
    clamp_threshold,
    matrix_log,
    matrix_power,
    support_included,
    sym_eig,
    trace_product,
)

# Orders this close to 1 are rejected; the mirrored limit handles a -> 1.
ALPHA_UNIT_GAP = 1e-6

ZERO_CIP_FLOOR = 1e-300
DEGENERATE_ZERO_CIP = "zero-cip"


@dataclass(frozen=True)
class Alpha:
    """A validated cross-entropy order.

    Must be positive and bounded away from 1 (|value - 1| >= 1e-6); the
    a -> 1 limit is served by mirrored_limit_umegaki. ``mirrored_dpi_safe``
    flags the orders (>= 1/2) where the mirrored measure's data-processing
    guarantee holds; construction outside that range is still allowed.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (v > 0) or not math.isfinite(v):
            raise ArgumentError(f"order must be a positive finite real, got {self.value!r}")
        if abs(v - 1.0) < ALPHA_UNIT_GAP:
            raise ArgumentError(
                f"order {v!r} is within {ALPHA_UNIT_GAP} of 1; "
                "use mirrored_limit_umegaki for the limit at 1"
            )
        object.__setattr__(self, "value", v)

    @property
    def mirrored_dpi_safe(self):
        return self.value >= 0.5


def _as_alpha(alpha):
    return alpha if isinstance(alpha, Alpha) else Alpha(float(alpha))


@dataclass(frozen=True)
class CrossEntropyResult:
    """Estimator value plus diagnostics.

    ``support`` is the gating report for bipartite measures (rank_1 is K1's
    rank, rank_2 is K2's) and the informational n == m report for the
    tripartite measure; None when not applicable. ``clamp_count`` totals the
    eigenvalues clamped across every spectral function in the evaluation.
    ``entropy_term`` is only set by the tripartite measure.
    ``support_reverse`` is only set by the Umegaki limit (both directions are
    checked there).
    """

    value: float
    alpha: float
    support: SupportReport | None = None
    clamp_count: int = 0
    degenerate: str | None = None
    entropy_term: float | None = None
    support_reverse: SupportReport | None = None


def _check_trace_contract(K, name, raw):
    if not isinstance(K, GramMatrix):
        raise ArgumentError(f"{name} must be a GramMatrix")
    if raw:
        return
    if K.normalization != UNIT_TRACE:
        raise ContractError(
            f"{name} must be unit-trace normalized (use normalize_trace); got {K.normalization!r}"
        )
    if abs(K.trace() - 1.0) > 1e-8:
        raise ContractError(f"{name} is flagged unit-trace but has trace {K.trace():.6g}")


def _log_trace_term(K1, raw):
    # log tr(K1) of the definition; identically zero under the unit-trace
    # contract, so it is skipped there rather than computed as log(1 + eps).
    if not raw and K1.normalization == UNIT_TRACE:
        return 0.0
    tr = K1.trace()
    if not (tr > 0):
        raise DegenerateMatrixError(f"first argument has nonpositive trace {tr:.6g}")
    return math.log(tr)


def _clamped_power_sum(values, p):
    """Sum of lambda^p over the numerical support of a symmetric matrix."""
    w = sym_eig(values).eigenvalues
    tau = clamp_threshold(w)
    kept = w[w > tau]
    clamped = int(w.shape[0] - kept.shape[0])
    return float(np.sum(kept**p)), clamped


def _infinite(alpha, support, clamp_count=0):
    return CrossEntropyResult(
        value=math.inf, alpha=alpha.value, support=support, clamp_count=clamp_count
    )


def nonmirrored_cross_entropy(K1, K2, alpha, *, raw=False):
    """Nonmirrored cross-entropy (a-1)^-1 [log tr(K1^a K2^(1-a)) - log tr(K1)]."""
    alpha = _as_alpha(alpha)
    _check_trace_contract(K1, "K1", raw)
    _check_trace_contract(K2, "K2", raw)
    support = support_included(K1, K2)
    if not support.included:
        return _infinite(alpha, support)
    a = alpha.value
    p1 = matrix_power(K1, a)
    p2 = matrix_power(K2, 1.0 - a)
    clamp_count = p1.clamp_count + p2.clamp_count
    t = trace_product(p1.values, p2.values)
    if not (t > 0):
        raise NumericalDegeneracyError(
            "nonmirrored trace collapsed", trace_value=t, clamp_count=clamp_count
        )
    value = (math.log(t) - _log_trace_term(K1, raw)) / (a - 1.0)
    return CrossEntropyResult(
        value=value, alpha=a, support=support, clamp_count=clamp_count
    )


def _sandwich_value(K1, K2, alpha, outer_power, inner_power, trace_power, raw):
    """Shared core of the mirrored estimators.

    Builds M = K2^outer_power @ K1^inner_power @ K2^outer_power (symmetrized),
    then returns (a-1)^-1 [log tr(M^trace_power) - log tr(K1)].
    """
    support = support_included(K1, K2)
    if not support.included:
        return _infinite(alpha, support)
    half = matrix_power(K2, outer_power)
    clamp_count = half.clamp_count
    if inner_power == 1.0:
        core = K1.values
    else:
        inner = matrix_power(K1, inner_power)
        clamp_count += inner.clamp_count
        core = inner.values
    M = half.values @ core @ half.values
    M = 0.5 * (M + M.T)
    s, clamped = _clamped_power_sum(M, trace_power)
    clamp_count += clamped
    if not (s > 0):
        raise NumericalDegeneracyError(
            "mirrored trace collapsed", trace_value=s, clamp_count=clamp_count
        )
    a = alpha.value
    value = (math.log(s) - _log_trace_term(K1, raw)) / (a - 1.0)
    return CrossEntropyResult(
        value=value, alpha=a, support=support, clamp_count=clamp_count
    )


def mirrored_cross_entropy(K1, K2, alpha, *, raw=False):
    """Mirrored (sandwiched) cross-entropy via tr((K2^((1-a)/2a) K1 K2^((1-a)/2a))^a)."""
    alpha = _as_alpha(alpha)
    _check_trace_contract(K1, "K1", raw)
    _check_trace_contract(K2, "K2", raw)
    a = alpha.value
    return _sandwich_value(K1, K2, alpha, (1.0 - a) / (2.0 * a), 1.0, a, raw)


def mirrored_cross_entropy_two_param(K1, K2, alpha, beta, *, raw=False):
    """Two-parameter mirrored variant with sandwich exponent split by beta.

    beta = alpha recovers mirrored_cross_entropy. The data-processing
    guarantee holds on the documented (alpha, beta) ranges, e.g.
    beta >= max(alpha, 1 - alpha) for alpha in (0, 1); other values evaluate
    fine but carry no such guarantee.
    """
    alpha = _as_alpha(alpha)
    beta = float(beta)
    if not (beta > 0) or not math.isfinite(beta):
        raise ArgumentError(f"beta must be a positive finite real, got {beta!r}")
    _check_trace_contract(K1, "K1", raw)
    _check_trace_contract(K2, "K2", raw)
    a = alpha.value
    return _sandwich_value(
        K1, K2, alpha, (1.0 - a) / (2.0 * beta), a / beta, beta, raw
    )


def mirrored_limit_umegaki(K1, K2, *, raw=False):
    """The order-1 limit of the mirrored measure: tr(K1 (log K1 - log K2)) / tr(K1).

    +inf when supp(K1) is not contained in supp(K2). Both inclusion
    directions are reported (``support`` gates, ``support_reverse`` is
    informational).
    """
    _check_trace_contract(K1, "K1", raw)
    _check_trace_contract(K2, "K2", raw)
    support = support_included(K1, K2)
    reverse = support_included(K2, K1)
    if not support.included:
        return CrossEntropyResult(
            value=math.inf, alpha=1.0, support=support, support_reverse=reverse
        )
    l1 = matrix_log(K1)
    l2 = matrix_log(K2)
    clamp_count = l1.clamp_count + l2.clamp_count
    tr1 = K1.trace()
    if not (tr1 > 0):
        raise DegenerateMatrixError(f"first argument has nonpositive trace {tr1:.6g}")
    value = trace_product(K1.values, l1.values - l2.values) / tr1
    return CrossEntropyResult(
        value=value,
        alpha=1.0,
        support=support,
        clamp_count=clamp_count,
        support_reverse=reverse,
    )


def tripartite_cross_entropy(K1, K12, K2, alpha):
    """Tripartite cross-entropy from raw Grams plus the cross Gram.

    K1 (n x n) and K2 (m x m) must be raw: the cross-information potential
    CIP = mean(K1) + mean(K2) - 2*mean(K12) is a plain grand mean, the biased
    squared-MMD estimate. The entropy term trace-normalizes K1 internally.
    Support inclusion (supp K2 inside supp K1) is reported when n == m, and
    never gates: the measure is defined through means, not inverse powers.
    """
    alpha = _as_alpha(alpha)
    if not isinstance(K1, GramMatrix) or not isinstance(K2, GramMatrix):
        raise ArgumentError("K1 and K2 must be GramMatrix instances")
    if K1.normalization != RAW or K2.normalization != RAW:
        raise ContractError(
            "tripartite expectations are grand means of raw Gram matrices; "
            "pass un-normalized inputs"
        )
    n = K1.n
    m = K2.n
    if K12.values.shape != (n, m):
        raise ArgumentError(
            f"cross Gram shape {K12.values.shape} inconsistent with ({n}, {m})"
        )
    support = None
    if n == m:
        support = support_included(K2, K1)
    cip = float(K1.values.mean()) + float(K2.values.mean()) - 2.0 * float(K12.values.mean())
    a = alpha.value
    if cip < ZERO_CIP_FLOOR:
        sentinel = -math.inf if a > 1.0 else math.inf
        return CrossEntropyResult(
            value=sentinel,
            alpha=a,
            support=support,
            degenerate=DEGENERATE_ZERO_CIP,
        )
    s, clamped = _clamped_power_sum(normalize_trace(K1).values, a)
    entropy_term = math.log(s) / (a - 1.0)
    value = math.log(cip) / (a - 1.0) + entropy_term
    return CrossEntropyResult(
        value=value,
        alpha=a,
        support=support,
        clamp_count=clamped,
        entropy_term=entropy_term,
    )


def matrix_renyi_entropy(K, alpha):
    """Matrix Renyi entropy S_a(K) = (1-a)^-1 log tr(K^a) of a unit-trace Gram.

    The maximally mixed identity/n maps to log n and any rank-one unit-trace
    matrix to 0, matching S_a(K) = log n - C_a(K || identity/n) exactly.
    """
    alpha = _as_alpha(alpha)
    _check_trace_contract(K, "K", raw=False)
    s, _ = _clamped_power_sum(K.values, alpha.value)
    if not (s > 0):
        raise DegenerateMatrixError("entropy of a rank-0 matrix")
    return math.log(s) / (1.0 - alpha.value)


def joint_entropy(K1, K2, alpha):
    """Entropy of the unit-trace-normalized Hadamard product of K1 and K2."""
    return matrix_renyi_entropy(hadamard_joint(K1, K2), alpha)


def conditional_entropy(K1, K2, alpha):
    """S_a(K1 | K2) = S_a(K1, K2) - S_a(K2)."""
    return joint_entropy(K1, K2, alpha) - matrix_renyi_entropy(K2, alpha)


def mutual_information(K1, K2, alpha):
    """I_a(K1; K2) = S_a(K1) - S_a(K1 | K2) = S(K1) + S(K2) - S(K1, K2)."""
    return matrix_renyi_entropy(K1, alpha) - conditional_entropy(K1, K2, alpha)


def _min_supported_eigenvalue(values, name):
    w = sym_eig(values).eigenvalues
    tau = clamp_threshold(w)
    kept = w[w > tau]
    if kept.size == 0:
        raise DegenerateMatrixError(f"{name} has numerical rank 0")
    return float(kept[-1]), float(w[0])


def trace_distance_bounds(K1, K2):
    """Upper bounds on the order-1 value from minimal nonzero eigenvalues.

    Returns (loose_bound, tight_bound) with

        loose = (l2 + w/2) log(1 + w/(2 l2)) - l1 log(1 + w/(2 l1))
        tight = w * l1_max * (log l1 - log l2) / (l1 - l2)

    where l1, l2 are the minimal nonzero eigenvalues, l1_max is K1's largest
    eigenvalue, and w is the entrywise l1 distance between the matrices. When
    l1 = l2 (within 1e-12) the tight bound's removable singularity is replaced
    by its ceiling l1_max * w / min(l1, l2).
    """
    if K1.values.shape != K2.values.shape:
        raise ArgumentError(
            f"size mismatch: {K1.values.shape} vs {K2.values.shape}"
        )
    l1, l1_max = _min_supported_eigenvalue(K1.values, "K1")
    l2, _ = _min_supported_eigenvalue(K2.values, "K2")
    omega = float(np.sum(np.abs(K1.values - K2.values)))
    loose = (l2 + omega / 2.0) * math.log1p(omega / (2.0 * l2)) - l1 * math.log1p(
        omega / (2.0 * l1)
    )
    if abs(l1 - l2) <= 1e-12:
        tight = l1_max * omega / min(l1, l2)
    else:
        tight = omega * l1_max * (math.log(l1) - math.log(l2)) / (l1 - l2)
    return loose, tight
