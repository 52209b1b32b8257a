"""Self-checks: random instances, pinching, and the property suite.

run_property_suite exercises the estimator identities and inequalities that
hold for every well-formed input (nullity, invariance, scaling, additivity,
order monotonicity, measure ordering, data processing under pinching,
continuity, midpoint convexity of the trace functionals) on randomly
generated Gram pairs. Violations are reported, not raised, so a failing
property shows up as a report entry with ``passed=False``.

The ``tamper`` argument exists to prove the suite can fail: it injects a
known offset into the scaling check and nothing else.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .estimators import (
    mirrored_cross_entropy,
    mirrored_cross_entropy_two_param,
    nonmirrored_cross_entropy,
    tripartite_cross_entropy,
)
from .kernels import (
    UNIT_TRACE,
    CrossGram,
    GramMatrix,
    KernelSpec,
    SampleSet,
    gram_cross,
    gram_univariate,
    normalize_trace,
)
from .psd_linalg import clamp_threshold, matrix_power, sym_eig, trace_product

DEFAULT_SIZES = (4, 16, 64)
DEFAULT_ALPHA_GRID = (0.3, 0.5, 0.7, 1.5, 2.0, 4.0)
TAMPER_MODES = ("scaling",)


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of indices covering range(n) exactly once."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        if not blocks or any(len(b) == 0 for b in blocks):
            raise ArgumentError("partition needs at least one non-empty block")
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(len(flat))):
            raise ArgumentError(
                "partition blocks must cover 0..n-1 with no repeats or gaps"
            )
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self):
        return sum(len(b) for b in self.blocks)


def halves(n):
    """Two-block partition splitting range(n) down the middle."""
    mid = n // 2
    return Partition((tuple(range(mid)), tuple(range(mid, n))))


def pinch(G, partition):
    """Block-diagonal restriction of a Gram matrix.

    Zeroes every entry outside the partition's diagonal blocks. The diagonal
    is untouched, so the trace is preserved exactly and the normalization
    flag carries over. Idempotent, and pinching by a refinement after a
    coarsening equals pinching by the refinement alone.
    """
    if partition.n != G.n:
        raise ArgumentError(f"partition covers {partition.n} indices, matrix has {G.n}")
    out = np.zeros_like(G.values)
    for block in partition.blocks:
        idx = np.asarray(block, dtype=int)
        out[np.ix_(idx, idx)] = G.values[np.ix_(idx, idx)]
    return GramMatrix(out, normalization=G.normalization, clamp_count=G.clamp_count)


def random_orthogonal(seed, n):
    """Haar-ish random orthogonal matrix via QR with the sign convention fixed."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def random_gram(seed, n, d=3, spec=None):
    """Unit-trace Gram of n standard-normal points in d dimensions."""
    if spec is None:
        spec = KernelSpec()
    rng = np.random.default_rng(seed)
    X = SampleSet(rng.standard_normal((n, d)))
    return normalize_trace(gram_univariate(spec, X))


@dataclass(frozen=True)
class PropertyReport:
    name: str
    instances: int
    max_violation: float
    tolerance: float
    passed: bool


class _Tally:
    """Accumulates violations for one property."""

    def __init__(self, name, tolerance):
        self.name = name
        self.tolerance = tolerance
        self.count = 0
        self.worst = 0.0

    def add(self, violation):
        self.count += 1
        if violation > self.worst:
            self.worst = float(violation)

    def report(self):
        return PropertyReport(
            name=self.name,
            instances=self.count,
            max_violation=self.worst,
            tolerance=self.tolerance,
            passed=self.worst <= self.tolerance,
        )


def _child_seed(seed, *path):
    ss = np.random.SeedSequence([int(seed)] + [int(p) for p in path])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _conjugate(Q, K):
    M = Q @ K.values @ Q.T
    M = 0.5 * (M + M.T)
    return GramMatrix(M, normalization=UNIT_TRACE)


def _scaled(G, rho):
    return GramMatrix(rho * G.values)


def _power_trace(values, p):
    w = sym_eig(values).eigenvalues
    tau = clamp_threshold(w)
    return float(np.sum(w[w > tau] ** p))


def _functional_nonmirrored(A, B, a):
    pa = matrix_power(A, a)
    pb = matrix_power(B, 1.0 - a)
    return trace_product(pa.values, pb.values)


def _functional_mirrored(A, B, a):
    half = matrix_power(B, (1.0 - a) / (2.0 * a))
    M = half.values @ A @ half.values
    M = 0.5 * (M + M.T)
    return _power_trace(M, a)


def _mix(A, B):
    return 0.5 * (A + B)


@dataclass(frozen=True)
class _Instance:
    """One randomly drawn test instance: four unit-trace Grams plus the raw
    sample-level triple used by the tripartite checks."""

    n: int
    K1: GramMatrix
    K2: GramMatrix
    K3: GramMatrix
    K4: GramMatrix
    G1_raw: GramMatrix
    G2_raw: GramMatrix
    C12: CrossGram
    k1_lambda_min: float


def _draw_instance(seed, k, size_index, n, spec):
    # d = 5 keeps the worst-case condition number across draws near 1.5e2;
    # the inverse-power round-trips (order 4 needs K^-3) lose roughly
    # eps * cond^2, so this leaves two orders of magnitude under the
    # tightest suite tolerance
    xs = []
    for j in range(4):
        rng = np.random.default_rng(_child_seed(seed, k, size_index, j))
        xs.append(SampleSet(rng.standard_normal((n, 5))))
    grams_raw = [gram_univariate(spec, X) for X in xs]
    grams = [normalize_trace(g) for g in grams_raw]
    C12 = gram_cross(spec, xs[0], xs[1])
    lam_min = float(np.linalg.eigvalsh(grams[0].values)[0])
    return _Instance(
        n=n,
        K1=grams[0],
        K2=grams[1],
        K3=grams[2],
        K4=grams[3],
        G1_raw=grams_raw[0],
        G2_raw=grams_raw[1],
        C12=C12,
        k1_lambda_min=lam_min,
    )


def run_property_suite(
    seed=0,
    sizes=DEFAULT_SIZES,
    alpha_grid=DEFAULT_ALPHA_GRID,
    n_seeds=20,
    tamper=None,
):
    """Run every property family on random instances; return a report list.

    Each entry carries the property name, how many assertions were checked,
    the worst violation seen, the tolerance, and the pass flag. tamper may be
    "scaling" to deliberately break the scaling check (for testing that the
    suite detects violations).
    """
    if tamper is not None and tamper not in TAMPER_MODES:
        raise ArgumentError(f"unknown tamper mode {tamper!r}; known: {TAMPER_MODES}")
    alphas = sorted(float(a) for a in alpha_grid)
    spec = KernelSpec()

    nullity = _Tally("nullity", 1e-10)
    nonneg = _Tally("non-negativity", 1e-10)
    cip_nonneg = _Tally("cip-non-negativity", 1e-12)
    invariance = _Tally("unitary-invariance", 1e-9)
    scaling = _Tally("scaling-law", 1e-9)
    additivity = _Tally("tensor-additivity", 1e-8)
    monotone = _Tally("order-monotonicity", 1e-10)
    ordering = _Tally("measure-ordering", 1e-10)
    dpi = _Tally("pinching-dpi", 1e-9)
    continuity = _Tally("continuity", 1e-3)
    convexity = _Tally("midpoint-convexity", 1e-9)

    tamper_offset = 1e-3 if tamper == "scaling" else 0.0
    rho1, rho2 = 1.7, 0.4

    for k in range(n_seeds):
        for si, n in enumerate(sizes):
            inst = _draw_instance(seed, k, si, n, spec)
            K1, K2 = inst.K1, inst.K2

            # base values, reused by several checks below
            c_non = {a: nonmirrored_cross_entropy(K1, K2, a).value for a in alphas}
            c_mir = {a: mirrored_cross_entropy(K1, K2, a).value for a in alphas}
            c_tri = {
                a: tripartite_cross_entropy(inst.G1_raw, inst.C12, inst.G2_raw, a).value
                for a in alphas
            }
            cip = (
                float(inst.G1_raw.values.mean())
                + float(inst.G2_raw.values.mean())
                - 2.0 * float(inst.C12.values.mean())
            )
            cip_nonneg.add(max(0.0, -cip))
            cip_below_one = cip < 1.0

            for a in alphas:
                nullity.add(abs(nonmirrored_cross_entropy(K1, K1, a).value))
                nullity.add(abs(mirrored_cross_entropy(K1, K1, a).value))
                nonneg.add(max(0.0, -c_non[a]))
                nonneg.add(max(0.0, -c_mir[a]))

            Q = random_orthogonal(_child_seed(seed, k, si, 100), n)
            K1q = _conjugate(Q, K1)
            K2q = _conjugate(Q, K2)
            for a in alphas:
                beta = max(a, 1.0 - a)
                invariance.add(
                    abs(nonmirrored_cross_entropy(K1q, K2q, a).value - c_non[a])
                )
                invariance.add(
                    abs(mirrored_cross_entropy(K1q, K2q, a).value - c_mir[a])
                )
                base_tp = mirrored_cross_entropy_two_param(K1, K2, a, beta).value
                conj_tp = mirrored_cross_entropy_two_param(K1q, K2q, a, beta).value
                invariance.add(abs(conj_tp - base_tp))

            G1, G2 = inst.G1_raw, inst.G2_raw
            G1s, G2s = _scaled(G1, rho1), _scaled(G2, rho2)
            expected = math.log(rho1 / rho2)
            for a in alphas:
                for measure in (nonmirrored_cross_entropy, mirrored_cross_entropy):
                    diff = (
                        measure(G1s, G2s, a, raw=True).value
                        - measure(G1, G2, a, raw=True).value
                    )
                    scaling.add(abs(diff - expected) + tamper_offset)
                tri_scaled = tripartite_cross_entropy(
                    _scaled(G1, rho1), CrossGram(rho1 * inst.C12.values), _scaled(G2, rho1), a
                ).value
                tri_expected = math.log(rho1) / (a - 1.0)
                scaling.add(abs(tri_scaled - c_tri[a] - tri_expected) + tamper_offset)

            for lo, hi in zip(alphas, alphas[1:]):
                monotone.add(max(0.0, c_non[lo] - c_non[hi]))
                monotone.add(max(0.0, c_mir[lo] - c_mir[hi]))
                # the tripartite CIP term has a pole at order 1, so its
                # monotonicity only holds with both orders on the same side
                same_side = (lo < 1.0) == (hi < 1.0)
                if cip_below_one and same_side:
                    monotone.add(max(0.0, c_tri[lo] - c_tri[hi]))

            for a in (0.5, 2.0):
                nm = nonmirrored_cross_entropy(K1, K2, a).value
                mi = mirrored_cross_entropy(K1, K2, a).value
                ordering.add(max(0.0, mi - nm))

            part = halves(n)
            P1, P2 = pinch(K1, part), pinch(K2, part)
            for a in alphas:
                if 0.0 < a <= 2.0:
                    dpi.add(
                        max(0.0, nonmirrored_cross_entropy(P1, P2, a).value - c_non[a])
                    )
                if a >= 0.5:
                    dpi.add(
                        max(0.0, mirrored_cross_entropy(P1, P2, a).value - c_mir[a])
                    )

            if inst.k1_lambda_min > 1e-3:
                noise_rng = np.random.default_rng(_child_seed(seed, k, si, 300))
                S = noise_rng.standard_normal((n, n))
                S = 0.5 * (S + S.T)
                noise = 1e-6 * S / np.linalg.norm(S)
                K1p = normalize_trace(GramMatrix(K1.values + noise))
                for a in alphas:
                    continuity.add(
                        abs(nonmirrored_cross_entropy(K1p, K2, a).value - c_non[a])
                    )
                    continuity.add(
                        abs(mirrored_cross_entropy(K1p, K2, a).value - c_mir[a])
                    )

            A1, A2 = K1.values, K2.values
            B1, B2 = inst.K3.values, inst.K4.values
            M1, M2 = _mix(A1, B1), _mix(A2, B2)
            for a in alphas:
                if a != 1.0 and a <= 2.0:
                    mid = _functional_nonmirrored(M1, M2, a)
                    avg = 0.5 * (
                        _functional_nonmirrored(A1, A2, a)
                        + _functional_nonmirrored(B1, B2, a)
                    )
                    gap = mid - avg if a > 1.0 else avg - mid
                    convexity.add(max(0.0, gap))
                if a >= 0.5:
                    mid = _functional_mirrored(M1, M2, a)
                    avg = 0.5 * (
                        _functional_mirrored(A1, A2, a)
                        + _functional_mirrored(B1, B2, a)
                    )
                    gap = mid - avg if a > 1.0 else avg - mid
                    convexity.add(max(0.0, gap))

        # tensor additivity on a small kron pair, once per seed
        a1 = random_gram(_child_seed(seed, k, 200), 2)
        a2 = random_gram(_child_seed(seed, k, 201), 2)
        b1 = random_gram(_child_seed(seed, k, 202), 3)
        b2 = random_gram(_child_seed(seed, k, 203), 3)
        kron1 = GramMatrix(np.kron(a1.values, b1.values), normalization=UNIT_TRACE)
        kron2 = GramMatrix(np.kron(a2.values, b2.values), normalization=UNIT_TRACE)
        for a in alphas:
            for measure in (nonmirrored_cross_entropy, mirrored_cross_entropy):
                whole = measure(kron1, kron2, a).value
                parts = measure(a1, a2, a).value + measure(b1, b2, a).value
                additivity.add(abs(whole - parts))

    return [
        t.report()
        for t in (
            nullity,
            nonneg,
            cip_nonneg,
            invariance,
            scaling,
            additivity,
            monotone,
            ordering,
            dpi,
            continuity,
            convexity,
        )
    ]
