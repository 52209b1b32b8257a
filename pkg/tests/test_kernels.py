"""Kernel evaluation and Gram construction."""

import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gramxent import (
    ArgumentError,
    DegenerateMatrixError,
    GramMatrix,
    KernelOverflowError,
    KernelSpec,
    SampleSet,
    eval_kernel,
    gram_cross,
    gram_univariate,
    hadamard_joint,
    normalize_trace,
)

GAUSS = KernelSpec("gaussian", 1.0)
EIP = KernelSpec("exponential-inner-product", 1.0)

EXP_MINUS_ONE = 0.36787944117144233


def oracle_gram(spec, X, Y):
    """Plain double-loop kernel evaluation, independent of the vectorized path."""
    n, m = len(X), len(Y)
    out = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            if spec.family == "gaussian":
                diff = np.asarray(X[i]) - np.asarray(Y[j])
                out[i, j] = math.exp(-spec.bandwidth * float(diff @ diff))
            else:
                out[i, j] = math.exp(
                    spec.bandwidth * float(np.asarray(X[i]) @ np.asarray(Y[j]))
                )
    return out


def rand_samples(seed, n, d, scale=1.0):
    return SampleSet(scale * np.random.default_rng(seed).standard_normal((n, d)))


# ---------------------------------------------------------------- eval_kernel

def test_eval_gaussian_zero_distance():
    assert eval_kernel(GAUSS, np.zeros(3), np.zeros(3)) == 1.0


def test_eval_gaussian_unit_distance():
    v = eval_kernel(GAUSS, np.array([1.0, 0.0]), np.array([0.0, 0.0]))
    npt.assert_allclose(v, EXP_MINUS_ONE, rtol=1e-15)


def test_eval_eip_orthogonal():
    assert eval_kernel(EIP, np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0


def test_eval_dimension_mismatch():
    with pytest.raises(ArgumentError):
        eval_kernel(GAUSS, np.zeros(2), np.zeros(3))


def test_eval_eip_overflow():
    s = np.array([30.0, 0.0])
    with pytest.raises(KernelOverflowError) as exc:
        eval_kernel(EIP, s, s)
    assert exc.value.exponent == pytest.approx(900.0)


def test_kernel_spec_validation():
    with pytest.raises(ArgumentError):
        KernelSpec("triangle", 1.0)
    with pytest.raises(ArgumentError):
        KernelSpec("gaussian", 0.0)


def test_sample_set_validation():
    with pytest.raises(ArgumentError):
        SampleSet(np.ones(4))  # not 2-d
    with pytest.raises(ArgumentError):
        SampleSet(np.array([[1.0, np.nan]]))


# ------------------------------------------------------------- gram matrices

def test_gram_single_sample_is_one():
    G = gram_univariate(GAUSS, SampleSet(np.array([[2.0, -1.0]])))
    npt.assert_array_equal(G.values, [[1.0]])


def test_gram_identical_samples_all_ones():
    X = SampleSet(np.array([[0.5, 0.5], [0.5, 0.5]]))
    npt.assert_array_equal(gram_univariate(GAUSS, X).values, np.ones((2, 2)))


@pytest.mark.parametrize("spec", [GAUSS, EIP], ids=["gaussian", "eip"])
def test_gram_matches_double_loop_oracle(spec):
    X = rand_samples(7, 3, 4)
    G = gram_univariate(spec, X)
    npt.assert_allclose(G.values, oracle_gram(spec, X.data, X.data), atol=1e-14)


def test_gram_is_bit_exact_symmetric():
    X = rand_samples(11, 17, 3)
    for spec in (GAUSS, EIP):
        V = gram_univariate(spec, X).values
        assert np.array_equal(V, V.T)


def test_gram_eip_overflow_names_pair():
    X = SampleSet(np.array([[0.0, 0.0], [40.0, 0.0], [0.1, 30.0]]))
    with pytest.raises(KernelOverflowError) as exc:
        gram_univariate(EIP, X)
    assert (exc.value.i, exc.value.j) == (1, 1)
    assert "(1, 1)" in str(exc.value)


@pytest.mark.parametrize("spec", [GAUSS, EIP], ids=["gaussian", "eip"])
@pytest.mark.parametrize("n", [2, 31, 257])
def test_gram_numerically_psd(spec, n):
    """Minimum eigenvalue stays above the -n*eps*lambda_max floor."""
    G = gram_univariate(spec, rand_samples(n, n, 3, scale=0.6)).values
    w = np.linalg.eigvalsh(G)
    assert w[0] >= -n * np.finfo(float).eps * w[-1]
    assert (G >= 0).all()


def test_gaussian_gram_translation_invariant():
    X = rand_samples(3, 12, 5)
    shift = np.array([3.0, -1.0, 0.5, 2.0, -7.0])
    G1 = gram_univariate(GAUSS, X).values
    G2 = gram_univariate(GAUSS, SampleSet(X.data + shift)).values
    npt.assert_allclose(G1, G2, atol=1e-12)


def test_eip_gram_translation_varying():
    X = rand_samples(3, 12, 5)
    G1 = gram_univariate(EIP, X).values
    G2 = gram_univariate(EIP, SampleSet(X.data + 1.0)).values
    assert np.abs(G1 - G2).max() > 1e-3


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=4),
)
def test_gram_psd_and_symmetric_property(seed, n, d):
    X = rand_samples(seed, n, d)
    for spec in (GAUSS, EIP):
        G = gram_univariate(spec, X)
        assert np.array_equal(G.values, G.values.T)
        w = np.linalg.eigvalsh(G.values)
        assert w[0] >= -n * np.finfo(float).eps * max(w[-1], 1.0)


# ----------------------------------------------------------------- gram_cross

def test_cross_equals_univariate_on_same_set():
    X = rand_samples(5, 6, 2)
    npt.assert_array_equal(
        gram_cross(GAUSS, X, X).values, gram_univariate(GAUSS, X).values
    )


def test_cross_single_points_unit_distance():
    X = SampleSet(np.array([[1.0, 0.0]]))
    Y = SampleSet(np.array([[0.0, 0.0]]))
    npt.assert_allclose(gram_cross(GAUSS, X, Y).values, [[EXP_MINUS_ONE]], rtol=1e-15)


def test_cross_matches_oracle():
    X = rand_samples(1, 2, 3)
    Y = rand_samples(2, 3, 3)
    C = gram_cross(GAUSS, X, Y)
    assert C.values.shape == (2, 3)
    npt.assert_allclose(C.values, oracle_gram(GAUSS, X.data, Y.data), atol=1e-14)


def test_cross_dimension_mismatch():
    with pytest.raises(ArgumentError):
        gram_cross(GAUSS, rand_samples(1, 2, 3), rand_samples(2, 2, 4))


# ------------------------------------------------------------ normalize_trace

def test_normalize_identity():
    G = normalize_trace(GramMatrix(np.eye(2)))
    npt.assert_array_equal(G.values, np.eye(2) / 2)
    assert G.normalization == "unit-trace"


def test_normalize_all_ones():
    G = normalize_trace(GramMatrix(np.ones((3, 3))))
    npt.assert_allclose(G.values, np.full((3, 3), 1.0 / 3.0), rtol=1e-15)


def test_normalize_idempotent_exact():
    G = normalize_trace(GramMatrix(np.diag([2.0, 3.0])))
    again = normalize_trace(G)
    assert again is G  # flag short-circuit, not merely close


def test_normalize_near_unit_trace_raw_input():
    V = np.diag([0.25, 0.75])
    npt.assert_allclose(normalize_trace(GramMatrix(V)).values, V, atol=1e-15)


def test_normalize_zero_trace_degenerate():
    with pytest.raises(DegenerateMatrixError):
        normalize_trace(GramMatrix(np.zeros((2, 2))))


# ------------------------------------------------------------- hadamard_joint

def test_hadamard_all_ones_fixed_point():
    ones = normalize_trace(GramMatrix(np.ones((4, 4))))
    J = hadamard_joint(ones, ones)
    npt.assert_allclose(J.values, np.ones((4, 4)) / 4.0, rtol=1e-15)


def test_hadamard_with_identity_extracts_diagonal():
    K1 = normalize_trace(gram_univariate(GAUSS, rand_samples(9, 4, 2)))
    ident = normalize_trace(GramMatrix(np.eye(4)))
    J = hadamard_joint(K1, ident)
    expected = np.diag(np.diag(K1.values))
    expected /= expected.trace()
    npt.assert_allclose(J.values, expected, rtol=1e-13)


def test_hadamard_oracle_and_unit_trace():
    A = normalize_trace(gram_univariate(GAUSS, rand_samples(21, 5, 3)))
    B = normalize_trace(gram_univariate(GAUSS, rand_samples(22, 5, 3)))
    J = hadamard_joint(A, B)
    raw = A.values * B.values
    npt.assert_allclose(J.values, raw / raw.trace(), rtol=1e-13)
    assert abs(J.values.trace() - 1.0) <= 1e-12
    # Schur product of PSD matrices stays PSD
    w = np.linalg.eigvalsh(J.values)
    assert w[0] >= -5 * np.finfo(float).eps * w[-1]


def test_hadamard_size_mismatch():
    A = normalize_trace(GramMatrix(np.eye(3)))
    B = normalize_trace(GramMatrix(np.eye(4)))
    with pytest.raises(ArgumentError):
        hadamard_joint(A, B)


def test_unit_trace_flag_means_unit_trace():
    K = normalize_trace(gram_univariate(EIP, rand_samples(13, 9, 4)))
    assert abs(K.trace() - 1.0) <= 1e-12
