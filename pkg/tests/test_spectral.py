import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlgrad.errors import ConvexityViolated, TooLargeN, TooSmallN
from nlgrad.kernel import DiscreteKernel, gamma_constant
from nlgrad.spectral import (
    CirculantSpec,
    analytic_bound,
    circulant_eigenvalues,
    circulant_from_kernel,
    coercivity_constant,
    dense_eig_oracle,
    fejer_decomposition,
    fejer_kernel,
    fejer_reconstruct,
    jacobi_eigenvalues,
    min_symbol,
    symbol_phi,
)

from conftest import discrete_kernels


def brute_phi(sigma, t):
    return sigma[0] + sum(2 * s * math.cos(j * t) for j, s in enumerate(sigma) if j > 0)


def test_circulant_from_two_weights():
    spec = circulant_from_kernel(DiscreteKernel([2, 1]), 8)
    assert list(spec.sigma) == [3.0, 1.0] and spec.n == 1
    A = spec.matrix()
    assert A[0, 0] == 3 and A[0, 1] == 1 and A[0, 7] == 1 and A[0, 2] == 0


def test_circulant_single_weight():
    spec = circulant_from_kernel(DiscreteKernel([1]), 5)
    np.testing.assert_array_equal(spec.matrix(), np.eye(5))


def test_circulant_too_small():
    with pytest.raises(TooSmallN):
        circulant_from_kernel(DiscreteKernel([3, 2, 1]), 4)
    circulant_from_kernel(DiscreteKernel([3, 2, 1]), 5)


def test_matrix_is_symmetric_banded():
    spec = CirculantSpec([6, 3, 1], 11)
    A = spec.matrix()
    np.testing.assert_array_equal(A, A.T)
    for i in range(11):
        for j in range(11):
            d = min((i - j) % 11, (j - i) % 11)
            assert A[i, j] == ([6, 3, 1][d] if d <= 2 else 0)


@pytest.mark.parametrize("sigma, t, val", [([3, 1], 0.0, 5.0), ([3, 1], math.pi, 1.0), ([1], 1.234, 1.0)])
def test_symbol_values(sigma, t, val):
    assert symbol_phi(sigma, t) == pytest.approx(val, abs=1e-15)


def test_fejer_examples():
    np.testing.assert_allclose(fejer_decomposition(CirculantSpec([3, 1], 5)).fejer_coeffs, [1, 1])
    np.testing.assert_allclose(fejer_decomposition([1]).fejer_coeffs, [1])
    with pytest.raises(ConvexityViolated) as exc:
        fejer_decomposition([2, 1, 1])
    assert exc.value.j == 2


@pytest.mark.parametrize("j", [1, 2, 3, 7, 20])
def test_fejer_kernel_matches_cosine_sum(j):
    t = np.concatenate([np.linspace(-math.pi, math.pi, 401), [0.0, 1e-9, -3e-7, 2e-6]])
    direct = j + sum(2 * (j - m) * np.cos(m * t) for m in range(1, j))
    np.testing.assert_allclose(fejer_kernel(j, t), direct, rtol=1e-10, atol=1e-10)
    assert fejer_kernel(j, 0.0) == j * j
    assert np.all(fejer_kernel(j, t) >= 0)


@given(discrete_kernels())
def test_fejer_reconstruction_recovers_symbol(k):
    t = np.linspace(0, math.pi, 257)
    np.testing.assert_allclose(fejer_reconstruct(fejer_decomposition(k.tails).fejer_coeffs, t),
                               symbol_phi(k.tails, t), rtol=1e-10, atol=1e-10 * k.tails[0])


@given(discrete_kernels())
def test_symbol_at_zero_is_K_and_bounded_below(k):
    assert symbol_phi(k.tails, 0.0) == pytest.approx(gamma_constant(k), rel=1e-12)
    c1 = analytic_bound(k.tails)
    assert c1 == pytest.approx(k.weights[0] - (k.weights[1] if k.M > 1 else 0.0), rel=1e-12)
    assert min_symbol(k.tails) >= c1 * (1 - 1e-12) - 1e-12


def test_min_symbol_hand_oracle():
    # 6 + 6 cos t + 2 cos 2t has its minimum where cos t = -3/4
    assert min_symbol([6, 3, 1]) == pytest.approx(1.75, abs=1e-12)
    assert brute_phi([6, 3, 1], math.acos(-0.75)) == pytest.approx(1.75, abs=1e-14)


def test_min_symbol_grid_floor():
    with pytest.raises(ValueError):
        min_symbol([3, 1], grid_points=100)


def test_eigenvalue_examples():
    np.testing.assert_allclose(circulant_eigenvalues(CirculantSpec([3, 1], 4)), [1, 3, 3, 5], atol=1e-14)
    np.testing.assert_allclose(circulant_eigenvalues(CirculantSpec([1], 3)), [1, 1, 1])
    np.testing.assert_allclose(dense_eig_oracle(CirculantSpec([1], 5)), np.ones(5), atol=1e-14)


def test_dense_oracle_size_limit():
    with pytest.raises(TooLargeN):
        dense_eig_oracle(CirculantSpec([3, 1], 65))


@pytest.mark.parametrize("n", [2, 5, 17, 40])
def test_jacobi_against_lapack(rng, n):
    a = rng.standard_normal((n, n))
    a = a + a.T
    np.testing.assert_allclose(jacobi_eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-10)


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))


@settings(max_examples=25, deadline=None)
@given(discrete_kernels(max_M=6), st.integers(13, 40))
def test_symbol_eigenvalues_match_dense_oracle(k, N):
    spec = circulant_from_kernel(k, N)
    np.testing.assert_allclose(circulant_eigenvalues(spec), dense_eig_oracle(spec),
                               rtol=1e-10, atol=1e-10 * k.tails[0])


@pytest.mark.parametrize("w", [[2, 1], [3, 2, 1], [5, 4, 2, 1]])
def test_coercivity_constant_independent_of_N(w):
    k = DiscreteKernel(w)
    c1 = analytic_bound(k.tails)
    for N in range(2 * k.M + 1, 200, 7):
        a = coercivity_constant(k, N)
        assert a.lambda_min >= c1 * (1 - 1e-12)
        assert a.coercivity_Lambda >= a.bound_Lambda * (1 - 1e-12)


def test_coercivity_constant_three_weights():
    a = coercivity_constant(DiscreteKernel([3, 2, 1]), 64)
    brute = min(brute_phi([6, 3, 1], 2 * math.pi * j / 64) for j in range(64))
    assert a.lambda_min == pytest.approx(brute, rel=1e-12)
    assert a.coercivity_Lambda == pytest.approx(brute ** 2, rel=1e-12)
    assert a.min_phi_bound == 1.0 and a.bound_Lambda == 1.0
