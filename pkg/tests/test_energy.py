import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlgrad.energy import (
    EnergyDensity,
    certificate_dimension,
    coercivity_check,
    dirichlet_energy,
    fit_order,
    gamma_convergence_sweep,
    gamma_target,
    general_energy,
    polynomial_bump,
    quadratic_energy,
    sine_bump,
)
from nlgrad.errors import EpsilonTooLarge
from nlgrad.grad1d import LatticeFunction1D
from nlgrad.kernel import DiscreteKernel

from conftest import discrete_kernels


def brute_dirichlet(vals, eps):
    padded = [0.0] + list(vals) + [0.0]
    return sum(eps * ((b - a) / eps) ** 2 for a, b in zip(padded, padded[1:]))


def brute_quadratic(vals, offset, w, eps):
    d = {offset + i: v for i, v in enumerate(vals)}
    M = len(w)
    total = 0.0
    for k in range(offset - 2 * M - 2, offset + len(vals) + 2 * M + 2):
        g = sum(rho * (d.get(k + i, 0.0) - d.get(k + 1 - i, 0.0)) for i, rho in enumerate(w, 1)) / eps
        total += eps * g * g
    return total


def test_dirichlet_linear_ramp():
    eps = 1 / 16
    u = LatticeFunction1D(eps * np.arange(17), 0, eps)
    assert dirichlet_energy(u) == pytest.approx(brute_dirichlet(u.values, eps), rel=1e-13)
    # 16 unit slopes plus the final drop from 1 to 0
    assert dirichlet_energy(u) == pytest.approx(16 * eps + 1 / eps, rel=1e-13)


def test_dirichlet_empty_and_zero():
    assert dirichlet_energy(LatticeFunction1D(np.zeros(0))) == 0.0
    assert dirichlet_energy(LatticeFunction1D(np.zeros(5), 0, 0.1)) == 0.0


@settings(max_examples=50, deadline=None)
@given(discrete_kernels(max_M=5), st.lists(st.floats(-3, 3), min_size=1, max_size=12), st.integers(-5, 5))
def test_quadratic_energy_matches_brute(k, vals, offset):
    u = LatticeFunction1D(vals, offset, 1 / 32)
    ref = brute_quadratic(vals, offset, k.weights, 1 / 32)
    assert quadratic_energy(u, k) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@given(st.floats(0.1, 10), st.lists(st.floats(-3, 3), min_size=1, max_size=12))
def test_single_weight_is_scaled_dirichlet(rho, vals):
    u = LatticeFunction1D(vals, 0, 0.125)
    assert quadratic_energy(u, DiscreteKernel([rho])) == pytest.approx(
        rho * rho * dirichlet_energy(u), rel=1e-12, abs=1e-12)


def test_general_energy_quadratic_density():
    u = LatticeFunction1D([0.3, -1.0, 2.0], 4, 0.1)
    k = DiscreteKernel([2, 1])
    assert general_energy(u, k, np.square) == pytest.approx(quadratic_energy(u, k), rel=1e-14)


def test_general_energy_offset_density_window():
    k = DiscreteKernel([2, 1])
    eps = 0.05
    u = LatticeFunction1D(np.zeros(7), 0, eps)
    # gradient window has 7 + 2M - 1 sites, each contributing f(0) = 1
    assert general_energy(u, k, lambda z: z * z + 1) == pytest.approx(eps * (7 + 2 * 2 - 1))


def test_growth_sandwich(rng):
    k = DiscreteKernel([3, 2, 1])
    dens = EnergyDensity(lambda z: 2 * z * z + np.cos(z) + 1, (0.0, 1.0, 3.0, 2.0))
    assert dens.check_growth()
    assert dens.check_convexity(rng)
    u = LatticeFunction1D(rng.standard_normal(20), 0, 1 / 64)
    n = len(u.values) + 2 * k.M - 1
    eps = u.spacing
    q = quadratic_energy(u, k)
    F = general_energy(u, k, dens)
    assert q + eps * n * 0.0 <= F <= 3 * q + eps * n * 2.0


def test_density_checks_reject_bad_density(rng):
    assert not EnergyDensity(lambda z: z ** 2, (0.0, 2.0, 3.0, 0.0)).check_growth()
    assert not EnergyDensity(lambda z: np.sin(z) + z * z / 1e6, (-1.0, 0.0, 1.0, 1.0)).check_convexity(rng, scale=5)


def test_certificate_zero_function():
    cert = coercivity_check(LatticeFunction1D(np.zeros(10), 0, 1 / 64), DiscreteKernel([2, 1]))
    assert cert.energy == 0 and cert.lower_bound == 0 and cert.passed


def test_certificate_single_weight_ratio_one(rng):
    u = LatticeFunction1D(rng.standard_normal(30), 0, 1 / 64)
    cert = coercivity_check(u, DiscreteKernel([1]))
    assert cert.ratio == pytest.approx(1.0, rel=1e-12)
    assert cert.Lambda == pytest.approx(1.0) and cert.passed


def test_certificate_rejects_large_eps():
    with pytest.raises(EpsilonTooLarge):
        coercivity_check(LatticeFunction1D([1.0], 0, 0.25), DiscreteKernel([2, 1]))


def test_certificate_dimension():
    assert certificate_dimension(LatticeFunction1D(np.zeros(10), 0, 1 / 64), 3) == 64 + 12
    assert certificate_dimension(LatticeFunction1D(np.zeros(100), 0, 1 / 64), 3) == 100 + 12


@pytest.mark.parametrize("w", [[2, 1], [3, 2, 1], [4, 3, 1.5, 0.2]])
def test_certificate_random_trials(rng, w):
    k = DiscreteKernel(w)
    for _ in range(100):
        u = LatticeFunction1D(rng.standard_normal(int(rng.integers(1, 60))), int(rng.integers(-30, 30)), 1 / 128)
        assert coercivity_check(u, k).passed


def test_gamma_targets():
    k = DiscreteKernel([2, 1])
    # integral of 16 x^2 (1 - x^2)^2 over (-1, 1) is 256/105
    assert gamma_target(polynomial_bump(), k) == pytest.approx(25 * 256 / 105, rel=1e-10)
    assert gamma_target(sine_bump(), k) == pytest.approx(25 * math.pi ** 2, rel=1e-10)
    zero = polynomial_bump().__class__(lambda x: 0 * x, lambda x: 0 * x, (-1.0, 1.0))
    assert gamma_target(zero, k, f=lambda z: z * z + 2) == pytest.approx(4.0)


def test_gamma_sweep_second_order():
    rows, order = gamma_convergence_sweep(polynomial_bump(), DiscreteKernel([2, 1]),
                                          [2.0 ** -p for p in range(4, 11)])
    assert 1.8 < order < 2.2
    assert rows[-1][4] < 1e-4


def test_fit_order_exact():
    eps = np.array([0.1, 0.05, 0.025])
    assert fit_order(eps, 3 * eps ** 2) == pytest.approx(2.0)
