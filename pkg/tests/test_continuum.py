import math

import numpy as np
import pytest
from scipy import integrate

from nlgrad.continuum import (
    SampledField,
    _quad,
    bump_sum,
    cell_averages,
    continuum_gradient,
    discrete_continuum_identity,
    equicoercivity_check,
    gradient_pair,
    oscillating_field,
    riesz_bound,
    riesz_c,
    riesz_counterexample,
    riesz_gradient_grid,
    smooth_bump,
    step_kernel,
)
from nlgrad.errors import QuadratureNonConvergent
from nlgrad.kernel import ContinuumKernel, continuum_constant, gamma_constant


def linear_field(half_width=5.0):
    return SampledField(lambda x: np.where(np.abs(x) < half_width, x, 0.0), (-half_width, half_width))


@pytest.mark.parametrize("kernel", [ContinuumKernel.tent(1.0), ContinuumKernel.truncated_riesz(0.5, 1.0),
                                    ContinuumKernel.indicator(1.0)])
@pytest.mark.parametrize("eps", [1e-2, 1e-3])
def test_linear_field_gives_K(kernel, eps):
    K = continuum_constant(kernel)
    assert continuum_gradient(linear_field(), kernel, eps, 0.3) == pytest.approx(K, abs=1e-6)


def test_even_field_vanishes_at_centre():
    u = smooth_bump(0.2, 0.7)
    for k in (ContinuumKernel.tent(1.0), ContinuumKernel.truncated_riesz(0.4, 1.0)):
        assert abs(continuum_gradient(u, k, 0.1, 0.2)) < 1e-10


def test_zero_field():
    zero = SampledField(lambda x: 0.0 * x, (-1.0, 1.0))
    assert continuum_gradient(zero, ContinuumKernel.tent(1.0), 0.1, 0.0) == 0.0


def test_smooth_limit_is_K_times_derivative():
    u = smooth_bump(0.0, 1.0)
    k = ContinuumKernel.tent(1.0)
    x, h = 0.3, 1e-6
    du = (u(x + h) - u(x - h)) / (2 * h)
    g = continuum_gradient(u, k, 1e-3, x)
    assert g == pytest.approx(continuum_constant(k) * du, rel=1e-4)


def test_quadrature_failure_is_reported():
    with pytest.raises(QuadratureNonConvergent):
        _quad(lambda t: math.sin(1 / t) / t, 1e-8, 1.0, 1e-12, limit=5)


def test_bumps_are_compactly_supported():
    u = bump_sum([0.0, 0.5], [0.2, 0.1], [1.0, -2.0])
    assert u.support == (-0.2, 0.6)
    assert u(np.array([-0.3, 0.7])).tolist() == [0.0, 0.0]
    assert u(0.0) == pytest.approx(1.0)
    assert u(0.5) == pytest.approx(-2.0)


def test_cell_averages_of_linear_function():
    eps, M = 1 / 8, 4
    pipe = cell_averages(linear_field(1.0), eps, M)
    h = eps / M
    mid = h * (pipe.averages.indices - 0.5)
    inside = np.abs(mid) < 1 - h
    np.testing.assert_allclose(pipe.averages.values[inside], mid[inside], atol=1e-13)
    # quotient j compares cells j and j-1
    both = inside[1:] & inside[:-1]
    np.testing.assert_allclose(pipe.quotients.values[1:-1][both], 1.0, atol=1e-10)


def test_cell_average_of_single_cell_indicator():
    eps, M = 1 / 8, 4
    h = eps / M
    u = SampledField(lambda x: np.where((x > 0) & (x < h), 1.0, 0.0), (0.0, h))
    pipe = cell_averages(u, eps, M)
    np.testing.assert_allclose(pipe.averages.window(-3, 4), [0, 0, 0, 0, 1, 0, 0], atol=1e-12)


def test_difference_quotients_converge_second_order():
    u = smooth_bump(0.0, 0.9)
    x0, hd = 0.35, 1e-6
    errs, hs = [], []
    for eps in (1 / 8, 1 / 16, 1 / 32):
        pipe = cell_averages(u, eps, 4)
        h = pipe.averages.spacing
        j = int(round(x0 / h))
        # quotient at j is centred at h (j - 1)
        x = h * (j - 1)
        du = (u(x + hd) - u(x - hd)) / (2 * hd)
        errs.append(abs(pipe.quotients.at(j) - du))
        hs.append(h)
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope > 1.8


def test_step_kernel_falls_back_for_tent():
    k, used = step_kernel(ContinuumKernel.tent(1.0), 4, "left")
    assert used == "midpoint"
    np.testing.assert_allclose(k.weights, [7 / 8, 5 / 8, 3 / 8, 1 / 8])
    k, used = step_kernel(ContinuumKernel.truncated_riesz(0.5), 4, "left")
    assert used == "left"


@pytest.mark.parametrize("M", [2, 4])
@pytest.mark.parametrize("eps", [1 / 8, 1 / 16])
def test_identity_on_bump(M, eps):
    assert discrete_continuum_identity(smooth_bump(0.1, 0.8), ContinuumKernel.tent(1.0), eps, M) <= 1e-7


def test_identity_riesz_left_steps():
    u = bump_sum([0.0, 0.3], [0.4, 0.2], [1.0, 0.5])
    assert discrete_continuum_identity(u, ContinuumKernel.truncated_riesz(0.5), 1 / 8, 4) <= 1e-7


def test_identity_on_linear_plateau():
    eps, M = 1 / 8, 4
    pair = gradient_pair(linear_field(1.0), ContinuumKernel.tent(1.0), eps, M)
    K = gamma_constant(pair.kernel)
    centre = np.abs(pair.points) < 0.5
    np.testing.assert_allclose(pair.discrete[centre], K / M ** 2, rtol=1e-12)
    np.testing.assert_allclose(pair.continuum[centre], K / M ** 2, rtol=1e-8)


def test_identity_zero_field():
    zero = SampledField(lambda x: 0.0 * x, (-0.5, 0.5))
    assert discrete_continuum_identity(zero, ContinuumKernel.tent(1.0), 1 / 8, 2) == 0.0


def test_equicoercivity(rng):
    for _ in range(3):
        centres = rng.uniform(-0.5, 0.5, 3)
        u = bump_sum(centres, rng.uniform(0.1, 0.4, 3), rng.uniform(-1, 1, 3))
        cert = equicoercivity_check(u, ContinuumKernel.tent(1.0), 1 / 16, 3)
        assert cert.passed and cert.sampled_energy > 0


def test_riesz_constants():
    assert riesz_c(0.5) == pytest.approx(12.0)
    assert riesz_bound(0.5, 2.0, 0.25) == pytest.approx(8 * 144 * 0.5)


def test_oscillating_field_is_small():
    u = oscillating_field(0.25, 2.0)
    t = np.linspace(-3, 3, 10001)
    assert np.max(np.abs(u(t))) <= 0.25 ** 2
    assert np.all(u(t[np.abs(t) >= 2]) == 0)


def test_riesz_fft_matches_direct_quadrature():
    eps, R = 0.5, 2.0
    t, g = riesz_gradient_grid(0.5, R, eps, 64)
    u = oscillating_field(eps, R)
    # untruncated on the support of u
    k = ContinuumKernel.truncated_riesz(0.5, 2 * R / eps + 4)
    scale = np.max(np.abs(g))
    for j in (10, len(t) // 3, len(t) // 2):
        ref = continuum_gradient(u, k, eps, t[j], tol=1e-7)
        assert abs(g[j] - ref) <= 5e-3 * scale


def test_riesz_resolution_converges():
    e48 = riesz_counterexample(0.5, 2.0, 0.25, 48)[0]
    e96 = riesz_counterexample(0.5, 2.0, 0.25, 96)[0]
    assert e48 == pytest.approx(e96, rel=1e-2)


def exact_dirichlet(eps, R):
    w = 1 / eps ** 2
    # cos^2 over the plateau plus (cos(wt)(R-|t|) - eps^2 sin(wt))^2 over both ramps
    plateau = (R - 1) + math.sin(2 * w * (R - 1)) / (2 * w)

    def ramp(t):
        return (math.cos(w * t) * (R - t) - eps ** 2 * math.sin(w * t)) ** 2

    pts = np.linspace(R - 1, R, 400)
    ramps = 2 * sum(integrate.quad(ramp, a, b, epsabs=1e-13)[0] for a, b in zip(pts[:-1], pts[1:]))
    return plateau + ramps


def test_riesz_energy_below_bound_and_dirichlet_exact():
    for eps in (0.5, 0.25, 0.125):
        energy, bound, dirichlet = riesz_counterexample(0.5, 2.0, eps)
        assert energy <= bound
        assert dirichlet == pytest.approx(exact_dirichlet(eps, 2.0), rel=5e-3)
    # tends to 1/2 * 2(R-1) + 2 * 1/2 * 1/3 = 4/3 for R = 2
    assert exact_dirichlet(1 / 64, 2.0) == pytest.approx(4 / 3, rel=1e-3)


def test_riesz_argument_checks():
    with pytest.raises(ValueError):
        riesz_counterexample(1.0, 2.0, 0.1)
    with pytest.raises(ValueError):
        riesz_counterexample(0.5, 1.0, 0.1)
