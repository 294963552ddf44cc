"""Continuum nonlocal gradients, the cell-average bridge to the lattice, and
the Riesz oscillation counterexample.

Normalisation: with the scaled kernel ``rho_eps(xi) = rho(xi/eps)/eps`` the
continuum gradient is taken as

    grad u(x) = (1/eps) * int_0^inf rho_eps(xi) (u(x+xi) - u(x-xi)) dxi,

so that it tends to ``K u'(x)`` with ``K = int rho(|xi|)|xi|``, matching the
1/eps prefactor of the lattice gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, signal

from .energy import fit_order
from .errors import DegenerateTail, QuadratureNonConvergent
from .grad1d import LatticeFunction1D, nonlocal_gradient
from .kernel import ContinuumKernel, DiscreteKernel, discretize
from .spectral import coercivity_constant


@dataclass(frozen=True)
class SampledField:
    """Callable ``u`` vanishing outside ``support``."""

    u: Callable
    support: tuple
    smoothness: str = "smooth"
    kinks: tuple = ()

    def __call__(self, x):
        a, b = self.support
        x = np.asarray(x, dtype=float)
        inside = (x > a) & (x < b)
        out = np.where(inside, self.u(np.where(inside, x, 0.5 * (a + b))), 0.0)
        return out if out.ndim else float(out)


def smooth_bump(center: float = 0.0, radius: float = 1.0, amplitude: float = 1.0) -> SampledField:
    """C-infinity bump ``amplitude * exp(1 - 1/(1 - s^2))``, s = (x - center)/radius."""

    def f(x):
        s = (np.asarray(x, dtype=float) - center) / radius
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(np.abs(s) < 1, amplitude * np.exp(1.0 - 1.0 / (1.0 - s * s)), 0.0)

    return SampledField(f, (center - radius, center + radius))


def bump_sum(centers, radii, amplitudes) -> SampledField:
    parts = [smooth_bump(c, r, a) for c, r, a in zip(centers, radii, amplitudes)]
    lo = min(p.support[0] for p in parts)
    hi = max(p.support[1] for p in parts)

    def f(x):
        return sum(p(x) for p in parts)

    return SampledField(f, (lo, hi))


def _quad_err(f, a, b, epsabs, limit=200):
    val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=0.0, limit=limit, full_output=1)[:2]
    return val, err


def _quad(f, a, b, epsabs, limit=200):
    val, err = _quad_err(f, a, b, epsabs, limit)
    if err > 10 * epsabs and err > 1e-13 * abs(val):
        raise QuadratureNonConvergent(f"quadrature on [{a}, {b}] reached error {err:.3g}")
    return val


def continuum_gradient(u: SampledField, k: ContinuumKernel, eps: float, x: float,
                       tol: float = 1e-8, min_scale: float = 1e-12) -> float:
    """Antisymmetrically paired quadrature of the scaled nonlocal gradient at ``x``.

    Substituting ``xi = eps * eta`` gives
    ``(1/eps) * int_0^s rho(eta) (u(x + eps eta) - u(x - eps eta)) d eta``.
    Breakpoints are placed at kernel breakpoints, at the support ends of u,
    and (for singular kernels) on a dyadic ladder down to ``min_scale * s``.
    """
    s = k.support_radius
    pts = {0.0, s}
    pts.update(p for p in k.breakpoints if 0.0 < p < s)
    a, b = u.support
    for edge in (a, b, *u.kinks):
        eta = abs(edge - x) / eps
        if 0.0 < eta < s:
            pts.add(eta)
    singular = k.kind == "truncated_riesz"
    if singular:
        e = s
        while e > min_scale * s:
            e *= 0.5
            pts.add(e)
    nodes = sorted(pts)

    def integrand(eta):
        return float(k(eta)) * (float(u(x + eps * eta)) - float(u(x - eps * eta)))

    budget = tol * eps
    per = budget / max(len(nodes) - 1, 1)
    total = err = 0.0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        v, e = _quad_err(integrand, lo, hi, per)
        total += v
        err += e
    if err > budget and err > 1e-13 * abs(total):
        raise QuadratureNonConvergent(f"quadrature at x={x} reached error {err / eps:.3g}")
    return total / eps


@dataclass(frozen=True)
class AveragePipeline:
    eps: float
    M: int
    averages: LatticeFunction1D
    quotients: LatticeFunction1D


def cell_averages(u: SampledField, eps: float, M: int, support: float = 1.0) -> AveragePipeline:
    """Means of ``u`` over cells ``[h(j-1), hj]`` with ``h = eps*support/M``, plus difference quotients."""
    h = eps * support / M
    a, b = u.support
    lo = math.floor(a / h) + 1
    hi = math.ceil(b / h) + 1
    vals = np.empty(hi - lo)
    for idx, j in enumerate(range(lo, hi)):
        c0, c1 = h * (j - 1), h * j
        vals[idx] = _quad(lambda t: float(u(t)), max(c0, a), min(c1, b), 1e-14) / h if c1 > a and c0 < b else 0.0
    avg = LatticeFunction1D(vals, lo, h)
    ext = avg.window(lo - 1, hi + 1)
    quot = LatticeFunction1D(np.diff(ext) / h, lo, h)
    return AveragePipeline(eps, M, avg, quot)


def step_kernel(k: ContinuumKernel, M: int, convention: str = "left"):
    """Discretize ``k`` into M steps, falling back to the midpoint rule on a vanishing tail."""
    try:
        return discretize(k, M, convention), convention
    except DegenerateTail:
        if convention == "midpoint":
            raise
        return discretize(k, M, "midpoint"), "midpoint"


@dataclass(frozen=True)
class GradientPair:
    points: np.ndarray
    continuum: np.ndarray
    discrete: np.ndarray
    convention: str
    kernel: DiscreteKernel
    pipeline: AveragePipeline

    @property
    def max_discrepancy(self) -> float:
        if self.points.size == 0:
            return 0.0
        return float(np.max(np.abs(self.continuum - self.discrete)))


def gradient_pair(u: SampledField, k: ContinuumKernel, eps: float, M: int,
                  convention: str = "left", tol: float = 1e-9) -> GradientPair:
    """Continuum gradient with the step kernel at lattice points vs. the lattice gradient of cell means.

    The two agree exactly up to the factor ``(h/eps)^2`` (``1/M^2`` for unit support).
    """
    rho_m, used = step_kernel(k, M, convention)
    s = k.support_radius
    pc = ContinuumKernel.piecewise_constant(rho_m.weights, s)
    pipe = cell_averages(u, eps, M, s)
    h = pipe.averages.spacing
    disc = nonlocal_gradient(pipe.averages, rho_m)
    scale = (h / eps) ** 2
    pts = disc.positions
    cont = np.array([continuum_gradient(u, pc, eps, x, tol=tol) for x in pts])
    return GradientPair(pts, cont, scale * disc.values, used, rho_m, pipe)


def discrete_continuum_identity(u: SampledField, k: ContinuumKernel, eps: float, M: int,
                                convention: str = "left") -> float:
    return gradient_pair(u, k, eps, M, convention).max_discrepancy


@dataclass(frozen=True)
class EquicoercivityCertificate:
    sampled_energy: float
    lower_bound: float
    dirichlet: float
    lambda_min: float
    N: int
    passed: bool


def equicoercivity_check(u: SampledField, k: ContinuumKernel, eps: float, M: int,
                         convention: str = "left", pair: Optional[GradientPair] = None) -> EquicoercivityCertificate:
    """Check ``sum h |grad u(hk)|^2 >= (lambda_min (h/eps)^2)^2 * sum h z_j^2``.

    The left side is the energy sampled on the lattice (no translation), the
    right side uses the difference quotients of the cell means.
    """
    pair = pair or gradient_pair(u, k, eps, M, convention)
    pipe = pair.pipeline
    h = pipe.averages.spacing
    sampled = float(h * np.dot(pair.continuum, pair.continuum))
    z = pipe.quotients.values
    D = float(h * np.dot(z, z))
    lo, hi = pipe.averages.offset, pipe.averages.stop
    n_eps = max(abs(lo), abs(hi - 1))
    N = 2 * n_eps + 2 * M + 1
    lam = coercivity_constant(pair.kernel, N).lambda_min
    bound = (lam * (h / eps) ** 2) ** 2 * D
    passed = sampled >= bound - 1e-10 * (1.0 + sampled)
    return EquicoercivityCertificate(sampled, bound, D, lam, N, passed)


# --- Riesz counterexample -------------------------------------------------

def riesz_c(alpha: float) -> float:
    return 4.0 / (1.0 - alpha) + 2.0 / alpha


def riesz_bound(alpha: float, R: float, eps: float) -> float:
    return 4.0 * R * riesz_c(alpha) ** 2 * eps ** (1.0 - alpha)


def cutoff(R: float):
    def phi(t):
        return np.minimum(1.0, np.maximum(R - np.abs(t), 0.0))

    return phi


def oscillating_field(eps: float, R: float) -> SampledField:
    """u_eps(t) = eps^2 sin(t/eps^2) * min(1, (R-|t|)^+)."""
    phi = cutoff(R)
    return SampledField(lambda t: eps ** 2 * np.sin(t / eps ** 2) * phi(t), (-R, R),
                        smoothness="lipschitz", kinks=(-R + 1.0, R - 1.0))


def _hat_moments(alpha: float, m: np.ndarray) -> np.ndarray:
    """int x^(-1-alpha) hat(x - m) dx for integer m >= 1 (unit spacing)."""
    m = np.asarray(m, dtype=float)
    out = np.empty_like(m)
    small = m < 2000
    ms = m[small]

    def psi(x):
        return -np.power(x, 1.0 - alpha) / (alpha * (1.0 - alpha))

    out[small] = psi(ms + 1) - 2.0 * psi(ms) + psi(ms - 1)
    ml = m[~small]
    a1 = (1 + alpha) * (2 + alpha)
    a2 = a1 * (3 + alpha) * (4 + alpha)
    out[~small] = ml ** (-1 - alpha) * (1 + a1 / (12 * ml ** 2) + a2 / (360 * ml ** 4))
    return out


def riesz_gradient_grid(alpha: float, R: float, eps: float, points_per_wavelength: int = 48):
    """Gradient of ``u_eps`` under the Riesz kernel on a uniform grid of (-R, R).

    Product integration: u is replaced by its piecewise-linear interpolant and
    the singular kernel is integrated exactly against each hat function.  The
    resulting discrete correlation is evaluated with FFTs.
    """
    h0 = 2.0 * math.pi * eps ** 2 / points_per_wavelength
    J = int(math.ceil(2.0 * R / h0))
    h = 2.0 * R / J
    t = -R + h * np.arange(J + 1)
    u = oscillating_field(eps, R)(t)
    W = np.zeros(J + 1)
    W[1:] = h ** (-alpha) * _hat_moments(alpha, np.arange(1, J + 1))
    behind = signal.fftconvolve(u, W)[: J + 1]            # sum_m W_m u_{j-m}
    ahead = signal.fftconvolve(u[::-1], W)[: J + 1][::-1]  # sum_m W_m u_{j+m}
    # (1/eps) * rho_eps(xi) = eps^(alpha-1) * xi^(-1-alpha)
    return t, eps ** (alpha - 1.0) * (ahead - behind)


def riesz_counterexample(alpha: float, R: float, eps: float, points_per_wavelength: int = 48):
    """Return ``(energy, bound, dirichlet_energy)`` for the oscillating field at scale eps.

    energy    -- int_{-R}^{R} |grad u_eps|^2
    bound     -- 4 R c(alpha)^2 eps^(1-alpha)
    dirichlet -- int_{-R}^{R} |u_eps'|^2
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not R > 1:
        raise ValueError("R must exceed 1")
    t, g = riesz_gradient_grid(alpha, R, eps, points_per_wavelength)
    energy = float(integrate.trapezoid(g * g, t))
    phi = cutoff(R)(t)
    dphi = np.where(np.abs(t) < R - 1.0, 0.0, -np.sign(t))
    du = np.cos(t / eps ** 2) * phi + eps ** 2 * np.sin(t / eps ** 2) * dphi
    dirichlet = float(integrate.trapezoid(du * du, t))
    return energy, riesz_bound(alpha, R, eps), dirichlet


def riesz_sweep(alpha: float, R: float, eps_values: Sequence[float], points_per_wavelength: int = 48):
    """Rows ``(eps, energy, bound, dirichlet)`` plus fitted log-log slopes of energy and Dirichlet energy."""
    rows = [(float(e), *riesz_counterexample(alpha, R, e, points_per_wavelength)) for e in eps_values]
    eps = [r[0] for r in rows]
    return rows, fit_order(eps, [r[1] for r in rows]), fit_order(eps, [r[3] for r in rows])
