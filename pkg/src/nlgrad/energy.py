"""Discrete energies built on the nonlocal gradient, their coercivity
certificate, and the continuum target of the Gamma-limit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import EpsilonTooLarge
from .grad1d import LatticeFunction1D, nonlocal_gradient
from .kernel import DiscreteKernel, gamma_constant
from .spectral import coercivity_constant


@dataclass(frozen=True)
class EnergyDensity:
    """Convex density ``f`` with ``c1 z^2 + c0 <= f(z) <= c2 z^2 + c3``."""

    f: Callable[[np.ndarray], np.ndarray]
    growth: tuple = (0.0, 1.0, 1.0, 0.0)  # (c0, c1, c2, c3)

    def __call__(self, z):
        return self.f(z)

    @classmethod
    def quadratic(cls) -> "EnergyDensity":
        return cls(np.square, (0.0, 1.0, 1.0, 0.0))

    def check_growth(self, zmax: float = 1e3, n: int = 20001) -> bool:
        c0, c1, c2, c3 = self.growth
        z = np.linspace(-zmax, zmax, n)
        fz = np.asarray(self.f(z), dtype=float)
        tol = 1e-12 * (1.0 + np.abs(fz))
        return bool(np.all(c1 * z * z + c0 <= fz + tol) and np.all(fz <= c2 * z * z + c3 + tol))

    def check_convexity(self, rng: np.random.Generator, trials: int = 1000, scale: float = 100.0) -> bool:
        a = rng.uniform(-scale, scale, trials)
        b = rng.uniform(-scale, scale, trials)
        mid = np.asarray(self.f(0.5 * (a + b)), dtype=float)
        avg = 0.5 * (np.asarray(self.f(a), dtype=float) + np.asarray(self.f(b), dtype=float))
        return bool(np.all(mid <= avg + 1e-12 * (1.0 + np.abs(avg))))


@dataclass(frozen=True)
class CoercivityCertificate:
    energy: float
    lower_bound: float
    ratio: float
    passed: bool
    Lambda: float
    N: Optional[int] = None
    bound_Lambda: Optional[float] = None


def dirichlet_energy(u: LatticeFunction1D) -> float:
    """sum_k eps |(u_{k+1} - u_k)/eps|^2."""
    if u.size == 0:
        return 0.0
    d = np.diff(u.window(u.offset - 1, u.stop + 1)) / u.spacing
    return float(u.spacing * np.dot(d, d))


def quadratic_energy(u: LatticeFunction1D, k: DiscreteKernel) -> float:
    v = nonlocal_gradient(u, k).values
    return float(u.spacing * np.dot(v, v))


def general_energy(u: LatticeFunction1D, k: DiscreteKernel, f) -> float:
    """sum_k eps f(v_k) over the exact support window of the gradient.

    When ``f(0) != 0`` the infinite tail of ``f(0)`` terms is left out.
    """
    v = nonlocal_gradient(u, k).values
    return float(u.spacing * np.sum(np.asarray(f(v), dtype=float)))


def certificate_dimension(u: LatticeFunction1D, M: int) -> int:
    """N >= 1/eps + 4M, enlarged if u's window is longer than 1/eps sites."""
    return max(math.ceil(1.0 / u.spacing), u.size) + 4 * M


def coercivity_check(u: LatticeFunction1D, k: DiscreteKernel, analysis=None) -> CoercivityCertificate:
    """Check ``F_eps(u) >= Lambda * Dirichlet(u)`` with Lambda the squared circulant minimum."""
    if not u.spacing < 1.0 / (2 * k.M):
        raise EpsilonTooLarge(f"need eps < 1/(2M) = {1.0 / (2 * k.M)}, got {u.spacing}")
    N = certificate_dimension(u, k.M)
    if analysis is None or analysis.N != N:
        analysis = coercivity_constant(k, N)
    F = quadratic_energy(u, k)
    D = dirichlet_energy(u)
    lower = analysis.coercivity_Lambda * D
    ratio = F / D if D > 0 else math.inf
    passed = F >= lower - 1e-10 * (1.0 + F)
    return CoercivityCertificate(F, lower, ratio, passed, analysis.coercivity_Lambda, N,
                                 analysis.bound_Lambda)


@dataclass(frozen=True)
class SmoothFunction:
    """A C^1 function with its derivative, supported in ``interval``."""

    value: Callable
    derivative: Callable
    interval: tuple

    def sample(self, eps: float) -> LatticeFunction1D:
        a, b = self.interval
        lo = math.floor(a / eps)
        hi = math.ceil(b / eps) + 1
        k = np.arange(lo, hi)
        x = eps * k
        inside = (x > a) & (x < b)
        vals = np.where(inside, self.value(np.where(inside, x, 0.5 * (a + b))), 0.0)
        return LatticeFunction1D(vals, lo, eps)


def polynomial_bump() -> SmoothFunction:
    """(1 - x^2)^2 on (-1, 1)."""
    return SmoothFunction(lambda x: (1.0 - x * x) ** 2, lambda x: -4.0 * x * (1.0 - x * x), (-1.0, 1.0))


def sine_bump() -> SmoothFunction:
    """sin(pi x) on (-1, 1), continuous at the endpoints."""
    return SmoothFunction(lambda x: np.sin(np.pi * x), lambda x: np.pi * np.cos(np.pi * x), (-1.0, 1.0))


def gamma_target(u: SmoothFunction, k: DiscreteKernel, f=None, interval=None, rtol: float = 1e-10) -> float:
    """Integral of f(K u'(t)) over the interval."""
    f = f if f is not None else np.square
    a, b = interval if interval is not None else u.interval
    K = gamma_constant(k)
    val, _ = integrate.quad(lambda t: float(f(K * u.derivative(t))), a, b,
                            epsabs=0.0, epsrel=rtol, limit=200)
    return float(val)


def fit_order(eps: Sequence[float], err: Sequence[float]) -> float:
    """Least-squares slope of log(err) against log(eps)."""
    x = np.log(np.asarray(eps, dtype=float))
    y = np.log(np.asarray(err, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def gamma_convergence_sweep(u: SmoothFunction, k: DiscreteKernel, eps_values: Sequence[float], f=None):
    """Rows ``(eps, F_eps, target, abs_error, rel_error)`` and the fitted order."""
    f = f if f is not None else np.square
    target = gamma_target(u, k, f)
    rows = []
    for eps in eps_values:
        F = general_energy(u.sample(eps), k, f)
        err = abs(F - target)
        rows.append((float(eps), F, target, err, err / abs(target)))
    order = fit_order([r[0] for r in rows], [r[3] for r in rows]) if len(rows) > 1 else float("nan")
    return rows, order
