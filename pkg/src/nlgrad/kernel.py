"""Continuum and discrete kernels, plus the scalar constants attached to them.

A continuum kernel is stored by its even radial profile ``r -> rho(r)`` on
``[0, support_radius]``.  A discrete kernel is a strictly decreasing array of
positive weights ``rho_1 > ... > rho_M > 0``; its tail sums
``sigma_j = rho_{j+1} + ... + rho_M`` are cached because every downstream
computation (difference-quotient stencil, circulant bands, symbol) uses them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import DegenerateTail, NonIntegrable, NonPositiveWeight, NotStrictlyDecreasing

KINDS = ("tent", "truncated_riesz", "tabulated", "piecewise_constant")


@dataclass(frozen=True)
class ContinuumKernel:
    """Radial kernel profile with compact support.

    Use the constructors :meth:`tent`, :meth:`truncated_riesz`,
    :meth:`tabulated` and :meth:`piecewise_constant` rather than building
    instances by hand.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    support_radius: float
    kind: str
    alpha: Optional[float] = None
    samples: Optional[tuple] = None
    breakpoints: tuple = field(default=())

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        out = np.where(r > self.support_radius, 0.0, self.profile(r))
        return out if out.ndim else float(out)

    @classmethod
    def tent(cls, support: float = 1.0, height: Optional[float] = None) -> "ContinuumKernel":
        """``rho(r) = height * max(1 - r/support, 0)``; height defaults to ``support``,
        so ``tent(1)`` is ``max(1-r, 0)`` and ``tent(2)`` is ``max(2-r, 0)``."""
        if support <= 0:
            raise ValueError("support must be positive")
        h = float(support if height is None else height)
        if h <= 0:
            raise ValueError("height must be positive")
        s = float(support)

        def profile(r):
            return h * np.maximum(1.0 - np.asarray(r, dtype=float) / s, 0.0)

        return cls(profile, s, "tent", breakpoints=(s,))

    @classmethod
    def truncated_riesz(cls, alpha: float, support: float = 1.0) -> "ContinuumKernel":
        """``rho(r) = r**(-1-alpha)`` on ``(0, support]``, zero beyond."""
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        if support <= 0:
            raise ValueError("support must be positive")
        a = float(alpha)

        def profile(r):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                return np.where(r > 0, r ** (-1.0 - a), np.inf)

        return cls(profile, float(support), "truncated_riesz", alpha=a, breakpoints=(float(support),))

    @classmethod
    def tabulated(cls, radii: Sequence[float], values: Sequence[float]) -> "ContinuumKernel":
        """Piecewise-linear interpolation of monotone samples; zero past the last radius."""
        r = np.asarray(radii, dtype=float)
        v = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise ValueError("radii and values must be 1-D arrays of equal length >= 2")
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise ValueError("radii must start at 0 and increase strictly")
        if np.any(v < 0):
            raise ValueError("kernel samples must be non-negative")
        if np.any(np.diff(v) > 0):
            raise ValueError("kernel samples must be nonincreasing")

        def profile(x):
            return np.interp(np.asarray(x, dtype=float), r, v, right=0.0)

        return cls(
            profile,
            float(r[-1]),
            "tabulated",
            samples=(tuple(r), tuple(v)),
            breakpoints=tuple(float(x) for x in r[1:]),
        )

    @classmethod
    def indicator(cls, support: float = 1.0) -> "ContinuumKernel":
        return cls.tabulated([0.0, support], [1.0, 1.0])

    @classmethod
    def piecewise_constant(cls, weights: Sequence[float], support: float = 1.0) -> "ContinuumKernel":
        """Even step kernel equal to ``weights[i-1]`` on ``((i-1)/M, i/M) * support``."""
        w = np.asarray(weights, dtype=float)
        M = w.size
        s = float(support)
        edges = s * np.arange(1, M + 1) / M

        def profile(x):
            x = np.asarray(x, dtype=float)
            idx = np.clip(np.ceil(x * M / s).astype(int) - 1, 0, M - 1)
            return np.where(x <= s, w[idx], 0.0)

        return cls(profile, s, "piecewise_constant", samples=(tuple(w),), breakpoints=tuple(edges))


class DiscreteKernel:
    """Strictly decreasing positive weights ``rho_1..rho_M``.

    Construction validates; instances are immutable.
    """

    __slots__ = ("_weights", "_tails")

    def __init__(self, weights):
        w = np.array(weights, dtype=float).ravel()
        if w.size == 0:
            raise ValueError("kernel needs at least one weight")
        for i, x in enumerate(w, start=1):
            if not x > 0:
                raise NonPositiveWeight(i, float(x))
        for i in range(1, w.size):
            # exact comparison, ties are a modelling error
            if not w[i] < w[i - 1]:
                raise NotStrictlyDecreasing(i + 1, float(w[i - 1]), float(w[i]))
        w.setflags(write=False)
        tails = np.cumsum(w[::-1])[::-1].copy()
        # tails[j] = rho_{j+1} + ... + rho_M  (1-based rho), i.e. sigma_j for j = 0..M-1
        tails.setflags(write=False)
        object.__setattr__(self, "_weights", w)
        object.__setattr__(self, "_tails", tails)

    def __setattr__(self, name, value):
        raise AttributeError("DiscreteKernel is immutable")

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def M(self) -> int:
        return int(self._weights.size)

    @property
    def tails(self) -> np.ndarray:
        """sigma_0 .. sigma_{M-1}."""
        return self._tails

    def __eq__(self, other):
        return isinstance(other, DiscreteKernel) and np.array_equal(self._weights, other._weights)

    def __hash__(self):
        return hash(self._weights.tobytes())

    def __repr__(self):
        return f"DiscreteKernel({self._weights.tolist()})"


def validate_discrete(weights) -> DiscreteKernel:
    return DiscreteKernel(weights)


def sample_points(M: int, convention: str = "left", support: float = 1.0) -> np.ndarray:
    i = np.arange(1, M + 1, dtype=float)
    if convention == "left":
        return support * i / M
    if convention == "midpoint":
        return support * (2 * i - 1) / (2 * M)
    raise ValueError(f"unknown convention {convention!r}")


def discretize(k: ContinuumKernel, M: int, convention: str = "left") -> DiscreteKernel:
    """Sample ``k`` at ``i/M`` (left) or ``(2i-1)/(2M)`` (midpoint), in units of the support."""
    if M < 1:
        raise ValueError("M must be >= 1")
    pts = sample_points(M, convention, k.support_radius)
    vals = np.asarray(k(pts), dtype=float)
    for i, (p, v) in enumerate(zip(pts, vals), start=1):
        if v == 0.0:
            raise DegenerateTail(i, float(p))
    return DiscreteKernel(vals)


def gamma_constant(k: DiscreteKernel) -> float:
    """K = sum_j rho_j (2j - 1)."""
    j = np.arange(1, k.M + 1)
    return float(np.dot(k.weights, 2 * j - 1))


def continuum_constant(k: ContinuumKernel, rtol: float = 1e-10) -> float:
    """K = integral over the real line of rho(|xi|) |xi|, i.e. twice the radial moment."""
    s = k.support_radius
    if k.kind == "truncated_riesz":
        if k.alpha >= 1:
            raise NonIntegrable(f"r**(-1-alpha) * r is not integrable at 0 for alpha={k.alpha}")
        # integrand r**(-alpha): hand the algebraic singularity to the weighted rule
        val, _ = integrate.quad(lambda r: 1.0, 0.0, s, weight="alg", wvar=(-k.alpha, 0.0),
                                epsabs=0.0, epsrel=rtol)
        return 2.0 * val
    pts = [p for p in k.breakpoints if 0.0 < p < s]
    val, _ = integrate.quad(lambda r: float(k(r)) * r, 0.0, s, points=pts or None,
                            epsabs=0.0, epsrel=rtol, limit=200)
    if not math.isfinite(val):
        raise NonIntegrable("kernel moment diverged")
    return 2.0 * val
