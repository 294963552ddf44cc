"""Banded symmetric circulant matrices, their symbol, and Fejer positivity.

For bands ``sigma_0..sigma_n`` the symbol is

    Phi(t) = sigma_0 + 2 * sum_j sigma_j cos(j t)

and, writing ``c_j = sigma_{j-1} - 2 sigma_j + sigma_{j+1}`` (zero past the band),

    Phi(t) = sum_{j=1}^{n+1} c_j (1 - cos jt) / (1 - cos t).

Convex bands give positive ``c_j`` and hence ``min Phi >= c_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvexityViolated, TooLargeN, TooSmallN
from .kernel import DiscreteKernel

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class CirculantSpec:
    sigma: np.ndarray
    N: int

    def __post_init__(self):
        s = np.array(self.sigma, dtype=float).ravel()
        if s.size == 0:
            raise ValueError("need at least sigma_0")
        if s[-1] == 0:
            raise ValueError("last band value sigma_n must be nonzero")
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "N", int(self.N))
        if not self.N > 2 * self.n:
            raise TooSmallN(f"need N > 2n = {2 * self.n}, got N={self.N}")

    @property
    def n(self) -> int:
        return self.sigma.size - 1

    def matrix(self) -> np.ndarray:
        """Dense N x N matrix with entry sigma_{|i-j| mod N} (symmetric wrap)."""
        N = self.N
        first = np.zeros(N)
        first[: self.n + 1] += self.sigma
        for j in range(1, self.n + 1):
            first[N - j] += self.sigma[j]
        idx = (np.arange(N)[None, :] - np.arange(N)[:, None]) % N
        return first[idx]


@dataclass(frozen=True)
class SymbolAnalysis:
    fejer_coeffs: np.ndarray
    min_phi_bound: float
    lambda_min: Optional[float] = None
    coercivity_Lambda: Optional[float] = None
    N: Optional[int] = None
    bound_Lambda: Optional[float] = None


def circulant_from_kernel(k: DiscreteKernel, N: int) -> CirculantSpec:
    if not N > 2 * (k.M - 1):
        raise TooSmallN(f"need N > 2(M-1) = {2 * (k.M - 1)}, got N={N}")
    return CirculantSpec(np.asarray(k.tails), N)


def _sigma(spec) -> np.ndarray:
    return spec.sigma if isinstance(spec, CirculantSpec) else np.asarray(spec, dtype=float).ravel()


def symbol_phi(spec, t):
    s = _sigma(spec)
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, s[0])
    for j in range(1, s.size):
        out = out + 2.0 * s[j] * np.cos(j * t)
    return out if out.ndim else float(out)


def second_differences(spec) -> np.ndarray:
    """c_j = sigma_{j-1} - 2 sigma_j + sigma_{j+1} for j = 1..n+1, zero-padded."""
    s = np.concatenate([_sigma(spec), [0.0, 0.0]])
    n1 = s.size - 2
    return np.array([s[j - 1] - 2.0 * s[j] + s[j + 1] for j in range(1, n1 + 1)])


def fejer_kernel(j: int, t):
    """(1 - cos jt)/(1 - cos t), evaluated stably as sin^2(jt/2)/sin^2(t/2)."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (np.sin(0.5 * j * t) / np.sin(0.5 * t)) ** 2
    if np.any(small):
        # removable singularity: use the cosine-sum form, equal to j**2 at t = 0
        ts = t[small]
        acc = np.full(ts.shape, float(j))
        for m in range(1, j):
            acc = acc + 2.0 * (j - m) * np.cos(m * ts)
        ratio = np.where(small, 0.0, ratio)
        ratio[small] = acc
    return ratio if ratio.ndim else float(ratio)


def fejer_decomposition(spec) -> SymbolAnalysis:
    c = second_differences(spec)
    # the convexity condition covers j = 1..n; c_{n+1} = sigma_n is checked too
    for j, cj in enumerate(c, start=1):
        if not cj > 0:
            raise ConvexityViolated(j, float(cj))
    bound = float(c[0])
    return SymbolAnalysis(fejer_coeffs=c, min_phi_bound=bound)


def fejer_reconstruct(coeffs, t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    for j, cj in enumerate(coeffs, start=1):
        out = out + cj * fejer_kernel(j, t)
    return out if out.ndim else float(out)


def analytic_bound(spec) -> float:
    """sigma_0 - 2 sigma_1 + sigma_2 with sigma beyond the band taken as 0."""
    return float(second_differences(spec)[0])


def _golden_min(f, a, b, tol):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def min_symbol(spec, grid_points: int = 4096, tol: float = 1e-12) -> float:
    """Minimum of Phi on [0, pi]: uniform grid, then golden-section around the best node."""
    if grid_points < 1024:
        raise ValueError("grid_points must be >= 1024")
    t = np.linspace(0.0, math.pi, grid_points + 1)
    vals = symbol_phi(spec, t)
    i = int(np.argmin(vals))
    best = float(vals[i])
    a = t[max(i - 1, 0)]
    b = t[min(i + 1, grid_points)]
    _, fx = _golden_min(lambda x: float(symbol_phi(spec, x)), a, b, tol)
    return min(best, fx)


def circulant_eigenvalues(spec: CirculantSpec) -> np.ndarray:
    """Exact spectrum of the symmetric circulant: Phi at the N-th roots of unity."""
    k = np.arange(spec.N)
    return np.sort(symbol_phi(spec, 2.0 * math.pi * k / spec.N))


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi rotations on a dense symmetric matrix; returns sorted eigenvalues."""
    A = np.array(a, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix must be square and symmetric")

    mask = ~np.eye(n, dtype=bool)

    def off(A):
        return float(np.sqrt(np.sum(A[mask] ** 2)))

    for _ in range(max_sweeps):
        if off(A) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
    else:
        if off(A) > tol:
            raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diag(A))


def dense_eig_oracle(spec: CirculantSpec) -> np.ndarray:
    if spec.N > 64:
        raise TooLargeN(f"dense oracle is limited to N <= 64, got {spec.N}")
    return jacobi_eigenvalues(spec.matrix())


def coercivity_constant(k: DiscreteKernel, N: int) -> SymbolAnalysis:
    spec = circulant_from_kernel(k, N)
    analysis = fejer_decomposition(spec)
    lam = float(circulant_eigenvalues(spec)[0])
    bound = analysis.min_phi_bound
    return SymbolAnalysis(
        fejer_coeffs=analysis.fejer_coeffs,
        min_phi_bound=bound,
        lambda_min=lam,
        coercivity_Lambda=lam * lam if lam > 0 else 0.0,
        N=N,
        bound_Lambda=bound * bound,
    )
