"""Discrete nonlocal gradients of lattice functions on eps*Z.

The asymmetric stencil at site k is

    v_k = (1/eps) * ( sum_i rho_i u_{k+i} - sum_i rho_i u_{k+1-i} ),   i = 1..M

and can be rewritten through the difference quotients d_j = u_j - u_{j-1} as

    v_k = (1/eps) * sum_{|m| < M} sigma_{|m|} d_{k+1+m}

with sigma the tail sums of the weights.  Both evaluations are provided.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import OddM, SpacingMismatch
from .kernel import DiscreteKernel

FORMS = ("direct", "difference_quotient")

Weights = Union[DiscreteKernel, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class LatticeFunction1D:
    """Values on sites ``offset .. offset+len-1`` of eps*Z, implicitly zero elsewhere."""

    values: np.ndarray
    offset: int = 0
    spacing: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "offset", int(self.offset))
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        object.__setattr__(self, "spacing", float(self.spacing))

    @classmethod
    def from_function(cls, f: Callable, spacing: float, lo: int, hi: int) -> "LatticeFunction1D":
        """Sample ``f(eps*k)`` for ``lo <= k < hi``."""
        k = np.arange(lo, hi)
        return cls(np.asarray(f(spacing * k), dtype=float) * np.ones(k.size), lo, spacing)

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def stop(self) -> int:
        return self.offset + self.values.size

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.stop)

    @property
    def positions(self) -> np.ndarray:
        return self.spacing * self.indices

    def at(self, k) -> np.ndarray:
        """Values at arbitrary integer sites (zero outside the window)."""
        k = np.asarray(k, dtype=int)
        j = k - self.offset
        inside = (j >= 0) & (j < self.size)
        out = np.zeros(k.shape)
        out[inside] = self.values[j[inside]]
        return out if out.ndim else float(out)

    def window(self, lo: int, hi: int) -> np.ndarray:
        return self.at(np.arange(lo, hi))

    def shift(self, s: int) -> "LatticeFunction1D":
        return LatticeFunction1D(self.values, self.offset + s, self.spacing)

    def __add__(self, other):
        _check_spacing(self, other)
        lo = min(self.offset, other.offset)
        hi = max(self.stop, other.stop)
        return LatticeFunction1D(self.window(lo, hi) + other.window(lo, hi), lo, self.spacing)

    def __mul__(self, a: float):
        return LatticeFunction1D(a * self.values, self.offset, self.spacing)

    __rmul__ = __mul__

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "x", "value"])
        for k, v in zip(self.indices, self.values):
            w.writerow([int(k), repr(float(self.spacing * k)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, spacing: float) -> "LatticeFunction1D":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            return cls(np.zeros(0), 0, spacing)
        idx = [int(r["index"]) for r in rows]
        lo, hi = min(idx), max(idx) + 1
        vals = np.zeros(hi - lo)
        for k, r in zip(idx, rows):
            vals[k - lo] = float(r["value"])
        return cls(vals, lo, spacing)


def _check_spacing(u, v):
    if u.spacing != v.spacing:
        raise SpacingMismatch(f"spacings differ: {u.spacing} vs {v.spacing}")


def _weights(k: Weights) -> np.ndarray:
    if isinstance(k, DiscreteKernel):
        return np.asarray(k.weights)
    w = np.asarray(k, dtype=float).ravel()
    if w.size == 0:
        raise ValueError("empty weight array")
    return w


def _tails(w: np.ndarray) -> np.ndarray:
    return np.cumsum(w[::-1])[::-1]


def nonlocal_gradient(u: LatticeFunction1D, k: Weights, form: str = "difference_quotient") -> LatticeFunction1D:
    """Asymmetric discrete nonlocal gradient at scale ``u.spacing``.

    ``k`` may be a validated :class:`DiscreteKernel` or a raw weight array
    (used for the constant-weight counterexample).  The result lives on the
    support of ``u`` widened by M sites on the left and M-1 on the right.
    """
    w = _weights(k)
    M = w.size
    lo, hi = u.offset - M, u.stop + M - 1
    n = hi - lo
    if u.size == 0:
        return LatticeFunction1D(np.zeros(0), u.offset, u.spacing)
    # padded copy covering sites [lo - M, hi + M)
    pad = u.window(lo - M, hi + M)

    def site(s):
        # values u_{k+s} for k in [lo, hi)
        return pad[M + s: M + s + n]

    v = np.zeros(n)
    if form == "direct":
        for i in range(1, M + 1):
            v += w[i - 1] * (site(i) - site(1 - i))
    elif form == "difference_quotient":
        sig = _tails(w)
        d = np.diff(pad)  # d[p] = pad[p+1] - pad[p] = u_{j} - u_{j-1} with j = lo - M + p + 1
        for m in range(-(M - 1), M):
            # d_{k+1+m} lives at p = k + m - lo + M
            v += sig[abs(m)] * d[M + m: M + m + n]
    else:
        raise ValueError(f"unknown form {form!r}")
    return LatticeFunction1D(v / u.spacing, lo, u.spacing)


def nonlocal_gradient_symmetric(u: LatticeFunction1D, k: Weights) -> LatticeFunction1D:
    """Unshifted stencil ``(1/eps) sum_i rho_i (u_{k+i} - u_{k-i})``; not coercive."""
    w = _weights(k)
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    M = w.size
    lo, hi = u.offset - M, u.stop + M
    n = hi - lo
    pad = u.window(lo - M, hi + M)
    v = np.zeros(n)
    for i in range(1, M + 1):
        v += w[i - 1] * (pad[M + i: M + i + n] - pad[M - i: M - i + n])
    return LatticeFunction1D(v / u.spacing, lo, u.spacing)


def oscillation_null_vector(M: int, lo: int, hi: int, spacing: float = 1.0) -> LatticeFunction1D:
    """``u_k = (-1)**k`` on ``[lo, hi)``; killed by the constant-weight stencil when M is even."""
    if M % 2:
        raise OddM(f"the alternating null vector needs even M, got {M}")
    k = np.arange(lo, hi)
    return LatticeFunction1D(np.where(k % 2 == 0, 1.0, -1.0), lo, spacing)


def summation_by_parts(u: LatticeFunction1D, phi: LatticeFunction1D, k: Weights) -> tuple:
    """Return ``(sum eps u'_k phi_k, -sum eps u_k phi'_{k-1})``; the two agree exactly."""
    _check_spacing(u, phi)
    eps = u.spacing
    du = nonlocal_gradient(u, k)
    dphi = nonlocal_gradient(phi, k)
    left = eps * float(np.dot(du.values, phi.at(du.indices)))
    right = -eps * float(np.dot(u.values, dphi.at(u.indices - 1)))
    return left, right


def interpolate(u: LatticeFunction1D, x: float, mode: str = "affine") -> float:
    t = x / u.spacing
    k = math.floor(t)
    if mode == "constant":
        return float(u.at(k))
    if mode == "affine":
        s = t - k
        return float((1.0 - s) * u.at(k) + s * u.at(k + 1))
    raise ValueError(f"unknown interpolation mode {mode!r}")
