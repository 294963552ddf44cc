"""Discrete nonlocal partial derivatives on eps*Z^2.

Direction-n weights are ``rho(|i - e_n/2|) * (i_n - 1/2) / |i - e_n/2|``.  The
default stencil keeps offsets within M lattice steps (l1 distance) of the
half-shifted centre; for M = 2 this is exactly the ten-point stencil with
coefficients rho_1 = rho(1/2), rho_2 = rho(3/2), varrho = rho(sqrt5/2)/sqrt5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ConditionFails
from .kernel import ContinuumKernel


@dataclass(frozen=True, eq=False)
class LatticeFunction2D:
    """Values on a rectangular window of eps*Z^2; axis 0 is k1, axis 1 is k2."""

    values: np.ndarray
    offset: Tuple[int, int] = (0, 0)
    spacing: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("values must be a 2-D array")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "offset", (int(self.offset[0]), int(self.offset[1])))
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")

    @property
    def shape(self):
        return self.values.shape

    def window(self, lo: Tuple[int, int], shape: Tuple[int, int]) -> np.ndarray:
        """Values on ``[lo1, lo1+n1) x [lo2, lo2+n2)`` with implicit zeros."""
        out = np.zeros(shape)
        o1, o2 = self.offset
        n1, n2 = self.shape
        a1, a2 = max(lo[0], o1), max(lo[1], o2)
        b1, b2 = min(lo[0] + shape[0], o1 + n1), min(lo[1] + shape[1], o2 + n2)
        if a1 < b1 and a2 < b2:
            out[a1 - lo[0]: b1 - lo[0], a2 - lo[1]: b2 - lo[1]] = self.values[a1 - o1: b1 - o1, a2 - o2: b2 - o2]
        return out


@dataclass(frozen=True)
class DirectionalWeights2D:
    weights: Dict[Tuple[int, int], float]
    direction: int

    def extent(self):
        i1 = [i[0] for i in self.weights]
        i2 = [i[1] for i in self.weights]
        return (min(i1), max(i1)), (min(i2), max(i2))


def definition_weight(k: ContinuumKernel, i, n: int) -> float:
    """rho(|i - e_n/2|) (i_n - 1/2) / |i - e_n/2| for an offset in Z^d."""
    c = np.asarray(i, dtype=float).copy()
    c[n - 1] -= 0.5
    r = float(np.linalg.norm(c))
    return float(k(r)) * c[n - 1] / r


def directional_weights(k: ContinuumKernel, n: int, reach: str = "lattice") -> DirectionalWeights2D:
    """Weights for the partial derivative in direction ``n`` (1 or 2).

    ``reach="lattice"`` keeps offsets whose l1 distance to the shifted centre
    is below the support M; ``reach="euclidean"`` keeps every offset where the
    kernel is positive.
    """
    if n not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    M = k.support_radius
    R = int(math.ceil(M)) + 1
    out = {}
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            i = (a, b)
            c = [a, b]
            c[n - 1] -= 0.5
            if reach == "lattice":
                if abs(c[0]) + abs(c[1]) >= M:
                    continue
            elif reach != "euclidean":
                raise ValueError(f"unknown reach {reach!r}")
            w = definition_weight(k, i, n)
            if w != 0.0:
                out[i] = w
    return DirectionalWeights2D(out, n)


def example_coefficients(k: ContinuumKernel) -> Tuple[float, float, float]:
    """(rho_1, rho_2, varrho) of the M = 2 stencil."""
    r5 = math.sqrt(5.0)
    return float(k(0.5)), float(k(1.5)), float(k(r5 / 2)) / r5


def symmetric_weights(k: ContinuumKernel, n: int) -> DirectionalWeights2D:
    """Unshifted weights rho(|i|) i_n/|i|; these annihilate the checkerboard."""
    R = int(math.ceil(k.support_radius))
    out = {}
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            if (a, b) == (0, 0):
                continue
            r = math.hypot(a, b)
            w = float(k(r)) * (a, b)[n - 1] / r
            if w != 0.0:
                out[(a, b)] = w
    return DirectionalWeights2D(out, n)


def nonlocal_partial(u: LatticeFunction2D, w: DirectionalWeights2D, eps: Optional[float] = None) -> LatticeFunction2D:
    """v_k = (1/eps) sum_i w_i u_{k+i} on the window where v can be nonzero.

    Offsets are summed in pairs (i, i') with w_{i'} = -w_i when such a mirror
    exists, so exactly cancelling contributions give exact zeros.
    """
    eps = u.spacing if eps is None else eps
    (l1, h1), (l2, h2) = w.extent()
    o1, o2 = u.offset
    n1, n2 = u.shape
    lo = (o1 - h1, o2 - h2)
    shape = (n1 + h1 - l1, n2 + h2 - l2)
    pad_lo = (lo[0] + l1, lo[1] + l2)
    pad = u.window(pad_lo, (shape[0] + h1 - l1, shape[1] + h2 - l2))

    def shifted(i):
        a, b = i[0] - l1, i[1] - l2
        return pad[a: a + shape[0], b: b + shape[1]]

    v = np.zeros(shape)
    done = set()
    for i in sorted(w.weights):
        if i in done:
            continue
        wi = w.weights[i]
        partner = _mirror(i, w.direction, w.weights, wi)
        if partner is not None:
            v += wi * (shifted(i) - shifted(partner))
            done.update((i, partner))
        else:
            v += wi * shifted(i)
            done.add(i)
    return LatticeFunction2D(v / eps, lo, u.spacing)


def _mirror(i, n, weights, wi):
    # shifted stencil: i -> e_n - i; unshifted: i -> -i
    cands = []
    e = [0, 0]
    e[n - 1] = 1
    cands.append((e[0] - i[0], e[1] - i[1]))
    cands.append((-i[0], -i[1]))
    for c in cands:
        if c != i and c in weights and weights[c] == -wi:
            return c
    return None


def z_form_partial(u: LatticeFunction2D, rho1: float, rho2: float, varrho: float, n: int = 1) -> LatticeFunction2D:
    """The M = 2 partial derivative written through z_k = u_{k+e_n} - u_k."""
    o1, o2 = u.offset
    n1, n2 = u.shape
    lo = (o1 - 2, o2 - 2)
    shape = (n1 + 4, n2 + 4)
    pad = u.window((lo[0] - 2, lo[1] - 2), (shape[0] + 5, shape[1] + 5))
    ax = n - 1
    z = np.diff(pad, axis=ax)
    if ax == 0:
        z = z[:, :-1]
    else:
        z = z[:-1, :]
    # z has shape (shape + 4); z[p, q] is z at site lo - 2 + (p, q)

    def at(d1, d2):
        return z[2 + d1: 2 + d1 + shape[0], 2 + d2: 2 + d2 + shape[1]]

    if n == 1:
        v = (rho1 + rho2) * at(0, 0) + rho2 * (at(1, 0) + at(-1, 0)) + varrho * (at(0, 1) + at(0, -1))
    else:
        v = (rho1 + rho2) * at(0, 0) + rho2 * (at(0, 1) + at(0, -1)) + varrho * (at(1, 0) + at(-1, 0))
    return LatticeFunction2D(v / u.spacing, lo, u.spacing)


def sufficient_condition(rho1: float, rho2: float, varrho: float):
    margin = rho1 - rho2 - 2.0 * varrho
    return margin > 0, margin


def symbol_phi_2d(rho1, rho2, varrho, N, t):
    if N < 3:
        raise ValueError("N must be >= 3")
    t = np.asarray(t, dtype=float)
    out = rho1 + rho2 + 2.0 * rho2 * np.cos(t) + 2.0 * varrho * np.cos(N * t)
    return out if out.ndim else float(out)


def circulant_min_2d(rho1, rho2, varrho, N) -> float:
    """Smallest eigenvalue of the N^2 x N^2 circulant for either direction.

    Bands: rho1+rho2 on the diagonal, rho2 at offset 1 and varrho at offset N
    (direction 1); the roles of the two off-diagonal bands swap for direction 2.
    """
    theta = 2.0 * math.pi * np.arange(N * N) / (N * N)
    d1 = symbol_phi_2d(rho1, rho2, varrho, N, theta)
    d2 = rho1 + rho2 + 2.0 * varrho * np.cos(theta) + 2.0 * rho2 * np.cos(N * theta)
    return float(min(d1.min(), d2.min()))


def energy_2d(u: LatticeFunction2D, k: ContinuumKernel, reach: str = "lattice") -> float:
    """sum_k eps^2 |grad u|_k^2 over both partial derivatives."""
    e2 = u.spacing ** 2
    total = 0.0
    for n in (1, 2):
        v = nonlocal_partial(u, directional_weights(k, n, reach)).values
        total += e2 * float(np.sum(v * v))
    return total


def dirichlet_2d(u: LatticeFunction2D) -> float:
    """Nearest-neighbour energy, each unordered pair counted once."""
    n1, n2 = u.shape
    pad = u.window((u.offset[0] - 1, u.offset[1] - 1), (n1 + 2, n2 + 2))
    d1 = np.diff(pad, axis=0)
    d2 = np.diff(pad, axis=1)
    return float(np.sum(d1 * d1) + np.sum(d2 * d2))


@dataclass(frozen=True)
class Certificate2D:
    energy: float
    dirichlet: float
    Lambda: float
    margin: float
    N: int
    ratio: float
    passed: bool


def certificate_N(u: LatticeFunction2D) -> int:
    # padding keeps the circulant wrap-around away from the stencil reach
    return max(u.shape) + 6


def coercivity_check_2d(u: LatticeFunction2D, k: ContinuumKernel, Lambda: Optional[float] = None,
                        N: Optional[int] = None) -> Certificate2D:
    rho1, rho2, varrho = example_coefficients(k)
    ok, margin = sufficient_condition(rho1, rho2, varrho)
    F = energy_2d(u, k)
    D = dirichlet_2d(u)
    if not ok:
        raise ConditionFails(margin, energy=F, dirichlet=D)
    N = certificate_N(u) if N is None else N
    if Lambda is None:
        Lambda = circulant_min_2d(rho1, rho2, varrho, N) ** 2
    ratio = F / D if D > 0 else math.inf
    passed = F >= Lambda * D - 1e-10 * (1.0 + F)
    return Certificate2D(F, D, Lambda, margin, N, ratio, passed)


def checkerboard(n1: int, n2: int, offset=(0, 0), spacing: float = 1.0) -> LatticeFunction2D:
    k1 = np.arange(offset[0], offset[0] + n1)[:, None]
    k2 = np.arange(offset[1], offset[1] + n2)[None, :]
    return LatticeFunction2D(np.where((np.abs(k1) + np.abs(k2)) % 2 == 0, 1.0, -1.0), offset, spacing)
