"""Flat ``key = value`` experiment configuration.

Format (UTF-8)::

    # comment
    weights = 2, 1          # explicit discrete kernel, or:
    kind = tent             # tent | riesz | indicator
    support = 1
    alpha = 0.5
    M = 4
    convention = left       # left | midpoint
    eps = 1/512             # repeat the key for sweeps
    eps = 2^-10
    eps_pow2 = 4:12         # shorthand for eps = 2^-4 .. 2^-12
    N = 64
    R = 2
    trials = 1000
    seed = 42
    sites = 128
    window = 24
    grid_points = 1024
    function = bump         # bump | sine (gamma-converge)
    out = results.csv

Command-line flags override file values; ``eps`` given on the command line
replaces the file's list rather than extending it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import List, Optional

from .errors import ConfigError
from .kernel import ContinuumKernel, DiscreteKernel, discretize

INT_KEYS = {"M", "N", "trials", "seed", "sites", "window", "grid_points", "points_per_wavelength"}
FLOAT_KEYS = {"alpha", "support", "R"}
STR_KEYS = {"kind", "convention", "function", "out"}
LIST_KEYS = {"eps", "weights"}
KNOWN = INT_KEYS | FLOAT_KEYS | STR_KEYS | LIST_KEYS | {"eps_pow2"}

RANDOMIZED = {"coercivity", "grad2d-check"}


def parse_number(text: str) -> float:
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty value")
    if "^" in s:
        base, exp = s.split("^", 1)
        return float(parse_number(base)) ** float(parse_number(exp))
    if "/" in s:
        return float(Fraction(s))
    return float(s)


def parse_pow2_range(text: str) -> List[float]:
    a, b = (int(p) for p in text.split(":"))
    step = 1 if b >= a else -1
    return [2.0 ** -j for j in range(a, b + step, step)]


def _convert(key: str, raw: str, line=None):
    try:
        if key in INT_KEYS:
            v = parse_number(raw)
            if v != int(v):
                raise ValueError("not an integer")
            return int(v)
        if key in FLOAT_KEYS:
            return parse_number(raw)
        if key == "weights":
            return [parse_number(p) for p in raw.split(",") if p.strip()]
        if key == "eps":
            return [parse_number(raw)]
        if key == "eps_pow2":
            return parse_pow2_range(raw)
        return raw.strip()
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {raw!r}: {exc}", line=line, field=key) from None


def parse_config(text: str) -> dict:
    """Parse config text into a dict; repeated ``eps`` lines accumulate."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in KNOWN:
            raise ConfigError("unknown key", line=lineno, field=key)
        val = _convert(key, value, lineno)
        if key in ("eps", "eps_pow2"):
            out.setdefault("eps", []).extend(val)
        else:
            out[key] = val
    return out


@dataclass
class ExperimentConfig:
    subcommand: str
    weights: Optional[List[float]] = None
    kind: Optional[str] = None
    alpha: Optional[float] = None
    support: Optional[float] = None
    M: Optional[int] = None
    convention: str = "left"
    eps: List[float] = field(default_factory=list)
    N: Optional[int] = None
    R: float = 2.0
    trials: Optional[int] = None
    seed: Optional[int] = None
    sites: int = 128
    window: int = 24
    grid_points: int = 1024
    points_per_wavelength: int = 48
    function: str = "bump"
    out: Optional[str] = None

    def header_items(self):
        """Resolved settings as ``(key, text)`` pairs in a fixed order.

        The output path is left out so that identical runs give identical bytes.
        """
        items = []
        for f in fields(self):
            if f.name == "out":
                continue
            v = getattr(self, f.name)
            if v is None or (isinstance(v, list) and not v):
                continue
            if isinstance(v, list):
                v = ", ".join(repr(float(x)) for x in v)
            elif isinstance(v, float):
                v = repr(v)
            items.append((f.name, str(v)))
        return items

    def validate(self):
        if self.subcommand in RANDOMIZED and self.seed is None:
            raise ConfigError("a seed is required for randomized trials", field="seed")
        if self.convention not in ("left", "midpoint"):
            raise ConfigError(f"unknown convention {self.convention!r}", field="convention")
        if self.kind is not None and self.kind not in ("tent", "riesz", "indicator"):
            raise ConfigError(f"unknown kernel kind {self.kind!r}", field="kind")
        if self.function not in ("bump", "sine"):
            raise ConfigError(f"unknown function {self.function!r}", field="function")
        for e in self.eps:
            if not e > 0:
                raise ConfigError(f"eps must be positive, got {e}", field="eps")
        if self.trials is not None and self.trials < 1:
            raise ConfigError("trials must be >= 1", field="trials")
        return self

    def continuum_kernel(self, default_kind="tent", default_support=1.0) -> ContinuumKernel:
        kind = self.kind or default_kind
        s = self.support if self.support is not None else default_support
        if kind == "tent":
            return ContinuumKernel.tent(s)
        if kind == "indicator":
            return ContinuumKernel.indicator(s)
        if self.alpha is None:
            raise ConfigError("riesz kernels need alpha", field="alpha")
        return ContinuumKernel.truncated_riesz(self.alpha, s)

    def discrete_kernel(self) -> DiscreteKernel:
        """Explicit weights if given, otherwise the discretized continuum kernel."""
        if self.weights is not None:
            return DiscreteKernel(self.weights)
        if self.kind is None:
            raise ConfigError("specify either 'weights' or 'kind'", field="weights")
        if self.M is None:
            raise ConfigError("discretizing a continuum kernel needs M", field="M")
        return discretize(self.continuum_kernel(), self.M, self.convention)


def build_config(subcommand: str, file_values: dict, overrides: dict) -> ExperimentConfig:
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(subcommand=subcommand, **merged).validate()
