"""Discrete nonlocal gradients on lattices, their coercivity certificates,
and discrete-to-continuum checks."""

from .errors import (
    ConditionFails,
    ConfigError,
    ConvexityViolated,
    DegenerateTail,
    EpsilonTooLarge,
    NonIntegrable,
    NonlocalError,
    NonPositiveWeight,
    NotStrictlyDecreasing,
    OddM,
    QuadratureNonConvergent,
    SpacingMismatch,
    TooLargeN,
    TooSmallN,
)
from .kernel import (
    ContinuumKernel,
    DiscreteKernel,
    continuum_constant,
    discretize,
    gamma_constant,
    validate_discrete,
)
from .grad1d import (
    LatticeFunction1D,
    interpolate,
    nonlocal_gradient,
    nonlocal_gradient_symmetric,
    oscillation_null_vector,
    summation_by_parts,
)
from .spectral import (
    CirculantSpec,
    SymbolAnalysis,
    circulant_eigenvalues,
    circulant_from_kernel,
    coercivity_constant,
    dense_eig_oracle,
    fejer_decomposition,
    min_symbol,
    symbol_phi,
)
from .energy import (
    EnergyDensity,
    coercivity_check,
    dirichlet_energy,
    gamma_target,
    general_energy,
    quadratic_energy,
)
from .continuum import (
    SampledField,
    cell_averages,
    continuum_gradient,
    discrete_continuum_identity,
    equicoercivity_check,
    riesz_counterexample,
)
from .grad2d import (
    LatticeFunction2D,
    coercivity_check_2d,
    directional_weights,
    nonlocal_partial,
    sufficient_condition,
    symbol_phi_2d,
)

__version__ = "0.1.0"
