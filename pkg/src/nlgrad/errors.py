"""Exception types raised across the package."""


class NonlocalError(ValueError):
    """Base class for all domain errors in nlgrad."""


class NonPositiveWeight(NonlocalError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"weight at index {index} is not positive: {value!r}")


class NotStrictlyDecreasing(NonlocalError):
    def __init__(self, index, prev, value):
        self.index = index
        super().__init__(
            f"weights must be strictly decreasing: rho[{index - 1}]={prev!r} "
            f"<= rho[{index}]={value!r}"
        )


class DegenerateTail(NonlocalError):
    def __init__(self, index, point):
        self.index = index
        self.point = point
        super().__init__(
            f"kernel profile vanishes at sample point r={point!r} (weight index {index}); "
            "shrink M or use the midpoint convention"
        )


class NonIntegrable(NonlocalError):
    pass


class SpacingMismatch(NonlocalError):
    pass


class OddM(NonlocalError):
    pass


class TooSmallN(NonlocalError):
    pass


class TooLargeN(NonlocalError):
    pass


class ConvexityViolated(NonlocalError):
    def __init__(self, j, value):
        self.j = j
        self.value = value
        super().__init__(
            f"convexity condition fails at j={j}: second difference {value!r} is not positive"
        )


class EpsilonTooLarge(NonlocalError):
    pass


class QuadratureNonConvergent(NonlocalError):
    pass


class ConditionFails(NonlocalError):
    """The 2D sufficient condition does not hold; ``energy`` is still attached."""

    def __init__(self, margin, energy=None, dirichlet=None):
        self.margin = margin
        self.energy = energy
        self.dirichlet = dirichlet
        super().__init__(f"sufficient condition rho1 > rho2 + 2*varrho fails (margin={margin!r})")


class ConfigError(NonlocalError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
