"""Exception and warning types shared across the package."""


class EstimationError(ValueError):
    """Base class for failures of an estimation pipeline on a given sample."""


class InvalidSample(EstimationError):
    pass


class SampleTooSmall(InvalidSample):
    pass


class DegenerateECF(EstimationError):
    """|phi_n(t)|^2 is too close to 0 or 1 for the double-log transform."""

    def __init__(self, t, modulus_sq):
        self.t = float(t)
        self.modulus_sq = float(modulus_sq)
        super().__init__(
            f"degenerate empirical characteristic function at t={self.t!r}: "
            f"|phi_n(t)|^2 = {self.modulus_sq!r}"
        )


class EmptyAfterTrim(EstimationError):
    pass


class ZeroSpread(EstimationError):
    pass


class SingularDesign(EstimationError):
    pass


class NonPositiveAlpha(EstimationError):
    pass


class ZeroVariance(EstimationError):
    pass


class ConfigInvalid(ValueError):
    """Raised with every violated constraint listed in ``problems``."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))
