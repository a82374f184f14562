"""Exception types shared across the package.

The CLI maps each class to a distinct process exit code, so keep the
hierarchy flat and specific.
"""


class TproError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(TproError):
    """Base class for configuration problems."""


class ConfigFileMissingError(ConfigError):
    """The requested config file does not exist."""


class ConfigSyntaxError(ConfigError):
    """The config file is not parseable as sectioned key-value text."""


class UnknownKeyError(ConfigError):
    """A section or key is not part of the config schema.  Names the key."""


class ValueRangeError(ConfigError):
    """A config value is outside its admissible range.  Names the key."""


class ConfigConflictError(ConfigError):
    """Mutually exclusive settings were both supplied (e.g. isolated flag plus
    hybrid geometry section)."""


class SingularDenominatorError(TproError):
    """A material response denominator is within the configured floor of zero
    (driving exactly at an undamped resonance)."""


class BracketError(TproError):
    """A root bracket does not contain exactly one sign change."""


class MultipoleConvergenceError(TproError):
    """The multipole sum did not converge within the configured number of
    terms.  Carries the partial sums so callers can inspect them."""

    def __init__(self, message: str, partial_g1=None, partial_g2=None, partial_g3=None, n_terms=None):
        super().__init__(message)
        self.partial_g1 = partial_g1
        self.partial_g2 = partial_g2
        self.partial_g3 = partial_g3
        self.n_terms = n_terms


class StiffnessError(TproError):
    """The adaptive integrator underflowed its minimum step size."""


class PositivityError(TproError):
    """A density matrix eigenvalue fell below the monitoring floor."""


class PartialSweepError(TproError):
    """A sweep finished, but one or more grid points failed."""


class PerturbativeLimitWarning(UserWarning):
    """Closed-form overlay requested outside its validity window."""
