"""Exception types shared across the package."""


class SchlichtError(Exception):
    """Base class for all package errors."""


class OutsideDisk(SchlichtError):
    """Evaluation requested at a point outside the open unit disk."""


class NearZeroConstantTerm(SchlichtError):
    """Series reciprocal requested with |a_0| at or below the stability floor."""


class InvalidParameter(SchlichtError):
    """Operator or class parameter outside its admissible domain."""


class QuadratureFailure(SchlichtError):
    """Adaptive quadrature did not reach the requested tolerance."""


class MissingCompanion(SchlichtError):
    """A companion function is required for this class kind but was not given."""


class GenerationExhausted(SchlichtError):
    """Accept-reject sampling hit its rejection budget without filling the pool."""


class ConfigError(SchlichtError):
    """Experiment configuration is outside the catalog entry's domain."""
