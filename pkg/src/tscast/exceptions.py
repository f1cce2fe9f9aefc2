"""Exception hierarchy and warning categories used across the package."""

from __future__ import annotations


class ForecastError(Exception):
    """Base class for all tscast errors."""


class DataWarning(UserWarning):
    """Non-fatal data issue (NaN from division by zero, floored scales, ...)."""


# --- container -------------------------------------------------------------

class ShapeMismatch(ForecastError):
    """Value tensor shape disagrees with the index or another operand."""


class DuplicateComponentName(ForecastError):
    pass


class EmptySeries(ForecastError):
    pass


class NonUniformTimeGrid(ForecastError):
    """Input times cannot be placed on a single (start, step) grid."""


class DuplicateCell(ForecastError):
    """The same (time, component[, sample]) cell appears more than once."""


class OutOfRange(ForecastError):
    """A slice/split point does not resolve to a valid index position."""


class SeriesTooShort(ForecastError):
    pass


class DeterministicInput(ForecastError):
    """Operation requires a stochastic series (sample count > 1)."""


class QuantileOutOfRange(ForecastError):
    pass


class IndexMismatch(ForecastError):
    """Two series do not share the time axis required by the operation."""


class BroadcastError(ForecastError):
    """Sample counts are incompatible (neither equal nor broadcastable)."""


class NonContiguousAppend(ForecastError):
    """Appended series does not continue the time axis exactly."""


# --- transforms ------------------------------------------------------------

class NotFitted(ForecastError):
    """fit() has not been called yet."""


class NotInvertible(ForecastError):
    pass


class NaNInput(ForecastError):
    """NaN values where finite values are required."""


class NonPositiveValues(ForecastError):
    """Strictly positive values are required (Box-Cox, multiplicative forms)."""


class AllNaNComponent(ForecastError):
    pass


# --- datasets --------------------------------------------------------------

class UnknownDataset(ForecastError):
    pass


class CorruptBundle(ForecastError):
    """Bundled dataset file does not match its recorded checksum."""


# --- windowing -------------------------------------------------------------

class CovariateCoverageError(ForecastError):
    """A covariate series does not span the rows a window needs."""


class LengthMismatch(ForecastError):
    """Covariate list length differs from the target list length."""


class WindowTooLong(ForecastError):
    """Series shorter than one input+output window."""


# --- models ----------------------------------------------------------------

class InvalidConfig(ForecastError):
    """Model or run configuration value is out of its allowed domain."""


class UnsupportedMultivariate(ForecastError):
    """Model only accepts univariate series."""


class TooManyFrequencies(ForecastError):
    """Requested more frequency bins than the spectrum contains."""


class SingularSystem(ForecastError):
    """Normal equations are singular; use a ridge penalty > 0."""


class TooFewResiduals(ForecastError):
    pass


class UnsupportedLikelihoodOperation(ForecastError):
    """The likelihood has no closed form for the requested quantity."""


class ModelFormatError(ForecastError):
    """Serialized model cannot be loaded (bad payload or version)."""


# --- filters ---------------------------------------------------------------

class DimensionMismatch(ForecastError):
    pass


class NonInvertibleInnovation(ForecastError):
    """Innovation covariance is not invertible."""


class BadWindow(ForecastError):
    """Moving-average window must be odd and no longer than the series."""


# --- evaluation ------------------------------------------------------------

class EmptyIntersection(ForecastError):
    """Actual and predicted series share no time points."""


class ZeroDenominator(ForecastError):
    """Percentage metric undefined because a denominator is zero."""


class MissingInsample(ForecastError):
    """MASE needs an in-sample series and a season length."""


class PlanInfeasible(ForecastError):
    """Backtest plan leaves no room for a single forecast window."""


class EmptyGrid(ForecastError):
    pass


class GridSearchFailed(ForecastError):
    """Every parameter combination failed; carries per-combination causes."""

    def __init__(self, failures):
        self.failures = failures
        lines = "; ".join(f"{params}: {err}" for params, err in failures)
        super().__init__(f"all {len(failures)} combinations failed: {lines}")


class BacktestModelError(ForecastError):
    """A model raised during a backtest; records the failing origin."""

    def __init__(self, origin, cause):
        self.origin = origin
        self.cause = cause
        super().__init__(f"model failed at forecast origin {origin}: {cause}")


# --- ensembles -------------------------------------------------------------

class MemberFailure(ForecastError):
    """An ensemble member failed; records which one and why."""

    def __init__(self, member_index, cause):
        self.member_index = member_index
        self.cause = cause
        super().__init__(f"ensemble member {member_index} failed: {cause}")


class DegenerateSplit(ForecastError):
    """Ensemble training split leaves one side shorter than a member needs."""


# --- cli -------------------------------------------------------------------

class ConfigError(ForecastError):
    """Invalid run configuration; message names the offending path."""
