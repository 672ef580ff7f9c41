"""Exception and warning types shared across the package."""


class MegazordError(Exception):
    """Base class for all package errors."""


class DataUnreadable(MegazordError):
    """Input file missing or unreadable."""


class MissingHeader(MegazordError):
    """CSV header lacks one or more required column names."""


class MalformedRow(MegazordError):
    """A CSV row could not be decoded into a record."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownSymbol(MegazordError):
    """Requested symbol has no usable rows in the corpus."""


class DuplicateDate(MegazordError):
    """Two rows for the same symbol share a date."""


class SeriesTooShort(MegazordError):
    """Series does not meet the minimum length for an operation."""


class WindowTooLarge(MegazordError):
    """Window exceeds the number of available observations."""


class LookbackTooSmall(MegazordError):
    """Lookback below the architectural minimum for a forecaster."""


class ShapeMismatch(MegazordError):
    """Tensor shape incompatible with the layer or network input."""


class NonFiniteInput(MegazordError):
    """NaN or Inf encountered where finite values are required."""


class NonFiniteGradient(MegazordError):
    """NaN or Inf gradient passed to the optimizer."""


class TrainingDiverged(MegazordError):
    """Training loss became non-finite."""


class DegenerateFit(MegazordError):
    """Regression fit has no unique solution."""


class DegenerateSeries(MegazordError):
    """Metric undefined for this series (zero denominator)."""


class NotEnoughCandidates(MegazordError):
    """Too few candidate windows for a nearest-neighbor query."""


class UnsupportedAlpha(MegazordError):
    """Significance level not covered by the embedded table."""


class KOutOfTable(MegazordError):
    """Method count outside the embedded critical-value table."""


class ModelSeriesMismatch(MegazordError):
    """Model asked to forecast a split it was not fitted on."""


class ConfigInvalid(MegazordError):
    """Experiment configuration fails validation."""


class AllCellsFailed(MegazordError):
    """Every (series, method) cell of a run failed."""


class ConstantComponent(UserWarning):
    """A modeled component has zero range; model falls back to a constant."""
