"""Exception types shared across the package."""


class EmptyTrace(ValueError):
    """Raised when an operation receives a trace with no samples."""


class TraceTooShort(ValueError):
    """Raised when a trace is too short for the requested analysis."""


class SessionTooShort(ValueError):
    """Raised when a session has too few feature frames to build segments."""


class NoGroundTruth(ValueError):
    """Raised when an operation needs a ground-truth trace the session lacks."""


class DimensionMismatch(ValueError):
    """Raised when array shapes disagree with the configured dimensions."""


class NoTrainingData(ValueError):
    """Raised when a training call receives an empty pair set."""


class TooFewSessions(ValueError):
    """Raised when k exceeds the number of sessions available to cluster."""


class RegionsOverlap(ValueError):
    """Raised when annotation regions that must be disjoint overlap."""


class LengthMismatch(ValueError):
    """Raised when a submitted trace length disagrees with its region."""


class CountTooLarge(ValueError):
    """Raised when a sampler is asked for more indices than the trace has."""


class UnknownFeature(KeyError):
    """Raised when a named log feature is not present in a session."""
