"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid argument or inconsistent configuration."""


class AnalysisError(RuntimeError):
    """A derived quantity could not be extracted from the data."""


class TrainingError(RuntimeError):
    """Model training failed or diverged."""
