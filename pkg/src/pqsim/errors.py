"""Error types shared across the package."""


class PqsimError(Exception):
    """Base class for errors raised by this package."""


class ScenarioError(PqsimError, ValueError):
    """A scenario file could not be parsed (bad JSON, missing or ill-typed fields)."""


class ValidationError(PqsimError, ValueError):
    """A scenario violates a model admissibility bound (step size, relaxation time)."""
