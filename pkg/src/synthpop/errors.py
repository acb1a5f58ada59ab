"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 2, DataError (and
subclasses) -> 3, InvariantError and anything unexpected -> 4.
"""


class SynthpopError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(SynthpopError):
    """Bad configuration, flags, or missing/ill-ordered stage artifacts."""


class DataError(SynthpopError):
    """Input data violates the documented schema or semantics."""


class SchemaError(DataError):
    """A required column is missing from an input file."""

    def __init__(self, path, column):
        self.path = path
        self.column = column
        super().__init__(f"{path}: missing required column '{column}'")


class RowError(DataError):
    """A row of an input file could not be parsed."""

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class GenerationError(SynthpopError):
    """Chain generation cannot proceed (degenerate target distributions)."""


class InvariantError(SynthpopError):
    """An internal consistency check failed; indicates a bug."""
