"""Exception taxonomy shared across the package.

The split matters for the CLI exit-code contract: parameter misuse maps to
exit 1, bad data to exit 2, numerical failures to exit 3.
"""


class ParameterError(ValueError):
    """A caller-supplied parameter is out of its supported range."""


class InputDataError(ValueError):
    """Input data violates an operation's preconditions."""


class StructureError(InputDataError):
    """A composite object (e.g. a decomposition) is internally inconsistent."""


class DegenerateEnergyError(InputDataError):
    """A detail level has zero energy, so its log-energy is undefined."""


class IngestionError(InputDataError):
    """A dataset on disk could not be assembled into a coherent whole."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class ParseError(InputDataError):
    """A value in a data file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        super().__init__(message)
        self.path = path
        self.line = line


class ConvergenceError(RuntimeError):
    """An iterative fit did not reach its tolerance."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations
