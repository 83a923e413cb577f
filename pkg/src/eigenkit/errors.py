"""Exception taxonomy shared across the toolkit.

The split matters to the CLI: InputError maps to exit code 1, BackendError
to exit code 2.
"""


class EigenkitError(Exception):
    """Base class for every error raised by this package."""


class InputError(EigenkitError):
    """Bad user input: malformed files, invalid graphs, unknown names."""


class BackendError(EigenkitError):
    """A generation backend failed or rejected a request."""


class IoFailure(EigenkitError):
    """An output file could not be written."""
