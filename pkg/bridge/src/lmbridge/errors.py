class BridgeError(Exception):
    """Base class for everything this package raises on purpose."""


class CorpusError(BridgeError):
    """A training-corpus file could not be used; message carries path:line."""
