"""Exception hierarchy shared across the toolkit.

The CLI maps these to exit codes: ConfigError -> 2, DataError -> 3,
ScorerProtocolError -> 4.
"""


class ProtoretError(Exception):
    """Base class for all toolkit errors."""

    category = "error"


class ConfigError(ProtoretError):
    """Invalid configuration or misuse of an operation."""

    category = "config-error"


class DataError(ProtoretError):
    """Unreadable, malformed, or inconsistent input data."""

    category = "data-error"


class ScorerProtocolError(ProtoretError):
    """External scorer violated the wire protocol or timed out."""

    category = "scorer-protocol-error"
