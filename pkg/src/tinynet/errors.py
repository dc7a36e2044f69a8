"""Exception hierarchy shared by the library and the CLI."""


class NetworkError(Exception):
    """Base class for all tinynet errors."""


class DimensionError(NetworkError, ValueError):
    """Vector or matrix sizes do not line up."""


class NonDifferentiableError(NetworkError):
    """A gradient was requested through a threshold unit."""


class ValidationError(NetworkError, ValueError):
    """A network, config or document violates an invariant."""


class FormatParseError(NetworkError, ValueError):
    """A model or dataset document could not be parsed."""


class FormatVersionError(FormatParseError):
    """A model document declares an unknown format_version."""
