"""Exception hierarchy shared by every subpackage."""


class WxTransError(Exception):
    """Base class for toolkit errors."""


class InvalidArgument(WxTransError, ValueError):
    pass


class ConfigurationError(WxTransError):
    pass


class ConflictError(WxTransError):
    pass


class NotFoundError(WxTransError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class ScorerUnavailable(WxTransError):
    """No external scorer is configured."""


class ScorerFailure(WxTransError):
    """The external scorer ran but returned garbage or a nonzero exit."""

    def __init__(self, message: str, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics


class EngineError(WxTransError):
    """A translation engine failed on a request."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class EngineUnavailable(EngineError):
    pass


class NonRepresentableError(WxTransError, ValueError):
    def __init__(self, chars: list[str]):
        self.chars = chars
        listing = ", ".join(f"{c!r} (U+{ord(c):04X})" for c in chars)
        super().__init__(f"characters not representable in ASCII: {listing}")
