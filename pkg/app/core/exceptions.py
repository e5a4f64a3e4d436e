import sys
from typing import TYPE_CHECKING, Any, Dict

from app.core.logging import logger

if TYPE_CHECKING:
    from app.core.routing import CommandApp


class AppError(Exception):
    exit_code: int = 1

    def __init__(self, message: str, *, exit_code: int | None = None, extra: Dict[str, Any] | None = None):
        super().__init__(message)
        if exit_code is not None:
            self.exit_code = exit_code
        self.extra = extra or {}

    @property
    def message(self) -> str:
        return str(self)


class UsageError(AppError):
    exit_code = 2


class ParseError(UsageError):
    """Malformed polynomial expression; `position` is the 0-based offset of the offending character."""

    def __init__(self, message: str, *, text: str, position: int, extra: Dict[str, Any] | None = None):
        super().__init__(f"{message} at position {position}", extra=extra)
        self.text = text
        self.position = position
        self.extra.setdefault("position", position)

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


class DomainError(AppError):
    exit_code = 1


class PreconditionError(DomainError):
    pass


class ResourceLimitError(DomainError):
    pass


class RegularSequenceError(DomainError):
    def __init__(self, message: str, *, k: int, degree: int):
        super().__init__(message, extra={"k": k, "degree": degree})
        self.k = k
        self.degree = degree


class ObstructionError(DomainError):
    pass


class NonIsolatedError(DomainError):
    def __init__(self, message: str, *, hilbert_series: list[int]):
        super().__init__(message, extra={"hilbert_series": hilbert_series})
        self.hilbert_series = hilbert_series


def register_exception_handlers(app: "CommandApp"):
    @app.exception_handler(AppError)
    def app_error_handler(command: str, exc: AppError) -> int:
        logger.warning(
            "AppError | type=%s exit_code=%s command=%s message=%s extra=%s",
            exc.__class__.__name__,
            exc.exit_code,
            command,
            exc.message,
            exc.extra,
        )
        print(f"error: {exc.message}", file=sys.stderr)
        if isinstance(exc, ParseError):
            print(exc.caret(), file=sys.stderr)
        return exc.exit_code

    @app.exception_handler(Exception)
    def unhandled_exception_handler(command: str, exc: Exception) -> int:
        logger.exception("Unhandled exception in %s: %s", command, exc)
        print("error: Internal error", file=sys.stderr)
        return 1
