from __future__ import annotations

from typing import Any


class Error(Exception):
    """The base exception for circleLib."""

    exit_code: int = 1
    """Process exit code the command line front end uses for this error."""

    def to_dict(self) -> dict[str, Any]:
        """Returns the machine-readable payload printed on stderr by the CLI."""
        return {
            "error": self.__class__.__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }


class ExtrasNotInstalledError(Error):
    """The extras required for this feature are not installed."""

    def __init__(self, extras: str) -> None:
        super().__init__(f"Extras not installed: circleLib[{extras}]")

    def __call__(self, *args: Any, **kwargs: Any) -> None:
        raise self


class GeometryError(Error, ValueError):
    """The input geometry violates a precondition (bad packing, coincident
    normalization points, point inside a continuum, ...)."""

    exit_code = 1


class ConvergenceError(Error, ArithmeticError):
    """A numerical procedure did not converge.

    Args:
        message: human readable reason.
        report: optional partial diagnostics (e.g. the residuals recorded
            up to the failing sweep), included in :meth:`to_dict`.
    """

    exit_code = 2

    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message)
        self.report = report

    def to_dict(self) -> dict[str, Any]:
        result = super().to_dict()
        if self.report is not None:
            result["report"] = self.report
        return result


class ArtifactError(Error, OSError):
    """An artifact could not be read, parsed or does not match the request."""

    exit_code = 3


class UsageError(Error, ValueError):
    """The command line arguments are invalid."""

    exit_code = 1
