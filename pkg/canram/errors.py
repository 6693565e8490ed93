from typing import Any, Dict, Optional


class CanramError(ValueError):
    """Base class for domain errors. Carries a details payload for reports."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, details or {})
        self.message = message
        self.details: Dict[str, Any] = details or {}

    def __str__(self) -> str:
        return self.message


class UniformityMismatchError(CanramError):
    pass


class DomainError(CanramError):
    pass


class PartialColouringError(CanramError):
    pass


class IncompatibleColouringError(CanramError):
    def __init__(self, message: str, edge, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, {"edge": list(edge), **(details or {})})
        self.edge = tuple(edge)


class PatternError(CanramError):
    pass


class ForeignVertexError(CanramError):
    pass


class ConfigError(CanramError):
    pass


class GraphFormatError(CanramError):
    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message, {"line_number": line_number})
        self.line_number = line_number


class GuardExceededError(RuntimeError):
    """A configured size guard would be exceeded; the search was not attempted or was cut off."""

    def __init__(self, guard: str, limit: int, observed: Any) -> None:
        super().__init__(f"guard '{guard}' exceeded: limit={limit} observed={observed}")
        self.guard = guard
        self.limit = limit
        self.observed = observed

    def to_dict(self) -> Dict[str, Any]:
        return {"guard": self.guard, "limit": self.limit, "observed": self.observed}


def check_uniformity(H, G) -> None:
    if H.uniformity != G.uniformity:
        raise UniformityMismatchError(
            f"uniformity mismatch: pattern is {H.uniformity}-uniform, host is {G.uniformity}-uniform",
            {"pattern": H.uniformity, "host": G.uniformity},
        )
