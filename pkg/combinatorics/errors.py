from typing import Optional


class SuperpermError(ValueError):
    """Base class for every domain error raised by the toolkit."""


class InputError(SuperpermError):
    """An argument violates a documented precondition."""


class ParseError(SuperpermError):

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class StructuralError(SuperpermError):
    """A tour is not a Hamiltonian circuit of the expected shape."""


class CapabilityError(SuperpermError):
    """An exact method was asked to handle more vertices than it supports."""
