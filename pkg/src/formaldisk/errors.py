"""Exception types shared across the package."""


class FormalDiskError(Exception):
    """Base class for all package errors."""


class ShapeError(FormalDiskError):
    """Rank, truncation order, or matrix shape mismatch."""


class InvertibilityError(FormalDiskError):
    """Singular linear part or non-unit constant term."""


class ClosednessError(FormalDiskError):
    """A form required to be de Rham closed is not."""


class TruncationOverflowError(FormalDiskError):
    """A state operation exceeded its bookkeeping bounds under strict policy."""


class ParseError(FormalDiskError):
    """Expression text rejected; carries the offending position."""

    def __init__(self, message, text="", pos=0):
        super().__init__(message)
        self.text = text
        self.pos = pos

    def caret_diagnostic(self) -> str:
        line = self.text
        return f"{line}\n{' ' * self.pos}^ {self.args[0]}"
