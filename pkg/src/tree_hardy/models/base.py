"""Error hierarchy shared by every tree-hardy module."""

from typing import Optional


class HardyError(Exception):
    """Base exception for tree-hardy errors."""

    def __init__(self, message: str, exit_code: Optional[int] = None):
        """Initialize the error.

        Args:
            message: Error message
            exit_code: Process exit code the command line reports for it
        """
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code

    def __str__(self) -> str:
        if self.exit_code:
            return f"Error {self.exit_code}: {self.message}"
        return f"Error: {self.message}"


class InvalidTree(HardyError):
    """A parent list does not describe a rooted tree."""

    def __init__(self, message: str, vertex: Optional[int] = None):
        super().__init__(message, exit_code=4)
        self.vertex = vertex


class MultipleRoots(InvalidTree):
    """More than one vertex (or none) has no parent."""


class CycleDetected(InvalidTree):
    """Following parents from a vertex never reaches the root."""


class DanglingParent(InvalidTree):
    """A parent id lies outside the vertex range."""


class NegativeEntry(HardyError):
    """A vector that must be nonnegative and finite has a bad entry."""

    def __init__(self, name: str, index: int, value: float):
        super().__init__(f"{name} at index {index} must be finite and >= 0, got {value}", exit_code=2)
        self.vertex = index


class InvalidVertex(HardyError):
    """A vertex id is not in the tree."""

    def __init__(self, vertex: int, n: int):
        super().__init__(f"vertex {vertex} is not in 0..{n - 1}", exit_code=2)
        self.vertex = vertex


class InvalidExponent(HardyError):
    """An exponent lies outside (1, inf) or violates a theorem regime."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class DimensionMismatch(HardyError):
    """A per-vertex vector does not match the tree size."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=4)


class LengthMismatch(DimensionMismatch):
    """Two sequences that must align have different lengths."""


class DepthMismatch(DimensionMismatch):
    """Level data does not match the depth of its tree or profile."""


class InvalidSize(HardyError):
    """A requested size is not positive."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class SizeCapExceeded(HardyError):
    """A generated tree would exceed the configured vertex or depth cap."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=3)


class InfeasibleModel(HardyError):
    """A random tree model cannot produce the requested size."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class InvalidLaw(HardyError):
    """A weight law has invalid parameters or cannot be parsed."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class InvalidSigma(HardyError):
    """Sigma lies outside (0, 1)."""

    def __init__(self, sigma: float):
        super().__init__(f"sigma must lie in (0, 1), got {sigma}", exit_code=2)
        self.sigma = sigma


class TooLarge(HardyError):
    """The brute-force oracle was asked for a tree beyond its size limit."""

    def __init__(self, n: int, limit: int):
        super().__init__(
            f"brute-force oracle accepts at most {limit} vertices, got {n}",
            exit_code=2,
        )


class InvalidInputFile(HardyError):
    """A tree+weights or config file cannot be read or validated."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=4)


class NonFiniteIterate(HardyError):
    """A solver iterate overflowed; rescale the weights."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=5)
