"""dualhawkes exceptions."""

import typing as t


class HawkesError(Exception):
    """Base dualhawkes exception."""


class InvalidInput(HawkesError):
    """Invalid user input (flags, config, files)."""


class ContractViolation(HawkesError, ValueError):
    """Precondition of a model operation failed."""


class DimensionMismatch(ContractViolation):
    """Embedding dimensions disagree."""
    def __init__(self, what: str, expected: int, actual: int):
        super().__init__(what, expected, actual)
        self.what = what
        self.expected = expected
        self.actual = actual

    def __str__(self) -> str:
        return (f"dimension mismatch in {self.what}: "
                f"expected {self.expected}, got {self.actual}")


class NonFiniteError(HawkesError, ArithmeticError):
    """Non-finite objective, gradient or parameter during fitting."""
    def __init__(self, quantity: str, step: t.Optional[int] = None):
        super().__init__(quantity, step)
        self.quantity = quantity
        self.step = step

    def __str__(self) -> str:
        where = f" at step {self.step}" if self.step is not None else ""
        return f"non-finite {self.quantity}{where}"


class MalformedFile(InvalidInput):
    """Input file can't be parsed."""
    def __init__(self, path: t.Any, line: int, reason: str):
        super().__init__(path, line, reason)
        self.path = path
        self.line = line
        self.reason = reason

    def __str__(self) -> str:
        return f"{self.path}:{self.line}: {self.reason}"


class MissingFile(InvalidInput):
    """Input file doesn't exist."""
    def __init__(self, path: t.Any, what: str = "file"):
        super().__init__(path, what)
        self.path = path
        self.what = what

    def __str__(self) -> str:
        return f"{self.what} not found: {self.path}"


class UnknownExperiment(InvalidInput):
    """Experiment name isn't one of the known experiments."""
    def __init__(self, name: str, choices: t.Sequence[str]):
        super().__init__(name, choices)
        self.name = name
        self.choices = tuple(choices)

    def __str__(self) -> str:
        return (f"unknown experiment: {self.name} "
                f"(valid names: {', '.join(self.choices)})")


class IdentifiabilityWarning(UserWarning):
    """Decay rates of the two kernel components (nearly) coincide."""
