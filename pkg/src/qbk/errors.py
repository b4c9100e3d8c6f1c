"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class QBKError(Exception):
    """Base class for every error raised by the package."""


class CaptureError(QBKError):
    """A substitution would capture a variable of the substituted term."""


class NotASubformula(QBKError):
    pass


class FormulaSyntaxError(QBKError):
    def __init__(self, position: int, expectation: str, text: str = ""):
        self.position = position
        self.expectation = expectation
        self.text = text
        super().__init__(f"at position {position}: expected {expectation}")


class ArityError(QBKError):
    pass


class UnknownSymbol(QBKError):
    pass


class SchemaError(QBKError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class InvariantViolation(QBKError):
    """A structural invariant of a model or derivation does not hold."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"[{condition}] {message}")


class UnboundVariable(QBKError):
    pass


class IndividualOutOfDomain(QBKError):
    pass


class BoundsTooLarge(QBKError):
    pass


class NotNNF(QBKError):
    pass


class NotNelson(QBKError):
    pass


class ClassViolation(QBKError):
    def __init__(self, model_class: str, violations):
        self.model_class = model_class
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:3])
        super().__init__(f"model is not in class {model_class}: {shown}")


class NotApplicable(QBKError):
    pass
