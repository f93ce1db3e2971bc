"""Exception hierarchy shared by the workbench modules."""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class ConfigError(WorkbenchError, ValueError):
    pass


class ShapeError(WorkbenchError, ValueError):
    pass


class DomainError(WorkbenchError, ValueError):
    """An argument lies outside the domain of the physical model."""


class ProtocolError(WorkbenchError):
    pass


class DatasetError(WorkbenchError, ValueError):
    pass


class NumericalError(WorkbenchError, ArithmeticError):
    pass


class FoldError(WorkbenchError, ValueError):
    pass


class TrainingError(WorkbenchError):
    pass


class FormatError(WorkbenchError, ValueError):
    pass


class ParseError(FormatError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class SegmentationError(WorkbenchError):
    pass


class EvaluationError(WorkbenchError):
    pass


class TrialFailure(WorkbenchError):
    """A trial that did not complete; carries the partial log."""

    reason = "failed"

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log


class SafetyAbort(TrialFailure):
    """Measured force exceeded the abort limit."""

    reason = "abort"

    def __init__(self, message, force=None, log=None):
        super().__init__(message, log=log)
        self.force = force


class TrialTimeout(TrialFailure):
    reason = "timeout"
