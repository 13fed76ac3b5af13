"""Exception hierarchy shared by every package.

Each error carries a human readable ``detail`` and the process ``exit_code``
the command line reports for it (1 for bad input, 2 for a failed
construction or check).
"""

from typing import Optional


class ReductioError(Exception):
    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InputError(ReductioError):
    exit_code = 1


class ParseError(InputError):
    def __init__(self, detail: str, path: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{detail}")
        self.path = path
        self.line = line


class MalformedMorphism(InputError):
    pass


class MalformedGraph(InputError):
    pass


class MalformedSpan(InputError):
    pass


class IllSorted(InputError):
    pass


class UnboundVariable(InputError):
    pass


# graphs and colimits

class EndpointMismatch(ReductioError):
    pass


class LabelClash(ReductioError):
    pass


class BindingClash(LabelClash):
    """Variables glued by a span cannot be unified to a common term."""


class NonCommuting(ReductioError):
    pass


class NonComposable(ReductioError):
    pass


class RewriteError(ReductioError):
    pass


class DanglingViolation(RewriteError):
    pass


class IdentificationViolation(RewriteError):
    pass


class UnsupportedMatch(RewriteError):
    pass


# equational logic and deduction

class ModelDoesNotSatisfySpec(InputError):
    pass


class SortMismatch(ReductioError):
    pass


class DenominatorNotPleo(ReductioError):
    pass


class PleoVerificationFailed(ReductioError):
    pass


class InstanceNotPleo(ReductioError):
    pass


class LeftSquareNotCommuting(ReductioError):
    pass


class WitnessNotPleo(ReductioError):
    pass


class CubeCheckFailed(ReductioError):
    def __init__(self, detail: str, culprit: str):
        super().__init__(detail)
        self.culprit = culprit


class RuleHasNoSpan(ReductioError):
    pass


class ScriptStepFailed(ReductioError):
    def __init__(self, detail: str, step: int, trace: list):
        super().__init__(detail)
        self.step = step
        self.trace = trace


class PastingMismatch(ReductioError):
    """A pasted pair of squares disagrees with the pasting law; indicates an engine bug."""
