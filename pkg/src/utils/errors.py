"""
Exception hierarchy shared by every module and mapped to CLI exit codes.
"""


class CausalGlueError(Exception):
    """Base class for all errors raised by this package."""
    exit_code = 3


class ParseError(CausalGlueError):
    "Raised when a scenario, model or proposition text cannot be parsed."
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class SemanticError(CausalGlueError):
    "Input parses but refers to something that does not exist or is inconsistent."


class CycleError(SemanticError):
    pass


class DuplicatePartyError(SemanticError):
    pass


class UnknownPartyError(SemanticError):
    pass


class SizeError(SemanticError):
    "Raised when a desk-scale cap (parties, strategies, table entries) is exceeded."


class DuplicateNameError(SemanticError):
    pass


class UnknownContextError(SemanticError):
    pass


class UnknownAtomError(SemanticError):
    pass


class EmptyFamilyError(SemanticError):
    pass


class NonTotalOrderError(SemanticError):
    pass


class NormalizationError(SemanticError):
    pass


class MissingContextError(SemanticError):
    pass


class UpClosureError(SemanticError):
    "Raised in strict mode when a declared context set is not upward closed."


class KernelNormalizationError(SemanticError):
    pass


class BinMismatchError(SemanticError):
    pass


class InfeasibleScenarioError(SemanticError):
    pass


class InadmissibleSeedError(CausalGlueError):
    exit_code = 4


class CapExceededError(CausalGlueError):
    pass


class ToleranceError(CausalGlueError):
    pass


class NumericalRankError(CausalGlueError):
    pass


class MissingInterventionError(SemanticError):
    pass


class UnknownEdgeError(SemanticError):
    pass


class UnknownEventError(SemanticError):
    pass


class UnposedForcingError(SemanticError):
    "Raised in strict mode when an atom is forced at a context where it is not posed."
