"""Exceptions raised by the CEaMP workbench."""


class CeampError(Exception):
    """Base class for all workbench errors."""


class FormulaError(CeampError):
    """Invalid formula, literal or query against a formula."""


class FormulaParseError(FormulaError):
    """Malformed DIMACS input."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class NormalizationError(FormulaError):
    """A formula cannot be brought into the reduction's input form."""


class GuardLimitError(CeampError):
    """A brute-force routine refused an input above its size guard."""


class FieldError(CeampError):
    """Invalid arithmetic over a prime field."""


class GraphError(CeampError):
    """Invalid graph operation."""


class ModificationDisjointnessError(GraphError):
    """Two packed P3s share a vertex pair."""

    def __init__(self, first, second, pair):
        self.first = first
        self.second = second
        self.pair = pair
        super().__init__(
            f"{first} and {second} both contain the pair {{{pair[0]}, {pair[1]}}}"
        )


class ConstructionError(CeampError):
    """A gadget or padding step found its preconditions violated."""


class CertificateError(CeampError):
    """An assignment or edit set is not a valid certificate for an instance."""


class SolverTimeout(CeampError):
    """The exact solver ran out of time before deciding the instance."""
