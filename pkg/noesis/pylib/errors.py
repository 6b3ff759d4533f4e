class NoesisError(Exception):
    """Base class for everything this package raises on purpose."""


class EvaluationError(NoesisError):
    pass


class UnboundVariableError(EvaluationError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name}")
        self.name = name


class SortMismatchError(EvaluationError):
    pass


class OutOfCarrierError(EvaluationError):
    def __init__(self, what: str, value, sort_name: str):
        super().__init__(f"{what} = {value} is outside the carrier of sort {sort_name}")
        self.what = what
        self.value = value
        self.sort_name = sort_name


class NestedBeliefError(NoesisError):
    pass


class NormalizationError(NoesisError):
    pass


class InconsistentObservationError(NoesisError):
    def __init__(self, observation: str):
        super().__init__(
            f"inconsistent observation {observation}: impossible in every believed world"
        )
        self.observation = observation


class UnmappedSymbolError(NoesisError):
    pass


class ParseError(NoesisError):
    def __init__(self, diagnostics: list):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else "parse error"
        super().__init__(first)


class ExecutionFailure(NoesisError):
    """An online run cannot continue; the reason ends up in the trace."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
