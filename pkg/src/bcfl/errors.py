"""Exception hierarchy.

``AnalysisError`` subclasses signal that an input is well-formed but violates
the precondition of an operation; the CLI maps them to exit code 1.
``ParseError`` subclasses signal malformed text input (exit code 2).
"""


class BcflError(Exception):
    pass


class AnalysisError(BcflError):
    pass


class ParseError(BcflError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class NotWellOrdered(AnalysisError):
    pass


class NotLinear(AnalysisError):
    pass


class NormalFormViolation(AnalysisError):
    pass


class ReproductiveInput(AnalysisError):
    def __init__(self, witnesses):
        self.witnesses = tuple(sorted(witnesses))
        names = ", ".join(self.witnesses)
        super().__init__(
            f"grammar has reproductive nonterminals: {names}; its language is "
            f"unbounded if it consists of scattered words, so no equivalent BCFG exists"
        )


class EmptyPeriod(AnalysisError):
    pass


class IdentityCycle(AnalysisError):
    pass


class UnregisteredRule(AnalysisError):
    pass


class NotClosed(AnalysisError):
    pass


class OpenOmegaOperand(ParseError):
    def __init__(self, variable, line=None, column=None):
        self.variable = variable
        super().__init__(f"omega-power operand has free variable {variable!r}", line, column)
