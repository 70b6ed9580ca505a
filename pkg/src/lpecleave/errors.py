"""Exception hierarchy.

The CLI maps each family onto a stable exit code: usage and parse problems
exit with 1, exploration failures with 2 and failed validations with 3.
"""


class LpeError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ParseError(LpeError):
    def __init__(self, line, col, expected, text=None):
        self.line = line
        self.col = col
        self.expected = expected
        msg = f"{line}:{col}: expected {expected}"
        if text:
            msg = f"{msg} ({text})"
        super().__init__(msg)


class SpecError(LpeError):
    """A parsed specification violates well-formedness."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class UnboundVariable(LpeError):
    def __init__(self, name, loc=None):
        self.name = name
        self.loc = loc
        where = f" at {loc[0]}:{loc[1]}" if loc else ""
        super().__init__(f"unbound variable {name!r}{where}")


class SortMismatch(LpeError):
    def __init__(self, node, message):
        self.node = node
        loc = getattr(node, "loc", None)
        where = f" at {loc[0]}:{loc[1]}" if loc else ""
        super().__init__(f"{message}{where}")


class IllFormedCommSet(LpeError):
    pass


class InvalidPartition(LpeError):
    pass


class UnknownComponent(LpeError):
    pass


class FreeVariableNotInScope(LpeError):
    pass


class ExplorationError(LpeError):
    exit_code = 2


class UnboundedSum(ExplorationError):
    def __init__(self, var, summand):
        self.var = var
        self.summand = summand
        super().__init__(
            f"sum variable {var!r} of summand {summand} ranges over Nat "
            "without an extractable bound (infinitely branching)"
        )


class StateLimitExceeded(ExplorationError):
    def __init__(self, max_states):
        self.max_states = max_states
        super().__init__(f"state limit of {max_states} states exceeded")


class DomainTooLarge(LpeError):
    exit_code = 2


class IndexOutOfRange(LpeError, IndexError):
    pass
