"""Exception hierarchy shared by every layer of the package."""


class McsError(Exception):
    """Base class for all errors raised by mcsc."""


class SourceError(McsError):
    """An error that may carry a line/column location in some input text."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(SourceError, ValueError):
    """Syntax error in the textual MCS language."""


class SemanticError(SourceError, ValueError):
    """Well-formed text that describes an invalid system."""


class UnknownContext(SemanticError):
    pass


class DegreeOutOfRange(SourceError, ValueError):
    """A necessity or possibility degree outside [0, 1]."""


class RuleNotDefinite(McsError, ValueError):
    """A least-model style operation received default negation or choices."""


class NotDefinite(RuleNotDefinite):
    """A system-level operation that needs a definite MCS received a normal one."""


class SearchSpaceExceeded(McsError):
    """Equilibrium or state-space enumeration would exceed the configured bound."""


class AlphabetTooLarge(SearchSpaceExceeded):
    """Enumeration over a program alphabet would exceed the configured bound."""


class SchemaError(McsError, ValueError):
    """A problem document violates the document schema.

    ``path`` is the JSON key path of the offending value, e.g. ``plans/2/steps``.
    """

    def __init__(self, message, path=""):
        self.message = message
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class UnknownAgent(SchemaError):
    pass


class UnknownAction(SchemaError):
    pass


class MissingDistance(McsError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MissingPossibility(McsError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class AmbiguousPlan(UserWarning):
    """Two fired plan rules share a goal and an achiever; the first plan id wins."""


class GraphTooLarge(McsError):
    pass


class WeightMismatch(McsError, ValueError):
    pass


class NonPositiveScore(McsError, ValueError):
    pass


class ZeroColumn(McsError, ValueError):
    pass
