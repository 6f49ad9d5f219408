"""Shared exception types."""


class ComshuffleError(Exception):
    """Base class for library errors."""


class SizeGuardError(ComshuffleError):
    """A resource guard (word length, clause count, state count, bound) was exceeded."""


class CriterionError(ComshuffleError):
    """A decision-procedure precondition does not hold for the given input."""

    def __init__(self, message, letter=None):
        super().__init__(message)
        self.letter = letter


class NotInPositiveClassError(ComshuffleError):
    """Automaton-to-normal-form extraction failed bounded verification."""


class ParseError(ComshuffleError):
    """Syntax or validation error in the expression language."""

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class FragmentError(ComshuffleError):
    """The expression requires a closure operation outside the implemented fragment."""


class UndecidedError(ComshuffleError):
    """The implemented sufficient criteria neither confirm nor refute the query."""
