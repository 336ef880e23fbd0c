"""Exception types shared across the package."""


class CayleyTopError(Exception):
    """Base class for every error raised by cayleytop."""


class ArityError(CayleyTopError, ValueError):
    """A letter or word does not fit the arity of its context."""


class ParseError(CayleyTopError, ValueError):
    """Malformed textual input (words, group specs, family specs)."""

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnsupportedParameter(CayleyTopError, ValueError):
    """Parameters are well formed but outside what the families support."""


class CapExceeded(CayleyTopError):
    """A size cap was hit (ball size, vertex count, window growth)."""


class NotFound(CayleyTopError, KeyError):
    """Lookup of an element, vertex or component failed."""

    def __str__(self):
        return str(self.args[0]) if self.args else "not found"


class ExactTooLarge(CayleyTopError):
    """Exact Rel minimisation requested on a ball above the threshold."""


class NumericalFailure(CayleyTopError):
    """An eigensolver did not converge or missed its residual bound."""


class DomainError(CayleyTopError, ValueError):
    """A compression function cannot be evaluated where it is needed."""


class Unsatisfiable(CayleyTopError, ValueError):
    """No parameter choice meets the requested inequality."""
