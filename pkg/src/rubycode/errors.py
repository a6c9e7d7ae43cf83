"""Exception hierarchy shared by all modules."""


class RubyCodeError(Exception):
    """Base class for package errors."""


class DimensionError(RubyCodeError, ValueError):
    """Operands act on a different number of qubits or sites."""


class CapacityError(RubyCodeError, RuntimeError):
    """The requested computation exceeds the supported Hilbert-space size."""


class ConstructionError(RubyCodeError, ValueError):
    """A lattice patch could not be built or failed validation."""


class HermiticityError(RubyCodeError, ValueError):
    """An operator that must be Hermitian is not."""


class IllegalMoveError(RubyCodeError, ValueError):
    """A braid move is not allowed for the current anyon configuration.

    ``index`` is the position of the offending move in its schedule (or
    ``None`` when raised outside a schedule).
    """

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"move {index}: {message}")
        self.index = index


class CodeSpaceError(RubyCodeError, ValueError):
    """A state lies outside the two-dimensional code space of an encoding."""


class EncodingError(RubyCodeError, ValueError):
    """Invalid scheme/colour combination for a logical encoding."""
