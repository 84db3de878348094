"""Exception types shared across the package."""


class NucleusError(Exception):
    """Base class for all errors raised by nucleus."""


class InputError(NucleusError, ValueError):
    """Malformed or non-finite input data (matrices, decompositions, models)."""


class ParameterError(NucleusError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ComputationError(NucleusError, RuntimeError):
    """A computation could not be carried out within its stated budget."""
