"""Exception hierarchy shared by all modules."""


class SomError(Exception):
    """Base class for every error raised by this package."""


class InvalidShapeError(SomError, ValueError):
    pass


class DimensionError(SomError, ValueError):
    pass


class InvalidInputError(SomError, ValueError):
    pass


class InvalidStepError(SomError, ValueError):
    pass


class InvalidParameterError(SomError, ValueError):
    pass


class EmptyInputError(SomError, ValueError):
    pass


class DegenerateActivationError(SomError, ArithmeticError):
    """Raised when no image neuron receives a positive total input."""

    def __init__(self, message, trial=None):
        super().__init__(message)
        self.trial = trial


class NotFoundError(SomError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConfigError(SomError, ValueError):
    pass


class PaletteError(SomError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class StimulusFileError(SomError, ValueError):
    """Base for problems found while reading a stimulus CSV."""


class StimulusParseError(StimulusFileError):
    pass


class DuplicateIdError(StimulusFileError):
    pass


class DuplicateMarkerError(StimulusFileError):
    pass


class LengthMismatchError(StimulusFileError):
    pass


class OutOfRangeError(StimulusFileError):
    pass


class NetworkFormatError(SomError, ValueError):
    """Raised for malformed SOMNET1 files."""
