class DeformedVibrationsError(Exception):
    """Base exception for all deformed-vibrations exceptions."""


class DeformationDomainError(DeformedVibrationsError, ValueError):
    """Exception raised when a deformed quantity is evaluated outside its domain."""


class ArgumentError(DeformedVibrationsError, ValueError):
    """Exception raised when an argument is out of its allowed range."""


class ResourceLimitError(DeformedVibrationsError):
    """Exception raised when a basis would exceed the dimension cap."""


class BasisMismatchError(DeformedVibrationsError, ValueError):
    """Exception raised when operators or models live on different bases."""


class StructureError(DeformedVibrationsError):
    """Exception raised when a matrix lacks the structure an operation relies on."""


class UnsupportedModelError(DeformedVibrationsError, ValueError):
    """Exception raised when an operation is not defined for a model family."""


class SpectrumMismatchError(DeformedVibrationsError, ValueError):
    """Exception raised when two spectra do not share the same assignments."""


class FitError(DeformedVibrationsError):
    """Base exception for parameter fitting."""


class UnderdeterminedFitError(FitError, ValueError):
    """Exception raised when there are fewer levels than free parameters."""


class ConfigError(DeformedVibrationsError, ValueError):
    """Exception raised when a run configuration cannot be used."""


class LevelFileError(DeformedVibrationsError, ValueError):
    """Exception raised when a level file is malformed."""
