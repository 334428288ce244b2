class ExtractError(Exception):
    """Base class for extraction tool failures."""


class ModelLoadError(ExtractError):
    """A requested encoder backend or checkpoint could not be loaded."""


class DecodeError(ExtractError):
    """An image file could not be decoded."""
