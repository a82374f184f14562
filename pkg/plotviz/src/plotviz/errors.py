"""Error types for the figure tool, one per failure family."""


class PlotvizError(Exception):
    """Base class for all errors raised by this package."""


class InputFileMissingError(PlotvizError):
    """An input CSV (or manifest) path does not exist."""


class SchemaError(PlotvizError):
    """An input file lacks a required column; the message names it."""


class EmptyGridError(PlotvizError):
    """An input file parsed but contains no data rows."""


class ManifestError(PlotvizError):
    """A batch manifest is malformed (bad JSON, unknown keys, bad kind)."""


class OutputFormatError(PlotvizError):
    """The requested output path has an unsupported image suffix."""
