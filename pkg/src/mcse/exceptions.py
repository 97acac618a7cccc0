class MCSEError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(MCSEError, ValueError):
    """A data file or stream does not follow its documented format.

    Carries the 1-based ``line`` (or CSV row) number when one applies.
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        prefix = ""
        if source is not None:
            prefix += f"{source}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)


class LexiconError(InputFormatError):
    pass


class EmbeddingFormatError(InputFormatError):
    pass


class LabelFormatError(InputFormatError):
    pass


class AnnotationError(InputFormatError):
    pass
