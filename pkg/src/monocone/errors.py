"""Exception hierarchy shared by the library and the CLI."""


class MonoconeError(Exception):
    """Base class for every error raised by monocone."""


class InputError(MonoconeError):
    """Bad user input (files, labels, rate strings). CLI exit code 1."""


class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class DuplicateLabel(ValidationError):
    pass


class UnknownLabel(ValidationError):
    pass


class CycleInCovers(ValidationError):
    pass


class IndexMismatch(ValidationError):
    pass


class SizeOutOfRange(InputError):
    pass


class DimensionMismatch(MonoconeError):
    pass


class NotPointed(MonoconeError):
    """The H-description contains a line, so the cone has no extremal rays."""


class CertificateError(MonoconeError):
    """A computed certificate failed its own re-check. CLI exit code 2."""
