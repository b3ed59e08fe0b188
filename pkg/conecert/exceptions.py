# Error types raised across conecert. Each one also derives from the builtin a
# caller would naturally catch (ValueError, IndexError, ...).


class ConeCertError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(ConeCertError, ValueError):
    def __init__(self, left, right, what='ambient dimension'):
        self.left = left
        self.right = right
        super().__init__(
            "{} mismatch: left operand has n={}, right operand has n={}"
            .format(what, left, right))


class BidegreeError(ConeCertError, ValueError):
    """Raised for inhomogeneous input or for mismatched bidegrees."""
    def __init__(self, message, found=()):
        self.found = tuple(found)
        super().__init__(message)


class IndexRangeError(ConeCertError, IndexError):
    pass


class DegenerateConeError(ConeCertError, ValueError):
    pass


class NotHarmonicError(ConeCertError, ValueError):
    pass


class AliasingError(ConeCertError, ValueError):
    pass


class QuadratureError(ConeCertError, ValueError):
    pass


class SchemaError(ConeCertError, ValueError):
    """A JSON document does not follow the expected schema.

    :attr pointer: JSON pointer (RFC 6901) to the offending value.
    """
    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__("{}: {}".format(pointer or '/', message))


class ResourceLimitError(ConeCertError, RuntimeError):
    pass


class UsageError(ConeCertError, ValueError):
    pass
