class BssError(ValueError):
    """Base class of separation failures

    Each subclass carries a short `reason` tag which the command line
    reports verbatim.
    """

    reason = 'bss'


class ParseError(BssError):
    reason = 'parse'

    def __init__(self, message, *, row=None, column=None):
        if row is not None:
            message = f'{message} (row {row}, column {column})'
        super().__init__(message)
        self.row = row
        self.column = column


class ShapeError(BssError):
    reason = 'shape'


class TooShortError(BssError):
    reason = 'too-short'


class UnsupportedFormatError(BssError):
    reason = 'unsupported-format'


class ArityError(BssError):
    reason = 'arity'


class DegenerateInputError(BssError):
    reason = 'degenerate-input'


class DegenerateEntropyError(BssError):
    reason = 'degenerate-entropy'


class EvaluationError(BssError):
    reason = 'evaluation'

    def __init__(self, message, *, angle=None):
        if angle is not None:
            message = f'{message} at angle {angle:.4f} deg'
        super().__init__(message)
        self.angle = angle


class TrivialKernelError(BssError):
    reason = 'trivial-kernel'


class NoValidKernelError(BssError):
    reason = 'no-valid-kernel'

    def __init__(self, message, *, scan=None):
        super().__init__(message)
        self.scan = scan


class TrivialLagError(BssError):
    reason = 'trivial-lag'


class LagRangeError(BssError):
    reason = 'range'


class MixingError(BssError):
    reason = 'mixing'


class ConfigError(BssError):
    reason = 'config'
