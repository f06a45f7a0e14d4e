"""Exception hierarchy shared by all modules."""


class DuvalError(Exception):
    """Base class for every error raised by the toolkit."""


class FlagMismatchError(DuvalError):
    pass


class NotAUnitError(DuvalError):
    pass


class ParseError(DuvalError):
    def __init__(self, message, pos=None, src=None):
        self.pos = pos
        self.src = src
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownIdentifierError(ParseError):
    pass


class DimensionError(DuvalError):
    pass


class GradednessError(DuvalError):
    pass


class NotAnAutomorphismError(DuvalError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class OrderExceedsCapError(DuvalError):
    pass


class ClosureExceedsCapError(DuvalError):
    pass


class NonClosedError(DuvalError):
    pass


class GraphSizeError(DuvalError):
    pass


class SchemaError(DuvalError):
    def __init__(self, message, case_id=None, path=None):
        self.case_id = case_id
        self.path = path
        parts = [p for p in (case_id, path) if p]
        prefix = f"[{' / '.join(parts)}] " if parts else ""
        super().__init__(prefix + message)


class UnknownFormatError(DuvalError):
    pass
