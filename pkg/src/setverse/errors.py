"""Exception hierarchy shared by all kernel modules."""


class KernelError(Exception):
    """Base class for every error raised by the kernel."""


class EnumerationTooLarge(KernelError):
    """An enumeration would exceed its configured cap."""


class DomainMismatch(KernelError):
    """Composed maps or paths do not share an endpoint."""


class PreconditionViolated(KernelError):
    """An operation was called outside its stated precondition."""


class MalformedCode(KernelError):
    """A type code violates its structural invariants."""


class IndexTypeMismatch(KernelError):
    """Two containers over different index types were combined."""


class FrontendError(KernelError):
    """Base class for surface-syntax errors."""


class ParseError(FrontendError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DuplicateName(FrontendError):
    pass


class UnknownFormer(FrontendError):
    pass


class ArityMismatch(FrontendError):
    pass


class ElementOutOfRange(FrontendError):
    pass
