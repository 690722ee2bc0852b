# helpers/errors.py


class DelsarteError(ValueError):
    """Base class for every error raised by the bound machinery."""


class UnsupportedSchemeError(DelsarteError):
    pass


class ParameterError(DelsarteError):
    pass


class DegenerateBaseError(DelsarteError):
    pass


class DegenerateCertificateError(DelsarteError):
    pass


class CapExceededError(DelsarteError):
    pass


class VerificationError(DelsarteError):
    """An exact check failed. `violations` lists the constraints that broke."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])
