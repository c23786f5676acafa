"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid user-supplied data (bad grammar, wrong dimensions, non-prime p, ...)."""


class CertificateError(RuntimeError):
    """An internal exactness certificate failed to verify.

    This signals a bug, never bad input: every certificate checked by the
    library is a mathematical consequence of its preconditions.
    """
