"""Exception hierarchy shared by every kernel module.

The CLI maps any :class:`BFKError` to exit code 2 and prints its class name.
"""


class BFKError(Exception):
    """Base class for kernel errors."""


class NotInvolution(BFKError):
    pass


class Disconnected(BFKError):
    pass


class SizeLimit(BFKError):
    pass


class DuplicateEndpoint(BFKError):
    pass


class NotAComplex(BFKError):
    pass


class FormMismatch(BFKError):
    pass


class AlgebraMismatch(BFKError):
    pass


class UnboundedPair(BFKError):
    pass


class NotSelfGluable(BFKError):
    pass


class IdempotentMismatch(BFKError):
    """A structure-map coefficient is not compatible with the idempotents."""


class MalformedInput(BFKError):
    """Schema or literal parse failure; the message names the offending field."""
