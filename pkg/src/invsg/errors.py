"""Exception classes. Every error may carry a witness describing the failure."""


class InvsgError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(InvsgError):
    pass


class NotAssociative(InvsgError):
    pass


class NotInverse(InvsgError):
    pass


class BadZero(InvsgError):
    pass


class NoZero(InvsgError):
    pass


class AlreadyHasZero(InvsgError):
    pass


class NotCompatible(InvsgError):
    pass


class NotBelow(InvsgError):
    pass


class NotDistributive(InvsgError):
    pass


class NotWeaklyBoolean(InvsgError):
    pass


class NotBoolean(InvsgError):
    pass


class DifferentParents(InvsgError):
    pass


class ClassNotClosed(InvsgError):
    pass


class UnsupportedKind(InvsgError):
    pass


class TooLarge(InvsgError):
    def __init__(self, message="", count=None, witness=None):
        super().__init__(message, witness)
        self.count = count


class LatticeTooLarge(TooLarge):
    pass


class NotIdempotentPure(InvsgError):
    pass


class PreimageNotFilter(InvsgError):
    pass


class FlavorMismatch(InvsgError):
    pass


class NotCallitic(InvsgError):
    pass


class NotSurjective(InvsgError):
    pass


class CheckFailed(InvsgError):
    """An internal consistency check failed; the witness says where."""
