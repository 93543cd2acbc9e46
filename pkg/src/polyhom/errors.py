"""Exception types raised across the package.

Every domain error derives from :class:`PolyhomError` so callers (the CLI in
particular) can catch one type and still report the specific failure.
"""

from __future__ import annotations


class PolyhomError(Exception):
    """Base class for all domain errors."""


# groups


class NotAssociative(PolyhomError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"table is not associative at ({a}, {b}, {c})")
        self.witness = (a, b, c)


class NoIdentity(PolyhomError):
    pass


class NoInverse(PolyhomError):
    def __init__(self, element: int):
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class ElementOutOfRange(PolyhomError):
    pass


class NotASubgroup(PolyhomError):
    pass


class NotASubgroupChain(PolyhomError):
    pass


class NotNormal(PolyhomError):
    pass


class GroupTooLarge(PolyhomError):
    pass


# relations and polyhomomorphisms


class MiddleGroupMismatch(PolyhomError):
    pass


class NotAHomomorphism(PolyhomError):
    def __init__(self, a: int, b: int):
        super().__init__(f"map does not preserve the product of {a} and {b}")
        self.witness = (a, b)


class EmptyRelation(PolyhomError):
    pass


class DominationViolated(PolyhomError):
    """A marginal of the weighted carrier exceeds the Haar measure."""

    def __init__(self, which: str, value):
        super().__init__(f"{which} = {value} exceeds 1")
        self.which = which
        self.value = value


class InternalInconsistency(PolyhomError):
    pass


class ZeroPolyhom(PolyhomError):
    pass


# operators


class DimensionMismatch(PolyhomError):
    pass


class PartialIsometryViolated(PolyhomError):
    def __init__(self, message: str, difference=None):
        super().__init__(message)
        self.difference = difference


class SamePair(PolyhomError):
    pass


# finite-field model


class OutOfWindow(PolyhomError):
    pass


class WindowMismatch(PolyhomError):
    pass


class NotInvertible(PolyhomError):
    pass


class SplitMismatch(PolyhomError):
    pass


class TooLarge(PolyhomError):
    pass


# definition files


class ParseError(PolyhomError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnboundName(PolyhomError):
    pass
