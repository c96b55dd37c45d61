"""Exception hierarchy shared by all modules.

Every validation error carries a ``witness`` attribute holding the offending
ids so that callers (and the CLI) can print a self-contained report.
"""

from __future__ import annotations

from typing import Any


class KMorphError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class ValidationError(KMorphError):
    """A presentation failed a structural check."""


class MalformedSquare(ValidationError):
    """A square entry has the wrong colors or mismatched endpoints."""


class MissingSquare(ValidationError):
    """A composable two-colored word has no square."""


class NonBijectiveSquare(ValidationError):
    """A square table is not a bijection between the two word sets."""


class CubeFailure(ValidationError):
    """The two hexagon routes disagree on a three-colored word.

    ``chain_a`` and ``chain_b`` are the full reduction chains (lists of
    words, starting with the witness).  ``failures`` lists every failing
    word of the presentation in sorted order.
    """

    def __init__(self, message, witness, chain_a, chain_b, failures=()):
        super().__init__(message, witness)
        self.chain_a = list(chain_a)
        self.chain_b = list(chain_b)
        self.failures = list(failures)


class NotComposable(KMorphError):
    """Endpoints do not match."""


class DegreeOutOfRange(KMorphError):
    """Requested degree is not below the path degree."""


class NonBijectiveTransport(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class MixedCubeFailure(ValidationError):
    pass


class GraphMismatch(KMorphError):
    """Morphs or graphs that should share a k-graph do not."""


class NotEndomorph(KMorphError):
    pass


class InvalidCovering(ValidationError):
    pass


class NonFunctorialCocycle(ValidationError):
    pass


class NoLift(KMorphError):
    pass


class RegularityFailure(ValidationError):
    pass


class PartitionViolation(ValidationError):
    pass


class NotQuasimorphism(ValidationError):
    pass


class InvalidGroup(ValidationError):
    pass


class SizeGuard(KMorphError):
    """Input is too large for exhaustive enumeration."""


class DSLError(KMorphError):
    def __init__(self, message: str, line: int | None = None, witness: Any = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, witness)
        self.line = line


class DSLSyntaxError(DSLError):
    pass


class UnknownReference(DSLError):
    pass


class DuplicateId(DSLError):
    pass
