"""Exception types shared across the package.

Every guard that can reject an input raises one of these, so callers (and the
command line driver) can map failure modes to exit codes without string
matching.
"""

from __future__ import annotations


class CoverMotiveError(Exception):
    """Base class for all package errors."""


class MalformedSpec(CoverMotiveError):
    """Group specification is structurally invalid (shape, range, size cap)."""


class NotAGroup(CoverMotiveError):
    """A multiplication table fails a group axiom.

    The message names a concrete witness (a triple for associativity, an
    element without an inverse, and so on).
    """


class DegreeOverflow(CoverMotiveError):
    """A tuple enumeration would exceed the configured cap."""


class CapExceeded(CoverMotiveError):
    """A brute-force oracle was asked for more work than its cap allows."""


class SizeLimit(CoverMotiveError):
    """A tree or marking enumeration exceeds the configured size cap."""


class UnsupportedNonabelian(CoverMotiveError):
    """An operation that is only implemented for abelian groups was asked to
    work on a nonabelian one."""


class NegativeCoefficient(CoverMotiveError):
    """A class polynomial has a negative coefficient where a non-negative
    one is required (Betti number extraction)."""


class NonEmptyDegreeZero(CoverMotiveError):
    """Composition requires the inner module to have empty degree-0 part."""


class MissingEvaluations(CoverMotiveError):
    """An operation needs evaluation data that a generator does not carry."""


class NonFreeAction(CoverMotiveError):
    """A symmetric-group action that must be free has a fixed point.

    Carries the witness permutation in ``witness``.
    """

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class InexactDivision(CoverMotiveError):
    """An integer or coefficient division that must be exact is not."""
