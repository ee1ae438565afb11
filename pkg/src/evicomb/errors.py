"""Exception hierarchy for the evidence calculus.

Every domain error raised by this package derives from :class:`EvidenceError`,
so callers (notably the CLI) can separate expected analysis failures from
programming errors.  Exceptions that report offending rows or focal sets
carry them as attributes in addition to the message.
"""

from __future__ import annotations


class EvidenceError(Exception):
    """Base class for all domain errors raised by evicomb."""


# --- frames and set expressions ---------------------------------------------

class EmptyFrame(EvidenceError):
    """A frame was built from an empty label sequence."""


class DuplicateLabel(EvidenceError):
    """A frame was built with a repeated label."""


class UnknownLabel(EvidenceError):
    """A label does not belong to the frame it was used with."""


class MalformedExpr(EvidenceError):
    """A set expression does not match the grammar."""


class RangeOverNonIntegerFrame(EvidenceError):
    """A ``[lo..hi]`` range was used over a frame with non-integer labels."""


class FrameMismatch(EvidenceError):
    """Two values built over different frames were combined."""


class FrameTooLarge(EvidenceError):
    """The frame exceeds the cap for the requested operation."""


# --- mass distributions ------------------------------------------------------

class MassOnEmptySet(EvidenceError):
    """A focal element was the empty set."""


class WeightsDoNotSumToOne(EvidenceError):
    """Focal weights do not sum to exactly 1."""


# --- relations ---------------------------------------------------------------

class UnknownAttribute(EvidenceError):
    """The named attribute does not exist in the relation."""


class UnfilledCell(EvidenceError):
    """An operation needed a cell value that is unfilled.

    ``rows`` lists the offending row identifiers.
    """

    def __init__(self, message: str, rows: list[int] | None = None):
        super().__init__(message)
        self.rows = list(rows) if rows else []


class SizeNotCommonMultiple(EvidenceError):
    """The requested parent size is not a common multiple of the focal denominators."""


class RowMismatch(EvidenceError):
    """Two relations do not have matching rows."""


class NullConflict(EvidenceError):
    """Entrywise combination produced an empty cell.

    ``rows`` lists every row identifier whose intersection came out empty.
    """

    def __init__(self, message: str, rows: list[int]):
        super().__init__(message)
        self.rows = list(rows)


class ConditionedInput(EvidenceError):
    """An operation on unconditioned distributions received a conditioned one."""


class ContainmentViolated(EvidenceError):
    """Entrywise containment between two relations does not hold.

    ``rows`` lists the offending row positions (1-based).
    """

    def __init__(self, message: str, rows: list[int]):
        super().__init__(message)
        self.rows = list(rows)


# --- conditional model -------------------------------------------------------

class EmptySelection(EvidenceError):
    """No row satisfies the selection condition."""


class NonSingletonFocal(EvidenceError):
    """A focal element that must be a singleton is not."""


class NonSingletonCondition(EvidenceError):
    """A condition cell holds a non-singleton value, so row selection is ambiguous."""


class NotCombinable(EvidenceError):
    """No conflict-free parent relation exists for the pair."""


# --- combination -------------------------------------------------------------

class TotalConflict(EvidenceError):
    """Every focal element of one distribution is disjoint from every focal
    element of the other; the normalization factor is zero."""
