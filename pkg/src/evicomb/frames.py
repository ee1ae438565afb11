"""Finite frames of discernment and exact subset algebra over them.

A :class:`Frame` is an ordered universe of distinct outcome labels.  Subsets
are encoded densely as bitmasks over the label indices (:class:`FocalSet`),
which makes equality, hashing, and powerset enumeration exact and cheap.

Set expressions
---------------
Subsets have a textual grammar used by every file format in this package:

``{a|b|c}``
    explicit set of labels,
``[lo..hi]``
    inclusive range over a frame whose labels are all integers,
``*``
    the whole frame,
``{}``
    the empty set.

Labels match ``[A-Za-z0-9_.-]+``.  The canonical renderer always emits the
``{...}`` form with labels in frame order, except ``*`` for the full frame.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .errors import (
    DuplicateLabel,
    EmptyFrame,
    FrameMismatch,
    FrameTooLarge,
    MalformedExpr,
    RangeOverNonIntegerFrame,
    UnknownLabel,
)

#: Largest frame accepted at construction; plain set algebra stays exact here.
MAX_FRAME_SIZE = 64

#: Default cap for operations that enumerate all ``2**size`` subsets.
POWERSET_CAP = 16

_LABEL_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")
_RANGE_RE = re.compile(r"\[([A-Za-z0-9_.\-]+)\.\.([A-Za-z0-9_.\-]+)\]\Z")
_INT_RE = re.compile(r"-?[0-9]+\Z")


@dataclass(frozen=True)
class Frame:
    """Ordered, immutable universe of distinct outcome labels.

    Label order is fixed at construction and defines a stable index
    ``0 .. size-1`` used by every subset built over the frame.
    """

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise EmptyFrame("a frame needs at least one label")
        if len(self.labels) > MAX_FRAME_SIZE:
            raise FrameTooLarge(
                f"frame of size {len(self.labels)} exceeds the maximum of {MAX_FRAME_SIZE}"
            )
        seen: set[str] = set()
        for label in self.labels:
            if not isinstance(label, str) or not _LABEL_RE.match(label):
                raise ValueError(f"invalid frame label {label!r}")
            if label in seen:
                raise DuplicateLabel(f"duplicate frame label {label!r}")
            seen.add(label)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def _int_values(self) -> tuple[int, ...] | None:
        # integer value per label, or None when any label is non-integer
        if all(_INT_RE.match(label) for label in self.labels):
            return tuple(int(label) for label in self.labels)
        return None

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def has_integer_labels(self) -> bool:
        return self._int_values is not None

    def index(self, label: str) -> int:
        """Return the stable index of ``label``; raise UnknownLabel otherwise."""
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} is not in frame {self.labels}") from None

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def subset(self, labels: Iterable[str]) -> FocalSet:
        """Build the subset holding exactly the given labels."""
        bits = 0
        for label in labels:
            bits |= 1 << self.index(label)
        return FocalSet(self, bits)

    def singleton(self, label: str) -> FocalSet:
        return FocalSet(self, 1 << self.index(label))

    def empty(self) -> FocalSet:
        return FocalSet(self, 0)

    def full(self) -> FocalSet:
        return FocalSet(self, (1 << self.size) - 1)


def build_frame(labels: Iterable[str]) -> Frame:
    """Build a frame with the labels in the given order."""
    return Frame(tuple(labels))


@dataclass(frozen=True)
class FocalSet:
    """A subset of a frame, stored as a dense bitmask over label indices."""

    frame: Frame
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << self.frame.size):
            raise ValueError(f"bitmask {self.bits:#x} out of range for frame of size {self.frame.size}")

    # -- inspection -----------------------------------------------------------

    @property
    def members(self) -> tuple[int, ...]:
        """Member label indices, ascending."""
        return tuple(i for i in range(self.frame.size) if self.bits >> i & 1)

    @property
    def labels(self) -> tuple[str, ...]:
        """Member labels in frame order."""
        return tuple(self.frame.labels[i] for i in self.members)

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == (1 << self.frame.size) - 1

    @property
    def is_singleton(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, label: object) -> bool:
        if not isinstance(label, str) or label not in self.frame:
            return False
        return bool(self.bits >> self.frame.index(label) & 1)

    # -- algebra --------------------------------------------------------------

    def _check_frame(self, other: FocalSet) -> None:
        if self.frame != other.frame:
            raise FrameMismatch(
                f"sets over different frames: {self.frame.labels} vs {other.frame.labels}"
            )

    def __and__(self, other: FocalSet) -> FocalSet:
        self._check_frame(other)
        return FocalSet(self.frame, self.bits & other.bits)

    def __or__(self, other: FocalSet) -> FocalSet:
        self._check_frame(other)
        return FocalSet(self.frame, self.bits | other.bits)

    def complement(self) -> FocalSet:
        return FocalSet(self.frame, self.bits ^ ((1 << self.frame.size) - 1))

    def issubset(self, other: FocalSet) -> bool:
        self._check_frame(other)
        return self.bits & ~other.bits == 0

    def intersects(self, other: FocalSet) -> bool:
        self._check_frame(other)
        return self.bits & other.bits != 0

    def render(self) -> str:
        """Canonical textual form: ``{...}`` in frame order, ``*`` when full."""
        if self.is_full:
            return "*"
        return "{" + "|".join(self.labels) + "}"

    def __repr__(self) -> str:
        return f"FocalSet({self.render()})"


class SetAlgebra(NamedTuple):
    """Bundle of the elementary set-algebra results for a pair of subsets."""

    intersect: FocalSet
    union: FocalSet
    complement_of_a: FocalSet
    a_subset_of_b: bool
    a_empty: bool


def set_algebra(a: FocalSet, b: FocalSet) -> SetAlgebra:
    """Compute intersection, union, complement, containment, and emptiness at once."""
    return SetAlgebra(a & b, a | b, a.complement(), a.issubset(b), a.is_empty)


def render(s: FocalSet) -> str:
    """Canonical renderer; inverse of :func:`parse_set_expr` on canonical forms."""
    return s.render()


def canonical_key(s: FocalSet) -> str:
    """Sort key giving the canonical ordering of focal sets (renderer order)."""
    return s.render()


def parse_set_expr(frame: Frame, expr: str) -> FocalSet:
    """Parse a set expression into a subset of ``frame``.

    Range endpoints must themselves be labels of the frame, and ranges are
    only defined over frames whose labels are all integers.
    """
    expr = expr.strip()
    if expr == "*":
        return frame.full()
    if expr == "{}":
        return frame.empty()
    if expr.startswith("{") and expr.endswith("}"):
        body = expr[1:-1]
        labels = body.split("|")
        for label in labels:
            if not _LABEL_RE.match(label):
                raise MalformedExpr(f"bad label {label!r} in set expression {expr!r}")
        return frame.subset(labels)
    m = _RANGE_RE.match(expr)
    if m:
        lo_s, hi_s = m.group(1), m.group(2)
        values = frame._int_values
        if values is None:
            raise RangeOverNonIntegerFrame(
                f"range {expr!r} needs a frame with all-integer labels, got {frame.labels}"
            )
        if not (_INT_RE.match(lo_s) and _INT_RE.match(hi_s)):
            raise MalformedExpr(f"non-integer endpoint in range {expr!r}")
        frame.index(lo_s)
        frame.index(hi_s)
        lo, hi = int(lo_s), int(hi_s)
        if lo > hi:
            raise MalformedExpr(f"reversed range {expr!r}")
        bits = 0
        for i, value in enumerate(values):
            if lo <= value <= hi:
                bits |= 1 << i
        return FocalSet(frame, bits)
    raise MalformedExpr(f"unrecognized set expression {expr!r}")


def subsets(frame: Frame, *, max_size: int = POWERSET_CAP) -> Iterator[FocalSet]:
    """Enumerate every subset of the frame, in ascending bitmask order.

    Refuses frames larger than ``max_size`` so exhaustive sweeps stay desk-scale.
    """
    if frame.size > max_size:
        raise FrameTooLarge(
            f"powerset enumeration over a frame of size {frame.size} exceeds the cap of {max_size}"
        )
    for bits in range(1 << frame.size):
        yield FocalSet(frame, bits)
