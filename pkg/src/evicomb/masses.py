"""Mass distributions with exact rational weights, and the belief and
plausibility measures they induce.

Weights are :class:`fractions.Fraction` values throughout: every check in
this package is an exact rational comparison, never a float tolerance.
A distribution may carry *condition tags* (opaque ``"Attr=Value"`` strings)
identifying the evidential sources it is conditioned on; an empty tag set
means the distribution is read as an unconditioned summary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import FrameMismatch, MassOnEmptySet, WeightsDoNotSumToOne
from .frames import FocalSet, Frame, build_frame, canonical_key, parse_set_expr

#: Exact rational weight type; stdlib Fraction stores lowest terms.
Ratio = Fraction

ONE = Fraction(1)


@dataclass(frozen=True)
class MassDistribution:
    """Focal elements with exact positive weights summing to 1.

    ``entries`` is kept in canonical (renderer) order with distinct focal
    sets, so equality of two distributions is plain field equality and is
    insensitive to the order the focal elements were supplied in.
    """

    frame: Frame
    entries: tuple[tuple[FocalSet, Fraction], ...]
    conditions: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        total = Fraction(0)
        previous_key: str | None = None
        for focal, weight in self.entries:
            if focal.frame != self.frame:
                raise FrameMismatch(f"focal element {focal.render()} is not over this frame")
            if focal.is_empty:
                raise MassOnEmptySet("the empty set cannot carry mass")
            if not isinstance(weight, Fraction) or weight <= 0:
                raise ValueError(f"focal weight must be a positive Fraction, got {weight!r}")
            key = canonical_key(focal)
            if previous_key is not None and key <= previous_key:
                raise ValueError("entries must be distinct and in canonical order")
            previous_key = key
            total += weight
        if total != ONE:
            raise WeightsDoNotSumToOne(f"weights sum to {total}, expected 1")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_focal_list(
        cls,
        frame: Frame,
        pairs: Iterable[tuple[FocalSet, Fraction]],
        conditions: Iterable[str] = (),
    ) -> MassDistribution:
        """Build a distribution from (focal set, weight) pairs.

        Duplicate focal sets are merged by adding their weights; the weights
        must sum to exactly 1 after merging.
        """
        merged: dict[FocalSet, Fraction] = {}
        for focal, weight in pairs:
            if focal.frame != frame:
                raise FrameMismatch(f"focal element {focal.render()} is not over the given frame")
            if focal.is_empty:
                raise MassOnEmptySet("the empty set cannot carry mass")
            weight = Fraction(weight)
            if weight <= 0:
                raise ValueError(f"focal weight must be positive, got {weight}")
            merged[focal] = merged.get(focal, Fraction(0)) + weight
        entries = tuple(sorted(merged.items(), key=lambda kv: canonical_key(kv[0])))
        return cls(frame, entries, frozenset(conditions))

    @classmethod
    def vacuous(cls, frame: Frame) -> MassDistribution:
        """All mass on the whole frame: the identity element for combination."""
        return cls(frame, ((frame.full(), ONE),))

    # -- inspection -----------------------------------------------------------

    @property
    def focal_sets(self) -> tuple[FocalSet, ...]:
        return tuple(focal for focal, _ in self.entries)

    @property
    def is_conditioned(self) -> bool:
        return bool(self.conditions)

    @property
    def common_denominator(self) -> int:
        """Least common multiple of the weight denominators."""
        return math.lcm(*(weight.denominator for _, weight in self.entries))

    def mass(self, s: FocalSet) -> Fraction:
        if s.frame != self.frame:
            raise FrameMismatch("query set is not over this distribution's frame")
        for focal, weight in self.entries:
            if focal == s:
                return weight
        return Fraction(0)

    def with_conditions(self, conditions: Iterable[str]) -> MassDistribution:
        return MassDistribution(self.frame, self.entries, frozenset(conditions))

    # -- measures -------------------------------------------------------------

    def belief(self, d: FocalSet) -> Fraction:
        """Total mass on focal elements contained in ``d`` (lower bound on d)."""
        if d.frame != self.frame:
            raise FrameMismatch("query set is not over this distribution's frame")
        total = Fraction(0)
        for focal, weight in self.entries:
            if focal.bits & ~d.bits == 0:
                total += weight
        return total

    def plausibility(self, d: FocalSet) -> Fraction:
        """Total mass on focal elements meeting ``d`` (upper bound on d)."""
        if d.frame != self.frame:
            raise FrameMismatch("query set is not over this distribution's frame")
        total = Fraction(0)
        for focal, weight in self.entries:
            if focal.bits & d.bits != 0:
                total += weight
        return total

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        """Canonical JSON form: focal entries in canonical order, lowest terms."""
        return {
            "frame": list(self.frame.labels),
            "conditions": sorted(self.conditions),
            "focal": [
                {"set": focal.render(), "num": weight.numerator, "den": weight.denominator}
                for focal, weight in self.entries
            ],
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> MassDistribution:
        """Parse the JSON mass format; duplicate sets are merged."""
        try:
            frame = build_frame(data["frame"])
            conditions = data.get("conditions", [])
            raw_focal = data["focal"]
            pairs = [
                (parse_set_expr(frame, item["set"]), Fraction(int(item["num"]), int(item["den"])))
                for item in raw_focal
            ]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed mass JSON: {exc}") from exc
        if not all(isinstance(tag, str) for tag in conditions):
            raise ValueError("malformed mass JSON: conditions must be strings")
        return MassDistribution.from_focal_list(frame, pairs, conditions)


def shared_denominator(m1: MassDistribution, m2: MassDistribution) -> int:
    """Least common multiple of both distributions' common denominators."""
    return math.lcm(m1.common_denominator, m2.common_denominator)


def belief(m: MassDistribution, d: FocalSet) -> Fraction:
    return m.belief(d)


def plausibility(m: MassDistribution, d: FocalSet) -> Fraction:
    return m.plausibility(d)


def vacuous(frame: Frame) -> MassDistribution:
    return MassDistribution.vacuous(frame)


def from_focal_list(
    frame: Frame,
    pairs: Iterable[tuple[FocalSet, Fraction]],
    conditions: Iterable[str] = (),
) -> MassDistribution:
    return MassDistribution.from_focal_list(frame, pairs, conditions)
