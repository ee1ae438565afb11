"""Dempster's rule of combination with exact conflict accounting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FrameMismatch, TotalConflict
from .frames import FocalSet, canonical_key
from .masses import MassDistribution


@dataclass(frozen=True)
class ConflictReport:
    """The mass two distributions place on empty intersections.

    ``conflict_weight`` is the total, ``conflicting_pairs`` the per-pair
    breakdown (only pairs with positive product, in canonical order).
    """

    conflict_weight: Fraction
    conflicting_pairs: tuple[tuple[FocalSet, FocalSet, Fraction], ...]


def _check_frames(m1: MassDistribution, m2: MassDistribution) -> None:
    if m1.frame != m2.frame:
        raise FrameMismatch("cannot combine distributions over different frames")


def conflict_weight(m1: MassDistribution, m2: MassDistribution) -> ConflictReport:
    """Total mass assigned to disjoint focal pairs, with the pairs themselves."""
    _check_frames(m1, m2)
    total = Fraction(0)
    pairs = []
    for a, wa in m1.entries:
        for b, wb in m2.entries:
            if not a.intersects(b):
                product = wa * wb
                total += product
                pairs.append((a, b, product))
    pairs.sort(key=lambda p: (canonical_key(p[0]), canonical_key(p[1])))
    return ConflictReport(total, tuple(pairs))


def dempster_combine(m1: MassDistribution, m2: MassDistribution) -> MassDistribution:
    """Combine two distributions by the normalized rule.

    Each non-empty pairwise intersection receives the product of the masses,
    and the total is rescaled by one minus the conflict weight.  The result
    carries the union of both inputs' condition tags.  Raises
    :class:`TotalConflict` when the conflict weight is exactly 1.
    """
    _check_frames(m1, m2)
    conflict = Fraction(0)
    accumulated: dict[FocalSet, Fraction] = {}
    for a, wa in m1.entries:
        for b, wb in m2.entries:
            c = a & b
            product = wa * wb
            if c.is_empty:
                conflict += product
            else:
                accumulated[c] = accumulated.get(c, Fraction(0)) + product
    if conflict == 1:
        raise TotalConflict(
            "total conflict: normalization factor is zero; "
            "every focal element of one input is disjoint from every focal element of the other"
        )
    normalizer = 1 - conflict
    pairs = [(c, weight / normalizer) for c, weight in accumulated.items()]
    return MassDistribution.from_focal_list(
        m1.frame, pairs, m1.conditions | m2.conditions
    )
