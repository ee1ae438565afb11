"""Conditional granular distributions and their combination machinery.

A conditional distribution is an ordinary mass distribution tagged with the
``Attr=Value`` conditions that selected its rows.  Because two conditional
distributions describe (possibly different) sub-populations, they never share
a fully-filled parent table; their parent relations are *partially filled*,
with per-row evidence tags recording which source contributed each row.  Two
such distributions are combinable exactly when some focal element of one
intersects some focal element of the other, and in that case a conflict-free
partially-filled parent can be constructed outright.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    EmptySelection,
    FrameMismatch,
    NonSingletonCondition,
    NonSingletonFocal,
    NotCombinable,
    UnfilledCell,
)
from .frames import FocalSet, Frame, parse_set_expr
from .masses import MassDistribution, shared_denominator
from .relations import Relation


@dataclass(frozen=True)
class MultivaluedMapping:
    """A total mapping from source-frame labels to non-empty target focal sets."""

    source_frame: Frame
    target_frame: Frame
    images: tuple[FocalSet, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source_frame.size:
            raise ValueError("one image per source label is required")
        for label, image in zip(self.source_frame.labels, self.images):
            if image.frame != self.target_frame:
                raise FrameMismatch(f"image of {label!r} is not over the target frame")
            if image.is_empty:
                raise ValueError(f"image of {label!r} is empty")

    def image(self, label: str) -> FocalSet:
        return self.images[self.source_frame.index(label)]

    def to_json_dict(self) -> dict:
        return {
            "source_frame": list(self.source_frame.labels),
            "target_frame": list(self.target_frame.labels),
            "map": {
                label: image.render()
                for label, image in zip(self.source_frame.labels, self.images)
            },
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> "MultivaluedMapping":
        try:
            source = Frame(tuple(str(x) for x in data["source_frame"]))
            target = Frame(tuple(str(x) for x in data["target_frame"]))
            image_exprs = dict(data["map"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed mapping JSON: {exc}") from exc
        unknown = [label for label in image_exprs if label not in source.labels]
        if unknown:
            raise ValueError(f"mapping has images for labels outside the source frame: {unknown}")
        missing = [label for label in source.labels if label not in image_exprs]
        if missing:
            raise ValueError(f"mapping is not total: no image for labels {missing}")
        images = tuple(parse_set_expr(target, image_exprs[label]) for label in source.labels)
        return MultivaluedMapping(source, target, images)


def summarize_where(
    relation: Relation,
    attribute: str,
    conditions: Sequence[tuple[str, str]],
) -> MassDistribution:
    """Summarize an attribute over the rows selected by ``Attr=Value`` conditions.

    A row matches when each condition attribute holds exactly the singleton
    of the condition value; rows with the condition attribute unfilled do not
    match.  The resulting distribution carries the conditions as tags.
    """
    target_idx = relation.attribute_index(attribute)
    condition_indices: list[tuple[int, FocalSet, str]] = []
    for cond_attr, value in conditions:
        idx = relation.attribute_index(cond_attr)
        frame = relation.frames[idx]
        singleton = frame.singleton(value)
        condition_indices.append((idx, singleton, f"{cond_attr}={value}"))
    bad_rows = [
        row.row_id
        for row in relation.rows
        for idx, _, _ in condition_indices
        if row.cells[idx] is not None and not row.cells[idx].is_singleton
    ]
    if bad_rows:
        raise NonSingletonCondition(
            f"condition attributes must hold singleton values; rows {sorted(set(bad_rows))} do not"
        )
    selected = [
        row
        for row in relation.rows
        if all(row.cells[idx] == singleton for idx, singleton, _ in condition_indices)
    ]
    if not selected:
        raise EmptySelection(
            "no row matches " + " and ".join(tag for _, _, tag in condition_indices)
        )
    unfilled = [row.row_id for row in selected if row.cells[target_idx] is None]
    if unfilled:
        raise UnfilledCell(
            f"attribute {attribute!r} is unfilled in selected rows {unfilled}", rows=unfilled
        )
    counts: dict[FocalSet, int] = {}
    for row in selected:
        cell = row.cells[target_idx]
        counts[cell] = counts.get(cell, 0) + 1
    return MassDistribution.from_focal_list(
        relation.frames[target_idx],
        [(cell, Fraction(count, len(selected))) for cell, count in counts.items()],
        conditions=(tag for _, _, tag in condition_indices),
    )


def propagate(source: MassDistribution, gamma: MultivaluedMapping) -> MassDistribution:
    """Push a singleton-focal distribution through a multivalued mapping.

    The mass of a target set is the total source mass of the labels mapping
    to it; condition tags are carried over unchanged.
    """
    if source.frame != gamma.source_frame:
        raise FrameMismatch("distribution is not over the mapping's source frame")
    accumulated: dict[FocalSet, Fraction] = {}
    for focal, weight in source.entries:
        if not focal.is_singleton:
            raise NonSingletonFocal(
                f"focal element {focal.render()} is not a singleton; "
                "the mapping is defined on labels only"
            )
        image = gamma.image(focal.labels[0])
        accumulated[image] = accumulated.get(image, Fraction(0)) + weight
    return MassDistribution.from_focal_list(
        gamma.target_frame, accumulated.items(), conditions=source.conditions
    )


def conditional_combinable(m1: MassDistribution, m2: MassDistribution) -> bool:
    """True iff some focal element of one distribution intersects one of the other."""
    if m1.frame != m2.frame:
        raise FrameMismatch("cannot compare distributions over different frames")
    return any(s.intersects(t) for s in m1.focal_sets for t in m2.focal_sets)


@dataclass(frozen=True)
class ParentRow:
    """One partially-filled parent row: two optional cells with evidence tags."""

    row_id: int
    cell_1: FocalSet | None
    cell_2: FocalSet | None
    tag_1: bool
    tag_2: bool


@dataclass(frozen=True)
class ConditionalParent:
    """A conflict-free, partially-filled parent of two conditional distributions."""

    frame: Frame
    rows: tuple[ParentRow, ...]
    evidence_tags: tuple[str, str] = ("E1", "E2")
    conditions_1: frozenset[str] = frozenset()
    conditions_2: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for row in self.rows:
            if row.row_id <= 0 or row.row_id in seen:
                raise ValueError(f"row identifiers must be distinct positive integers; saw {row.row_id}")
            seen.add(row.row_id)
            if row.tag_1 != (row.cell_1 is not None) or row.tag_2 != (row.cell_2 is not None):
                raise ValueError(f"row {row.row_id}: evidence tag and cell presence disagree")
            if row.cell_1 is None and row.cell_2 is None:
                raise ValueError(f"row {row.row_id} has no filled cell")
            for cell in (row.cell_1, row.cell_2):
                if cell is not None and cell.frame != self.frame:
                    raise FrameMismatch(f"row {row.row_id} holds a cell over the wrong frame")
            if row.cell_1 is not None and row.cell_2 is not None:
                if not row.cell_1.intersects(row.cell_2):
                    raise ValueError(
                        f"row {row.row_id} is conflicting: "
                        f"{row.cell_1.render()} and {row.cell_2.render()} are disjoint"
                    )

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def summarize_side(self, side: int) -> MassDistribution:
        """Recover one input distribution from its tagged rows (side 1 or 2)."""
        if side not in (1, 2):
            raise ValueError("side must be 1 or 2")
        cells = [
            row.cell_1 if side == 1 else row.cell_2
            for row in self.rows
            if (row.tag_1 if side == 1 else row.tag_2)
        ]
        counts: dict[FocalSet, int] = {}
        for cell in cells:
            counts[cell] = counts.get(cell, 0) + 1
        return MassDistribution.from_focal_list(
            self.frame,
            [(cell, Fraction(count, len(cells))) for cell, count in counts.items()],
            conditions=self.conditions_1 if side == 1 else self.conditions_2,
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("Name", "Age1", "Age2", "E1", "E2"))
        for row in self.rows:
            writer.writerow(
                (
                    str(row.row_id),
                    "" if row.cell_1 is None else row.cell_1.render(),
                    "" if row.cell_2 is None else row.cell_2.render(),
                    "1" if row.tag_1 else "",
                    "1" if row.tag_2 else "",
                )
            )
        return out.getvalue()


def _evidence_tag(m: MassDistribution, default: str) -> str:
    return ", ".join(sorted(m.conditions)) if m.conditions else default


def build_conflict_free_parent(
    m1: MassDistribution, m2: MassDistribution
) -> ConditionalParent:
    """Construct a conflict-free partially-filled parent of two distributions.

    Both distributions are scaled to integer row counts over the common
    denominator L.  Among intersecting focal pairs (A_i, B_j), the pair
    maximizing alpha = min{a_i, b_j} is chosen (ties broken by canonical
    focal order); alpha rows carry both cells, and every remaining count on
    either side becomes a single-evidence row, for L + L - alpha rows total.
    Summarizing either side's tagged rows recovers that input exactly.
    """
    if m1.frame != m2.frame:
        raise FrameMismatch("cannot combine distributions over different frames")
    if not conditional_combinable(m1, m2):
        raise NotCombinable(
            "no focal element of one distribution intersects any focal element "
            "of the other; no conflict-free parent relation exists"
        )
    scale = shared_denominator(m1, m2)
    counts_1 = {s: int(w * scale) for s, w in m1.entries}
    counts_2 = {t: int(w * scale) for t, w in m2.entries}
    best: tuple[FocalSet, FocalSet] | None = None
    best_alpha = 0
    for s in m1.focal_sets:  # canonical order makes the tie-break implicit
        for t in m2.focal_sets:
            if s.intersects(t):
                alpha = min(counts_1[s], counts_2[t])
                if alpha > best_alpha:
                    best, best_alpha = (s, t), alpha
    assert best is not None and best_alpha > 0
    shared_1, shared_2 = best
    counts_1[shared_1] -= best_alpha
    counts_2[shared_2] -= best_alpha
    rows: list[ParentRow] = []
    for _ in range(best_alpha):
        rows.append(ParentRow(len(rows) + 1, shared_1, shared_2, True, True))
    for s in m1.focal_sets:
        for _ in range(counts_1[s]):
            rows.append(ParentRow(len(rows) + 1, s, None, True, False))
    for t in m2.focal_sets:
        for _ in range(counts_2[t]):
            rows.append(ParentRow(len(rows) + 1, None, t, False, True))
    return ConditionalParent(
        m1.frame,
        tuple(rows),
        evidence_tags=(_evidence_tag(m1, "E1"), _evidence_tag(m2, "E2")),
        conditions_1=m1.conditions,
        conditions_2=m2.conditions,
    )
