"""Set-valued relational tables and the unconditioned-summary model built on
them: granular summarization, entrywise combination with null detection, the
conflict-free-parent combinability decision, and the belief/plausibility
envelope check for entrywise-contained relations.

A relation is a named table whose rows are identified by distinct positive
integers (the ``Name`` column of the CSV format) and whose attribute cells
hold non-empty subsets of a per-attribute frame, or are unfilled.  Empty
cells are never allowed: an attribute cannot take a null value.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ._flow import FlowNetwork
from .errors import (
    ConditionedInput,
    ContainmentViolated,
    FrameMismatch,
    FrameTooLarge,
    NullConflict,
    RowMismatch,
    SizeNotCommonMultiple,
    UnfilledCell,
    UnknownAttribute,
)
from .frames import FocalSet, Frame, POWERSET_CAP, parse_set_expr
from .masses import MassDistribution, shared_denominator


@dataclass(frozen=True)
class Row:
    """One table row: a positive identifier plus one optional cell per attribute."""

    row_id: int
    cells: tuple[FocalSet | None, ...]


@dataclass(frozen=True)
class Relation:
    """Immutable set-valued table with one frame per attribute."""

    name: str
    attributes: tuple[str, ...]
    frames: tuple[Frame, ...]
    rows: tuple[Row, ...]

    def __post_init__(self) -> None:
        if len(self.attributes) != len(self.frames):
            raise ValueError("one frame per attribute is required")
        if len(set(self.attributes)) != len(self.attributes):
            raise ValueError("attribute names must be distinct")
        seen_ids: set[int] = set()
        for row in self.rows:
            if row.row_id <= 0:
                raise ValueError(f"row identifier {row.row_id} is not a positive integer")
            if row.row_id in seen_ids:
                raise ValueError(f"duplicate row identifier {row.row_id}")
            seen_ids.add(row.row_id)
            if len(row.cells) != len(self.attributes):
                raise ValueError(f"row {row.row_id} has {len(row.cells)} cells, expected {len(self.attributes)}")
            for attr, frame, cell in zip(self.attributes, self.frames, row.cells):
                if cell is None:
                    continue
                if cell.frame != frame:
                    raise FrameMismatch(f"cell for {attr!r} in row {row.row_id} is over the wrong frame")
                if cell.is_empty:
                    raise ValueError(f"cell for {attr!r} in row {row.row_id} is the empty set; nulls are not allowed")

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def attribute_index(self, attribute: str) -> int:
        try:
            return self.attributes.index(attribute)
        except ValueError:
            raise UnknownAttribute(
                f"relation {self.name!r} has no attribute {attribute!r} (has {list(self.attributes)})"
            ) from None

    def frame_of(self, attribute: str) -> Frame:
        return self.frames[self.attribute_index(attribute)]

    def column(self, attribute: str) -> tuple[FocalSet | None, ...]:
        idx = self.attribute_index(attribute)
        return tuple(row.cells[idx] for row in self.rows)


@dataclass(frozen=True)
class GranularSummary:
    """A mass distribution together with the relation column it summarizes."""

    distribution: MassDistribution
    source_relation: str
    attribute: str
    row_count: int


@dataclass(frozen=True)
class CombinabilityWitness:
    """Outcome of the conflict-free-parent feasibility decision.

    When feasible, ``joint_weights`` is one non-negative joint weighting of
    focal pairs, supported only on intersecting pairs, whose row marginals
    equal the first distribution and column marginals the second.  When the
    cause of infeasibility is a focal element disjoint from every focal
    element of the other side, ``blocking_focal`` names it.
    """

    feasible: bool
    joint_weights: tuple[tuple[FocalSet, FocalSet, Fraction], ...] | None = None
    blocking_focal: FocalSet | None = None


def _filled_column(relation: Relation, attribute: str) -> tuple[FocalSet, ...]:
    column = relation.column(attribute)
    missing = [row.row_id for row, cell in zip(relation.rows, column) if cell is None]
    if missing:
        raise UnfilledCell(
            f"attribute {attribute!r} of relation {relation.name!r} is unfilled in rows {missing}",
            rows=missing,
        )
    return column  # type: ignore[return-value]


def summarize(relation: Relation, attribute: str) -> GranularSummary:
    """Summarize an attribute column into its granular distribution.

    Each distinct cell value becomes a focal element weighted by its relative
    row count.
    """
    column = _filled_column(relation, attribute)
    n = relation.row_count
    counts: dict[FocalSet, int] = {}
    for cell in column:
        counts[cell] = counts.get(cell, 0) + 1
    distribution = MassDistribution.from_focal_list(
        relation.frame_of(attribute),
        [(cell, Fraction(count, n)) for cell, count in counts.items()],
    )
    return GranularSummary(distribution, relation.name, attribute, n)


def canonical_parent(
    summary: GranularSummary | MassDistribution,
    size: int,
    *,
    name: str = "parent",
    attribute: str | None = None,
) -> Relation:
    """Build the canonical parent relation of a distribution with ``size`` rows.

    Focal sets occupy consecutive row blocks in canonical order, each block
    sized by the focal weight times ``size``; summarizing the result gives
    back the input distribution.
    """
    if isinstance(summary, GranularSummary):
        distribution = summary.distribution
        attribute = attribute or summary.attribute
    else:
        distribution = summary
        attribute = attribute or "Value"
    if size <= 0:
        raise SizeNotCommonMultiple(f"parent size must be positive, got {size}")
    rows = []
    row_id = 1
    for focal, weight in distribution.entries:
        count = weight * size
        if count.denominator != 1:
            raise SizeNotCommonMultiple(
                f"size {size} is not a common multiple of the focal denominators"
                f" (weight {weight} of {focal.render()} gives a fractional row count)"
            )
        for _ in range(int(count)):
            rows.append(Row(row_id, (focal,)))
            row_id += 1
    return Relation(name, (attribute,), (distribution.frame,), tuple(rows))


def combine_relations(r1: Relation, r2: Relation, attribute: str) -> Relation:
    """Intersect two relations entrywise on one attribute, aligning rows by Name.

    Succeeds only if every intersection is non-empty; otherwise raises
    :class:`NullConflict` listing every row whose intersection came out empty.
    """
    idx1 = r1.attribute_index(attribute)
    idx2 = r2.attribute_index(attribute)
    if r1.frames[idx1] != r2.frames[idx2]:
        raise FrameMismatch(f"attribute {attribute!r} uses different frames in the two relations")
    if r1.row_count != r2.row_count:
        raise RowMismatch(f"row counts differ: {r1.row_count} vs {r2.row_count}")
    by_id = {row.row_id: row for row in r2.rows}
    if set(by_id) != {row.row_id for row in r1.rows}:
        raise RowMismatch("the two relations do not contain the same row Names")
    unfilled = [
        row.row_id
        for row in r1.rows
        if row.cells[idx1] is None or by_id[row.row_id].cells[idx2] is None
    ]
    if unfilled:
        raise UnfilledCell(
            f"attribute {attribute!r} must be filled in both relations; missing in rows {unfilled}",
            rows=unfilled,
        )
    conflicts = []
    combined_rows = []
    for row in r1.rows:
        cell = row.cells[idx1] & by_id[row.row_id].cells[idx2]
        if cell.is_empty:
            conflicts.append(row.row_id)
        else:
            combined_rows.append(Row(row.row_id, (cell,)))
    if conflicts:
        raise NullConflict(
            f"combination produces null values in rows {conflicts}", rows=conflicts
        )
    return Relation(
        f"{r1.name}*{r2.name}", (attribute,), (r1.frames[idx1],), tuple(combined_rows)
    )


def zadeh_combinable(m1: MassDistribution, m2: MassDistribution) -> CombinabilityWitness:
    """Decide whether two unconditioned distributions share a conflict-free parent.

    Equivalent to feasibility of a transportation problem with forbidden
    cells: a joint weighting over focal pairs, zero on disjoint pairs, with
    row marginals ``m1`` and column marginals ``m2``.  Decided exactly by
    integer max-flow after scaling all weights to a common denominator.
    """
    if m1.frame != m2.frame:
        raise FrameMismatch("cannot compare distributions over different frames")
    if m1.is_conditioned or m2.is_conditioned:
        raise ConditionedInput(
            "the conflict-free-parent decision applies to unconditioned distributions only"
        )
    f1 = m1.focal_sets
    f2 = m2.focal_sets
    for s in f1:
        if not any(s.intersects(t) for t in f2):
            return CombinabilityWitness(False, None, s)
    for t in f2:
        if not any(t.intersects(s) for s in f1):
            return CombinabilityWitness(False, None, t)
    scale = shared_denominator(m1, m2)
    supplies = [int(m1.mass(s) * scale) for s in f1]
    demands = [int(m2.mass(t) * scale) for t in f2]
    net = FlowNetwork()
    source = net.add_node()
    sink = net.add_node()
    left = [net.add_node() for _ in f1]
    right = [net.add_node() for _ in f2]
    for i, s in enumerate(f1):
        net.add_edge(source, left[i], supplies[i])
    for j, t in enumerate(f2):
        net.add_edge(right[j], sink, demands[j])
    pair_edges: list[tuple[int, int, int]] = []
    for i, s in enumerate(f1):
        for j, t in enumerate(f2):
            if s.intersects(t):
                edge = net.add_edge(left[i], right[j], min(supplies[i], demands[j]))
                pair_edges.append((i, j, edge))
    if net.max_flow(source, sink) != scale:
        return CombinabilityWitness(False, None, None)
    weights = tuple(
        (f1[i], f2[j], Fraction(net.flow_on(edge), scale))
        for i, j, edge in pair_edges
        if net.flow_on(edge) > 0
    )
    return CombinabilityWitness(True, weights, None)


def check_envelope(
    ra: Relation,
    rb: Relation,
    attribute: str,
    *,
    max_frame_size: int = POWERSET_CAP,
) -> bool:
    """Verify the belief/plausibility envelope of entrywise-contained relations.

    Requires the i-th cell of ``rb`` to be contained in the i-th cell of
    ``ra`` (rows aligned by position, violation is an error).  Returns True
    iff, for every subset D of the frame, the chain

        Bel_a(D) <= Bel_b(D) <= Pls_b(D) <= Pls_a(D)

    holds; with the containment precondition it always does, so this is a
    verification oracle rather than a classifier.
    """
    idx_a = ra.attribute_index(attribute)
    idx_b = rb.attribute_index(attribute)
    frame = ra.frames[idx_a]
    if frame != rb.frames[idx_b]:
        raise FrameMismatch(f"attribute {attribute!r} uses different frames in the two relations")
    if ra.row_count != rb.row_count:
        raise RowMismatch(f"row counts differ: {ra.row_count} vs {rb.row_count}")
    col_a = _filled_column(ra, attribute)
    col_b = _filled_column(rb, attribute)
    violations = [
        position
        for position, (cell_a, cell_b) in enumerate(zip(col_a, col_b), start=1)
        if not cell_b.issubset(cell_a)
    ]
    if violations:
        raise ContainmentViolated(
            f"containment fails at row positions {violations}", rows=violations
        )
    if frame.size > max_frame_size:
        raise FrameTooLarge(
            f"frame of size {frame.size} exceeds the powerset sweep cap of {max_frame_size}"
        )
    # Integer row counts suffice: both columns share the same row total.
    counts_a: dict[int, int] = {}
    counts_b: dict[int, int] = {}
    for cell in col_a:
        counts_a[cell.bits] = counts_a.get(cell.bits, 0) + 1
    for cell in col_b:
        counts_b[cell.bits] = counts_b.get(cell.bits, 0) + 1
    for d in range(1 << frame.size):
        bel_a = sum(c for bits, c in counts_a.items() if bits & ~d == 0)
        bel_b = sum(c for bits, c in counts_b.items() if bits & ~d == 0)
        pls_a = sum(c for bits, c in counts_a.items() if bits & d != 0)
        pls_b = sum(c for bits, c in counts_b.items() if bits & d != 0)
        if not (bel_a <= bel_b <= pls_b <= pls_a):
            return False
    return True


# --- CSV format --------------------------------------------------------------

def relation_from_csv(
    text: str, frames: Mapping[str, Frame], *, name: str = "relation"
) -> Relation:
    """Parse the relation CSV format.

    The header is ``Name,<attr1>,<attr2>,...``; Name cells are positive
    decimal integers; attribute cells use the set-expression grammar with
    ``|`` as the in-set separator; an empty cell is unfilled.  A frame must
    be supplied for every attribute column.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV: missing header row") from None
    if not header or header[0] != "Name":
        raise ValueError(f"CSV header must start with 'Name', got {header!r}")
    attributes = tuple(header[1:])
    if not attributes:
        raise ValueError("CSV has no attribute columns")
    missing = [attr for attr in attributes if attr not in frames]
    if missing:
        raise ValueError(f"no frame declared for attributes {missing}")
    attr_frames = tuple(frames[attr] for attr in attributes)
    rows = []
    for line_number, record in enumerate(reader, start=2):
        if not record or all(cell.strip() == "" for cell in record):
            continue
        if len(record) != len(header):
            raise ValueError(
                f"line {line_number}: expected {len(header)} cells, got {len(record)}"
            )
        try:
            row_id = int(record[0])
        except ValueError:
            raise ValueError(f"line {line_number}: Name cell {record[0]!r} is not an integer") from None
        cells = tuple(
            None if cell.strip() == "" else parse_set_expr(frame, cell)
            for frame, cell in zip(attr_frames, record[1:])
        )
        rows.append(Row(row_id, cells))
    return Relation(name, attributes, attr_frames, tuple(rows))


def relation_to_csv(relation: Relation) -> str:
    """Serialize to the relation CSV format with canonical set rendering."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("Name",) + relation.attributes)
    for row in relation.rows:
        writer.writerow(
            [str(row.row_id)]
            + ["" if cell is None else cell.render() for cell in row.cells]
        )
    return out.getvalue()
