"""Exact-arithmetic evidence calculus over set-valued relational tables.

The package models evidence as mass distributions over a finite frame of
discernment, summarizes set-valued relation columns into such distributions,
combines them by Dempster's rule, and decides — exactly, with rational
arithmetic throughout — when two bodies of evidence admit a conflict-free
common parent table or a common satisfying point probability.
"""

from .combination import ConflictReport, conflict_weight, dempster_combine
from .conditional import (
    ConditionalParent,
    MultivaluedMapping,
    ParentRow,
    build_conflict_free_parent,
    conditional_combinable,
    propagate,
    summarize_where,
)
from .errors import (
    ConditionedInput,
    ContainmentViolated,
    DuplicateLabel,
    EmptyFrame,
    EmptySelection,
    EvidenceError,
    FrameMismatch,
    FrameTooLarge,
    MalformedExpr,
    MassOnEmptySet,
    NonSingletonCondition,
    NonSingletonFocal,
    NotCombinable,
    NullConflict,
    RangeOverNonIntegerFrame,
    RowMismatch,
    SizeNotCommonMultiple,
    TotalConflict,
    UnfilledCell,
    UnknownAttribute,
    UnknownLabel,
    WeightsDoNotSumToOne,
)
from .frames import (
    MAX_FRAME_SIZE,
    POWERSET_CAP,
    FocalSet,
    Frame,
    build_frame,
    canonical_key,
    parse_set_expr,
    render,
    subsets,
)
from .masses import MassDistribution, Ratio, belief, plausibility, shared_denominator, vacuous
from .probability import (
    FEASIBILITY_CAP,
    ProbabilityDistribution,
    allocation_distribution,
    joint_satisfiable,
    satisfies,
)
from .relations import (
    CombinabilityWitness,
    GranularSummary,
    Relation,
    Row,
    canonical_parent,
    check_envelope,
    combine_relations,
    relation_from_csv,
    relation_to_csv,
    summarize,
    zadeh_combinable,
)

__version__ = "0.1.0"

__all__ = [
    "CombinabilityWitness",
    "ConditionalParent",
    "ConditionedInput",
    "ConflictReport",
    "ContainmentViolated",
    "DuplicateLabel",
    "EmptyFrame",
    "EmptySelection",
    "EvidenceError",
    "FEASIBILITY_CAP",
    "FocalSet",
    "Frame",
    "FrameMismatch",
    "FrameTooLarge",
    "GranularSummary",
    "MAX_FRAME_SIZE",
    "MalformedExpr",
    "MassDistribution",
    "MassOnEmptySet",
    "MultivaluedMapping",
    "NonSingletonCondition",
    "NonSingletonFocal",
    "NotCombinable",
    "NullConflict",
    "POWERSET_CAP",
    "ParentRow",
    "ProbabilityDistribution",
    "RangeOverNonIntegerFrame",
    "Ratio",
    "Relation",
    "Row",
    "RowMismatch",
    "SizeNotCommonMultiple",
    "TotalConflict",
    "UnfilledCell",
    "UnknownAttribute",
    "UnknownLabel",
    "WeightsDoNotSumToOne",
    "allocation_distribution",
    "belief",
    "build_conflict_free_parent",
    "build_frame",
    "canonical_key",
    "canonical_parent",
    "check_envelope",
    "combine_relations",
    "conditional_combinable",
    "conflict_weight",
    "dempster_combine",
    "joint_satisfiable",
    "parse_set_expr",
    "plausibility",
    "propagate",
    "relation_from_csv",
    "relation_to_csv",
    "render",
    "satisfies",
    "shared_denominator",
    "subsets",
    "summarize",
    "summarize_where",
    "vacuous",
    "zadeh_combinable",
]
