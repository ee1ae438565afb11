"""Conditional distributions: row selection, mapping propagation, and the
constructive conflict-free parent."""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from evicomb import (
    ConditionalParent,
    EmptySelection,
    FrameMismatch,
    MassDistribution,
    MultivaluedMapping,
    NonSingletonCondition,
    NonSingletonFocal,
    NotCombinable,
    ParentRow,
    Relation,
    Row,
    TotalConflict,
    UnfilledCell,
    UnknownAttribute,
    UnknownLabel,
    build_conflict_free_parent,
    build_frame,
    conditional_combinable,
    conflict_weight,
    dempster_combine,
    parse_set_expr,
    propagate,
    relation_from_csv,
    summarize,
    summarize_where,
    vacuous,
)

from .oracles import random_mass

FIXTURES = Path(__file__).parent / "fixtures"
SEX = build_frame(["M", "F"])
DEPT = build_frame(["Acct", "Eng", "Sales"])
AGES = build_frame(str(v) for v in range(20, 36))
WIDE_AGES = build_frame(str(v) for v in range(20, 46))


@pytest.fixture(scope="module")
def employees():
    text = (FIXTURES / "sexdept.csv").read_text()
    return relation_from_csv(text, {"Sex": SEX, "Dept": DEPT}, name="EMP")


def mass(frame, pairs, conditions=()):
    return MassDistribution.from_focal_list(
        frame,
        [(parse_set_expr(frame, e), Fraction(n, d)) for e, n, d in pairs],
        conditions,
    )


class TestSummarizeWhere:
    def test_sex_of_accounting(self, employees):
        d = summarize_where(employees, "Sex", [("Dept", "Acct")])
        assert d == mass(
            SEX, [("{M}", 1, 4), ("{F}", 3, 4)], conditions=["Dept=Acct"]
        )
        assert d.is_conditioned

    def test_unfilled_condition_cell_does_not_match(self):
        rows = (
            Row(1, (SEX.singleton("M"), DEPT.singleton("Acct"))),
            Row(2, (SEX.singleton("F"), None)),
        )
        r = Relation("r", ("Sex", "Dept"), (SEX, DEPT), rows)
        d = summarize_where(r, "Sex", [("Dept", "Acct")])
        assert d.mass(SEX.singleton("M")) == 1

    def test_vacuous_condition_equals_summarize_plus_tags(self, employees):
        rows = tuple(
            Row(i, (SEX.singleton(s), DEPT.singleton("Acct")))
            for i, s in enumerate("MFFF", 1)
        )
        r = Relation("r", ("Sex", "Dept"), (SEX, DEPT), rows)
        conditioned = summarize_where(r, "Sex", [("Dept", "Acct")])
        plain = summarize(r, "Sex").distribution
        assert conditioned.entries == plain.entries
        assert conditioned.conditions == frozenset({"Dept=Acct"})

    def test_single_row_with_theta_cell(self):
        rows = (Row(1, (SEX.full(), DEPT.singleton("Eng"))),)
        r = Relation("r", ("Sex", "Dept"), (SEX, DEPT), rows)
        d = summarize_where(r, "Sex", [("Dept", "Eng")])
        assert d.entries == vacuous(SEX).entries

    def test_empty_selection(self, employees):
        with pytest.raises(EmptySelection):
            summarize_where(employees, "Sex", [("Dept", "Sales")])

    def test_unfilled_target_cell(self, employees):
        with pytest.raises(UnfilledCell) as err:
            summarize_where(employees, "Sex", [("Dept", "Eng")])
        assert err.value.rows == [5]

    def test_unknown_condition_attribute(self, employees):
        with pytest.raises(UnknownAttribute):
            summarize_where(employees, "Sex", [("Division", "Acct")])

    def test_unknown_condition_value(self, employees):
        with pytest.raises(UnknownLabel):
            summarize_where(employees, "Sex", [("Dept", "Catering")])

    def test_non_singleton_condition_cell(self):
        rows = (Row(1, (SEX.singleton("M"), DEPT.subset(["Acct", "Eng"]))),)
        r = Relation("r", ("Sex", "Dept"), (SEX, DEPT), rows)
        with pytest.raises(NonSingletonCondition):
            summarize_where(r, "Sex", [("Dept", "Acct")])

    def test_two_conditions(self):
        rows = (
            Row(1, (SEX.singleton("M"), DEPT.singleton("Acct"))),
            Row(2, (SEX.singleton("F"), DEPT.singleton("Acct"))),
        )
        r = Relation("r", ("Sex", "Dept"), (SEX, DEPT), rows)
        d = summarize_where(r, "Sex", [("Dept", "Acct"), ("Sex", "F")])
        assert d.mass(SEX.singleton("F")) == 1
        assert d.conditions == frozenset({"Dept=Acct", "Sex=F"})


GAMMA = MultivaluedMapping(
    SEX,
    AGES,
    (parse_set_expr(AGES, "[20..22]"), parse_set_expr(AGES, "[21..23]")),
)


class TestMultivaluedMapping:
    def test_image_lookup(self):
        assert GAMMA.image("M") == parse_set_expr(AGES, "[20..22]")
        with pytest.raises(UnknownLabel):
            GAMMA.image("X")

    def test_must_be_total(self):
        with pytest.raises(ValueError):
            MultivaluedMapping(SEX, AGES, (parse_set_expr(AGES, "[20..22]"),))

    def test_images_must_be_nonempty(self):
        with pytest.raises(ValueError, match="empty"):
            MultivaluedMapping(SEX, AGES, (AGES.empty(), AGES.full()))

    def test_images_over_target_frame(self):
        with pytest.raises(FrameMismatch):
            MultivaluedMapping(SEX, AGES, (SEX.full(), AGES.full()))

    def test_json_round_trip(self):
        assert MultivaluedMapping.from_json_dict(GAMMA.to_json_dict()) == GAMMA

    def test_json_rejects_partial_map(self):
        data = GAMMA.to_json_dict()
        del data["map"]["F"]
        with pytest.raises(ValueError, match="not total"):
            MultivaluedMapping.from_json_dict(data)

    def test_json_rejects_unknown_source_labels(self):
        data = GAMMA.to_json_dict()
        data["map"]["X"] = "{20}"
        with pytest.raises(ValueError, match="outside the source frame"):
            MultivaluedMapping.from_json_dict(data)


class TestPropagate:
    def test_accounting_age_distribution(self):
        sex = mass(SEX, [("{M}", 1, 4), ("{F}", 3, 4)], conditions=["Dept=Acct"])
        age = propagate(sex, GAMMA)
        assert age == mass(
            AGES,
            [("[20..22]", 1, 4), ("[21..23]", 3, 4)],
            conditions=["Dept=Acct"],
        )

    def test_all_theta_images_give_vacuous(self):
        gamma = MultivaluedMapping(SEX, AGES, (AGES.full(), AGES.full()))
        src = mass(SEX, [("{M}", 1, 2), ("{F}", 1, 2)])
        assert propagate(src, gamma).entries == vacuous(AGES).entries

    def test_coinciding_images_accumulate(self):
        target = parse_set_expr(AGES, "[25..27]")
        gamma = MultivaluedMapping(SEX, AGES, (target, target))
        src = mass(SEX, [("{M}", 1, 2), ("{F}", 1, 2)])
        out = propagate(src, gamma)
        assert out.entries == ((target, Fraction(1)),)

    def test_non_singleton_focal_rejected(self):
        src = mass(SEX, [("*", 1, 1)])
        with pytest.raises(NonSingletonFocal):
            propagate(src, GAMMA)

    def test_source_frame_checked(self):
        src = mass(AGES, [("{20}", 1, 1)])
        with pytest.raises(FrameMismatch):
            propagate(src, GAMMA)

    def test_total_mass_preserved(self):
        rng = random.Random(30011)
        labels = tuple("pqrstu")
        source_frame = build_frame(labels)
        target = build_frame(f"t{i}" for i in range(5))
        for _ in range(40):
            images = tuple(
                parse_set_expr(
                    target,
                    "{" + "|".join(
                        sorted(
                            rng.sample(target.labels, rng.randint(1, target.size)),
                            key=target.index,
                        )
                    )
                    + "}",
                )
                for _ in labels
            )
            gamma = MultivaluedMapping(source_frame, target, images)
            weights = [rng.randint(1, 5) for _ in labels]
            total = sum(weights)
            src = MassDistribution.from_focal_list(
                source_frame,
                [
                    (source_frame.singleton(l), Fraction(w, total))
                    for l, w in zip(labels, weights)
                ],
            )
            out = propagate(src, gamma)
            assert sum((w for _, w in out.entries), Fraction(0)) == 1


COND1 = mass(
    WIDE_AGES, [("[20..22]", 1, 4), ("[30..35]", 3, 4)], conditions=["E1"]
)
COND2 = mass(
    WIDE_AGES, [("[21..23]", 2, 3), ("[40..45]", 1, 3)], conditions=["E2"]
)


class TestConditionalCombinable:
    def test_partially_overlapping_pair(self):
        assert conditional_combinable(COND1, COND2) is True

    def test_disjoint_singletons(self):
        ab = build_frame(["a", "b"])
        m1 = mass(ab, [("{a}", 1, 1)])
        m2 = mass(ab, [("{b}", 1, 1)])
        assert conditional_combinable(m1, m2) is False

    def test_vacuous_always_combinable(self):
        rng = random.Random(1409)
        frame = build_frame(f"x{i}" for i in range(5))
        for _ in range(30):
            assert conditional_combinable(random_mass(rng, frame), vacuous(frame))

    def test_equals_conflict_below_one(self):
        rng = random.Random(65537)
        frame = build_frame(f"x{i}" for i in range(5))
        for _ in range(150):
            m1 = random_mass(rng, frame)
            m2 = random_mass(rng, frame)
            assert conditional_combinable(m1, m2) == (
                conflict_weight(m1, m2).conflict_weight < 1
            )

    def test_frame_mismatch(self):
        with pytest.raises(FrameMismatch):
            conditional_combinable(COND1, vacuous(SEX))


def validate_parent_invariants(parent: ConditionalParent) -> None:
    ids = [row.row_id for row in parent.rows]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    for row in parent.rows:
        assert row.tag_1 == (row.cell_1 is not None)
        assert row.tag_2 == (row.cell_2 is not None)
        assert row.cell_1 is not None or row.cell_2 is not None
        if row.cell_1 is not None and row.cell_2 is not None:
            assert row.cell_1.intersects(row.cell_2)


class TestBuildConflictFreeParent:
    def test_worked_construction_row_by_row(self):
        parent = build_conflict_free_parent(COND1, COND2)
        assert parent.row_count == 21  # 12 + 12 - alpha with alpha = 3
        a1 = parse_set_expr(WIDE_AGES, "[20..22]")
        a2 = parse_set_expr(WIDE_AGES, "[30..35]")
        b1 = parse_set_expr(WIDE_AGES, "[21..23]")
        b2 = parse_set_expr(WIDE_AGES, "[40..45]")
        shared = [(r.cell_1, r.cell_2) for r in parent.rows if r.tag_1 and r.tag_2]
        assert shared == [(a1, b1)] * 3
        only_1 = [r.cell_1 for r in parent.rows if r.tag_1 and not r.tag_2]
        only_2 = [r.cell_2 for r in parent.rows if r.tag_2 and not r.tag_1]
        assert only_1 == [a2] * 9
        assert only_2 == [b1] * 5 + [b2] * 4
        validate_parent_invariants(parent)

    def test_marginals_recover_inputs(self):
        parent = build_conflict_free_parent(COND1, COND2)
        assert parent.summarize_side(1) == COND1
        assert parent.summarize_side(2) == COND2

    def test_full_overlap_single_row(self):
        m = mass(SEX, [("{M}", 1, 1)])
        parent = build_conflict_free_parent(m, m)
        assert parent.row_count == 1
        row = parent.rows[0]
        assert row.tag_1 and row.tag_2 and row.cell_1 == row.cell_2

    def test_disjoint_inputs_not_combinable(self):
        ab = build_frame(["a", "b"])
        with pytest.raises(NotCombinable):
            build_conflict_free_parent(mass(ab, [("{a}", 1, 1)]), mass(ab, [("{b}", 1, 1)]))

    def test_alpha_maximizing_pair_preferred(self):
        frame = build_frame(["a", "b", "c", "d"])
        m1 = mass(frame, [("{a}", 1, 4), ("{b}", 3, 4)])
        m2 = mass(frame, [("{a}", 1, 4), ("{b}", 3, 4)])
        parent = build_conflict_free_parent(m1, m2)
        shared = {(r.cell_1.render(), r.cell_2.render()) for r in parent.rows if r.tag_1 and r.tag_2}
        assert shared == {("{b}", "{b}")}  # alpha 3 beats alpha 1
        assert parent.row_count == 4 + 4 - 3

    def test_tie_broken_canonically(self):
        frame = build_frame(["a", "b"])
        m1 = mass(frame, [("{a}", 1, 2), ("{b}", 1, 2)])
        parent = build_conflict_free_parent(m1, m1)
        shared = {(r.cell_1.render(), r.cell_2.render()) for r in parent.rows if r.tag_1 and r.tag_2}
        assert shared == {("{a}", "{a}")}

    def test_evidence_tags_from_conditions(self):
        parent = build_conflict_free_parent(COND1, COND2)
        assert parent.evidence_tags == ("E1", "E2")
        assert parent.conditions_1 == frozenset({"E1"})

    def test_three_way_agreement(self):
        rng = random.Random(74093)
        frame = build_frame(f"x{i}" for i in range(5))
        combinable = 0
        for _ in range(200):
            m1 = random_mass(rng, frame)
            m2 = random_mass(rng, frame)
            decided = conditional_combinable(m1, m2)
            dempster_defined = True
            try:
                dempster_combine(m1, m2)
            except TotalConflict:
                dempster_defined = False
            assert decided == dempster_defined
            if decided:
                combinable += 1
                parent = build_conflict_free_parent(m1, m2)
                validate_parent_invariants(parent)
                assert parent.summarize_side(1) == m1
                assert parent.summarize_side(2) == m2
                scale = parent.row_count  # N + M - alpha <= 2L
                assert scale <= 2 * parent.summarize_side(1).common_denominator * (
                    parent.summarize_side(2).common_denominator
                )
            else:
                with pytest.raises(NotCombinable):
                    build_conflict_free_parent(m1, m2)
        assert combinable > 50

    def test_constructed_rows_validate_on_build(self):
        frame = build_frame(["a", "b"])
        with pytest.raises(ValueError, match="conflicting"):
            ConditionalParent(
                frame,
                (ParentRow(1, frame.singleton("a"), frame.singleton("b"), True, True),),
            )
        with pytest.raises(ValueError, match="tag"):
            ConditionalParent(frame, (ParentRow(1, frame.singleton("a"), None, True, True),))
        with pytest.raises(ValueError, match="no filled cell"):
            ConditionalParent(frame, (ParentRow(1, None, None, False, False),))


class TestParentCsv:
    def test_export_layout(self):
        frame = build_frame(["a", "b"])
        m1 = mass(frame, [("{a}", 1, 2), ("{b}", 1, 2)], conditions=["E1"])
        m2 = mass(frame, [("{a}", 1, 1)], conditions=["E2"])
        parent = build_conflict_free_parent(m1, m2)
        assert parent.to_csv() == (
            "Name,Age1,Age2,E1,E2\n"
            "1,{a},{a},1,1\n"
            "2,{b},,1,\n"
            "3,,{a},,1\n"
        )
