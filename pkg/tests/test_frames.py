"""Frame construction, the set-expression grammar, and bitmask set algebra."""

import pytest
from hypothesis import given, strategies as st

from evicomb import (
    DuplicateLabel,
    EmptyFrame,
    FocalSet,
    FrameMismatch,
    FrameTooLarge,
    MalformedExpr,
    RangeOverNonIntegerFrame,
    UnknownLabel,
    build_frame,
    canonical_key,
    parse_set_expr,
    subsets,
)

AGES = build_frame(str(v) for v in range(20, 36))
AB = build_frame(["a", "b"])
ABC = build_frame(["a", "b", "c"])


class TestFrame:
    def test_basics(self):
        assert AGES.size == 16
        assert AGES.index("20") == 0
        assert AGES.index("35") == 15
        assert "22" in AGES
        assert "19" not in AGES

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            AGES.index("19")

    def test_rejects_duplicates(self):
        with pytest.raises(DuplicateLabel):
            build_frame(["a", "b", "a"])

    def test_rejects_empty(self):
        with pytest.raises(EmptyFrame):
            build_frame([])

    def test_rejects_labels_outside_charset(self):
        for bad in ("a b", "a|b", "a,b", "{a}", ""):
            with pytest.raises(ValueError):
                build_frame([bad])

    def test_size_cap(self):
        build_frame(f"l{i}" for i in range(64))
        with pytest.raises(FrameTooLarge):
            build_frame(f"l{i}" for i in range(65))

    def test_integer_detection(self):
        assert AGES.has_integer_labels
        assert not AB.has_integer_labels


class TestParse:
    def test_explicit_set(self):
        s = parse_set_expr(AB, "{a}")
        assert s.labels == ("a",)
        assert parse_set_expr(AB, "{b|a}").labels == ("a", "b")

    def test_star_is_full(self):
        assert parse_set_expr(AB, "*").is_full
        assert parse_set_expr(AGES, "*").bits == (1 << 16) - 1

    def test_empty_braces(self):
        assert parse_set_expr(AB, "{}").is_empty

    def test_range(self):
        s = parse_set_expr(AGES, "[22..26]")
        assert s.labels == ("22", "23", "24", "25", "26")

    def test_range_single_point(self):
        assert parse_set_expr(AGES, "[20..20]").labels == ("20",)

    def test_range_needs_integer_frame(self):
        with pytest.raises(RangeOverNonIntegerFrame):
            parse_set_expr(AB, "[1..2]")

    def test_range_endpoints_must_be_in_frame(self):
        with pytest.raises(UnknownLabel):
            parse_set_expr(AGES, "[18..22]")

    def test_reversed_range(self):
        with pytest.raises(MalformedExpr):
            parse_set_expr(AGES, "[26..22]")

    def test_unknown_member(self):
        with pytest.raises(UnknownLabel):
            parse_set_expr(AB, "{a|z}")

    def test_malformed(self):
        for expr in ("", "a", "{a", "a}", "[20..]", "[..20]", "{a,b}", "(a)"):
            with pytest.raises((MalformedExpr, UnknownLabel)):
                parse_set_expr(AGES, expr)

    def test_whitespace_tolerated_around_expression(self):
        assert parse_set_expr(AB, " {a} ") == parse_set_expr(AB, "{a}")


class TestRender:
    def test_frame_order(self):
        assert parse_set_expr(ABC, "{b|a}").render() == "{a|b}"

    def test_full_renders_star(self):
        assert parse_set_expr(AB, "{a|b}").render() == "*"

    def test_canonical_key_is_render(self):
        s = parse_set_expr(AGES, "[22..26]")
        assert canonical_key(s) == s.render() == "{22|23|24|25|26}"


# Property: parse is a left inverse of render, and the bitmask algebra agrees
# with ordinary frozenset arithmetic on the label sets.

@st.composite
def frame_and_masks(draw):
    size = draw(st.integers(min_value=1, max_value=8))
    frame = build_frame(f"x{i}" for i in range(size))
    a = draw(st.integers(min_value=0, max_value=(1 << size) - 1))
    b = draw(st.integers(min_value=0, max_value=(1 << size) - 1))
    return frame, FocalSet(frame, a), FocalSet(frame, b)


@given(frame_and_masks())
def test_parse_inverts_render(fam):
    frame, a, _ = fam
    if a.is_empty:
        assert parse_set_expr(frame, "{}") == a
    else:
        assert parse_set_expr(frame, a.render()) == a


@given(frame_and_masks())
def test_bitmask_algebra_matches_frozensets(fam):
    frame, a, b = fam
    sa, sb = frozenset(a.labels), frozenset(b.labels)
    assert frozenset((a & b).labels) == sa & sb
    assert frozenset((a | b).labels) == sa | sb
    assert frozenset(a.complement().labels) == frozenset(frame.labels) - sa
    assert a.issubset(b) == (sa <= sb)
    assert a.intersects(b) == bool(sa & sb)
    assert len(a) == len(sa)


@given(frame_and_masks())
def test_complement_involution_and_de_morgan(fam):
    frame, a, b = fam
    assert a.complement().complement() == a
    assert (a & b).complement() == a.complement() | b.complement()


def test_cross_frame_operations_rejected():
    with pytest.raises(FrameMismatch):
        parse_set_expr(AB, "{a}") & parse_set_expr(ABC, "{a}")


def test_subsets_enumerates_whole_powerset():
    seen = list(subsets(ABC))
    assert len(seen) == 8
    assert len({s.bits for s in seen}) == 8
    assert seen[0].is_empty and seen[-1].is_full


def test_subsets_refuses_oversized_frames():
    big = build_frame(f"l{i}" for i in range(17))
    with pytest.raises(FrameTooLarge):
        list(subsets(big))
