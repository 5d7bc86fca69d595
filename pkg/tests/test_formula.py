"""Formula parsing, printing, and occurrence labelling."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fillprover.formula import (
    Atom,
    Excl,
    Lolli,
    Par,
    ParseError,
    Tensor,
    UnitBot,
    UnitI,
    arrow_count,
    connective_count,
    formula_key,
    formula_size,
    formula_text,
    is_fill_formula,
    label_occurrences,
    parse_formula,
    strip_labels,
)

a, b, c, p, q, r = (Atom(x) for x in "abcpqr")


def test_atoms_and_units():
    assert parse_formula("p") == p
    assert parse_formula("1") == UnitI()
    assert parse_formula("bot") == UnitBot()
    # 'bot' is reserved but longer identifiers starting with it are atoms
    assert parse_formula("bottom") == Atom("bottom")
    assert parse_formula("bot1") == Atom("bot1")
    assert parse_formula("x_2") == Atom("x_2")


def test_precedence_and_associativity():
    assert parse_formula("a*b|c") == Par(Tensor(a, b), c)
    assert parse_formula("a|b*c") == Tensor(Par(a, b), c)
    assert parse_formula("a*(b|c)") == Tensor(a, Par(b, c))
    assert parse_formula("a -o b -o c") == Lolli(a, Lolli(b, c))
    assert parse_formula("a -< b -< c") == Excl(Excl(a, b), c)
    # exclusion binds tighter than implication
    assert parse_formula("a -< b -o c") == Lolli(Excl(a, b), c)
    assert parse_formula("a -o b -< c") == Lolli(a, Excl(b, c))
    assert parse_formula("a*b -o c|d") == Lolli(Tensor(a, b), Par(c, Atom("d")))


def test_rendering_minimal_parens():
    cases = [
        (Tensor(Tensor(a, b), c), "a*b*c"),
        (Tensor(a, Tensor(b, c)), "a*(b*c)"),
        (Par(Tensor(a, b), c), "(a*b)|c"),
        (Tensor(a, Par(b, c)), "a*(b|c)"),
        (Lolli(a, Lolli(b, c)), "a -o b -o c"),
        (Lolli(Lolli(a, b), c), "(a -o b) -o c"),
        (Excl(Excl(a, b), c), "a -< b -< c"),
        (Excl(a, Excl(b, c)), "a -< (b -< c)"),
        (Lolli(Excl(a, b), c), "a -< b -o c"),
        (Excl(Lolli(a, b), c), "(a -o b) -< c"),
        (Tensor(Lolli(a, b), c), "(a -o b)*c"),
        (Par(UnitBot(), UnitI()), "bot|1"),
    ]
    for f, text in cases:
        assert formula_text(f) == text
        assert parse_formula(text) == f


@pytest.mark.parametrize(
    "bad",
    ["", "a -o", "* a", "(a", "a)", "a b", "A", "a -", "a ->", "2", "a & b", "()"],
)
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


def test_size_and_counts():
    f = parse_formula("(p*(q|r)) -o (p*q)|r")
    assert formula_size(f) == 11
    assert connective_count(f) == 5
    assert arrow_count(f) == 1
    assert connective_count(parse_formula("p")) == 0
    assert arrow_count(parse_formula("a -< b -o c*d")) == 2


def test_fill_membership():
    assert is_fill_formula(parse_formula("(p*(q|r)) -o (p*q)|r"))
    assert is_fill_formula(parse_formula("bot -o 1"))
    assert not is_fill_formula(parse_formula("p -o q|(p -< q)"))
    assert not is_fill_formula(parse_formula("(a -< b) -o c"))


def test_label_occurrences_prefix_order():
    f = parse_formula("(a|b)|c -o a|((b|c -o d)|e -o d|e)")
    assert arrow_count(f) == 3
    g, nxt = label_occurrences(f)
    assert nxt == 4
    assert g.label == 1
    outer = g.right.right  # the arrow ending in d|e
    assert isinstance(outer, Lolli) and outer.label == 2
    inner = outer.left.left  # the arrow ending in d
    assert isinstance(inner, Lolli) and inner.label == 3
    assert strip_labels(g) == f
    # labelling twice from a later start renumbers cleanly
    g2, _ = label_occurrences(g, 7)
    assert g2.label == 7 and g2.right.right.label == 8


def test_labels_distinguish_occurrences():
    assert formula_key(Lolli(a, b, 1)) != formula_key(Lolli(a, b, 2))
    assert Lolli(a, b, 1) != Lolli(a, b, 2)
    assert strip_labels(Lolli(a, b, 1)) == strip_labels(Lolli(a, b, 2))


names = st.sampled_from(["a", "b", "c", "p", "q", "r", "x_1"])
leaves = st.one_of(names.map(Atom), st.just(UnitI()), st.just(UnitBot()))
formulas = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(Tensor, kids, kids),
        st.builds(Par, kids, kids),
        st.builds(Lolli, kids, kids),
        st.builds(Excl, kids, kids),
    ),
    max_leaves=12,
)


@given(formulas)
def test_text_round_trip(f):
    assert parse_formula(formula_text(f)) == f


@given(formulas)
def test_key_respects_equality(f):
    assert formula_key(f) == formula_key(parse_formula(formula_text(f)))


@given(formulas)
def test_labelling_is_invertible(f):
    g, nxt = label_occurrences(f)
    assert nxt == 1 + arrow_count(f)
    assert strip_labels(g) == f
