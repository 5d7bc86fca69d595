"""Nested sequent structure: canonical form, contexts, splits and merges."""

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fillprover.formula import ParseError, parse_formula
from fillprover.sequent import (
    HOLE,
    Hole,
    Occ,
    Sequent,
    context_decompose,
    context_polarity,
    enumerate_context_partitions,
    enumerate_partitions,
    formula_occurrence_count,
    hole_contexts,
    hole_count,
    is_fill_sequent,
    is_hollow,
    merge_contexts,
    merge_sequents,
    parse_sequent,
    plug,
    sequent_node_count,
    sequent_text,
    tau_a,
    tau_s,
)


def texts(seqs):
    return sorted(sequent_text(s) for s in seqs)


# ------------------------------------------------------- an independent
# partition enumerator used as the oracle for the library's: address every
# formula occurrence by its tree path, two-colour the addresses, rebuild.

def brute_partitions(s):
    slots = []

    def collect(node, path):
        for side_name in ("left", "right"):
            for idx, it in enumerate(getattr(node, side_name)):
                p = path + ((side_name, idx),)
                if isinstance(it, Occ):
                    slots.append(p)
                elif isinstance(it, Sequent):
                    collect(it, p)

    collect(s, ())

    def rebuild(node, path, keep):
        sides = {}
        for side_name in ("left", "right"):
            items = []
            for idx, it in enumerate(getattr(node, side_name)):
                p = path + ((side_name, idx),)
                if isinstance(it, Occ):
                    if p in keep:
                        items.append(it)
                elif isinstance(it, Sequent):
                    items.append(rebuild(it, p, keep))
                else:
                    items.append(it)
            sides[side_name] = tuple(items)
        return Sequent(sides["left"], sides["right"], node.origin)

    out = []
    for mask in range(2 ** len(slots)):
        keep1 = {p for j, p in enumerate(slots) if not mask >> j & 1}
        keep2 = {p for j, p in enumerate(slots) if mask >> j & 1}
        out.append((rebuild(s, (), keep1), rebuild(s, (), keep2)))
    return out


# ----------------------------------------------------------------- parsing

def test_round_trips():
    for text in [
        "=>",
        "a =>",
        "=> a",
        "a, a => b",
        "a => [b => c]@2, d",
        "[a => b] => c",
        "=> [=>]@1",
        "a*b, c -o d => [e => [f =>]@3]@2",
        "_ => a",
        "a => _",
    ]:
        s = parse_sequent(text)
        assert parse_sequent(sequent_text(s)) == s


def test_canonical_order_is_permutation_invariant():
    assert parse_sequent("a, b => c") == parse_sequent("b, a => c")
    assert parse_sequent("=> [a =>]@1, [b =>]@2") == parse_sequent("=> [b =>]@2, [a =>]@1")
    assert sequent_text(parse_sequent("b, a =>")) == "a, b =>"


def test_duplicates_and_origins():
    s = parse_sequent("a, a =>")
    assert len(s.left) == 2
    child = parse_sequent("b => c @2")
    assert child.origin == 2
    assert sequent_text(child) == "b => c @2"
    assert parse_sequent("=> [b => c]@2").right[0] == child


def test_hops_are_invisible_but_distinct():
    f = parse_formula("a")
    assert Occ(f, 1) != Occ(f, 0)
    assert sequent_text(Sequent((Occ(f, 1),), ())) == "a =>"
    assert Sequent((Occ(f, 1),), ()) != Sequent((Occ(f),), ())


@pytest.mark.parametrize("bad", ["a", "a => => b", "[a => b", "a => ]", "=> @", "a,, b =>"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_sequent(bad)


# ------------------------------------------------------------- predicates

def test_hollow():
    assert is_hollow(parse_sequent("=>"))
    assert is_hollow(parse_sequent("=> [=>]@1, [=> [=>]@3]@2"))
    assert not is_hollow(parse_sequent("=> [a =>]@1"))
    assert not is_hollow(parse_sequent("a =>"))


def test_fill_sequents():
    assert is_fill_sequent(parse_sequent("a => b, [c => d]@1"))
    assert is_fill_sequent(parse_sequent("=> [a => [b => c]@2]@1"))
    assert not is_fill_sequent(parse_sequent("[a => b] => c"))
    assert not is_fill_sequent(parse_sequent("a -< b => c"))
    assert not is_fill_sequent(parse_sequent("=> [[a => b] => c]@1"))


def test_counts():
    s = parse_sequent("a => b, [c => d, [e => f]@3]@2")
    assert formula_occurrence_count(s) == 6
    assert sequent_node_count(s) == 3


# ---------------------------------------------------------------- contexts

def test_hole_contexts_cover_every_node():
    s = parse_sequent("a => b, [c => d, [e => f]@3]@2")
    pairs = list(hole_contexts(s))
    assert len(pairs) == sequent_node_count(s)
    assert pairs[0][0] is HOLE and pairs[0][1] == s
    for ctx, node in pairs:
        if not isinstance(ctx, Hole):
            assert hole_count(ctx) == 1
        assert plug(ctx, node) == s
        assert context_decompose(ctx, s) == node


def test_plug_and_decompose():
    ctx = parse_sequent("a => _")
    node = parse_sequent("b => c @2")
    tree = plug(ctx, node)
    assert tree == parse_sequent("a => [b => c]@2")
    assert context_decompose(ctx, tree) == node
    assert context_decompose(parse_sequent("b => _"), tree) is None
    assert context_decompose(ctx, parse_sequent("a => d")) is None


def test_polarity():
    assert context_polarity(HOLE) == "root"
    assert context_polarity(parse_sequent("a => _")) == "pos"
    assert context_polarity(parse_sequent("_ => a")) == "neg"
    assert context_polarity(parse_sequent("a => [_ => b]@2")) == "neg"
    assert context_polarity(parse_sequent("a => [b => _, c]@2")) == "pos"


# ------------------------------------------------ formula interpretations

def test_tau_on_flat_sequents():
    assert tau_s(parse_sequent("=>")) == parse_formula("1 -o bot")
    assert tau_s(parse_sequent("a, b => c, d")) == parse_formula("a*b -o c|d")
    assert tau_a(parse_sequent("a => b")) == parse_formula("a -< b")


def test_tau_on_nested_sequents():
    assert tau_s(parse_sequent("=> a, [b => c]@2")) == parse_formula("1 -o a|(b -o c)")
    assert tau_a(parse_sequent("a, [b => c] => d")) == parse_formula("a*(b -< c) -< d")
    assert tau_s(parse_sequent("[a => b] => c")) == parse_formula("(a -< b) -o c")


# ------------------------------------------------------ merging and splits

def test_merge_pairs_children_by_origin():
    s1 = parse_sequent("=> [a =>]@1, [b =>]@1")
    s2 = parse_sequent("=> [c =>]@1, [d =>]@1")
    assert texts(merge_sequents(s1, s2)) == [
        "=> [a, c =>]@1, [b, d =>]@1",
        "=> [a, d =>]@1, [b, c =>]@1",
    ]


def test_merge_requires_matching_shape():
    assert merge_sequents(parse_sequent("=> [a =>]@1"), parse_sequent("=> [a =>]@2")) == []
    assert merge_sequents(parse_sequent("=> [a =>]@1"), parse_sequent("=> [a =>]@1, [b =>]@1")) == []
    assert merge_sequents(parse_sequent("a => @1"), parse_sequent("b => @2")) == []


def test_merge_flat():
    got = merge_sequents(parse_sequent("a => b"), parse_sequent("c =>"))
    assert texts(got) == ["a, c => b"]


def test_merge_contexts_aligns_holes():
    c1 = parse_sequent("a => _")
    c2 = parse_sequent("b => _")
    assert texts(merge_contexts(c1, c2)) == ["a, b => _"]
    assert merge_contexts(HOLE, HOLE) == [HOLE]
    assert merge_contexts(HOLE, c1) == []
    assert merge_contexts(parse_sequent("_ => a"), c1) == []


def test_partitions_match_brute_force():
    for text in ["a => b", "a, b => c", "a => b, [c => d]@2", "=> [a => [b =>]@3]@2"]:
        s = parse_sequent(text)
        got = enumerate_partitions(s)
        assert len(got) == 2 ** formula_occurrence_count(s)
        assert Counter(got) == Counter(brute_partitions(s))


def test_partition_order_starts_full():
    s = parse_sequent("a => b")
    first_half, second_half = enumerate_partitions(s)[0]
    assert first_half == s
    assert formula_occurrence_count(second_half) == 0


def test_context_partitions_keep_the_hole():
    ctx = parse_sequent("a => _, b")
    pairs = enumerate_context_partitions(ctx)
    assert len(pairs) == 4
    for c1, c2 in pairs:
        assert hole_count(c1) == 1 and hole_count(c2) == 1
        assert ctx in merge_contexts(c1, c2)
    assert enumerate_context_partitions(HOLE) == [(HOLE, HOLE)]


# ------------------------------------------------------------ random shape

formula_pool = st.sampled_from(
    [parse_formula(t) for t in ["a", "b", "p -o q", "a*b", "bot", "1"]]
)
occ_items = formula_pool.map(Occ)


def _with_origin(s, g):
    return Sequent(s.left, s.right, g)


flat_seqs = st.builds(
    lambda l, r: Sequent(tuple(l), tuple(r)),
    st.lists(occ_items, max_size=2),
    st.lists(occ_items, max_size=2),
)
nested_seqs = st.recursive(
    flat_seqs,
    lambda kids: st.builds(
        lambda l, r, cs: Sequent(tuple(l), tuple(r) + tuple(cs)),
        st.lists(occ_items, max_size=1),
        st.lists(occ_items, max_size=1),
        st.lists(st.builds(_with_origin, kids, st.integers(1, 3)), max_size=2),
    ),
    max_leaves=3,
)


@given(nested_seqs)
@settings(max_examples=60, deadline=None)
def test_sequent_text_round_trip(s):
    assert parse_sequent(sequent_text(s)) == s


@given(nested_seqs)
@settings(max_examples=40, deadline=None)
def test_every_partition_merges_back(s):
    if formula_occurrence_count(s) > 4:
        return
    for p1, p2 in enumerate_partitions(s):
        assert s in merge_sequents(p1, p2)


@given(nested_seqs)
@settings(max_examples=40, deadline=None)
def test_hole_contexts_invert(s):
    for ctx, node in hole_contexts(s):
        assert plug(ctx, node) == s
        assert context_decompose(ctx, s) == node
