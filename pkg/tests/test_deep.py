"""Deep nested calculus: move generation and proof checking."""

import pytest

from fillprover.certs import CheckError, ProofNode, Witness, parse_context, proof_size
from fillprover.deep import (
    check_dn_proof,
    deep_moves,
    endsequent_for,
    proof_stays_in_fill,
)
from fillprover.formula import parse_formula
from fillprover.sequent import label_sequent, parse_sequent, sequent_text, strip_sequent


def N(rule, conclusion, witness=None, *premises):
    w = None
    if witness is not None:
        w = Witness(
            context=parse_context(witness["context"]) if "context" in witness else None,
            principal=parse_formula(witness["principal"]) if "principal" in witness else None,
            child_origin=witness.get("child_origin"),
            ctx1=parse_context(witness["ctx1"]) if "ctx1" in witness else None,
            ctx2=parse_context(witness["ctx2"]) if "ctx2" in witness else None,
        )
    return ProofNode(rule, parse_sequent(conclusion), tuple(premises), w)


def moves_of(text, logic="biill", hop_cap=None):
    s = label_sequent(parse_sequent(text))
    return list(deep_moves(s, logic, hop_cap))


# ---------------------------------------------------------------- moves

def test_axiom_moves():
    ms = moves_of("a => a")
    assert [m.rule for m in ms] == ["id"]
    assert ms[0].premises == ()
    assert [m.rule for m in moves_of("bot =>")] == ["bot_l"]
    assert [m.rule for m in moves_of("=> 1")] == ["i_r"]


def test_axioms_require_hollow_rest():
    assert all(m.rule != "id" for m in moves_of("a, b => a"))
    assert all(m.rule != "bot_l" for m in moves_of("a, bot => a"))
    # hollow children do not block closing
    assert [m.rule for m in moves_of("a => a, [=>]@1")] == ["id"]


def test_lolli_r_creates_labelled_child():
    ms = moves_of("=> a -o b")
    lolli = [m for m in ms if m.rule == "lolli_r"]
    assert len(lolli) == 1
    assert sequent_text(strip_sequent(lolli[0].premises[0])) == "=> [a => b]@1"


def test_branch_moves_split_material():
    ms = moves_of("c => a*b, d")
    tensor = [m for m in ms if m.rule == "tensor_r"]
    # two occurrences to distribute freely: 4 distinct splits
    assert len(tensor) == 4
    seen = {tuple(sequent_text(strip_sequent(p)) for p in m.premises) for m in tensor}
    assert ("c => a, d", "=> b") in seen
    assert ("=> a", "c => b, d") in seen
    assert ("c => a", "=> b, d") in seen
    assert ("=> a, d", "c => b") in seen


def test_fill_mode_drops_exclusion_rules():
    assert any(m.rule == "excl_l" for m in moves_of("a -< b => c"))
    assert all(m.rule != "excl_l" for m in moves_of("a -< b => c", logic="fill"))
    assert any(m.rule == "excl_r" for m in moves_of("=> a -< b"))
    assert all(m.rule != "excl_r" for m in moves_of("=> a -< b", logic="fill"))


def test_propagation_moves_and_hop_cap():
    ms = moves_of("b => [=> b]@1")
    props = [m for m in ms if m.rule == "prop_left_in"]
    assert len(props) == 1
    assert sequent_text(strip_sequent(props[0].premises[0])) == "=> [b => b]@1"
    assert all(m.rule != "prop_left_in" for m in moves_of("b => [=> b]@1", hop_cap=0))


def test_left_nested_propagation_is_biill_only():
    assert any(m.rule == "prop_right_in" for m in moves_of("[a => b] => c"))
    assert any(m.rule == "prop_left_out" for m in moves_of("[a, x => b] => c"))
    assert all(
        m.rule not in ("prop_right_in", "prop_left_out")
        for m in moves_of("[a => b] => c", logic="fill")
    )


# ------------------------------------------------------------- the fixture
# A full derivation of a two-premise par shuffle through an implication,
# transcribed by hand: it exercises child creation, deep rewriting, context
# splitting at two levels, propagation, and hollow-rest axioms.

def big_fill_proof():
    id_e = N("id", "=> [e => e]@1", {"context": "=> _", "principal": "e"})
    id_d = N("id", "=> [d => d]@1", {"context": "=> _", "principal": "d"})
    v1 = N("id", "a => a, [=>]@1", {"context": "_", "principal": "a"})
    id_b = N("id", "=> [b => b]@1", {"context": "=> _", "principal": "b"})
    v2 = N(
        "prop_left_in",
        "b => [=> b]@1",
        {"context": "_", "principal": "b", "child_origin": 1},
        id_b,
    )
    u1 = N(
        "par_l",
        "a|b => a, [=> b]@1",
        {"context": "_", "principal": "a|b", "ctx1": "_", "ctx2": "_"},
        v1,
        v2,
    )
    id_c = N("id", "=> [c => c]@1", {"context": "=> _", "principal": "c"})
    u2 = N(
        "prop_left_in",
        "c => [=> c]@1",
        {"context": "_", "principal": "c", "child_origin": 1},
        id_c,
    )
    r1 = N(
        "par_l",
        "(a|b)|c => a, [=> b, c]@1",
        {"context": "_", "principal": "(a|b)|c", "ctx1": "_", "ctx2": "_"},
        u1,
        u2,
    )
    q1 = N(
        "par_r",
        "(a|b)|c => a, [=> b|c]@1",
        {"context": "(a|b)|c => a, _", "principal": "b|c"},
        r1,
    )
    p1 = N(
        "lolli_l",
        "(a|b)|c => a, [b|c -o d => d]@1",
        {
            "context": "(a|b)|c => a, _",
            "principal": "b|c -o d",
            "ctx1": "(a|b)|c => a, _",
            "ctx2": "=> _",
        },
        q1,
        id_d,
    )
    s2 = N(
        "par_l",
        "(a|b)|c => a, [(b|c -o d)|e => d, e]@1",
        {
            "context": "(a|b)|c => a, _",
            "principal": "(b|c -o d)|e",
            "ctx1": "(a|b)|c => a, _",
            "ctx2": "=> _",
        },
        p1,
        id_e,
    )
    s1 = N(
        "par_r",
        "(a|b)|c => a, [(b|c -o d)|e => d|e]@1",
        {"context": "(a|b)|c => a, _", "principal": "d|e"},
        s2,
    )
    return N(
        "lolli_r",
        "(a|b)|c => a, (b|c -o d)|e -o d|e",
        {"context": "_", "principal": "(b|c -o d)|e -o d|e"},
        s1,
    )


def test_fixture_proof_checks_in_both_logics():
    proof = big_fill_proof()
    assert proof_size(proof) == 14
    check_dn_proof(proof, "biill")
    check_dn_proof(proof, "fill")
    assert proof_stays_in_fill(proof)


def test_fixture_expect_mismatch():
    proof = big_fill_proof()
    with pytest.raises(CheckError):
        check_dn_proof(proof, "biill", expect=parse_sequent("=> a"))


# ------------------------------------------------------------- rejections

def test_id_needs_hollow_rest():
    bad = N("id", "a, b => a", {"context": "_", "principal": "a"})
    with pytest.raises(CheckError):
        check_dn_proof(bad)


def test_wrong_premise_rejected():
    bad = N(
        "lolli_r",
        "=> a -o b",
        {"context": "_", "principal": "a -o b"},
        N("id", "=> [b => a]@1", {"context": "=> _", "principal": "a"}),
    )
    with pytest.raises(CheckError):
        check_dn_proof(bad)


def test_wrong_child_origin_rejected():
    bad = N(
        "lolli_r",
        "=> a -o b",
        {"context": "_", "principal": "a -o b"},
        N("id", "=> [a => b]@2", {"context": "=> _", "principal": "a"}),
    )
    with pytest.raises(CheckError):
        check_dn_proof(bad)


def test_branch_requires_split_witnesses():
    bad = N(
        "tensor_r",
        "a, b => a*b",
        {"context": "_", "principal": "a*b"},
        N("id", "a => a", {"context": "_", "principal": "a"}),
        N("id", "b => b", {"context": "_", "principal": "b"}),
    )
    with pytest.raises(CheckError):
        check_dn_proof(bad)


def test_branch_with_witnesses_checks():
    good = N(
        "tensor_r",
        "a, b => a*b",
        {"context": "_", "principal": "a*b", "ctx1": "_", "ctx2": "_"},
        N("id", "a => a", {"context": "_", "principal": "a"}),
        N("id", "b => b", {"context": "_", "principal": "b"}),
    )
    check_dn_proof(good)
    check_dn_proof(good, "fill")


def test_missing_witness_rejected():
    bad = ProofNode("id", parse_sequent("a => a"), (), None)
    with pytest.raises(CheckError):
        check_dn_proof(bad)


def test_fill_rejects_exclusion_and_left_nesting():
    proof = N(
        "excl_l",
        "a -< b => c",
        {"context": "_", "principal": "a -< b"},
        N("id", "[a => b] => c", {"context": "_", "principal": "c"}),
    )
    with pytest.raises(CheckError):
        check_dn_proof(proof, "fill")
    nested = N("id", "[a => b] => c", {"context": "_", "principal": "c"})
    with pytest.raises(CheckError):
        check_dn_proof(nested, "fill")


def test_unknown_rule_rejected():
    with pytest.raises(CheckError):
        check_dn_proof(N("cut", "a => a", {"context": "_"}))


def test_stays_in_fill_predicate():
    inside = N("id", "a => a", {"context": "_", "principal": "a"})
    assert proof_stays_in_fill(inside)
    outside = N(
        "prop_right_in",
        "[a => b] => c",
        {"context": "_", "principal": "c", "child_origin": 0},
    )
    assert not proof_stays_in_fill(outside)


def test_endsequent_for():
    s = endsequent_for(parse_formula("(a -o b) -o c -o d"))
    assert sequent_text(strip_sequent(s)) == "=> (a -o b) -o c -o d"
    f = s.right[0].formula
    assert f.label == 1 and f.left.label == 2 and f.right.label == 3
