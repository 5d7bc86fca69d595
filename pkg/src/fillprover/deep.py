"""The deep nested sequent calculus: rules rewrite one node anywhere in the
tree, read bottom-up from conclusion to premises.

Axioms close a branch only when the rest of the whole tree is hollow.  Unary
rules unfold a connective in place; the two implication-like connectives
spawn a child sequent tagged with the label of the occurrence that was
unfolded.  Branching rules split the surrounding context and the remaining
material of the rewritten node between two premises; the split is part of
the rule application and is recorded in the witness, so checking replays it
instead of searching.  Propagation rules move one formula occurrence across
one parent/child boundary, bumping its hop counter.

The FILL restriction drops exclusion and the two propagation moves that need
left-nested children, and insists every sequent stays right-nested.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterator, Optional

from .certs import CheckError, ProofNode, Witness, proof_size, stack_room
from .formula import (
    Atom,
    Excl,
    Formula,
    Lolli,
    Par,
    Tensor,
    UnitBot,
    UnitI,
    formula_text,
    strip_labels,
)
from .sequent import (
    HOLE,
    Context,
    Hole,
    Occ,
    Sequent,
    child_seqs,
    children_by_origin,
    context_decompose,
    enumerate_context_partitions,
    enumerate_partitions,
    formula_occurrence_count,
    hole_contexts,
    is_fill_sequent,
    is_hollow,
    label_sequent,
    occs,
    plug,
    sequent_text,
    side_remove,
    strip_context,
    strip_sequent,
)

__all__ = [
    "LEAF_RULES",
    "BRANCH_RULES",
    "PROP_RULES",
    "DN_RULES",
    "FILL_EXCLUDED",
    "Move",
    "endsequent_for",
    "deep_moves",
    "check_dn_proof",
    "replay_dn_proof",
    "check_separation",
    "proof_stays_in_fill",
]

LEAF_RULES = ("id", "bot_l", "i_r")
UNARY_LOGICAL_RULES = ("i_l", "bot_r", "tensor_l", "par_r", "lolli_r", "excl_l")
BRANCH_RULES = ("tensor_r", "par_l", "lolli_l", "excl_r")
PROP_RULES = ("prop_left_in", "prop_right_in", "prop_left_out", "prop_right_out")
DN_RULES = LEAF_RULES + UNARY_LOGICAL_RULES + BRANCH_RULES + PROP_RULES

# exclusion talks about left-nested children, as do the two propagation
# moves dropped here; everything else stays untouched in FILL
FILL_EXCLUDED = frozenset({"excl_l", "excl_r", "prop_right_in", "prop_left_out"})


@dataclass(frozen=True)
class Move:
    rule: str
    premises: tuple[Sequent, ...]
    witness: Witness


def endsequent_for(formula: Formula) -> Sequent:
    """The labelled root sequent asserting the formula."""
    return label_sequent(Sequent((), (Occ(strip_labels(formula)),)))


def _swap(items: tuple, old, new) -> tuple:
    return side_remove(items, [old]) + (new,)


# ------------------------------------------------------------------ moves

def _axiom_move(s: Sequent) -> Optional[Move]:
    total = formula_occurrence_count(s)
    if total == 1:
        for ctx, node in hole_contexts(s):
            for occ in occs(node.left):
                if isinstance(occ.formula, UnitBot):
                    return Move("bot_l", (), Witness(context=ctx, principal=occ.formula))
            for occ in occs(node.right):
                if isinstance(occ.formula, UnitI):
                    return Move("i_r", (), Witness(context=ctx, principal=occ.formula))
    if total == 2:
        for ctx, node in hole_contexts(s):
            for lo in occs(node.left):
                if not isinstance(lo.formula, Atom):
                    continue
                for ro in occs(node.right):
                    if ro.formula == lo.formula:
                        return Move("id", (), Witness(context=ctx, principal=lo.formula))
    return None


_BRANCH_SPECS = {
    # rule: (principal side, where A goes in premise 1, where B goes in premise 2)
    "tensor_r": ("right", "right", "right"),
    "par_l": ("left", "left", "left"),
    "lolli_l": ("left", "right", "left"),
    "excl_r": ("right", "right", "left"),
}


def _with_occ(s: Sequent, side: str, occ: Occ) -> Sequent:
    if side == "left":
        return Sequent(s.left + (occ,), s.right, s.origin)
    return Sequent(s.left, s.right + (occ,), s.origin)


def _branch_rule_for(f: Formula, side: str) -> Optional[str]:
    match f, side:
        case Tensor(), "right":
            return "tensor_r"
        case Par(), "left":
            return "par_l"
        case Lolli(), "left":
            return "lolli_l"
        case Excl(), "right":
            return "excl_r"
    return None


def deep_moves(s: Sequent, logic: str = "biill", hop_cap: Optional[int] = None) -> Iterator[Move]:
    """Candidate rule applications with `s` as conclusion, most constrained
    first: axioms, then in-place unfolding, then branching, then propagation.
    `hop_cap` suppresses propagation of occurrences that already moved that
    many times."""
    fill = logic == "fill"
    ax = _axiom_move(s)
    if ax is not None:
        yield ax
        return

    spots = list(hole_contexts(s))

    for ctx, node in spots:
        for occ in occs(node.left):
            f = occ.formula
            match f:
                case UnitI():
                    premise = plug(ctx, Sequent(side_remove(node.left, [occ]), node.right, node.origin))
                    yield Move("i_l", (premise,), Witness(context=ctx, principal=f))
                case Tensor(left=a, right=b):
                    left = side_remove(node.left, [occ]) + (Occ(a), Occ(b))
                    yield Move(
                        "tensor_l",
                        (plug(ctx, Sequent(left, node.right, node.origin)),),
                        Witness(context=ctx, principal=f),
                    )
                case Excl(left=a, right=b, label=g) if not fill:
                    child = Sequent((Occ(a),), (Occ(b),), g)
                    left = side_remove(node.left, [occ]) + (child,)
                    yield Move(
                        "excl_l",
                        (plug(ctx, Sequent(left, node.right, node.origin)),),
                        Witness(context=ctx, principal=f),
                    )
        for occ in occs(node.right):
            f = occ.formula
            match f:
                case UnitBot():
                    premise = plug(ctx, Sequent(node.left, side_remove(node.right, [occ]), node.origin))
                    yield Move("bot_r", (premise,), Witness(context=ctx, principal=f))
                case Par(left=a, right=b):
                    right = side_remove(node.right, [occ]) + (Occ(a), Occ(b))
                    yield Move(
                        "par_r",
                        (plug(ctx, Sequent(node.left, right, node.origin)),),
                        Witness(context=ctx, principal=f),
                    )
                case Lolli(left=a, right=b, label=g):
                    child = Sequent((Occ(a),), (Occ(b),), g)
                    right = side_remove(node.right, [occ]) + (child,)
                    yield Move(
                        "lolli_r",
                        (plug(ctx, Sequent(node.left, right, node.origin)),),
                        Witness(context=ctx, principal=f),
                    )

    for ctx, node in spots:
        for side_name in ("left", "right"):
            for occ in occs(getattr(node, side_name)):
                rule = _branch_rule_for(occ.formula, side_name)
                if rule is None or (fill and rule in FILL_EXCLUDED):
                    continue
                f = occ.formula
                if side_name == "left":
                    rest = Sequent(side_remove(node.left, [occ]), node.right, node.origin)
                else:
                    rest = Sequent(node.left, side_remove(node.right, [occ]), node.origin)
                _, a_side, b_side = _BRANCH_SPECS[rule]
                seen: set = set()
                for c1, c2 in enumerate_context_partitions(ctx):
                    for r1, r2 in enumerate_partitions(rest):
                        p1 = plug(c1, _with_occ(r1, a_side, Occ(f.left)))
                        p2 = plug(c2, _with_occ(r2, b_side, Occ(f.right)))
                        if (p1, p2) in seen:
                            continue
                        seen.add((p1, p2))
                        yield Move(rule, (p1, p2), Witness(context=ctx, principal=f, ctx1=c1, ctx2=c2))

    for ctx, node in spots:
        yield from _prop_moves(ctx, node, fill, hop_cap)


def _prop_moves(ctx: Context, node: Sequent, fill: bool, hop_cap: Optional[int]) -> Iterator[Move]:
    def capped(occ: Occ) -> bool:
        return hop_cap is not None and occ.hops >= hop_cap

    seen: set = set()

    def emit(rule: str, premise: Sequent, moved: Formula, origin: int) -> Iterator[Move]:
        key = (rule, premise)
        if key not in seen:
            seen.add(key)
            yield Move(rule, (premise,), Witness(context=ctx, principal=moved, child_origin=origin))

    # a left formula enters a right-nested child
    for occ in occs(node.left):
        if capped(occ):
            continue
        for child in child_seqs(node.right):
            child2 = Sequent(child.left + (Occ(occ.formula, occ.hops + 1),), child.right, child.origin)
            premise = plug(ctx, Sequent(side_remove(node.left, [occ]), _swap(node.right, child, child2), node.origin))
            yield from emit("prop_left_in", premise, occ.formula, child.origin)

    # a right formula exits a right-nested child
    for child in child_seqs(node.right):
        for occ in occs(child.right):
            if capped(occ):
                continue
            child2 = Sequent(child.left, side_remove(child.right, [occ]), child.origin)
            premise = plug(
                ctx,
                Sequent(node.left, _swap(node.right, child, child2) + (Occ(occ.formula, occ.hops + 1),), node.origin),
            )
            yield from emit("prop_right_out", premise, occ.formula, child.origin)

    if fill:
        return

    # a right formula enters a left-nested child
    for occ in occs(node.right):
        if capped(occ):
            continue
        for child in child_seqs(node.left):
            child2 = Sequent(child.left, child.right + (Occ(occ.formula, occ.hops + 1),), child.origin)
            premise = plug(ctx, Sequent(_swap(node.left, child, child2), side_remove(node.right, [occ]), node.origin))
            yield from emit("prop_right_in", premise, occ.formula, child.origin)

    # a left formula exits a left-nested child
    for child in child_seqs(node.left):
        for occ in occs(child.left):
            if capped(occ):
                continue
            child2 = Sequent(side_remove(child.left, [occ]), child.right, child.origin)
            premise = plug(
                ctx,
                Sequent(_swap(node.left, child, child2) + (Occ(occ.formula, occ.hops + 1),), node.right, node.origin),
            )
            yield from emit("prop_left_out", premise, occ.formula, child.origin)


# ---------------------------------------------------------------- checking

def _strip_eq(f: Formula, claim: Optional[Formula]) -> bool:
    return claim is None or strip_labels(f) == strip_labels(claim)


def _lift_items(lab: tuple, c1: tuple, c2: tuple) -> Iterator[tuple[tuple, tuple]]:
    """Ways to split the labelled items so the halves' label-free images are
    exactly the two claimed item multisets."""
    lab_holes = [it for it in lab if isinstance(it, Hole)]
    if any(
        len([it for it in items if isinstance(it, Hole)]) != len(lab_holes)
        for items in (c1, c2)
    ):
        return

    groups: dict = {}
    for it in lab:
        if isinstance(it, Occ):
            groups.setdefault(strip_labels(it.formula), []).append(it)
    want1: dict = {}
    want2: dict = {}
    for items, want in ((c1, want1), (c2, want2)):
        for it in items:
            if isinstance(it, Occ):
                want[it.formula] = want.get(it.formula, 0) + 1
    keys = set(groups) | set(want1) | set(want2)
    if any(len(groups.get(t, ())) != want1.get(t, 0) + want2.get(t, 0) for t in keys):
        return

    lab_kids = children_by_origin(lab)
    kids1 = children_by_origin(c1)
    kids2 = children_by_origin(c2)
    origins = set(lab_kids) | set(kids1) | set(kids2)
    if any(
        len(lab_kids.get(g, ())) != len(kids1.get(g, ())) or len(lab_kids.get(g, ())) != len(kids2.get(g, ()))
        for g in origins
    ):
        return

    occ_choices = []
    for t in sorted(groups, key=formula_text):
        group = groups[t]
        picks = []
        for idx_sel in combinations(range(len(group)), want1.get(t, 0)):
            chosen = set(idx_sel)
            pick = ([group[i] for i in idx_sel], [group[i] for i in range(len(group)) if i not in chosen])
            if pick not in picks:
                picks.append(pick)
        occ_choices.append(picks)

    kid_choices = []
    for g in sorted(origins):
        labs = lab_kids.get(g, [])
        a_kids = kids1.get(g, [])
        b_kids = kids2.get(g, [])
        m = len(labs)
        options = []
        for pa in permutations(range(m)):
            for pb in permutations(range(m)):
                lifts = [_lift_seq(labs[i], a_kids[pa[i]], b_kids[pb[i]]) for i in range(m)]
                lifted = [list(l) for l in lifts]
                if any(not l for l in lifted):
                    continue
                for combo in product(*lifted):
                    first = [c[0] for c in combo]
                    second = [c[1] for c in combo]
                    if (first, second) not in [(o[0], o[1]) for o in options]:
                        options.append((first, second))
        if not options and m:
            return
        kid_choices.append(options if m else [([], [])])

    for occ_combo in product(*occ_choices):
        first_occs = [o for sel, _ in occ_combo for o in sel]
        second_occs = [o for _, rest in occ_combo for o in rest]
        for kid_combo in product(*kid_choices):
            first_kids = [k for kk, _ in kid_combo for k in kk]
            second_kids = [k for _, kk in kid_combo for k in kk]
            yield (
                tuple(first_occs + first_kids + lab_holes),
                tuple(second_occs + second_kids + lab_holes),
            )


def _lift_seq(lab: Sequent, c1: Sequent, c2: Sequent) -> Iterator[tuple[Sequent, Sequent]]:
    if not (lab.origin == c1.origin == c2.origin):
        return
    for l1, l2 in _lift_items(lab.left, c1.left, c2.left):
        for r1, r2 in _lift_items(lab.right, c1.right, c2.right):
            yield Sequent(l1, r1, lab.origin), Sequent(l2, r2, lab.origin)


def _lift_context(lab: Context, c1: Context, c2: Context) -> Iterator[tuple[Context, Context]]:
    if isinstance(lab, Hole):
        if isinstance(c1, Hole) and isinstance(c2, Hole):
            yield HOLE, HOLE
        return
    if isinstance(c1, Hole) or isinstance(c2, Hole):
        return
    yield from _lift_seq(lab, c1, c2)


def _axiom_checks(rule: str, ctx: Context, redex: Sequent, w: Witness) -> Iterator[tuple]:
    if rule == "id":
        for lo in occs(redex.left):
            if not isinstance(lo.formula, Atom) or not _strip_eq(lo.formula, w.principal):
                continue
            for ro in occs(redex.right):
                if ro.formula != lo.formula:
                    continue
                rest = Sequent(side_remove(redex.left, [lo]), side_remove(redex.right, [ro]), redex.origin)
                if is_hollow(plug(ctx, rest)):
                    yield (), Witness(context=ctx, principal=lo.formula)
                    return
    elif rule == "bot_l":
        for occ in occs(redex.left):
            if isinstance(occ.formula, UnitBot):
                rest = Sequent(side_remove(redex.left, [occ]), redex.right, redex.origin)
                if is_hollow(plug(ctx, rest)):
                    yield (), Witness(context=ctx, principal=occ.formula)
                    return
    elif rule == "i_r":
        for occ in occs(redex.right):
            if isinstance(occ.formula, UnitI):
                rest = Sequent(redex.left, side_remove(redex.right, [occ]), redex.origin)
                if is_hollow(plug(ctx, rest)):
                    yield (), Witness(context=ctx, principal=occ.formula)
                    return


def _unary_premises(rule: str, ctx: Context, redex: Sequent, w: Witness) -> Iterator[tuple]:
    if rule in ("i_l", "tensor_l", "excl_l"):
        side_name, kind = "left", {"i_l": UnitI, "tensor_l": Tensor, "excl_l": Excl}[rule]
    else:
        side_name, kind = "right", {"bot_r": UnitBot, "par_r": Par, "lolli_r": Lolli}[rule]
    for occ in occs(getattr(redex, side_name)):
        f = occ.formula
        if not isinstance(f, kind) or not _strip_eq(f, w.principal):
            continue
        rest = side_remove(getattr(redex, side_name), [occ])
        xw = Witness(context=ctx, principal=f)
        if rule == "i_l":
            yield (plug(ctx, Sequent(rest, redex.right, redex.origin)),), xw
        elif rule == "bot_r":
            yield (plug(ctx, Sequent(redex.left, rest, redex.origin)),), xw
        elif rule == "tensor_l":
            yield (plug(ctx, Sequent(rest + (Occ(f.left), Occ(f.right)), redex.right, redex.origin)),), xw
        elif rule == "par_r":
            yield (plug(ctx, Sequent(redex.left, rest + (Occ(f.left), Occ(f.right)), redex.origin)),), xw
        elif rule == "lolli_r":
            if w.child_origin is not None and w.child_origin != f.label:
                continue
            child = Sequent((Occ(f.left),), (Occ(f.right),), f.label)
            xw = Witness(context=ctx, principal=f, child_origin=f.label)
            yield (plug(ctx, Sequent(redex.left, rest + (child,), redex.origin)),), xw
        elif rule == "excl_l":
            if w.child_origin is not None and w.child_origin != f.label:
                continue
            child = Sequent((Occ(f.left),), (Occ(f.right),), f.label)
            xw = Witness(context=ctx, principal=f, child_origin=f.label)
            yield (plug(ctx, Sequent(rest + (child,), redex.right, redex.origin)),), xw


def _branch_premises(
    rule: str, ctx: Context, redex: Sequent, w: Witness, claims: tuple[Sequent, Sequent]
) -> Iterator[tuple]:
    if w.ctx1 is None or w.ctx2 is None:
        raise CheckError(f"{rule} needs ctx1 and ctx2 in its witness")
    p_side, a_side, b_side = _BRANCH_SPECS[rule]
    sp1, sp2 = (strip_sequent(c) for c in claims)
    sredex1 = context_decompose(w.ctx1, sp1)
    sredex2 = context_decompose(w.ctx2, sp2)
    if sredex1 is None or sredex2 is None:
        return
    for occ in occs(getattr(redex, p_side)):
        f = occ.formula
        if _branch_rule_for(f, p_side) != rule or not _strip_eq(f, w.principal):
            continue
        if p_side == "left":
            rest = Sequent(side_remove(redex.left, [occ]), redex.right, redex.origin)
        else:
            rest = Sequent(redex.left, side_remove(redex.right, [occ]), redex.origin)
        try:
            crest1 = _drop_occ(sredex1, a_side, strip_labels(f.left))
            crest2 = _drop_occ(sredex2, b_side, strip_labels(f.right))
        except ValueError:
            continue
        for l1, l2 in _lift_context(ctx, w.ctx1, w.ctx2):
            for r1, r2 in _lift_seq(rest, crest1, crest2):
                p1 = plug(l1, _with_occ(r1, a_side, Occ(f.left)))
                p2 = plug(l2, _with_occ(r2, b_side, Occ(f.right)))
                yield (p1, p2), Witness(context=ctx, principal=f, ctx1=l1, ctx2=l2)


def _drop_occ(s: Sequent, side_name: str, f: Formula) -> Sequent:
    items = getattr(s, side_name)
    trimmed = side_remove(items, [Occ(f)])
    if side_name == "left":
        return Sequent(trimmed, s.right, s.origin)
    return Sequent(s.left, trimmed, s.origin)


def _prop_premises(rule: str, ctx: Context, redex: Sequent, w: Witness) -> Iterator[tuple]:
    if rule == "prop_left_in":
        for occ in occs(redex.left):
            if not _strip_eq(occ.formula, w.principal):
                continue
            for child in child_seqs(redex.right):
                if w.child_origin is not None and child.origin != w.child_origin:
                    continue
                child2 = Sequent(child.left + (Occ(occ.formula, occ.hops + 1),), child.right, child.origin)
                premise = plug(ctx, Sequent(side_remove(redex.left, [occ]), _swap(redex.right, child, child2), redex.origin))
                yield (premise,), Witness(context=ctx, principal=occ.formula, child_origin=child.origin)
    elif rule == "prop_right_in":
        for occ in occs(redex.right):
            if not _strip_eq(occ.formula, w.principal):
                continue
            for child in child_seqs(redex.left):
                if w.child_origin is not None and child.origin != w.child_origin:
                    continue
                child2 = Sequent(child.left, child.right + (Occ(occ.formula, occ.hops + 1),), child.origin)
                premise = plug(ctx, Sequent(_swap(redex.left, child, child2), side_remove(redex.right, [occ]), redex.origin))
                yield (premise,), Witness(context=ctx, principal=occ.formula, child_origin=child.origin)
    elif rule == "prop_left_out":
        for child in child_seqs(redex.left):
            if w.child_origin is not None and child.origin != w.child_origin:
                continue
            for occ in occs(child.left):
                if not _strip_eq(occ.formula, w.principal):
                    continue
                child2 = Sequent(side_remove(child.left, [occ]), child.right, child.origin)
                premise = plug(ctx, Sequent(_swap(redex.left, child, child2) + (Occ(occ.formula, occ.hops + 1),), redex.right, redex.origin))
                yield (premise,), Witness(context=ctx, principal=occ.formula, child_origin=child.origin)
    elif rule == "prop_right_out":
        for child in child_seqs(redex.right):
            if w.child_origin is not None and child.origin != w.child_origin:
                continue
            for occ in occs(child.right):
                if not _strip_eq(occ.formula, w.principal):
                    continue
                child2 = Sequent(child.left, side_remove(child.right, [occ]), child.origin)
                premise = plug(ctx, Sequent(redex.left, _swap(redex.right, child, child2) + (Occ(occ.formula, occ.hops + 1),), redex.origin))
                yield (premise,), Witness(context=ctx, principal=occ.formula, child_origin=child.origin)


def _verify(node: ProofNode, current: Sequent, logic: str) -> ProofNode:
    rule = node.rule
    if rule not in DN_RULES:
        raise CheckError(f"unknown rule {rule!r}")
    if logic == "fill":
        if rule in FILL_EXCLUDED:
            raise CheckError(f"rule {rule} is not available in FILL")
        if not is_fill_sequent(current):
            raise CheckError(f"sequent leaves the FILL fragment: {sequent_text(strip_sequent(current))}")
    if strip_sequent(node.conclusion) != strip_sequent(current):
        raise CheckError(
            f"conclusion mismatch at {rule}: stated {sequent_text(strip_sequent(node.conclusion))}, "
            f"derived {sequent_text(strip_sequent(current))}"
        )
    w = node.witness
    if w is None or w.context is None:
        raise CheckError(f"{rule} needs a witness context")
    # Witnesses may arrive with live labels (from the prover); compare modulo them.
    w = Witness(
        context=strip_context(w.context),
        principal=strip_labels(w.principal) if w.principal is not None else None,
        child_origin=w.child_origin,
        ctx1=strip_context(w.ctx1) if w.ctx1 is not None else None,
        ctx2=strip_context(w.ctx2) if w.ctx2 is not None else None,
        side=w.side,
    )

    claims = tuple(strip_sequent(p.conclusion) for p in node.premises)
    last: Optional[CheckError] = None
    for ctx, redex in hole_contexts(current):
        if strip_context(ctx) != w.context:
            continue
        if rule in LEAF_RULES:
            gen = _axiom_checks(rule, ctx, redex, w)
        elif rule in UNARY_LOGICAL_RULES:
            gen = _unary_premises(rule, ctx, redex, w)
        elif rule in BRANCH_RULES:
            if len(node.premises) != 2:
                raise CheckError(f"{rule} needs two premises")
            gen = _branch_premises(rule, ctx, redex, w, claims)
        else:
            gen = _prop_premises(rule, ctx, redex, w)
        for premises, exact_w in gen:
            if len(premises) != len(node.premises):
                continue
            if tuple(strip_sequent(p) for p in premises) != claims:
                continue
            try:
                kids = tuple(_verify(child, p, logic) for p, child in zip(premises, node.premises))
                return ProofNode(rule, current, kids, exact_w)
            except CheckError as e:
                last = e
    if last is not None:
        raise last
    raise CheckError(
        f"rule {rule} does not apply to {sequent_text(strip_sequent(current))} with the given witness"
    )


def check_dn_proof(root: ProofNode, logic: str = "biill", expect: Optional[Sequent] = None) -> None:
    """Validate a proof tree in the deep calculus.  Labels are reassigned
    canonically from the root conclusion, so certificates must mint child
    origins the same way (prefix order, antecedent first).  Raises CheckError
    with a reason on any defect."""
    if logic not in ("fill", "biill"):
        raise ValueError(f"unknown logic {logic!r}")
    internal = label_sequent(strip_sequent(root.conclusion))
    if expect is not None and strip_sequent(expect) != strip_sequent(root.conclusion):
        raise CheckError(
            f"proof concludes {sequent_text(strip_sequent(root.conclusion))}, "
            f"expected {sequent_text(strip_sequent(expect))}"
        )
    with stack_room(60 * proof_size(root) + 2000):
        _verify(root, internal, logic)


def replay_dn_proof(root: ProofNode, logic: str = "biill") -> ProofNode:
    """Check the proof and return it rebuilt over canonically labelled
    sequents, with every witness pinned down exactly: the context carries
    live labels, branch witnesses hold the labelled context halves, and
    spawning rules record the child origin actually used.  Raises CheckError
    on any defect, like check_dn_proof."""
    if logic not in ("fill", "biill"):
        raise ValueError(f"unknown logic {logic!r}")
    internal = label_sequent(strip_sequent(root.conclusion))
    with stack_room(60 * proof_size(root) + 2000):
        return _verify(root, internal, logic)


def check_separation(root: ProofNode) -> None:
    """Confirm a deep proof lies wholly in the FILL fragment: every rule in
    the FILL subset and every sequent free of left-nested children.  Raises
    CheckError naming the first offender.  Schema validity is
    check_dn_proof's job; this only polices the fragment."""
    from .certs import postorder

    for node in postorder(root):
        if node.rule in FILL_EXCLUDED:
            raise CheckError(f"rule {node.rule} lies outside FILL")
        if not is_fill_sequent(strip_sequent(node.conclusion)):
            raise CheckError(
                f"sequent leaves FILL: {sequent_text(strip_sequent(node.conclusion))}"
            )


def proof_stays_in_fill(root: ProofNode) -> bool:
    """Whether every rule and every sequent of the proof lies in the FILL
    fragment of the calculus."""
    try:
        check_separation(root)
    except CheckError:
        return False
    return True
