"""Translations between the three proof calculi.

deep_to_shallow rebuilds a deep proof as a root-rule-only proof.  Each deep
inference is replayed by bringing the rewritten node to the root with a
wrap/dissolve chain, firing the matching root rule there, and lowering the
result back down.  Branch rules additionally reconcile the two premises'
copies of the surrounding context, which is what the merge expansion is
for; propagation steps become a short pull or push sandwich around the
child boundary they cross.  The output never uses cut.

shallow_to_display makes the bookkeeping the shallow checker does with
multisets explicit: every sequent is read as a binary structure (items in
canonical order, comma-joined), and each shallow step becomes a block of
display steps that shuffles the commas, isolates the working material,
fires the matching display rule, and restores canonical order.

display_to_shallow goes the other way by reading each structure as a
nested sequent again: associativity, commutativity and empty-structure
moves disappear, the residuation moves become wrap and dissolve steps,
and each logical rule maps to its multiset-level counterpart (plus a wrap
when the display version builds structure the shallow version keeps at
the root).  Cut-bearing inputs are rejected everywhere.

shallow_to_deep pushes each structural step of a shallow proof upward
through the subproof above it until it disappears: a wrap step turns into
a walk that refires every rule of the subproof at the right depth inside
the new child, inserting propagation steps whenever material crosses the
child boundary, and absorbing closures at the axioms; a dissolve step is
the mirror walk that flattens the child everywhere, dropping the boundary
propagations it meets; pull and push steps factor through one dissolve
and one wrap.  Logical rules map one for one.
"""

from __future__ import annotations

from collections import Counter
from itertools import chain, count
from typing import NamedTuple

from .certs import ProofNode, Witness, postorder, proof_size, stack_room
from .deep import _BRANCH_SPECS, replay_dn_proof
from .deep import LEAF_RULES, UNARY_LOGICAL_RULES, BRANCH_RULES, PROP_RULES
from .display import (
    DisplaySequent,
    SComma,
    SGt,
    SLeaf,
    SLt,
    SPhi,
    Structure,
    check_dc_proof,
    comma_join,
    dc_rule_applies,
    display_text,
    sequent_to_display,
    structure_text,
)
from .formula import Excl, Lolli, Par, Tensor, UnitBot, UnitI, strip_labels
from .sequent import (
    HOLE,
    Hole,
    Occ,
    Sequent,
    child_seqs,
    context_decompose,
    label_sequent,
    occs,
    plug,
    sequent_text,
    side_remove,
    strip_sequent,
)
from .shallow import (
    _merge_plan,
    check_sn_proof,
    display_in_sn,
    expand_deep_leaf,
    expand_merge,
    invert_display_chain,
    sn_rule_applies,
    stack_chain,
    zero_origins,
)

__all__ = [
    "deep_to_shallow",
    "shallow_to_display",
    "display_to_shallow",
    "shallow_to_deep",
    "embed_sequent",
]


# ------------------------------------------------- deep to shallow

def deep_to_shallow(root: ProofNode, logic: str = "biill") -> ProofNode:
    """Rebuild a deep proof as a shallow (root-rule-only) proof of the same
    endsequent.  The input is checked first; the output is cut-free by
    construction and meant for the shallow checker."""
    exact = replay_dn_proof(root, logic)
    with stack_room(200 * proof_size(exact) + 4000):
        out = _dts(exact)
    assert out.conclusion == exact.conclusion
    return out


def _displayed(steps, fallback):
    return steps[-1][1] if steps else fallback


def _dts(node: ProofNode) -> ProofNode:
    rule = node.rule
    w = node.witness
    conclusion = node.conclusion
    ctx = w.context
    redex_c = conclusion if isinstance(ctx, Hole) else context_decompose(ctx, conclusion)

    if rule in LEAF_RULES:
        return expand_deep_leaf(rule, ctx, redex_c)

    if rule in UNARY_LOGICAL_RULES:
        sub = _dts(node.premises[0])
        premise = node.premises[0].conclusion
        redex_p = premise if isinstance(ctx, Hole) else context_decompose(ctx, premise)
        steps_p = display_in_sn(ctx, redex_p)
        cur = stack_chain(sub, steps_p)
        steps_c = display_in_sn(ctx, redex_c)
        d_c = _displayed(steps_c, redex_c)
        d_p = _displayed(steps_p, redex_p)
        assert sn_rule_applies(rule, d_c, (d_p,)), rule
        cur = ProofNode(rule, d_c, (cur,))
        return stack_chain(cur, invert_display_chain(steps_c, conclusion))

    if rule in BRANCH_RULES:
        return _dts_branch(node, redex_c)

    assert rule in PROP_RULES, rule
    return _dts_prop(node, redex_c)


def _dts_branch(node: ProofNode, redex_c: Sequent) -> ProofNode:
    w = node.witness
    f = w.principal
    p_side, a_side, b_side = _BRANCH_SPECS[node.rule]
    p1, p2 = (p.conclusion for p in node.premises)
    redex1 = p1 if isinstance(w.ctx1, Hole) else context_decompose(w.ctx1, p1)
    redex2 = p2 if isinstance(w.ctx2, Hole) else context_decompose(w.ctx2, p2)
    a_occ = Occ(f.left)
    b_occ = Occ(f.right)
    r1 = _without(redex1, a_side, a_occ)
    r2 = _without(redex2, b_side, b_occ)

    # which occurrence of the principal the deep step consumed: removing it
    # must leave a merge of the material the two premise halves carve up
    principal = next(
        occ
        for occ in occs(getattr(redex_c, p_side))
        if occ.formula == f
        and _merge_plan(r1, r2, _without(redex_c, p_side, occ)) is not None
    )

    sub1 = _dts(node.premises[0])
    sub2 = _dts(node.premises[1])
    steps1 = display_in_sn(w.ctx1, redex1, always_wrap=True)
    steps2 = display_in_sn(w.ctx2, redex2, always_wrap=True)
    d1 = _displayed(steps1, redex1)
    d2 = _displayed(steps2, redex2)
    cur1 = stack_chain(sub1, steps1)
    cur2 = stack_chain(sub2, steps2)

    if node.rule == "tensor_r":
        mid = Sequent(
            d1.left + d2.left,
            side_remove(d1.right, [a_occ]) + side_remove(d2.right, [b_occ]) + (principal,),
        )
    elif node.rule == "par_l":
        mid = Sequent(
            side_remove(d1.left, [a_occ]) + side_remove(d2.left, [b_occ]) + (principal,),
            d1.right + d2.right,
        )
    elif node.rule == "lolli_l":
        mid = Sequent(
            d1.left + side_remove(d2.left, [b_occ]) + (principal,),
            side_remove(d1.right, [a_occ]) + d2.right,
        )
    else:  # excl_r
        mid = Sequent(
            d1.left + side_remove(d2.left, [b_occ]),
            side_remove(d1.right, [a_occ]) + d2.right + (principal,),
        )
    assert sn_rule_applies(node.rule, mid, (d1, d2)), node.rule
    cur = ProofNode(node.rule, mid, (cur1, cur2))

    steps_c = display_in_sn(w.context, redex_c, always_wrap=True)
    d_c = _displayed(steps_c, redex_c)
    cur = _fuse_children(cur, d_c)
    return stack_chain(cur, invert_display_chain(steps_c, node.conclusion))


def _without(s: Sequent, side: str, item) -> Sequent:
    if side == "left":
        return Sequent(side_remove(s.left, [item]), s.right, s.origin)
    return Sequent(s.left, side_remove(s.right, [item]), s.origin)


def _fuse_children(cur: ProofNode, target: Sequent) -> ProofNode:
    """Merge the root children of `cur`'s conclusion pairwise until the
    conclusion is exactly `target`; each target child consumes one child
    contributed by each branch premise."""
    for side in ("left", "right"):
        have = list(child_seqs(getattr(cur.conclusion, side)))
        want = list(child_seqs(getattr(target, side)))
        plan = _child_pairing(have, want)
        if plan is None:
            raise ValueError(
                f"cannot merge {sequent_text(cur.conclusion)} into {sequent_text(target)}"
            )
        for x, y, z in plan:
            cur = expand_merge(x, y, z, cur, side)
    assert cur.conclusion == target
    return cur


def _child_pairing(have: list, want: list):
    if not want:
        return [] if not have else None
    z = want[0]
    for i in range(len(have)):
        for j in range(len(have)):
            if i == j:
                continue
            x, y = have[i], have[j]
            if _merge_plan(x, y, z) is None:
                continue
            rest_have = [h for k, h in enumerate(have) if k not in (i, j)]
            rest = _child_pairing(rest_have, want[1:])
            if rest is not None:
                return [(x, y, z)] + rest
    return None


def _dts_prop(node: ProofNode, redex_c: Sequent) -> ProofNode:
    w = node.witness
    ctx = w.context
    premise = node.premises[0].conclusion

    # pin down which occurrence moved and across which child: replaying the
    # move from the conclusion side must reproduce the premise exactly
    found = None
    occ_side, child_side = {
        "prop_left_in": ("left", "right"),
        "prop_right_out": ("right", "right"),
        "prop_right_in": ("right", "left"),
        "prop_left_out": ("left", "left"),
    }[node.rule]
    inward = node.rule.endswith("_in")
    for child in child_seqs(getattr(redex_c, child_side)):
        if child.origin != w.child_origin:
            continue
        pool = occs(getattr(redex_c, occ_side)) if inward else occs(getattr(child, occ_side))
        for occ in pool:
            if occ.formula != w.principal:
                continue
            moved = Occ(occ.formula, occ.hops + 1)
            if inward:
                child2 = _grow(child, occ_side, moved)
                cand = _without(redex_c, occ_side, occ)
                cand = _swap_child(cand, child_side, child, child2)
            else:
                child2 = _without(child, occ_side, occ)
                cand = _swap_child(redex_c, child_side, child, child2)
                cand = _grow(cand, occ_side, moved)
            if plug(ctx, cand) == premise:
                found = (occ, child, child2, moved)
                break
        if found:
            break
    assert found is not None, node.rule
    occ, child, child2, moved = found
    # from the premise's point of view: its version of the child, and the
    # occurrence as it sits there (one hop further along)
    k_p, k_c, a_p, a_c = child2, child, moved, occ

    sub = _dts(node.premises[0])
    redex_p = premise if isinstance(ctx, Hole) else context_decompose(ctx, premise)
    steps_p = display_in_sn(ctx, redex_p)
    d_p = _displayed(steps_p, redex_p)
    cur = stack_chain(sub, steps_p)

    recipe = _prop_recipe(node.rule, d_p, k_p, k_c, a_p, a_c)
    cur = stack_chain(cur, recipe)

    steps_c = display_in_sn(ctx, redex_c)
    d_c = _displayed(steps_c, redex_c)
    assert cur.conclusion == d_c, node.rule
    return stack_chain(cur, invert_display_chain(steps_c, node.conclusion))


def _grow(s: Sequent, side: str, item) -> Sequent:
    if side == "left":
        return Sequent(s.left + (item,), s.right, s.origin)
    return Sequent(s.left, s.right + (item,), s.origin)


def _swap_child(s: Sequent, side: str, old: Sequent, new: Sequent) -> Sequent:
    items = side_remove(getattr(s, side), [old]) + (new,)
    if side == "left":
        return Sequent(items, s.right, s.origin)
    return Sequent(s.left, items, s.origin)


def _prop_recipe(rule: str, d_p: Sequent, k_p: Sequent, k_c: Sequent, a_p: Occ, a_c: Occ):
    """The structural steps lowering the displayed premise of a propagation
    move to its displayed conclusion.  Crossing into a child needs a five
    step sandwich (display the child, pull or push the occurrence across,
    reassemble); crossing out needs three."""
    if rule == "prop_left_in":
        rest = side_remove(d_p.right, [k_p])
        w0 = Sequent(d_p.left, rest)
        w1 = Sequent(d_p.left + (a_c,), rest)
        return [
            ("wrap_left", Sequent((w0,), (k_p,))),
            ("dissolve_right", Sequent((w0,) + k_p.left, k_p.right)),
            ("wrap_right", Sequent((w0, a_p), (k_c,))),
            ("pull_left", Sequent((w1,), (k_c,))),
            ("dissolve_left", Sequent(d_p.left + (a_c,), rest + (k_c,))),
        ]
    if rule == "prop_right_in":
        rest = side_remove(d_p.left, [k_p])
        w0 = Sequent(rest, d_p.right)
        w1 = Sequent(rest, d_p.right + (a_c,))
        return [
            ("wrap_right", Sequent((k_p,), (w0,))),
            ("dissolve_left", Sequent(k_p.left, k_p.right + (w0,))),
            ("wrap_left", Sequent((k_c,), (a_p, w0))),
            ("push_right", Sequent((k_c,), (w1,))),
            ("dissolve_right", Sequent((k_c,) + rest, d_p.right + (a_c,))),
        ]
    if rule == "prop_right_out":
        rest = side_remove(d_p.right, [a_p, k_p])
        w0 = Sequent(d_p.left, rest)
        return [
            ("wrap_left", Sequent((w0,), (a_p, k_p))),
            ("push_right", Sequent((w0,), (k_c,))),
            ("dissolve_left", Sequent(d_p.left, rest + (k_c,))),
        ]
    assert rule == "prop_left_out", rule
    rest = side_remove(d_p.left, [a_p, k_p])
    w0 = Sequent(rest, d_p.right)
    return [
        ("wrap_right", Sequent((a_p, k_p), (w0,))),
        ("pull_left", Sequent((k_c,), (w0,))),
        ("dissolve_right", Sequent((k_c,) + rest, d_p.right)),
    ]


# --------------------------------------------------- shallow -> display

def embed_sequent(s: Sequent) -> DisplaySequent:
    """Binary-structure reading of a nested sequent, labels erased."""
    return sequent_to_display(zero_origins(strip_sequent(s)))


def _norm(s: Sequent) -> Sequent:
    return zero_origins(strip_sequent(s))


def _pool(tree: Structure) -> list[Structure]:
    # comma operands, left to right; a bare Phi counts as one operand
    if isinstance(tree, SComma):
        return _pool(tree.left) + _pool(tree.right)
    return [tree]


def _comb(items) -> Structure:
    return comma_join(items)


def _ecomb(items, side: str) -> Structure:
    """Comma tree for one side of an already normalized sequent."""
    parts = []
    for it in items:
        if isinstance(it, Occ):
            parts.append(SLeaf(it.formula))
        elif side == "left":
            parts.append(SLt(_ecomb(it.left, "left"), _ecomb(it.right, "right")))
        else:
            parts.append(SGt(_ecomb(it.left, "left"), _ecomb(it.right, "right")))
    return comma_join(parts)


_INVERSE = {
    "com_l": "com_l", "com_r": "com_r",
    "assoc_l": "assoc_l", "assoc_r": "assoc_r",
    "rp_up": "rp_down", "rp_down": "rp_up",
    "drp_up": "drp_down", "drp_down": "drp_up",
    "phi_l_up": "phi_l_down", "phi_l_down": "phi_l_up",
    "phi_r_up": "phi_r_down", "phi_r_down": "phi_r_up",
}


class _DChain:
    """Top-down accumulator of display steps, schema checked as it grows.

    The comma shuffling all happens here.  Root-level swap and reassoc
    alone cannot transpose two operands (they preserve the cyclic order),
    so reordering goes through the residual stacks: `stash` parks the
    rightmost operand of a side above or below the turnstile, the unstash
    moves bring the top of that stack back at either end, and the sort
    below is a selection sort built from those four moves.
    """

    def __init__(self, start: DisplaySequent):
        self.cur = start
        self.steps: list[tuple[str, DisplaySequent]] = []

    def emit(self, rule: str, below: DisplaySequent) -> None:
        assert dc_rule_applies(rule, below, (self.cur,)), (
            f"{rule}: {display_text(self.cur)}  ->  {display_text(below)}")
        self.steps.append((rule, below))
        self.cur = below

    def side(self, side: str) -> Structure:
        return self.cur.ant if side == "ant" else self.cur.suc

    def _with(self, side: str, tree: Structure) -> DisplaySequent:
        if side == "ant":
            return DisplaySequent(tree, self.cur.suc)
        return DisplaySequent(self.cur.ant, tree)

    def com(self, side: str) -> None:
        t = self.side(side)
        rule = "com_l" if side == "ant" else "com_r"
        self.emit(rule, self._with(side, SComma(t.right, t.left)))

    def reassoc(self, side: str, tree: Structure) -> None:
        self.emit("assoc_l" if side == "ant" else "assoc_r", self._with(side, tree))

    def stash(self, side: str) -> None:
        # park the rightmost comma operand on the side's residual stack
        if side == "ant":
            t = self.cur.ant
            self.emit("rp_up", DisplaySequent(t.left, SGt(t.right, self.cur.suc)))
        else:
            t = self.cur.suc
            self.emit("drp_down", DisplaySequent(SLt(self.cur.ant, t.right), t.left))

    def stash_first(self, side: str) -> None:
        if side == "ant":
            t = self.cur.ant
            self.emit("rp_down", DisplaySequent(t.right, SGt(t.left, self.cur.suc)))
        else:
            t = self.cur.suc
            self.emit("drp_up", DisplaySequent(SLt(self.cur.ant, t.left), t.right))

    def unstash_append(self, side: str) -> None:
        if side == "ant":
            s = self.cur.suc
            self.emit("rp_down", DisplaySequent(SComma(self.cur.ant, s.left), s.right))
        else:
            a = self.cur.ant
            self.emit("drp_up", DisplaySequent(a.left, SComma(self.cur.suc, a.right)))

    def unstash_prepend(self, side: str) -> None:
        if side == "ant":
            s = self.cur.suc
            self.emit("rp_up", DisplaySequent(SComma(s.left, self.cur.ant), s.right))
        else:
            a = self.cur.ant
            self.emit("drp_down", DisplaySequent(a.left, SComma(a.right, self.cur.suc)))

    def phi_pad(self, side: str) -> None:
        if side == "ant":
            self.emit("phi_l_up", self._with("ant", SComma(self.cur.ant, SPhi())))
        else:
            self.emit("phi_r_up", self._with("suc", SComma(SPhi(), self.cur.suc)))

    def phi_drop(self, side: str) -> None:
        t = self.side(side)
        if side == "ant":
            self.emit("phi_l_down", self._with("ant", t.left))
        else:
            self.emit("phi_r_down", self._with("suc", t.right))

    def flatten_right(self, side: str) -> None:
        # make the rightmost comma operand a single non-comma subtree
        while isinstance(self.side(side), SComma) and isinstance(self.side(side).right, SComma):
            t = self.side(side)
            self.reassoc(side, SComma(SComma(t.left, t.right.left), t.right.right))

    def absorb_head(self, side: str) -> None:
        # (x, C) with C a left comb: fold x in, keeping a left comb
        k = 0
        while isinstance(self.side(side).right, SComma):
            t = self.side(side)
            self.reassoc(side, SComma(SComma(t.left, t.right.left), t.right.right))
            self.stash(side)
            k += 1
        for _ in range(k):
            self.unstash_append(side)

    def rotate_once(self, side: str) -> None:
        # left comb: move the last operand to the front
        self.stash(side)
        self.unstash_prepend(side)
        self.absorb_head(side)

    def to_comb(self, side: str) -> list[Structure]:
        """Normalize the side to the left comb of its operands in text order."""
        tree = self.side(side)
        pool = _pool(tree)
        order = sorted(pool, key=structure_text)
        if pool == order and tree == _comb(order):
            return order
        n = 0
        while isinstance(self.side(side), SComma):
            self.flatten_right(side)
            self.stash(side)
            n += 1
        for _ in range(n):
            self.unstash_append(side)
        work = _pool(self.side(side))
        for slot in range(len(order) - 1, 0, -1):
            p = next(i for i, x in enumerate(work) if x == order[slot])
            for _ in range((len(work) - 1 - p) % len(work)):
                self.rotate_once(side)
                work.insert(0, work.pop())
            self.stash(side)
            work.pop()
        for _ in range(len(order) - 1):
            self.unstash_append(side)
        assert _pool(self.side(side)) == order
        return order

    def sort_side(self, side: str, target: Structure) -> None:
        """Rebuild the side as exactly `target` (same operands up to padding)."""
        if self.side(side) == target:
            return
        want = _pool(target)
        self.to_comb(side)
        have = _pool(self.side(side))
        pads = sum(isinstance(x, SPhi) for x in want) - sum(isinstance(x, SPhi) for x in have)
        if pads:
            for _ in range(max(0, pads)):
                self.phi_pad(side)
                if side == "suc":
                    self.absorb_head(side)
            for _ in range(max(0, -pads)):
                work = self.to_comb(side)
                p = next(i for i, x in enumerate(work) if isinstance(x, SPhi))
                if side == "ant":
                    # drop slot is the rightmost operand
                    for _ in range((len(work) - 1 - p) % len(work)):
                        self.rotate_once(side)
                else:
                    # drop slot is the root-left operand: bring the empty
                    # item to the front, then lean the comb to the right
                    for _ in range((len(work) - p) % len(work)):
                        self.rotate_once(side)
                    while isinstance(self.side(side).left, SComma):
                        t = self.side(side)
                        self.reassoc(side, SComma(t.left.left, SComma(t.left.right, t.right)))
                self.phi_drop(side)
            self.to_comb(side)
        tw = _DChain(self._with(side, target))
        tw.to_comb(side)
        assert tw.cur == self.cur, (display_text(tw.cur), display_text(self.cur))
        states = [self._with(side, target)] + [s for _, s in tw.steps]
        for j in range(len(tw.steps), 0, -1):
            self.emit(_INVERSE[tw.steps[j - 1][0]], states[j - 1])

    def clear_side(self, side: str) -> int:
        """Stash every operand, leaving the side empty; returns the count."""
        n = 0
        while self.side(side) != SPhi():
            if isinstance(self.side(side), SComma):
                self.flatten_right(side)
            else:
                self.phi_pad(side)
                if side == "ant":
                    self.com(side)
            self.stash(side)
            n += 1
        return n

    def refill(self, side: str, n: int) -> None:
        for _ in range(n):
            self.unstash_append(side)

    def isolate(self, side: str, keep: Structure) -> bool:
        """Make the side exactly `keep`, stashing the remaining operands as
        one block; returns whether anything was stashed."""
        pool = Counter(_pool(self.side(side)))
        pool.subtract(Counter(_pool(keep)))
        assert all(v >= 0 for v in pool.values()), structure_text(keep)
        rest = sorted(pool.elements(), key=structure_text)
        if not rest:
            self.sort_side(side, keep)
            return False
        self.sort_side(side, SComma(keep, _comb(rest)))
        self.stash(side)
        return True

    def pop_ant_chain(self) -> None:
        # ant = ((V < t), W): release t into the succedent, keeping W aside
        a = self.cur.ant
        x, w = a.left, a.right
        v, t = x.left, x.right
        g = self.cur.suc
        self.emit("rp_up", DisplaySequent(x, SGt(w, g)))
        self.emit("drp_up", DisplaySequent(v, SComma(SGt(w, g), t)))
        self.emit("mixed_assoc_r", DisplaySequent(v, SGt(w, SComma(g, t))))
        self.emit("rp_down", DisplaySequent(SComma(v, w), SComma(g, t)))

    def pop_suc_chain(self) -> None:
        # suc = ((s > V), W): release s into the antecedent, keeping W aside
        su = self.cur.suc
        y, w = su.left, su.right
        s, v = y.left, y.right
        x = self.cur.ant
        self.emit("drp_down", DisplaySequent(SLt(x, w), y))
        self.emit("rp_up", DisplaySequent(SComma(s, SLt(x, w)), v))
        self.emit("mixed_assoc_l", DisplaySequent(SLt(SComma(s, x), w), v))
        self.emit("drp_up", DisplaySequent(SComma(s, x), SComma(v, w)))


def _unary_principal(cn: Sequent, pn: Sequent, side: str):
    items = cn.left if side == "left" else cn.right
    pitems = pn.left if side == "left" else pn.right
    have = Counter(o.formula for o in items if isinstance(o, Occ))
    have.subtract(Counter(o.formula for o in pitems if isinstance(o, Occ)))
    gained = [f for f, v in have.items() if v > 0]
    assert len(gained) == 1, gained
    return gained[0]


def _branch_principal(cn: Sequent, p1n: Sequent, p2n: Sequent, side: str, cls):
    items = cn.left if side == "left" else cn.right
    have = Counter(o.formula for o in items if isinstance(o, Occ))
    for pn in (p1n, p2n):
        pitems = pn.left if side == "left" else pn.right
        have.subtract(Counter(o.formula for o in pitems if isinstance(o, Occ)))
    gained = [f for f, v in have.items() if v > 0 and isinstance(f, cls)]
    assert len(gained) == 1, gained
    return gained[0]


def shallow_to_display(root: ProofNode, logic: str = "biill") -> ProofNode:
    """Rebuild a root-rule-only proof in the display calculus.

    Each conclusion of the result is the structural reading of the matching
    multiset sequent, so the whole translation is one display proof of
    ``embed_sequent`` of the input's endsequent.  Cut-bearing proofs are
    rejected: cut is not part of the display vocabulary here.
    """
    check_sn_proof(root, logic)
    for node in postorder(root):
        if node.rule == "cut":
            raise ValueError("cannot translate a proof that uses cut")
    with stack_room(100 * proof_size(root) + 4000):
        out = _std(root)
    assert out.conclusion == embed_sequent(root.conclusion)
    return out


def _std(node: ProofNode) -> ProofNode:
    rule = node.rule
    target = embed_sequent(node.conclusion)
    if rule in ("id", "bot_l", "i_r"):
        assert dc_rule_applies(rule, target, ())
        return ProofNode(rule, target)
    cn = _norm(node.conclusion)
    pns = [_norm(p.conclusion) for p in node.premises]
    subs = [_std(p) for p in node.premises]

    if rule in ("i_l", "bot_r", "tensor_l", "par_r", "lolli_r", "excl_l"):
        ch = _DChain(subs[0].conclusion)
        if rule == "i_l":
            n = ch.clear_side("ant")
            ch.emit("i_l", DisplaySequent(SLeaf(UnitI()), ch.cur.suc))
            ch.refill("ant", n)
        elif rule == "bot_r":
            n = ch.clear_side("suc")
            ch.emit("bot_r", DisplaySequent(ch.cur.ant, SLeaf(UnitBot())))
            ch.refill("suc", n)
        elif rule == "tensor_l":
            f = _unary_principal(cn, pns[0], "left")
            st = ch.isolate("ant", SComma(SLeaf(f.left), SLeaf(f.right)))
            ch.emit("tensor_l", DisplaySequent(SLeaf(f), ch.cur.suc))
            if st:
                ch.unstash_append("ant")
        elif rule == "par_r":
            f = _unary_principal(cn, pns[0], "right")
            st = ch.isolate("suc", SComma(SLeaf(f.left), SLeaf(f.right)))
            ch.emit("par_r", DisplaySequent(ch.cur.ant, SLeaf(f)))
            if st:
                ch.unstash_append("suc")
        elif rule == "lolli_r":
            f = _unary_principal(cn, pns[0], "right")
            st = ch.isolate("suc", SGt(SLeaf(f.left), SLeaf(f.right)))
            ch.emit("lolli_r", DisplaySequent(ch.cur.ant, SLeaf(f)))
            if st:
                ch.unstash_append("suc")
        else:
            f = _unary_principal(cn, pns[0], "left")
            st = ch.isolate("ant", SLt(SLeaf(f.left), SLeaf(f.right)))
            ch.emit("excl_l", DisplaySequent(SLeaf(f), ch.cur.suc))
            if st:
                ch.unstash_append("ant")
        ch.sort_side("ant", target.ant)
        ch.sort_side("suc", target.suc)
        assert ch.cur == target
        return stack_chain(subs[0], ch.steps)

    if rule in ("tensor_r", "par_l", "lolli_l", "excl_r"):
        ch1 = _DChain(subs[0].conclusion)
        ch2 = _DChain(subs[1].conclusion)
        if rule == "tensor_r":
            f = _branch_principal(cn, pns[0], pns[1], "right", Tensor)
            st1 = ch1.isolate("suc", SLeaf(f.left))
            st2 = ch2.isolate("suc", SLeaf(f.right))
            mid = DisplaySequent(SComma(ch1.cur.ant, ch2.cur.ant), SLeaf(f))
        elif rule == "par_l":
            f = _branch_principal(cn, pns[0], pns[1], "left", Par)
            st1 = ch1.isolate("ant", SLeaf(f.left))
            st2 = ch2.isolate("ant", SLeaf(f.right))
            mid = DisplaySequent(SLeaf(f), SComma(ch1.cur.suc, ch2.cur.suc))
        elif rule == "lolli_l":
            f = _branch_principal(cn, pns[0], pns[1], "left", Lolli)
            st1 = ch1.isolate("suc", SLeaf(f.left))
            st2 = ch2.isolate("ant", SLeaf(f.right))
            mid = DisplaySequent(SLeaf(f), SGt(ch1.cur.ant, ch2.cur.suc))
        else:
            f = _branch_principal(cn, pns[0], pns[1], "right", Excl)
            st1 = ch1.isolate("suc", SLeaf(f.left))
            st2 = ch2.isolate("ant", SLeaf(f.right))
            mid = DisplaySequent(SLt(ch1.cur.ant, ch2.cur.suc), SLeaf(f))
        x1 = ch1.cur.ant
        y2 = ch2.cur.suc
        assert dc_rule_applies(rule, mid, (ch1.cur, ch2.cur))
        out = ProofNode(rule, mid,
                        (stack_chain(subs[0], ch1.steps), stack_chain(subs[1], ch2.steps)))
        ch = _DChain(mid)
        if rule == "tensor_r":
            if st1:
                ch.pop_ant_chain()
            if st2:
                ch.com("ant")
                ch.pop_ant_chain()
        elif rule == "par_l":
            if st1:
                ch.pop_suc_chain()
            if st2:
                ch.com("suc")
                ch.pop_suc_chain()
        elif rule == "lolli_l":
            ch.unstash_append("ant")
            if st2:
                ch.unstash_prepend("ant")
            if st1:
                pool = Counter(_pool(ch.cur.ant))
                pool[x1] -= 1
                rest = sorted(pool.elements(), key=structure_text)
                ch.sort_side("ant", SComma(x1, _comb(rest)))
                ch.pop_ant_chain()
        else:
            ch.unstash_append("suc")
            if st1:
                ch.unstash_append("suc")
            if st2:
                pool = Counter(_pool(ch.cur.suc))
                pool[y2] -= 1
                rest = sorted(pool.elements(), key=structure_text)
                ch.sort_side("suc", SComma(y2, _comb(rest)))
                ch.pop_suc_chain()
        ch.sort_side("ant", target.ant)
        ch.sort_side("suc", target.suc)
        assert ch.cur == target
        return stack_chain(out, ch.steps)

    ch = _DChain(subs[0].conclusion)
    pn = pns[0]
    if rule == "wrap_left":
        tk = target.ant
        ch.sort_side("suc", SComma(tk.right, target.suc))
        ch.stash_first("suc")
    elif rule == "wrap_right":
        tk = target.suc
        ch.sort_side("ant", SComma(target.ant, tk.left))
        ch.stash("ant")
    elif rule == "dissolve_left":
        ch.unstash_append("suc")
        ch.sort_side("suc", target.suc)
    elif rule == "dissolve_right":
        ch.unstash_append("ant")
        ch.sort_side("ant", target.ant)
    elif rule == "pull_left":
        k1 = cn.left[0]
        k0 = t_items = None
        for i, it in enumerate(pn.left):
            if isinstance(it, Sequent):
                others = pn.left[:i] + pn.left[i + 1:]
                if Sequent(it.left + others, it.right, 0) == k1:
                    k0, t_items = it, others
                    break
        assert k0 is not None
        e0a = _ecomb(k0.left, "left")
        e0s = _ecomb(k0.right, "right")
        bt = _ecomb(t_items, "left") if t_items else SPhi()
        tk1 = target.ant
        ch.sort_side("ant", SComma(bt, SLt(e0a, e0s)))
        ch.emit("mixed_assoc_l", DisplaySequent(SLt(SComma(bt, e0a), e0s), ch.cur.suc))
        ch.unstash_append("suc")
        ch.sort_side("ant", tk1.left)
        ch.sort_side("suc", SComma(tk1.right, target.suc))
        ch.stash_first("suc")
    elif rule == "push_right":
        k1 = cn.right[0]
        k0 = t_items = None
        for i, it in enumerate(pn.right):
            if isinstance(it, Sequent):
                others = pn.right[:i] + pn.right[i + 1:]
                if Sequent(it.left, it.right + others, 0) == k1:
                    k0, t_items = it, others
                    break
        assert k0 is not None
        e0a = _ecomb(k0.left, "left")
        e0s = _ecomb(k0.right, "right")
        bt = _ecomb(t_items, "right") if t_items else SPhi()
        tk1 = target.suc
        ch.sort_side("suc", SComma(SGt(e0a, e0s), bt))
        ch.emit("mixed_assoc_r", DisplaySequent(ch.cur.ant, SGt(e0a, SComma(e0s, bt))))
        ch.unstash_append("ant")
        ch.sort_side("suc", tk1.right)
        ch.sort_side("ant", SComma(target.ant, tk1.left))
        ch.stash("ant")
    else:
        raise ValueError(f"no display translation for rule {rule!r}")
    assert ch.cur == target, (rule, display_text(ch.cur), display_text(target))
    return stack_chain(subs[0], ch.steps)


# --------------------------------------------------- display -> shallow

def _read_side(st: Structure, side: str) -> list:
    match st:
        case SPhi():
            return []
        case SComma(left=l, right=r):
            return _read_side(l, side) + _read_side(r, side)
        case SLeaf(formula=f):
            return [Occ(strip_labels(f))]
        case SLt(left=l, right=r) if side == "left":
            return [Sequent(tuple(_read_side(l, "left")), tuple(_read_side(r, "right")), 0)]
        case SGt(left=l, right=r) if side == "right":
            return [Sequent(tuple(_read_side(l, "left")), tuple(_read_side(r, "right")), 0)]
    raise ValueError(
        f"structure {structure_text(st)} has no sequent reading in {side} position")


def read_display_sequent(ds: DisplaySequent) -> Sequent:
    """Nested-sequent reading of a display sequent: commas flatten into the
    surrounding multiset, `Phi` vanishes, and the two residuals become
    nested children on their home sides."""
    return Sequent(tuple(_read_side(ds.ant, "left")),
                   tuple(_read_side(ds.suc, "right")), 0)


_DC_SKIP = frozenset((
    "phi_l_up", "phi_l_down", "phi_r_up", "phi_r_down",
    "assoc_l", "assoc_r", "com_l", "com_r",
))

_DC_SAME = frozenset((
    "i_l", "bot_r", "tensor_l", "par_r", "lolli_r", "excl_l",
    "tensor_r", "par_l",
))


def display_to_shallow(root: ProofNode, logic: str = "biill") -> ProofNode:
    """Rebuild a display proof as a root-rule-only proof over the nested
    reading of each structure.  Associativity, commutativity and the empty
    structure leave no trace; residuation steps become wrap or dissolve
    steps; cut-bearing proofs are rejected."""
    check_dc_proof(root, logic)
    for node in postorder(root):
        if node.rule == "cut":
            raise ValueError("cannot translate a proof that uses cut")
    with stack_room(40 * proof_size(root) + 4000):
        return _dfs_down(root)


def _dfs_down(node: ProofNode) -> ProofNode:
    rule = node.rule
    cn = read_display_sequent(node.conclusion)
    subs = [_dfs_down(p) for p in node.premises]
    if rule in _DC_SKIP:
        assert subs[0].conclusion == cn
        return subs[0]
    if rule in ("id", "bot_l", "i_r"):
        assert sn_rule_applies(rule, cn, ())
        return ProofNode(rule, cn)
    prems = tuple(s.conclusion for s in subs)
    if rule in _DC_SAME:
        assert sn_rule_applies(rule, cn, prems), rule
        return ProofNode(rule, cn, tuple(subs))
    if rule == "lolli_l":
        k = cn.right[0]
        mid = Sequent(k.left + cn.left, k.right, 0)
        assert sn_rule_applies("lolli_l", mid, prems)
        assert sn_rule_applies("wrap_right", cn, (mid,))
        return ProofNode("wrap_right", cn, (ProofNode("lolli_l", mid, tuple(subs)),))
    if rule == "excl_r":
        k = cn.left[0]
        mid = Sequent(k.left, k.right + cn.right, 0)
        assert sn_rule_applies("excl_r", mid, prems)
        assert sn_rule_applies("wrap_left", cn, (mid,))
        return ProofNode("wrap_left", cn, (ProofNode("excl_r", mid, tuple(subs)),))
    if rule in ("rp_up", "rp_down", "drp_up", "drp_down", "mixed_assoc_l", "mixed_assoc_r"):
        if rule.startswith("rp"):
            cands = ("wrap_right", "dissolve_right")
        elif rule.startswith("drp"):
            cands = ("wrap_left", "dissolve_left")
        else:
            cands = ("pull_left",) if rule.endswith("_l") else ("push_right",)
        for cand in cands:
            if sn_rule_applies(cand, cn, prems):
                return ProofNode(cand, cn, tuple(subs))
        raise AssertionError(f"{rule}: no structural reading fits")
    raise ValueError(f"no shallow translation for rule {rule!r}")


# --------------------------------------------------- shallow -> deep

class _Enclosed(NamedTuple):
    """Which root items of a flat sequent belong inside the child a wrap step
    creates: occurrence values by count, nested children by origin."""

    lc: Counter
    lo: frozenset
    rc: Counter
    ro: frozenset


def _occ_counter(items) -> Counter:
    return Counter(occs(items))


def _enclose_all(kid: Sequent) -> _Enclosed:
    return _Enclosed(
        _occ_counter(kid.left),
        frozenset(k.origin for k in child_seqs(kid.left)),
        _occ_counter(kid.right),
        frozenset(k.origin for k in child_seqs(kid.right)),
    )


def _cnt_add(cnt: Counter, *vals) -> Counter:
    out = Counter(cnt)
    for v in vals:
        out[v] += 1
    return out


def _cnt_sub(cnt: Counter, *vals) -> Counter:
    out = Counter(cnt)
    for v in vals:
        out[v] -= 1
        assert out[v] >= 0, f"enclosed occurrence lost track of {v}"
        if not out[v]:
            del out[v]
    return out


def _greedy_split(want: Counter, avail1: Counter, avail2: Counter):
    """Split `want` into two halves bounded by the availabilities; equal
    occurrences are interchangeable, so any consistent split works."""
    c1: Counter = Counter()
    c2: Counter = Counter()
    for v, n in want.items():
        a = min(n, avail1.get(v, 0))
        assert n - a <= avail2.get(v, 0), "occurrence colouring infeasible"
        if a:
            c1[v] = a
        if n - a:
            c2[v] = n - a
    return c1, c2


def _color_spec(spec: _Enclosed, a1l, a1r, a2l, a2r):
    """Split an enclosure spec across the two premises of a branch step.
    Children keep full skeleton in both halves, so origin sets carry over."""
    l1, l2 = _greedy_split(spec.lc, a1l, a2l)
    r1, r2 = _greedy_split(spec.rc, a1r, a2r)
    return (
        _Enclosed(l1, spec.lo, r1, spec.ro),
        _Enclosed(l2, spec.lo, r2, spec.ro),
    )


def _take_items(items, cnt: Counter, origin_set, hole_origin):
    need = Counter(cnt)
    taken, rest = [], []
    for it in items:
        if isinstance(it, Occ):
            if need.get(it, 0) > 0:
                need[it] -= 1
                taken.append(it)
            else:
                rest.append(it)
        elif isinstance(it, Sequent):
            (taken if it.origin in origin_set else rest).append(it)
        else:
            (taken if hole_origin is not None and hole_origin in origin_set else rest).append(it)
    assert not +need, "enclosed occurrences missing from the node"
    return tuple(taken), tuple(rest)


def _wrap_image(s: Sequent, spec: _Enclosed, g: int, wside: str, hole_origin=None) -> Sequent:
    """The sequent with the enclosed items moved into a child node with
    origin `g` on side `wside` of the root."""
    in_l, out_l = _take_items(s.left, spec.lc, spec.lo, hole_origin)
    in_r, out_r = _take_items(s.right, spec.rc, spec.ro, hole_origin)
    kid = Sequent(in_l, in_r, g)
    if wside == "left":
        return Sequent(out_l + (kid,), out_r, s.origin)
    return Sequent(out_l, out_r + (kid,), s.origin)


def _flat_image(s: Sequent, dside: str, g: int) -> Sequent:
    """The sequent with the root child of origin `g` on side `dside`
    dissolved into the root."""
    items = getattr(s, dside)
    kid = next(it for it in child_seqs(items) if it.origin == g)
    rest = side_remove(items, [kid])
    if dside == "left":
        return Sequent(rest + kid.left, s.right + kid.right, s.origin)
    return Sequent(s.left + kid.left, rest + kid.right, s.origin)


def _holed_at(s: Sequent, g: int, side: str) -> Sequent:
    """Context selecting the root child of origin `g` as the redex."""
    items = getattr(s, side)
    kid = next(it for it in child_seqs(items) if it.origin == g)
    rest = side_remove(items, [kid])
    if side == "left":
        return Sequent(rest + (HOLE,), s.right, s.origin)
    return Sequent(s.left, rest + (HOLE,), s.origin)


def _hollow_copy(s: Sequent) -> Sequent:
    def go(items):
        return tuple(_hollow_copy(it) for it in items if isinstance(it, Sequent))

    return Sequent(go(s.left), go(s.right), s.origin)


def _unary_rewrite(rule: str, s: Sequent, occ: Occ) -> Sequent:
    """Root-level premise of an in-place unfolding step, built the same way
    the deep checker derives it."""
    f = occ.formula
    match rule:
        case "i_l":
            return Sequent(side_remove(s.left, [occ]), s.right, s.origin)
        case "bot_r":
            return Sequent(s.left, side_remove(s.right, [occ]), s.origin)
        case "tensor_l":
            new = side_remove(s.left, [occ]) + (Occ(f.left), Occ(f.right))
            return Sequent(new, s.right, s.origin)
        case "par_r":
            new = side_remove(s.right, [occ]) + (Occ(f.left), Occ(f.right))
            return Sequent(s.left, new, s.origin)
        case "lolli_r":
            kid = Sequent((Occ(f.left),), (Occ(f.right),), f.label)
            return Sequent(s.left, side_remove(s.right, [occ]) + (kid,), s.origin)
        case "excl_l":
            kid = Sequent((Occ(f.left),), (Occ(f.right),), f.label)
            return Sequent(side_remove(s.left, [occ]) + (kid,), s.right, s.origin)
    raise AssertionError(rule)


def _match_by_norm(items, wanted):
    """Pick live items realising the normalised multiset `wanted`; returns
    (picked, rest).  Occurrences match by stripped formula, children by
    normalised content."""
    want_occ = Counter(o.formula for o in occs(wanted))
    want_kids = Counter(child_seqs(wanted))
    picked, rest = [], []
    for it in items:
        if isinstance(it, Occ):
            key = Occ(strip_labels(it.formula))
            if want_occ.get(key.formula, 0) > 0:
                want_occ[key.formula] -= 1
                picked.append(it)
            else:
                rest.append(it)
        else:
            key = _norm(it)
            if want_kids.get(key, 0) > 0:
                want_kids[key] -= 1
                picked.append(it)
            else:
                rest.append(it)
    assert not +want_occ and not +want_kids, "no item split matches the premise"
    return tuple(picked), tuple(rest)


def _add_root_items(node: ProofNode, extra_left: tuple, extra_right: tuple) -> ProofNode:
    """Thread extra hollow root items through every node of a deep proof.
    Inert skeleton transposes with every rule, so the shape is unchanged."""
    if not extra_left and not extra_right:
        return node
    c = node.conclusion
    conc = Sequent(c.left + extra_left, c.right + extra_right, c.origin)
    w = node.witness

    def pad(k):
        if k is None or isinstance(k, Hole):
            return k
        return Sequent(k.left + extra_left, k.right + extra_right, k.origin)

    ww = Witness(
        context=pad(w.context),
        principal=w.principal,
        child_origin=w.child_origin,
        ctx1=pad(w.ctx1),
        ctx2=pad(w.ctx2),
        side=w.side,
    )
    subs = tuple(_add_root_items(p, extra_left, extra_right) for p in node.premises)
    return ProofNode(node.rule, conc, subs, ww)


def _admit_wrap(node: ProofNode, spec: _Enclosed, g: int, wside: str) -> ProofNode:
    """Rewrite a deep proof of a flat sequent into one of its wrapped image,
    with the enclosed items gathered into a new child of origin `g` on side
    `wside`.  Rules refire at the right depth; material crossing the new
    boundary picks up propagation steps; closures straddling it get the
    closing occurrence propagated inside first."""
    c = node.conclusion
    w = node.witness
    rule = node.rule
    ctx = w.context
    tc = _wrap_image(c, spec, g, wside)
    into_k = "prop_left_in" if wside == "right" else "prop_right_in"

    if not isinstance(ctx, Hole):
        # redex strictly below the root: the rule transposes unchanged
        redex = context_decompose(ctx, c)
        wctx = _wrap_image(ctx, spec, g, wside, hole_origin=redex.origin)
        if rule in BRANCH_RULES:
            s1, s2 = _color_spec(
                spec,
                _occ_counter(w.ctx1.left),
                _occ_counter(w.ctx1.right),
                _occ_counter(w.ctx2.left),
                _occ_counter(w.ctx2.right),
            )
            r1 = context_decompose(w.ctx1, node.premises[0].conclusion)
            r2 = context_decompose(w.ctx2, node.premises[1].conclusion)
            subs = (
                _admit_wrap(node.premises[0], s1, g, wside),
                _admit_wrap(node.premises[1], s2, g, wside),
            )
            ww = Witness(
                context=wctx,
                principal=w.principal,
                ctx1=_wrap_image(w.ctx1, s1, g, wside, hole_origin=r1.origin),
                ctx2=_wrap_image(w.ctx2, s2, g, wside, hole_origin=r2.origin),
            )
            return ProofNode(rule, tc, subs, ww)
        subs = tuple(_admit_wrap(p, spec, g, wside) for p in node.premises)
        ww = Witness(context=wctx, principal=w.principal, child_origin=w.child_origin)
        return ProofNode(rule, tc, subs, ww)

    at_kid = lambda s: _holed_at(s, g, wside)

    if rule in LEAF_RULES:
        if rule == "id":
            lo_occ = occs(c.left)[0]
            ro_occ = occs(c.right)[0]
            straddler, inner_both = None, True
            if spec.lc.get(lo_occ, 0) == 0:
                straddler, inner_both = lo_occ, False
                assert wside == "right", "closing pair stuck outside a left nest"
                assert spec.rc.get(ro_occ, 0) > 0
            elif spec.rc.get(ro_occ, 0) == 0:
                straddler, inner_both = ro_occ, False
                assert wside == "left", "closing pair stuck outside a right nest"
            if inner_both:
                return ProofNode(rule, tc, (), Witness(context=at_kid(tc), principal=w.principal))
            side = "left" if straddler is lo_occ else "right"
            mid_spec = _Enclosed(
                _cnt_add(spec.lc, straddler) if side == "left" else spec.lc,
                spec.lo,
                _cnt_add(spec.rc, straddler) if side == "right" else spec.rc,
                spec.ro,
            )
            tmid = _wrap_image(c, mid_spec, g, wside)
            leaf = ProofNode(rule, tmid, (), Witness(context=at_kid(tmid), principal=w.principal))
            ww = Witness(context=HOLE, principal=straddler.formula, child_origin=g)
            return ProofNode(into_k, tc, (leaf,), ww)
        # bot_l / i_r close on one occurrence; outside the child it fires at
        # the root since the rest of the tree is hollow either way
        occ = occs(c.left)[0] if rule == "bot_l" else occs(c.right)[0]
        inner = (
            spec.lc.get(occ, 0) > 0 if rule == "bot_l" else spec.rc.get(occ, 0) > 0
        )
        kctx = at_kid(tc) if inner else HOLE
        return ProofNode(rule, tc, (), Witness(context=kctx, principal=w.principal))

    if rule in UNARY_LOGICAL_RULES:
        side_name = "left" if rule in ("i_l", "tensor_l", "excl_l") else "right"
        occ = next(o for o in occs(getattr(c, side_name)) if o.formula == w.principal)
        f = occ.formula
        prem = _unary_rewrite(rule, c, occ)
        assert prem == node.premises[0].conclusion, f"{rule}: premise shape drifted"
        inner = (spec.lc if side_name == "left" else spec.rc).get(occ, 0) > 0
        if not inner:
            assert side_name != wside, f"{rule}: principal stranded beside the nest"
        lc, lo, rc, ro = spec
        if inner:
            if side_name == "left":
                lc = _cnt_sub(lc, occ)
            else:
                rc = _cnt_sub(rc, occ)
            match rule:
                case "tensor_l":
                    lc = _cnt_add(lc, Occ(f.left), Occ(f.right))
                case "par_r":
                    rc = _cnt_add(rc, Occ(f.left), Occ(f.right))
                case "lolli_r":
                    ro = ro | {f.label}
                case "excl_l":
                    lo = lo | {f.label}
        spec2 = _Enclosed(lc, lo, rc, ro)
        sub = _admit_wrap(node.premises[0], spec2, g, wside)
        co = f.label if rule in ("lolli_r", "excl_l") else None
        kctx = at_kid(tc) if inner else HOLE
        return ProofNode(rule, tc, (sub,), Witness(context=kctx, principal=f, child_origin=co))

    if rule in BRANCH_RULES:
        p_side, a_side, b_side = _BRANCH_SPECS[rule]
        occ = next(o for o in occs(getattr(c, p_side)) if o.formula == w.principal)
        f = occ.formula
        minted1, minted2 = Occ(f.left), Occ(f.right)
        p1c, p2c = node.premises[0].conclusion, node.premises[1].conclusion
        avail = []
        for pc, minted, m_side in ((p1c, minted1, a_side), (p2c, minted2, b_side)):
            al, ar = _occ_counter(pc.left), _occ_counter(pc.right)
            if m_side == "left":
                al = _cnt_sub(al, minted)
            else:
                ar = _cnt_sub(ar, minted)
            avail += [al, ar]
        inner = (spec.lc if p_side == "left" else spec.rc).get(occ, 0) > 0
        restructure = not inner and (
            (wside == "right" and rule == "lolli_l")
            or (wside == "left" and rule == "excl_r")
        )
        if not inner and not restructure:
            assert p_side != wside, f"{rule}: principal stranded beside the nest"
        base_spec = spec
        if inner:
            base_spec = _Enclosed(
                _cnt_sub(spec.lc, occ) if p_side == "left" else spec.lc,
                spec.lo,
                _cnt_sub(spec.rc, occ) if p_side == "right" else spec.rc,
                spec.ro,
            )
        s1, s2 = _color_spec(base_spec, *avail)
        if inner or restructure:
            # the branch fires at the child; minted halves stay inside it
            s1 = _Enclosed(
                _cnt_add(s1.lc, minted1) if a_side == "left" else s1.lc,
                s1.lo,
                _cnt_add(s1.rc, minted1) if a_side == "right" else s1.rc,
                s1.ro,
            )
            s2 = _Enclosed(
                _cnt_add(s2.lc, minted2) if b_side == "left" else s2.lc,
                s2.lo,
                _cnt_add(s2.rc, minted2) if b_side == "right" else s2.rc,
                s2.ro,
            )
        sub1 = _admit_wrap(node.premises[0], s1, g, wside)
        sub2 = _admit_wrap(node.premises[1], s2, g, wside)
        if inner or restructure:
            if restructure:
                mid_spec = _Enclosed(
                    _cnt_add(spec.lc, occ) if p_side == "left" else spec.lc,
                    spec.lo,
                    _cnt_add(spec.rc, occ) if p_side == "right" else spec.rc,
                    spec.ro,
                )
                base = _wrap_image(c, mid_spec, g, wside)
            else:
                base = tc
            ww = Witness(
                context=at_kid(base),
                principal=f,
                ctx1=at_kid(sub1.conclusion),
                ctx2=at_kid(sub2.conclusion),
            )
            out = ProofNode(rule, base, (sub1, sub2), ww)
            if restructure:
                pw = Witness(context=HOLE, principal=f, child_origin=g)
                out = ProofNode(into_k, tc, (out,), pw)
            return out
        ww = Witness(context=HOLE, principal=f, ctx1=HOLE, ctx2=HOLE)
        return ProofNode(rule, tc, (sub1, sub2), ww)

    # propagation at the root: relocate relative to the new child
    g0 = w.child_origin
    sub_node = node.premises[0]
    lc, lo, rc, ro = spec

    def one_step(spec2):
        sub = _admit_wrap(sub_node, spec2, g, wside)
        ww = Witness(context=at_kid(tc), principal=w.principal, child_origin=g0)
        return ProofNode(rule, tc, (sub,), ww)

    if wside == "right":
        match rule:
            case "prop_left_in":
                assert g0 in ro, "target child strayed outside a right nest"
                occ = next(o for o in occs(c.left) if o.formula == w.principal)
                if lc.get(occ, 0) > 0:
                    return one_step(_Enclosed(_cnt_sub(lc, occ), lo, rc, ro))
                mid_spec = _Enclosed(_cnt_add(lc, occ), lo, rc, ro)
                tmid = _wrap_image(c, mid_spec, g, wside)
                sub = _admit_wrap(sub_node, spec, g, wside)
                inner_w = Witness(context=at_kid(tmid), principal=w.principal, child_origin=g0)
                inner_node = ProofNode(rule, tmid, (sub,), inner_w)
                outer_w = Witness(context=HOLE, principal=w.principal, child_origin=g)
                return ProofNode(into_k, tc, (inner_node,), outer_w)
            case "prop_right_out":
                assert g0 in ro
                return one_step(_Enclosed(lc, lo, _cnt_add(rc, Occ(w.principal)), ro))
            case "prop_right_in":
                occ = next(o for o in occs(c.right) if o.formula == w.principal)
                assert rc.get(occ, 0) > 0
                spec2 = _Enclosed(lc, lo, _cnt_sub(rc, occ), ro)
                if g0 in lo:
                    return one_step(spec2)
                tmid = _wrap_image(c, spec2, g, wside)
                sub = _admit_wrap(sub_node, spec2, g, wside)
                step2 = ProofNode(
                    rule, tmid, (sub,), Witness(context=HOLE, principal=w.principal, child_origin=g0)
                )
                out_w = Witness(context=HOLE, principal=w.principal, child_origin=g)
                return ProofNode("prop_right_out", tc, (step2,), out_w)
            case "prop_left_out":
                if g0 in lo:
                    return one_step(_Enclosed(_cnt_add(lc, Occ(w.principal)), lo, rc, ro))
                sub = _admit_wrap(sub_node, spec, g, wside)
                return ProofNode(
                    rule, tc, (sub,), Witness(context=HOLE, principal=w.principal, child_origin=g0)
                )
    else:
        match rule:
            case "prop_right_in":
                assert g0 in lo, "target child strayed outside a left nest"
                occ = next(o for o in occs(c.right) if o.formula == w.principal)
                if rc.get(occ, 0) > 0:
                    return one_step(_Enclosed(lc, lo, _cnt_sub(rc, occ), ro))
                mid_spec = _Enclosed(lc, lo, _cnt_add(rc, occ), ro)
                tmid = _wrap_image(c, mid_spec, g, wside)
                sub = _admit_wrap(sub_node, spec, g, wside)
                inner_w = Witness(context=at_kid(tmid), principal=w.principal, child_origin=g0)
                inner_node = ProofNode(rule, tmid, (sub,), inner_w)
                outer_w = Witness(context=HOLE, principal=w.principal, child_origin=g)
                return ProofNode(into_k, tc, (inner_node,), outer_w)
            case "prop_left_out":
                assert g0 in lo
                return one_step(_Enclosed(_cnt_add(lc, Occ(w.principal)), lo, rc, ro))
            case "prop_left_in":
                occ = next(o for o in occs(c.left) if o.formula == w.principal)
                assert lc.get(occ, 0) > 0
                spec2 = _Enclosed(_cnt_sub(lc, occ), lo, rc, ro)
                if g0 in ro:
                    return one_step(spec2)
                tmid = _wrap_image(c, spec2, g, wside)
                sub = _admit_wrap(sub_node, spec2, g, wside)
                step2 = ProofNode(
                    rule, tmid, (sub,), Witness(context=HOLE, principal=w.principal, child_origin=g0)
                )
                out_w = Witness(context=HOLE, principal=w.principal, child_origin=g)
                return ProofNode("prop_left_out", tc, (step2,), out_w)
            case "prop_right_out":
                if g0 in ro:
                    return one_step(_Enclosed(lc, lo, _cnt_add(rc, Occ(w.principal)), ro))
                sub = _admit_wrap(sub_node, spec, g, wside)
                return ProofNode(
                    rule, tc, (sub,), Witness(context=HOLE, principal=w.principal, child_origin=g0)
                )
    raise AssertionError(f"unhandled rule {rule!r} in wrap admissibility")


def _admit_dissolve(node: ProofNode, dside: str, g: int) -> ProofNode:
    """Rewrite a deep proof so the root child of origin `g` on side `dside`
    is dissolved into the root everywhere.  Rules transpose; propagation
    steps across the dissolving boundary disappear."""
    c = node.conclusion
    w = node.witness
    rule = node.rule
    ctx = w.context
    tc = _flat_image(c, dside, g)

    if isinstance(ctx, Hole):
        crossing = (
            ("prop_left_in", "prop_right_out") if dside == "right" else ("prop_right_in", "prop_left_out")
        )
        if rule in crossing and w.child_origin == g:
            sub = _admit_dissolve(node.premises[0], dside, g)
            assert sub.conclusion == tc, "boundary propagation did not cancel"
            return sub
        subs = tuple(_admit_dissolve(p, dside, g) for p in node.premises)
        if rule in BRANCH_RULES:
            ww = Witness(context=HOLE, principal=w.principal, ctx1=HOLE, ctx2=HOLE)
        else:
            ww = Witness(context=HOLE, principal=w.principal, child_origin=w.child_origin)
        return ProofNode(rule, tc, subs, ww)

    kid_in_ctx = any(
        isinstance(it, Sequent) and it.origin == g for it in getattr(ctx, dside)
    )
    if not kid_in_ctx:
        # the redex is the dissolving child itself: refire at the root
        redex = context_decompose(ctx, c)
        assert redex.origin == g, "context lost the dissolving child"
        subs = tuple(_admit_dissolve(p, dside, g) for p in node.premises)
        if rule in BRANCH_RULES:
            ww = Witness(context=HOLE, principal=w.principal, ctx1=HOLE, ctx2=HOLE)
        else:
            ww = Witness(context=HOLE, principal=w.principal, child_origin=w.child_origin)
        return ProofNode(rule, tc, subs, ww)

    wctx = _flat_image(ctx, dside, g)
    subs = tuple(_admit_dissolve(p, dside, g) for p in node.premises)
    if rule in BRANCH_RULES:
        ww = Witness(
            context=wctx,
            principal=w.principal,
            ctx1=_flat_image(w.ctx1, dside, g),
            ctx2=_flat_image(w.ctx2, dside, g),
        )
    else:
        ww = Witness(context=wctx, principal=w.principal, child_origin=w.child_origin)
    return ProofNode(rule, tc, subs, ww)


def _snd_branch(node: ProofNode, target: Sequent, fresh) -> ProofNode:
    rule = node.rule
    p_side, a_side, b_side = _BRANCH_SPECS[rule]
    kind = {"tensor_r": Tensor, "par_l": Par, "lolli_l": Lolli, "excl_r": Excl}[rule]
    p1n = _norm(node.premises[0].conclusion)
    p2n = _norm(node.premises[1].conclusion)
    for occ in occs(getattr(target, p_side)):
        f = occ.formula
        if not isinstance(strip_labels(f), kind):
            continue
        plan = _branch_plan(target, occ, f, p_side, a_side, b_side, p1n, p2n)
        if plan is None:
            continue
        subs = []
        for sn_prem, (full, pruned, hollow_l, hollow_r) in zip(node.premises, plan):
            sub = _add_root_items(_snd(sn_prem, pruned, fresh), hollow_l, hollow_r)
            assert sub.conclusion == full
            subs.append(sub)
        ww = Witness(context=HOLE, principal=f, ctx1=HOLE, ctx2=HOLE)
        return ProofNode(rule, target, tuple(subs), ww)
    raise AssertionError(f"{rule}: no principal matches the premises")


def _branch_plan(target, occ, f, p_side, a_side, b_side, p1n, p2n):
    """Colour the root material around the principal occurrence so each half
    realises one premise; the other half's children stay as hollow skeleton.
    Returns per-premise (full claim, skeleton-free claim, hollow extras)."""
    if p_side == "left":
        rest_l, rest_r = side_remove(target.left, [occ]), target.right
    else:
        rest_l, rest_r = target.left, side_remove(target.right, [occ])
    minted = (Occ(strip_labels(f.left)), Occ(strip_labels(f.right)))
    wants = []
    for pn, m, m_side in ((p1n, minted[0], a_side), (p2n, minted[1], b_side)):
        wl = Counter(o.formula for o in occs(pn.left))
        wr = Counter(o.formula for o in occs(pn.right))
        kl, kr = Counter(child_seqs(pn.left)), Counter(child_seqs(pn.right))
        if m_side == "left":
            if not wl.get(m.formula):
                return None
            wl[m.formula] -= 1
        else:
            if not wr.get(m.formula):
                return None
            wr[m.formula] -= 1
        wants.append((wl, wr, kl, kr))

    halves = [([], []), ([], [])]
    for side_idx, items in ((0, rest_l), (1, rest_r)):
        for it in items:
            if isinstance(it, Occ):
                key = strip_labels(it.formula)
                for which in (0, 1):
                    cnt = wants[which][side_idx]
                    if cnt.get(key, 0) > 0:
                        cnt[key] -= 1
                        halves[which][side_idx].append(it)
                        break
                else:
                    return None
            else:
                key = _norm(it)
                for which in (0, 1):
                    cnt = wants[which][side_idx + 2]
                    if cnt.get(key, 0) > 0:
                        cnt[key] -= 1
                        halves[which][side_idx].append(it)
                        break
                else:
                    return None
    if any(+c for want in wants for c in want):
        return None

    live_minted = (Occ(f.left), Occ(f.right))
    plan = []
    for which, m, m_side in ((0, live_minted[0], a_side), (1, live_minted[1], b_side)):
        other = 1 - which
        own_l, own_r = halves[which]
        sk_l = tuple(_hollow_copy(k) for k in halves[other][0] if isinstance(k, Sequent))
        sk_r = tuple(_hollow_copy(k) for k in halves[other][1] if isinstance(k, Sequent))
        ml = (m,) if m_side == "left" else ()
        mr = (m,) if m_side == "right" else ()
        full = Sequent(tuple(own_l) + sk_l + ml, tuple(own_r) + sk_r + mr, target.origin)
        pruned = Sequent(tuple(own_l) + ml, tuple(own_r) + mr, target.origin)
        plan.append((full, pruned, sk_l, sk_r))
    return plan


def _snd(node: ProofNode, target: Sequent, fresh) -> ProofNode:
    """Deep proof of `target`, a relabelled image of the shallow node's
    conclusion.  Wrap and dissolve steps dissolve into the walks above."""
    rule = node.rule

    if rule in ("id", "bot_l", "i_r"):
        f = occs(target.right)[0].formula if rule == "i_r" else occs(target.left)[0].formula
        return ProofNode(rule, target, (), Witness(context=HOLE, principal=f))

    if rule in UNARY_LOGICAL_RULES:
        side_name = "left" if rule in ("i_l", "tensor_l", "excl_l") else "right"
        kind = {
            "i_l": UnitI,
            "bot_r": UnitBot,
            "tensor_l": Tensor,
            "par_r": Par,
            "lolli_r": Lolli,
            "excl_l": Excl,
        }[rule]
        want = _norm(node.premises[0].conclusion)
        for occ in occs(getattr(target, side_name)):
            if not isinstance(strip_labels(occ.formula), kind):
                continue
            cand = _unary_rewrite(rule, target, occ)
            if _norm(cand) != want:
                continue
            sub = _snd(node.premises[0], cand, fresh)
            co = occ.formula.label if rule in ("lolli_r", "excl_l") else None
            ww = Witness(context=HOLE, principal=occ.formula, child_origin=co)
            return ProofNode(rule, target, (sub,), ww)
        raise AssertionError(f"{rule}: no principal matches the premise")

    if rule in BRANCH_RULES:
        return _snd_branch(node, target, fresh)

    prem = node.premises[0]

    if rule == "wrap_right":
        (kid,) = child_seqs(target.right)
        assert len(target.right) == 1
        flat = Sequent(target.left + kid.left, kid.right, target.origin)
        sub = _snd(prem, flat, fresh)
        out = _admit_wrap(sub, _enclose_all(kid), kid.origin, "right")
        assert out.conclusion == target
        return out

    if rule == "wrap_left":
        (kid,) = child_seqs(target.left)
        assert len(target.left) == 1
        flat = Sequent(kid.left, kid.right + target.right, target.origin)
        sub = _snd(prem, flat, fresh)
        out = _admit_wrap(sub, _enclose_all(kid), kid.origin, "left")
        assert out.conclusion == target
        return out

    if rule == "dissolve_right":
        pn = _norm(prem.conclusion)
        (kidn,) = child_seqs(pn.right)
        picked, rest = _match_by_norm(target.left, kidn.left)
        kid = Sequent(picked, target.right, next(fresh))
        wrapped = Sequent(rest, (kid,), target.origin)
        out = _admit_dissolve(_snd(prem, wrapped, fresh), "right", kid.origin)
        assert out.conclusion == target
        return out

    if rule == "dissolve_left":
        pn = _norm(prem.conclusion)
        (kidn,) = child_seqs(pn.left)
        picked, rest = _match_by_norm(target.right, kidn.right)
        kid = Sequent(target.left, picked, next(fresh))
        wrapped = Sequent((kid,), rest, target.origin)
        out = _admit_dissolve(_snd(prem, wrapped, fresh), "left", kid.origin)
        assert out.conclusion == target
        return out

    if rule == "pull_left":
        (k1,) = child_seqs(target.left)
        assert len(target.left) == 1
        pn = _norm(prem.conclusion)
        for k0n in child_seqs(pn.left):
            movedn = side_remove(pn.left, [k0n])
            if _norm(k1) != Sequent(k0n.left + movedn, k0n.right, 0):
                continue
            moved, k0_left = _match_by_norm(k1.left, movedn)
            k0 = Sequent(k0_left, k1.right, next(fresh))
            tp = Sequent((k0,) + moved, target.right, target.origin)
            mid = _admit_dissolve(_snd(prem, tp, fresh), "left", k0.origin)
            out = _admit_wrap(mid, _enclose_all(k1), k1.origin, "left")
            assert out.conclusion == target
            return out
        raise AssertionError("pull step does not match its premise")

    if rule == "push_right":
        (k1,) = child_seqs(target.right)
        assert len(target.right) == 1
        pn = _norm(prem.conclusion)
        for k0n in child_seqs(pn.right):
            movedn = side_remove(pn.right, [k0n])
            if _norm(k1) != Sequent(k0n.left, k0n.right + movedn, 0):
                continue
            moved, k0_right = _match_by_norm(k1.right, movedn)
            k0 = Sequent(k1.left, k0_right, next(fresh))
            tp = Sequent(target.left, (k0,) + moved, target.origin)
            mid = _admit_dissolve(_snd(prem, tp, fresh), "right", k0.origin)
            out = _admit_wrap(mid, _enclose_all(k1), k1.origin, "right")
            assert out.conclusion == target
            return out
        raise AssertionError("push step does not match its premise")

    raise ValueError(f"no deep translation for rule {rule!r}")


def shallow_to_deep(root: ProofNode, logic: str = "biill") -> ProofNode:
    """Rebuild a cut-free shallow proof as a deep proof of the same
    endsequent.  Logical rules map one for one, refired at whatever depth
    their material sits after the structural steps below are accounted for;
    wrap and dissolve steps are permuted upward until they vanish, leaving
    propagation steps at the boundaries they created; pull and push steps
    factor through one dissolve and one wrap.  Proofs that use cut are
    rejected with ValueError."""
    check_sn_proof(root, logic)
    for node in postorder(root):
        if node.rule == "cut":
            raise ValueError("cannot translate a proof that uses cut")
    end = label_sequent(strip_sequent(root.conclusion))
    with stack_room(120 * proof_size(root) + 4000):
        out = _snd(root, end, count(-1, -1))
    assert out.conclusion == end
    return out
