"""Shallow rules on nested sequents: every rule works at the root node.

The sequents are the same nested trees the deep calculus uses, but here a
rule may only touch root-level items.  Deep-style bookkeeping (child origin
tags, hop counts, arrow labels) is invisible to this calculus: conclusions
are compared with all of it erased.

Six structural rules move material between the root and a root-level child:
`wrap_left` packs the whole antecedent-but-one piece of the root into a new
left child, `wrap_right` mirrors it, `dissolve_left`/`dissolve_right` undo
the packing, and `pull_left`/`push_right` shift root items into an existing
child.  The logical rules mirror the deep ones, except that the two rules
which create a child (`lolli_r`, `excl_l`) expect it at the root, and `cut`
is available.

The second half of this module builds derivation fragments from those
rules: a chain that brings an arbitrary node of a tree to the root
(`display_in_sn`) and its inverse, a fragment fusing two root children into
one (`expand_dist`), the recursive version that re-pairs grandchildren
(`expand_merge`), weakening by a hollow subtree (`expand_weaken_hollow`),
and complete proofs for trees that are hollow except for one axiom node
(`expand_deep_leaf`).  These are the building blocks for turning deep
proofs into shallow ones.
"""

from __future__ import annotations

from collections import Counter
from itertools import chain

from .certs import CheckError, LOGICS, ProofNode, proof_size, stack_room
from .formula import Atom, Excl, Lolli, Par, Tensor, UnitBot, UnitI
from .sequent import (
    HOLE,
    Context,
    Hole,
    Occ,
    Sequent,
    child_seqs,
    children_by_origin,
    hole_count,
    is_fill_sequent,
    is_hollow,
    occs,
    plug,
    sequent_text,
    side_remove,
    strip_sequent,
)

__all__ = [
    "SN_RULES",
    "SN_FILL_EXCLUDED",
    "zero_origins",
    "sn_rule_applies",
    "check_sn_proof",
    "sn_proof_stays_in_fill",
    "display_in_sn",
    "displayed_sequent",
    "invert_display_chain",
    "stack_chain",
    "expand_dist",
    "expand_merge",
    "expand_weaken_hollow",
    "expand_deep_leaf",
]


# name -> premise count
SN_RULES: dict[str, int] = {
    "id": 0,
    "bot_l": 0,
    "i_r": 0,
    "i_l": 1,
    "bot_r": 1,
    "tensor_l": 1,
    "par_r": 1,
    "lolli_r": 1,
    "excl_l": 1,
    "tensor_r": 2,
    "par_l": 2,
    "lolli_l": 2,
    "excl_r": 2,
    "cut": 2,
    "wrap_left": 1,
    "wrap_right": 1,
    "dissolve_left": 1,
    "dissolve_right": 1,
    "pull_left": 1,
    "push_right": 1,
}

# Exclusion rules plus everything that makes or uses a left-nested child.
SN_FILL_EXCLUDED = frozenset(
    {"excl_l", "excl_r", "wrap_left", "dissolve_left", "pull_left"}
)


def zero_origins(s: Sequent) -> Sequent:
    def go(items):
        return tuple(
            zero_origins(it) if isinstance(it, Sequent) else it for it in items
        )

    return Sequent(go(s.left), go(s.right), 0)


def _norm(s: Sequent) -> Sequent:
    return zero_origins(strip_sequent(s))


def _single_child(items) -> Sequent | None:
    if len(items) == 1 and isinstance(items[0], Sequent):
        return items[0]
    return None


def sn_rule_applies(rule: str, c: Sequent, ps: tuple[Sequent, ...]) -> bool:
    """Schema check for one rule instance; conclusion `c`, premises `ps` in
    order.  Origins, hop counts, and arrow labels are ignored."""
    c = _norm(c)
    ps = tuple(_norm(p) for p in ps)
    match rule:
        case "id":
            return (
                len(c.left) == 1
                and len(c.right) == 1
                and isinstance(c.left[0], Occ)
                and isinstance(c.left[0].formula, Atom)
                and c.left == c.right
            )
        case "bot_l":
            return c == Sequent((Occ(UnitBot()),), ())
        case "i_r":
            return c == Sequent((), (Occ(UnitI()),))
        case "i_l":
            (p,) = ps
            return any(
                isinstance(o.formula, UnitI)
                and p == Sequent(side_remove(c.left, [o]), c.right)
                for o in occs(c.left)
            )
        case "bot_r":
            (p,) = ps
            return any(
                isinstance(o.formula, UnitBot)
                and p == Sequent(c.left, side_remove(c.right, [o]))
                for o in occs(c.right)
            )
        case "tensor_l":
            (p,) = ps
            return any(
                isinstance(o.formula, Tensor)
                and p
                == Sequent(
                    side_remove(c.left, [o])
                    + (Occ(o.formula.left), Occ(o.formula.right)),
                    c.right,
                )
                for o in occs(c.left)
            )
        case "par_r":
            (p,) = ps
            return any(
                isinstance(o.formula, Par)
                and p
                == Sequent(
                    c.left,
                    side_remove(c.right, [o])
                    + (Occ(o.formula.left), Occ(o.formula.right)),
                )
                for o in occs(c.right)
            )
        case "lolli_r":
            (p,) = ps
            return any(
                isinstance(o.formula, Lolli)
                and p
                == Sequent(
                    c.left,
                    side_remove(c.right, [o])
                    + (Sequent((Occ(o.formula.left),), (Occ(o.formula.right),)),),
                )
                for o in occs(c.right)
            )
        case "excl_l":
            (p,) = ps
            return any(
                isinstance(o.formula, Excl)
                and p
                == Sequent(
                    side_remove(c.left, [o])
                    + (Sequent((Occ(o.formula.left),), (Occ(o.formula.right),)),),
                    c.right,
                )
                for o in occs(c.left)
            )
        case "tensor_r":
            p1, p2 = ps
            return any(
                c
                == Sequent(
                    p1.left + p2.left,
                    side_remove(p1.right, [a])
                    + side_remove(p2.right, [b])
                    + (Occ(Tensor(a.formula, b.formula)),),
                )
                for a in occs(p1.right)
                for b in occs(p2.right)
            )
        case "par_l":
            p1, p2 = ps
            return any(
                c
                == Sequent(
                    side_remove(p1.left, [a])
                    + side_remove(p2.left, [b])
                    + (Occ(Par(a.formula, b.formula)),),
                    p1.right + p2.right,
                )
                for a in occs(p1.left)
                for b in occs(p2.left)
            )
        case "lolli_l":
            p1, p2 = ps
            return any(
                c
                == Sequent(
                    p1.left
                    + side_remove(p2.left, [b])
                    + (Occ(Lolli(a.formula, b.formula)),),
                    side_remove(p1.right, [a]) + p2.right,
                )
                for a in occs(p1.right)
                for b in occs(p2.left)
            )
        case "excl_r":
            p1, p2 = ps
            return any(
                c
                == Sequent(
                    p1.left + side_remove(p2.left, [b]),
                    side_remove(p1.right, [a])
                    + p2.right
                    + (Occ(Excl(a.formula, b.formula)),),
                )
                for a in occs(p1.right)
                for b in occs(p2.left)
            )
        case "cut":
            p1, p2 = ps
            return any(
                a.formula == b.formula
                and c
                == Sequent(
                    p1.left + side_remove(p2.left, [b]),
                    side_remove(p1.right, [a]) + p2.right,
                )
                for a in occs(p1.right)
                for b in occs(p2.left)
            )
        case "wrap_left":
            (p,) = ps
            k = _single_child(c.left)
            return k is not None and p == Sequent(k.left, k.right + c.right)
        case "wrap_right":
            (p,) = ps
            k = _single_child(c.right)
            return k is not None and p == Sequent(c.left + k.left, k.right)
        case "dissolve_left":
            (p,) = ps
            k = _single_child(p.left)
            return k is not None and c == Sequent(k.left, k.right + p.right)
        case "dissolve_right":
            (p,) = ps
            k = _single_child(p.right)
            return k is not None and c == Sequent(p.left + k.left, k.right)
        case "pull_left":
            (p,) = ps
            k1 = _single_child(c.left)
            if k1 is None or c.right != p.right:
                return False
            return any(
                k1 == Sequent(k0.left + side_remove(p.left, [k0]), k0.right)
                for k0 in child_seqs(p.left)
            )
        case "push_right":
            (p,) = ps
            k1 = _single_child(c.right)
            if k1 is None or c.left != p.left:
                return False
            return any(
                k1 == Sequent(k0.left, k0.right + side_remove(p.right, [k0]))
                for k0 in child_seqs(p.right)
            )
    raise CheckError(f"unknown rule {rule!r}")


def _verify_sn(node: ProofNode, logic: str) -> None:
    rule = node.rule
    if rule not in SN_RULES:
        raise CheckError(f"unknown rule {rule!r}")
    if len(node.premises) != SN_RULES[rule]:
        raise CheckError(
            f"rule {rule} expects {SN_RULES[rule]} premises, got {len(node.premises)}"
        )
    if logic == "fill":
        if rule in SN_FILL_EXCLUDED:
            raise CheckError(f"rule {rule} is not available in FILL")
        if not is_fill_sequent(strip_sequent(node.conclusion)):
            raise CheckError(f"sequent leaves FILL: {sequent_text(node.conclusion)}")
    if not sn_rule_applies(rule, node.conclusion, tuple(p.conclusion for p in node.premises)):
        raise CheckError(
            f"rule {rule} does not derive {sequent_text(strip_sequent(node.conclusion))}"
            " from its premises"
        )
    for p in node.premises:
        _verify_sn(p, logic)


def check_sn_proof(root: ProofNode, logic: str = "biill", expect: Sequent | None = None) -> None:
    """Validate a shallow derivation.  Raises CheckError on the first
    offending node; returns None when the tree is a proof."""
    if logic not in LOGICS:
        raise CheckError(f"unknown logic {logic!r}")
    if expect is not None and _norm(expect) != _norm(root.conclusion):
        raise CheckError("root conclusion does not match the expected sequent")
    with stack_room(20 * proof_size(root) + 2000):
        _verify_sn(root, logic)


def sn_proof_stays_in_fill(root: ProofNode) -> bool:
    """True when no node uses exclusion or a left-nested child."""
    if root.rule in SN_FILL_EXCLUDED:
        return False
    if not is_fill_sequent(strip_sequent(root.conclusion)):
        return False
    return all(sn_proof_stays_in_fill(p) for p in root.premises)


# -------------------------------------------------- bringing a node to root

def _holder(ctx: Sequent):
    for side in ("left", "right"):
        for it in getattr(ctx, side):
            if hole_count(it):
                return side, it
    raise ValueError("context has no hole")


def display_in_sn(ctx: Context, node: Sequent, always_wrap: bool = False) -> list[tuple[str, Sequent]]:
    """Steps taking `plug(ctx, node)` (top) down to a sequent whose root
    carries `node`'s own items, plus at most one wrapper child holding
    everything else.  Each entry is (rule, sequent-below-that-step); the
    wrapper lands on the left when the node sat in a succedent, on the
    right when it sat in an antecedent.  With `always_wrap` a wrapper is
    emitted at every level even when it carries nothing, so the chain's
    shape depends only on the hole's position, not on what surrounds it."""
    steps: list[tuple[str, Sequent]] = []
    while not isinstance(ctx, Hole):
        side, special = _holder(ctx)
        k_tree = plug(special, node) if isinstance(special, Sequent) else node
        rest = side_remove(getattr(ctx, side), [special])
        other = ctx.right if side == "left" else ctx.left
        if side == "right":
            extra: tuple = ()
            if rest or other or always_wrap:
                wrapper = Sequent(other, rest, 0)
                extra = (wrapper,)
                steps.append(("wrap_left", Sequent(extra, (k_tree,), 0)))
            steps.append(("dissolve_right", Sequent(extra + k_tree.left, k_tree.right, 0)))
            if isinstance(special, Hole):
                break
            ctx = Sequent(extra + special.left, special.right, 0)
        else:
            extra = ()
            if rest or other or always_wrap:
                wrapper = Sequent(rest, other, 0)
                extra = (wrapper,)
                steps.append(("wrap_right", Sequent((k_tree,), extra, 0)))
            steps.append(("dissolve_left", Sequent(k_tree.left, k_tree.right + extra, 0)))
            if isinstance(special, Hole):
                break
            ctx = Sequent(special.left, special.right + extra, 0)
    return steps


def displayed_sequent(ctx: Context, node: Sequent, always_wrap: bool = False) -> Sequent:
    steps = display_in_sn(ctx, node, always_wrap)
    return steps[-1][1] if steps else node


_UNWRAP = {
    "wrap_left": "dissolve_left",
    "dissolve_left": "wrap_left",
    "wrap_right": "dissolve_right",
    "dissolve_right": "wrap_right",
}


def invert_display_chain(
    steps: list[tuple[str, Sequent]], start: Sequent
) -> list[tuple[str, Sequent]]:
    """Run a wrap/dissolve chain backwards: from the chain's last sequent
    (as premise, at the top) back down to `start`, the sequent the forward
    chain began from."""
    seqs = [start] + [s for _, s in steps]
    return [(_UNWRAP[steps[i][0]], seqs[i]) for i in range(len(steps) - 1, -1, -1)]


def stack_chain(top: ProofNode, steps: list[tuple[str, Sequent]]) -> ProofNode:
    node = top
    for rule, s in steps:
        node = ProofNode(rule, s, (node,))
    return node


# ----------------------------------------------------- derived-rule bodies

def expand_dist(x: Sequent, y: Sequent, top: ProofNode, side: str = "left", origin: int = 0) -> ProofNode:
    """Fuse root children `x` and `y` of `top`'s conclusion into the single
    child `(x.left, y.left => x.right, y.right)`, tagged `origin`.  Their
    grandchildren pile up unpaired inside the fused child.  Nine structural
    steps."""
    base = top.conclusion
    combined = Sequent(x.left + y.left, x.right + y.right, origin)
    if side == "left":
        u = side_remove(base.left, [x, y])
        v = base.right
        uw = Sequent(u, v, 0)
        v1 = Sequent((y,), (uw,), 0)
        v1b = Sequent((y,), (uw,) + x.right, 0)
        k1 = Sequent(y.left + x.left, y.right, 0)
        steps = [
            ("wrap_right", Sequent((x, y), (uw,), 0)),
            ("wrap_right", Sequent((x,), (v1,), 0)),
            ("dissolve_left", Sequent(x.left, x.right + (v1,), 0)),
            ("push_right", Sequent(x.left, (v1b,), 0)),
            ("dissolve_right", Sequent(x.left + (y,), (uw,) + x.right, 0)),
            ("pull_left", Sequent((k1,), (uw,) + x.right, 0)),
            ("dissolve_left", Sequent(y.left + x.left, y.right + (uw,) + x.right, 0)),
            ("wrap_left", Sequent((combined,), (uw,), 0)),
            ("dissolve_right", Sequent((combined,) + u, v, 0)),
        ]
    else:
        u = base.left
        v = side_remove(base.right, [x, y])
        uw = Sequent(u, v, 0)
        v1 = Sequent((uw,), (x,), 0)
        v1b = Sequent((uw,) + y.left, (x,), 0)
        k1 = Sequent(x.left, x.right + y.right, 0)
        steps = [
            ("wrap_left", Sequent((uw,), (x, y), 0)),
            ("wrap_left", Sequent((v1,), (y,), 0)),
            ("dissolve_right", Sequent((v1,) + y.left, y.right, 0)),
            ("pull_left", Sequent((v1b,), y.right, 0)),
            ("dissolve_left", Sequent((uw,) + y.left, (x,) + y.right, 0)),
            ("push_right", Sequent((uw,) + y.left, (k1,), 0)),
            ("dissolve_right", Sequent((uw,) + y.left + x.left, x.right + y.right, 0)),
            ("wrap_right", Sequent((uw,), (combined,), 0)),
            ("dissolve_left", Sequent(u, v + (combined,), 0)),
        ]
    return stack_chain(top, steps)


def _merge_plan(x: Sequent, y: Sequent, z: Sequent):
    """Pairing of children under which `z` is a merge of `x` and `y`:
    a list of (side, x_child, y_child, z_child) with matching recursive
    plans, or None.  Formula occurrences must union up exactly."""
    if not (x.origin == y.origin == z.origin):
        return None
    plan: list[tuple[str, Sequent, Sequent, Sequent]] = []
    for side in ("left", "right"):
        xi, yi, zi = getattr(x, side), getattr(y, side), getattr(z, side)
        if any(isinstance(it, Hole) for it in chain(xi, yi, zi)):
            return None
        if Counter(occs(xi)) + Counter(occs(yi)) != Counter(occs(zi)):
            return None
        xg, yg, zg = (children_by_origin(t) for t in (xi, yi, zi))
        if sorted(xg) != sorted(yg) or sorted(xg) != sorted(zg):
            return None
        if any(len(xg[g]) != len(yg[g]) or len(xg[g]) != len(zg[g]) for g in xg):
            return None
        for g in sorted(xg):
            sub = _pair_group(xg[g], yg[g], zg[g], side)
            if sub is None:
                return None
            plan.extend(sub)
    return plan


def _pair_group(xs, ys, zs, side):
    if not xs:
        return []
    x0 = xs[0]
    for i, yc in enumerate(ys):
        for j, zc in enumerate(zs):
            if _merge_plan(x0, yc, zc) is None:
                continue
            rest = _pair_group(xs[1:], ys[:i] + ys[i + 1 :], zs[:j] + zs[j + 1 :], side)
            if rest is not None:
                return [(side, x0, yc, zc)] + rest
    return None


def expand_merge(x: Sequent, y: Sequent, z: Sequent, top: ProofNode, side: str = "left") -> ProofNode:
    """Replace root children `x` and `y` of `top`'s conclusion by their
    merge `z`: fuse them, then recursively merge the grandchild pairs the
    merge plan dictates.  Raises ValueError when `z` is not a merge of the
    two."""
    plan = _merge_plan(x, y, z)
    if plan is None:
        raise ValueError(
            f"{sequent_text(z)} is not a merge of {sequent_text(x)} and {sequent_text(y)}"
        )
    base = top.conclusion
    combined = Sequent(x.left + y.left, x.right + y.right, z.origin)
    if side == "left":
        u = side_remove(base.left, [x, y])
        v = base.right
        uw = Sequent(u, v, 0)
        node = ProofNode("wrap_right", Sequent((x, y), (uw,), 0), (top,))
        node = expand_dist(x, y, node, "left", origin=z.origin)
        if plan:
            node = ProofNode(
                "dissolve_left", Sequent(combined.left, combined.right + (uw,), 0), (node,)
            )
            for kside, xc, yc, zc in plan:
                node = expand_merge(xc, yc, zc, node, kside)
            node = ProofNode("wrap_left", Sequent((z,), (uw,), 0), (node,))
        node = ProofNode("dissolve_right", Sequent((z,) + u, v, 0), (node,))
    else:
        u = base.left
        v = side_remove(base.right, [x, y])
        uw = Sequent(u, v, 0)
        node = ProofNode("wrap_left", Sequent((uw,), (x, y), 0), (top,))
        node = expand_dist(x, y, node, "right", origin=z.origin)
        if plan:
            node = ProofNode(
                "dissolve_right", Sequent((uw,) + combined.left, combined.right, 0), (node,)
            )
            for kside, xc, yc, zc in plan:
                node = expand_merge(xc, yc, zc, node, kside)
            node = ProofNode("wrap_right", Sequent((uw,), (z,), 0), (node,))
        node = ProofNode("dissolve_left", Sequent(u, v + (z,), 0), (node,))
    return node


def expand_weaken_hollow(x: Sequent, side: str, top: ProofNode) -> ProofNode:
    """Add the hollow sequent `x` as a root child on the given side of
    `top`'s conclusion."""
    if not is_hollow(x):
        raise ValueError(f"cannot weaken by non-hollow {sequent_text(x)}")
    base = top.conclusion
    uw = Sequent(base.left, base.right, 0)
    if side == "left":
        node = ProofNode("wrap_right", Sequent((), (uw,), 0), (top,))
        for h in child_seqs(x.left):
            node = expand_weaken_hollow(h, "left", node)
        for k in child_seqs(x.right):
            node = expand_weaken_hollow(k, "right", node)
        node = ProofNode("wrap_left", Sequent((x,), (uw,), 0), (node,))
        node = ProofNode("dissolve_right", Sequent((x,) + base.left, base.right, 0), (node,))
    else:
        node = ProofNode("wrap_left", Sequent((uw,), (), 0), (top,))
        for h in child_seqs(x.left):
            node = expand_weaken_hollow(h, "left", node)
        for k in child_seqs(x.right):
            node = expand_weaken_hollow(k, "right", node)
        node = ProofNode("wrap_right", Sequent((uw,), (x,), 0), (node,))
        node = ProofNode("dissolve_left", Sequent(base.left, base.right + (x,), 0), (node,))
    return node


def expand_deep_leaf(rule: str, ctx: Context, node: Sequent) -> ProofNode:
    """Complete shallow proof of `plug(ctx, node)` for a tree that is
    hollow except for the axiom node: an atom on both sides of `node`
    ("id"), a left bottom unit ("bot_l"), or a right tensor unit ("i_r")."""
    if rule == "id":
        pair = None
        for lo in occs(node.left):
            if not isinstance(lo.formula, Atom):
                continue
            for ro in occs(node.right):
                if ro.formula == lo.formula:
                    pair = (lo, ro)
                    break
            if pair:
                break
        if pair is None:
            raise ValueError("no atomic identity pair at the axiom node")
        lo, ro = pair
        out = ProofNode("id", Sequent((lo,), (ro,)))
        left_rest = side_remove(node.left, [lo])
        right_rest = side_remove(node.right, [ro])
    elif rule == "bot_l":
        bo = next((o for o in occs(node.left) if isinstance(o.formula, UnitBot)), None)
        if bo is None:
            raise ValueError("no left bottom unit at the axiom node")
        out = ProofNode("bot_l", Sequent((bo,), ()))
        left_rest = side_remove(node.left, [bo])
        right_rest = node.right
    elif rule == "i_r":
        io = next((o for o in occs(node.right) if isinstance(o.formula, UnitI)), None)
        if io is None:
            raise ValueError("no right tensor unit at the axiom node")
        out = ProofNode("i_r", Sequent((), (io,)))
        left_rest = node.left
        right_rest = side_remove(node.right, [io])
    else:
        raise ValueError(f"not a leaf rule: {rule!r}")

    steps = display_in_sn(ctx, node)
    shown = steps[-1][1] if steps else plug(ctx, node)
    extra_l = side_remove(shown.left, node.left)
    extra_r = side_remove(shown.right, node.right)
    for it in chain(left_rest, extra_l):
        if not isinstance(it, Sequent):
            raise ValueError("axiom node carries a spare formula occurrence")
        out = expand_weaken_hollow(it, "left", out)
    for it in chain(right_rest, extra_r):
        if not isinstance(it, Sequent):
            raise ValueError("axiom node carries a spare formula occurrence")
        out = expand_weaken_hollow(it, "right", out)
    return stack_chain(out, invert_display_chain(steps, plug(ctx, node)))
