"""Nested sequents: finite trees whose nodes are two-sided formula multisets.

A node `S => T` holds formula occurrences on both sides plus child sequents,
each child tagged with the label (`origin`) of the arrow occurrence that
introduced it.  Sides are kept canonically sorted, so structural equality of
`Sequent` values is multiset equality and the values are usable as search
keys directly.

Text syntax: `Gamma => Delta` with comma-separated items; a child sequent is
written in brackets with its origin as a suffix, `[a => b]@2` (`@0` is
omitted); `_` marks the hole of a context.  Formula occurrences parse with
hop count 0.

A context is a nested sequent with exactly one hole standing for a whole
node; `plug` substitutes a sequent for the hole.  `HOLE` itself is the empty
context.  Merging and partitioning implement the resource-splitting algebra
used by the branching rules: a partition two-colours every formula occurrence
and recursively partitions every child, so both halves keep the tree shape
and origin labels; merging is its inverse and enumerates every way to pair up
children that share an origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, permutations, product
from typing import Iterator, Union

from .formula import (
    Formula,
    Lolli,
    Excl,
    Par,
    ParseError,
    Tensor,
    UnitBot,
    UnitI,
    _Parser,
    formula_key,
    formula_text,
    is_fill_formula,
    strip_labels,
)

__all__ = [
    "Occ",
    "Hole",
    "HOLE",
    "Sequent",
    "Item",
    "Context",
    "item_key",
    "parse_sequent",
    "sequent_text",
    "side_add",
    "side_remove",
    "occs",
    "child_seqs",
    "children_by_origin",
    "formula_occurrence_count",
    "sequent_node_count",
    "is_hollow",
    "is_fill_sequent",
    "strip_sequent",
    "strip_context",
    "label_sequent",
    "hole_count",
    "plug",
    "hole_contexts",
    "context_polarity",
    "context_decompose",
    "tau_s",
    "tau_a",
    "merge_sequents",
    "merge_contexts",
    "enumerate_partitions",
    "enumerate_context_partitions",
]


@dataclass(frozen=True)
class Occ:
    """One formula occurrence in a sequent.  `hops` counts how many times
    propagation has moved it; it participates in equality so search states
    that differ only in spent moves stay distinct."""

    formula: Formula
    hops: int = 0

    def __str__(self) -> str:
        return formula_text(self.formula)


@dataclass(frozen=True)
class Hole:
    def __str__(self) -> str:
        return "_"


HOLE = Hole()


@dataclass(frozen=True)
class Sequent:
    left: tuple = ()
    right: tuple = ()
    origin: int = 0

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(self.left, key=item_key)))
        object.__setattr__(self, "right", tuple(sorted(self.right, key=item_key)))

    def __str__(self) -> str:
        return sequent_text(self)


Item = Union[Occ, Sequent, Hole]
Context = Union[Hole, Sequent]


def item_key(it: Item) -> tuple:
    match it:
        case Occ(formula=f, hops=h):
            return (0, formula_key(f), h)
        case Sequent(left=l, right=r, origin=g):
            return (1, g, tuple(item_key(x) for x in l), tuple(item_key(x) for x in r))
        case Hole():
            return (2,)
    raise TypeError(f"not a sequent item: {it!r}")


# ------------------------------------------------------- basic inspection

def occs(items) -> tuple[Occ, ...]:
    return tuple(it for it in items if isinstance(it, Occ))


def child_seqs(items) -> tuple[Sequent, ...]:
    return tuple(it for it in items if isinstance(it, Sequent))


def children_by_origin(items) -> dict[int, list[Sequent]]:
    groups: dict[int, list[Sequent]] = {}
    for it in items:
        if isinstance(it, Sequent):
            groups.setdefault(it.origin, []).append(it)
    return groups


def formula_occurrence_count(s: Sequent) -> int:
    n = 0
    for it in chain(s.left, s.right):
        if isinstance(it, Occ):
            n += 1
        elif isinstance(it, Sequent):
            n += formula_occurrence_count(it)
    return n


def sequent_node_count(s: Sequent) -> int:
    n = 1
    for it in chain(s.left, s.right):
        if isinstance(it, Sequent):
            n += sequent_node_count(it)
    return n


def is_hollow(s: Sequent) -> bool:
    """No formula occurrences anywhere, child nodes included."""
    return all(
        isinstance(it, Sequent) and is_hollow(it) for it in chain(s.left, s.right)
    )


def is_fill_sequent(s: Sequent) -> bool:
    """Right-nested only, and every formula stays inside FILL."""
    for it in s.left:
        if not (isinstance(it, Occ) and is_fill_formula(it.formula)):
            return False
    for it in s.right:
        if isinstance(it, Occ):
            if not is_fill_formula(it.formula):
                return False
        elif isinstance(it, Sequent):
            if not is_fill_sequent(it):
                return False
        else:
            return False
    return True


def side_add(items, extra) -> tuple:
    return tuple(items) + tuple(extra)


def side_remove(items, gone) -> tuple:
    """Multiset difference; raises ValueError when an item is absent."""
    out = list(items)
    for g in gone:
        out.remove(g)
    return tuple(out)


# ----------------------------------------------------------------- parsing

def _tokenize(text: str) -> list[str]:
    toks: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "=" and text[i + 1 : i + 2] == ">":
            toks.append("=>")
            i += 2
        elif c in "[],_":
            toks.append(c)
            i += 1
        elif c == "@":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(f"'@' needs a label number at position {i}")
            toks.append(text[i:j])
            i = j
        elif c in "()*|1":
            toks.append(c)
            i += 1
        elif c == "-":
            nxt = text[i + 1] if i + 1 < n else ""
            if nxt in ("o", "<"):
                toks.append("-" + nxt)
                i += 2
            else:
                raise ParseError(f"stray '-' at position {i}")
        elif "a" <= c <= "z":
            j = i + 1
            while j < n and ("a" <= text[j] <= "z" or text[j].isdigit() or text[j] == "_"):
                j += 1
            toks.append(text[i:j])
            i = j
        else:
            raise ParseError(f"unexpected character {c!r} at position {i}")
    return toks


_STOPPERS = {None, ",", "=>", "[", "]", "_"}


class _SeqParser:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> str | None:
        tok = self.peek()
        self.i += 1
        return tok

    def item(self) -> Item:
        tok = self.peek()
        if tok == "_":
            self.take()
            return HOLE
        if tok == "[":
            self.take()
            s = self.sequent()
            if self.take() != "]":
                raise ParseError("unbalanced '['")
            origin = 0
            nxt = self.peek()
            if nxt is not None and nxt.startswith("@"):
                origin = int(self.take()[1:])
            return Sequent(s.left, s.right, origin)
        span = []
        while True:
            tok = self.peek()
            if tok in _STOPPERS or (tok is not None and tok.startswith("@")):
                break
            span.append(self.take())
        if not span:
            raise ParseError(f"expected an item, found {tok!r}")
        fp = _Parser(span)
        f = fp.impl()
        if fp.peek() is not None:
            raise ParseError(f"trailing input in formula at token {fp.peek()!r}")
        return Occ(f)

    def side(self) -> tuple[Item, ...]:
        nxt = self.peek()
        if nxt in (None, "=>", "]") or (nxt is not None and nxt.startswith("@")):
            return ()
        items = [self.item()]
        while self.peek() == ",":
            self.take()
            items.append(self.item())
        return tuple(items)

    def sequent(self) -> Sequent:
        left = self.side()
        if self.take() != "=>":
            raise ParseError("expected '=>'")
        right = self.side()
        return Sequent(left, right)


def parse_sequent(text: str) -> Sequent:
    p = _SeqParser(_tokenize(text))
    s = p.sequent()
    origin = 0
    nxt = p.peek()
    if nxt is not None and nxt.startswith("@"):
        origin = int(p.take()[1:])
    if p.peek() is not None:
        raise ParseError(f"trailing input at token {p.peek()!r}")
    return Sequent(s.left, s.right, origin)


def _core_text(s: Sequent) -> str:
    left = ", ".join(_item_text(it) for it in s.left)
    right = ", ".join(_item_text(it) for it in s.right)
    if left and right:
        return f"{left} => {right}"
    if left:
        return f"{left} =>"
    if right:
        return f"=> {right}"
    return "=>"


def _item_text(it: Item) -> str:
    match it:
        case Occ(formula=f):
            return formula_text(f)
        case Sequent(origin=g):
            inner = _core_text(it)
            return f"[{inner}]@{g}" if g else f"[{inner}]"
        case Hole():
            return "_"
    raise TypeError(f"not a sequent item: {it!r}")


def sequent_text(s: Sequent) -> str:
    """Canonical rendering: items in canonical order, hops and formula labels
    invisible, child origins as `@n` suffixes."""
    t = _core_text(s)
    return f"{t} @{s.origin}" if s.origin else t


# ---------------------------------------------------------------- contexts

def hole_count(x) -> int:
    match x:
        case Hole():
            return 1
        case Occ():
            return 0
        case Sequent(left=l, right=r):
            return sum(hole_count(it) for it in chain(l, r))
    raise TypeError(f"not a sequent item: {x!r}")


def plug(ctx: Context, s: Sequent) -> Sequent:
    """Substitute `s` for the hole.  The plugged node keeps the origin carried
    by `s` itself; the hole is position only."""
    if isinstance(ctx, Hole):
        return s

    def subst(items):
        out = []
        for it in items:
            if isinstance(it, Hole):
                out.append(s)
            elif isinstance(it, Sequent):
                out.append(subst_seq(it))
            else:
                out.append(it)
        return tuple(out)

    def subst_seq(node: Sequent) -> Sequent:
        return Sequent(subst(node.left), subst(node.right), node.origin)

    return subst_seq(ctx)


def hole_contexts(s: Sequent) -> Iterator[tuple[Context, Sequent]]:
    """Every way to read `s` as context-plus-node: each node of the tree in
    turn becomes the plugged sequent.  Root first, then children in canonical
    order, left side before right."""
    yield HOLE, s
    for side_name in ("left", "right"):
        items = getattr(s, side_name)
        for idx, it in enumerate(items):
            if not isinstance(it, Sequent):
                continue
            for sub_ctx, node in hole_contexts(it):
                replaced = items[:idx] + (HOLE if isinstance(sub_ctx, Hole) else sub_ctx,) + items[idx + 1 :]
                if side_name == "left":
                    ctx = Sequent(replaced, s.right, s.origin)
                else:
                    ctx = Sequent(s.left, replaced, s.origin)
                yield ctx, node


def context_polarity(ctx: Context) -> str:
    """`"root"` for the empty context, `"pos"` when the hole sits in a right
    multiset, `"neg"` when it sits in a left multiset."""
    if isinstance(ctx, Hole):
        return "root"

    def walk(node: Sequent) -> str | None:
        for tag, items in (("neg", node.left), ("pos", node.right)):
            for it in items:
                if isinstance(it, Hole):
                    return tag
                if isinstance(it, Sequent):
                    r = walk(it)
                    if r:
                        return r
        return None

    r = walk(ctx)
    if r is None:
        raise ValueError("context has no hole")
    return r


def _subtract(items: tuple, gone: list) -> list | None:
    out = list(items)
    for g in gone:
        if g in out:
            out.remove(g)
        else:
            return None
    return out


def context_decompose(ctx: Context, tree: Sequent) -> Sequent | None:
    """The unique sequent `n` with `plug(ctx, n) == tree`, or None."""
    if isinstance(ctx, Hole):
        return tree
    if not isinstance(tree, Sequent) or ctx.origin != tree.origin:
        return None
    carrier = None
    for side_name in ("left", "right"):
        if any(hole_count(it) for it in getattr(ctx, side_name)):
            carrier = side_name
    if carrier is None:
        return None
    other = "right" if carrier == "left" else "left"
    if getattr(ctx, other) != getattr(tree, other):
        return None
    c_items = list(getattr(ctx, carrier))
    special = next(it for it in c_items if hole_count(it))
    c_items.remove(special)
    leftover = _subtract(getattr(tree, carrier), c_items)
    if leftover is None or len(leftover) != 1:
        return None
    t = leftover[0]
    if not isinstance(t, Sequent):
        return None
    if isinstance(special, Hole):
        return t
    return context_decompose(special, t)


# --------------------------------------------------------------- labelling

def strip_sequent(s: Sequent) -> Sequent:
    """Forget arrow labels and hop counts; origins stay."""

    def go(items):
        out = []
        for it in items:
            if isinstance(it, Occ):
                out.append(Occ(strip_labels(it.formula)))
            elif isinstance(it, Sequent):
                out.append(strip_sequent(it))
            else:
                out.append(it)
        return tuple(out)

    return Sequent(go(s.left), go(s.right), s.origin)


def strip_context(ctx: Context) -> Context:
    return ctx if isinstance(ctx, Hole) else strip_sequent(ctx)


def _max_origin(s: Sequent) -> int:
    m = s.origin
    for it in chain(s.left, s.right):
        if isinstance(it, Sequent):
            m = max(m, _max_origin(it))
    return m


def label_sequent(s: Sequent) -> Sequent:
    """Number every arrow occurrence in the tree, walking nodes in canonical
    item order, left side before right, formulas in prefix order.  Numbering
    starts above any origin already present, so fresh child origins can never
    collide with existing ones.  Expects an unlabelled sequent."""
    from .formula import label_occurrences

    def go(node: Sequent, n: int) -> tuple[Sequent, int]:
        sides = []
        for items in (node.left, node.right):
            out = []
            for it in items:
                if isinstance(it, Occ):
                    f, n = label_occurrences(it.formula, n)
                    out.append(Occ(f, it.hops))
                elif isinstance(it, Sequent):
                    child, n = go(it, n)
                    out.append(child)
                else:
                    out.append(it)
            sides.append(tuple(out))
        return Sequent(sides[0], sides[1], node.origin), n

    return go(s, _max_origin(s) + 1)[0]


# ------------------------------------------------- formula interpretations

def _join(fs: list[Formula], make, empty: Formula) -> Formula:
    if not fs:
        return empty
    out = fs[0]
    for f in fs[1:]:
        out = make(out, f)
    return out


def _tau(s: Sequent, arrow) -> Formula:
    ant = []
    for it in s.left:
        if isinstance(it, Occ):
            ant.append(it.formula)
        elif isinstance(it, Sequent):
            ant.append(_tau(it, Excl))
        else:
            raise ValueError("cannot interpret a context hole as a formula")
    suc = []
    for it in s.right:
        if isinstance(it, Occ):
            suc.append(it.formula)
        elif isinstance(it, Sequent):
            suc.append(_tau(it, Lolli))
        else:
            raise ValueError("cannot interpret a context hole as a formula")
    return arrow(_join(ant, Tensor, UnitI()), _join(suc, Par, UnitBot()))


def tau_s(s: Sequent) -> Formula:
    """Read a sequent as an implication: tensor of the left side implies par
    of the right side, children interpreted recursively (left-nested children
    as exclusions, right-nested as implications)."""
    return strip_labels(_tau(s, Lolli))


def tau_a(s: Sequent) -> Formula:
    """Read a sequent as an exclusion, same treatment of the sides."""
    return strip_labels(_tau(s, Excl))


# ------------------------------------------------------ merging and splits

def merge_sequents(a: Sequent, b: Sequent) -> list[Sequent]:
    """All merges of two sequents.  Formula occurrences union; children are
    paired bijectively within each origin group and merged recursively; holes
    must align.  Distinct pairings can collapse to equal results, so the list
    is deduplicated.  Empty when origins or shapes cannot match."""
    if a.origin != b.origin:
        return []
    out: list[Sequent] = []
    for L, R in product(_merge_items(a.left, b.left), _merge_items(a.right, b.right)):
        s = Sequent(L, R, a.origin)
        if s not in out:
            out.append(s)
    return out


def merge_contexts(a: Context, b: Context) -> list[Context]:
    if isinstance(a, Hole) and isinstance(b, Hole):
        return [HOLE]
    if isinstance(a, Hole) or isinstance(b, Hole):
        return []
    return merge_sequents(a, b)


def _merge_items(x_items: tuple, y_items: tuple) -> list[tuple]:
    x_holes = [it for it in x_items if isinstance(it, Hole)]
    y_holes = [it for it in y_items if isinstance(it, Hole)]
    if len(x_holes) != len(y_holes):
        return []
    fixed = list(occs(x_items)) + list(occs(y_items)) + x_holes
    xg = children_by_origin(x_items)
    yg = children_by_origin(y_items)
    if sorted(xg) != sorted(yg) or any(len(xg[g]) != len(yg[g]) for g in xg):
        return []
    per_group: list[list[tuple[Sequent, ...]]] = []
    for g in sorted(xg):
        results: list[tuple[Sequent, ...]] = []
        for perm in permutations(yg[g]):
            merged_lists = [merge_sequents(x, y) for x, y in zip(xg[g], perm)]
            if any(not m for m in merged_lists):
                continue
            for combo in product(*merged_lists):
                if combo not in results:
                    results.append(combo)
        if not results:
            return []
        per_group.append(results)
    sides = []
    for combo in product(*per_group):
        side = tuple(fixed) + tuple(chain.from_iterable(combo))
        sides.append(side)
    return sides


def enumerate_partitions(s: Sequent) -> list[tuple[Sequent, Sequent]]:
    """Every two-colouring of the formula occurrences; both halves keep the
    full child shape with origins, child contents partitioned recursively.
    Exactly 2**formula_occurrence_count(s) pairs, with multiplicity, ordered
    so the first half starts maximal."""
    return [
        (Sequent(l1, r1, s.origin), Sequent(l2, r2, s.origin))
        for (l1, l2), (r1, r2) in product(_split_items(s.left), _split_items(s.right))
    ]


def enumerate_context_partitions(ctx: Context) -> list[tuple[Context, Context]]:
    if isinstance(ctx, Hole):
        return [(HOLE, HOLE)]
    return enumerate_partitions(ctx)


def _split_items(items: tuple) -> list[tuple[tuple, tuple]]:
    occ_list = list(occs(items))
    holes = [it for it in items if isinstance(it, Hole)]
    kid_splits = [enumerate_partitions(k) for k in child_seqs(items)]
    results = []
    for mask in range(2 ** len(occ_list)):
        first = [o for j, o in enumerate(occ_list) if not mask >> j & 1]
        second = [o for j, o in enumerate(occ_list) if mask >> j & 1]
        for combo in product(*kid_splits):
            k1 = [c[0] for c in combo]
            k2 = [c[1] for c in combo]
            results.append(
                (tuple(first + k1 + holes), tuple(second + k2 + holes))
            )
    return results
