"""Proof trees and the JSON certificate format shared by all three calculi.

A certificate is a JSON object

    {"calculus": "dn" | "sn" | "dc",
     "logic": "fill" | "biill",
     "endsequent": "<text>",
     "proof": <node>}

where each node is `{"rule": ..., "conclusion": ..., "witness": {...}?,
"premises": [...]}`.  Conclusions and endsequents use the sequent text syntax
for the nested ("dn") and shallow ("sn") calculi and the structure syntax for
the display calculus ("dc").  The optional witness pins every choice a rule
application makes so checking never has to search: `context` locates the
rewritten node (`_` marks the hole), `principal` names the formula acted on,
`child_origin` picks a child by label, and `ctx1`/`ctx2` give the context
halves used by a branching rule.
"""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional

from .formula import Formula, ParseError, formula_text, parse_formula, strip_labels
from .sequent import (
    HOLE,
    Context,
    Hole,
    Sequent,
    hole_count,
    parse_sequent,
    sequent_text,
    strip_context,
    strip_sequent,
)

__all__ = [
    "CheckError",
    "Witness",
    "ProofNode",
    "Certificate",
    "proof_size",
    "branch_length",
    "postorder",
    "stack_room",
    "context_text",
    "parse_context",
    "conclusion_text",
    "certificate_dict",
    "certificate_text",
    "read_certificate",
]

CALCULI = ("dn", "sn", "dc")
LOGICS = ("fill", "biill")


class CheckError(Exception):
    """Raised when a proof fails schema or side-condition checking."""


@dataclass(frozen=True)
class Witness:
    context: Optional[Context] = None
    principal: Optional[Formula] = None
    child_origin: Optional[int] = None
    ctx1: Optional[Context] = None
    ctx2: Optional[Context] = None
    side: Optional[str] = None


@dataclass(frozen=True)
class ProofNode:
    rule: str
    conclusion: object
    premises: tuple = ()
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class Certificate:
    calculus: str
    logic: str
    endsequent: str
    root: ProofNode


def proof_size(node: ProofNode) -> int:
    # iterative: display chains make proof depth linear in size
    n = 0
    todo = [node]
    while todo:
        cur = todo.pop()
        n += 1
        todo.extend(cur.premises)
    return n


def branch_length(node: ProofNode) -> int:
    """Number of nodes on the longest root-to-leaf branch."""
    best = 0
    todo = [(node, 1)]
    while todo:
        cur, depth = todo.pop()
        if not cur.premises:
            best = max(best, depth)
        todo.extend((p, depth + 1) for p in cur.premises)
    return best


@contextmanager
def stack_room(frames: int):
    """Run a block with at least `frames` of recursion headroom left, then
    put the interpreter limit back.  Checkers and translators recurse in
    proportion to proof size, so they size their own allowance instead of
    assuming whoever ran last left the limit high enough."""
    depth = 2
    f = sys._getframe()
    while f is not None:
        depth += 1
        f = f.f_back
    need = depth + frames
    limit = sys.getrecursionlimit()
    if limit >= need:
        yield
        return
    sys.setrecursionlimit(need)
    try:
        yield
    finally:
        sys.setrecursionlimit(limit)


def postorder(node: ProofNode) -> Iterator[ProofNode]:
    stack = [(node, False)]
    while stack:
        cur, expanded = stack.pop()
        if expanded:
            yield cur
        else:
            stack.append((cur, True))
            stack.extend((p, False) for p in reversed(cur.premises))


def context_text(ctx: Context) -> str:
    return "_" if isinstance(ctx, Hole) else sequent_text(strip_context(ctx))


def parse_context(text: str) -> Context:
    if text.strip() == "_":
        return HOLE
    ctx = parse_sequent(text)
    if hole_count(ctx) != 1:
        raise ParseError(f"context needs exactly one hole: {text!r}")
    return ctx


def conclusion_text(calculus: str, conclusion) -> str:
    if calculus in ("dn", "sn"):
        return sequent_text(strip_sequent(conclusion))
    from .display import display_text

    return display_text(conclusion)


def _witness_dict(w: Witness) -> dict:
    out: dict = {}
    if w.context is not None:
        out["context"] = context_text(w.context)
    if w.principal is not None:
        out["principal"] = formula_text(strip_labels(w.principal))
    if w.child_origin is not None:
        out["child_origin"] = w.child_origin
    if w.ctx1 is not None:
        out["ctx1"] = context_text(w.ctx1)
    if w.ctx2 is not None:
        out["ctx2"] = context_text(w.ctx2)
    if w.side is not None:
        out["side"] = w.side
    return out


def _node_dict(calculus: str, node: ProofNode) -> dict:
    out: dict = {
        "rule": node.rule,
        "conclusion": conclusion_text(calculus, node.conclusion),
    }
    if node.witness is not None:
        w = _witness_dict(node.witness)
        if w:
            out["witness"] = w
    out["premises"] = [_node_dict(calculus, p) for p in node.premises]
    return out


def certificate_dict(calculus: str, logic: str, root: ProofNode) -> dict:
    if calculus not in CALCULI:
        raise ValueError(f"unknown calculus {calculus!r}")
    if logic not in LOGICS:
        raise ValueError(f"unknown logic {logic!r}")
    with stack_room(10 * proof_size(root) + 2000):
        return {
            "calculus": calculus,
            "logic": logic,
            "endsequent": conclusion_text(calculus, root.conclusion),
            "proof": _node_dict(calculus, root),
        }


def certificate_text(calculus: str, logic: str, root: ProofNode) -> str:
    with stack_room(10 * proof_size(root) + 2000):
        return json.dumps(certificate_dict(calculus, logic, root), indent=2) + "\n"


def _read_witness(data: dict) -> Witness:
    if not isinstance(data, dict):
        raise CheckError("witness must be an object")
    known = {"context", "principal", "child_origin", "ctx1", "ctx2", "side"}
    unknown = set(data) - known
    if unknown:
        raise CheckError(f"unknown witness fields: {sorted(unknown)}")
    try:
        return Witness(
            context=parse_context(data["context"]) if "context" in data else None,
            principal=parse_formula(data["principal"]) if "principal" in data else None,
            child_origin=int(data["child_origin"]) if "child_origin" in data else None,
            ctx1=parse_context(data["ctx1"]) if "ctx1" in data else None,
            ctx2=parse_context(data["ctx2"]) if "ctx2" in data else None,
            side=data.get("side"),
        )
    except ParseError as e:
        raise CheckError(f"bad witness: {e}") from e


def _read_node(calculus: str, data: dict) -> ProofNode:
    if not isinstance(data, dict) or "rule" not in data or "conclusion" not in data:
        raise CheckError("proof node needs 'rule' and 'conclusion'")
    try:
        if calculus in ("dn", "sn"):
            conclusion = parse_sequent(data["conclusion"])
        else:
            from .display import parse_display

            conclusion = parse_display(data["conclusion"])
    except ParseError as e:
        raise CheckError(f"bad conclusion {data['conclusion']!r}: {e}") from e
    witness = _read_witness(data["witness"]) if "witness" in data else None
    premises = tuple(_read_node(calculus, p) for p in data.get("premises", ()))
    return ProofNode(str(data["rule"]), conclusion, premises, witness)


def read_certificate(data) -> Certificate:
    if isinstance(data, str):
        try:
            with stack_room(len(data) // 10 + 2000):
                data = json.loads(data)
        except json.JSONDecodeError as e:
            raise CheckError(f"not JSON: {e}") from e
    if not isinstance(data, dict):
        raise CheckError("certificate must be a JSON object")
    calculus = data.get("calculus")
    logic = data.get("logic", "biill")
    if calculus not in CALCULI:
        raise CheckError(f"unknown calculus {calculus!r}")
    if logic not in LOGICS:
        raise CheckError(f"unknown logic {logic!r}")
    if "proof" not in data:
        raise CheckError("certificate has no proof")
    nodes = 0
    todo = [data["proof"]]
    while todo:
        cur = todo.pop()
        nodes += 1
        if isinstance(cur, dict):
            kids = cur.get("premises", ())
            todo.extend(kids if isinstance(kids, list) else ())
    with stack_room(10 * nodes + 2000):
        root = _read_node(calculus, data["proof"])
    endsequent = data.get("endsequent")
    if endsequent is not None:
        if conclusion_text(calculus, root.conclusion) != _normalize(calculus, endsequent):
            raise CheckError("endsequent does not match the proof root")
    return Certificate(calculus, logic, conclusion_text(calculus, root.conclusion), root)


def _normalize(calculus: str, text: str) -> str:
    try:
        if calculus in ("dn", "sn"):
            return sequent_text(parse_sequent(text))
        from .display import display_text, parse_display

        return display_text(parse_display(text))
    except ParseError as e:
        raise CheckError(f"bad endsequent {text!r}: {e}") from e
