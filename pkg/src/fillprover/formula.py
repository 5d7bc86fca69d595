"""Formulas of multiplicative bi-intuitionistic linear logic.

The language has atoms, a tensor unit `1`, a par unit `bot`, and four binary
connectives: tensor `*`, par `|`, linear implication `-o`, and exclusion `-<`.
Formulas without exclusion form the FILL fragment.

`*` and `|` share one left-associative tier and bind tighter than the arrows;
`-o` associates to the right, `-<` associates to the left and binds tighter
than `-o`.  Atoms match `[a-z][a-z0-9_]*`; `bot` is reserved for the unit.

Arrow occurrences carry an integer label used to tie nested child sequents
back to the occurrence that introduced them.  Labels are not part of the
surface syntax: `parse_formula` yields label 0 everywhere, and
`label_occurrences` numbers the arrows of a formula in prefix order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "ParseError",
    "Formula",
    "Atom",
    "UnitI",
    "UnitBot",
    "Tensor",
    "Par",
    "Lolli",
    "Excl",
    "parse_formula",
    "formula_text",
    "formula_key",
    "formula_size",
    "connective_count",
    "arrow_count",
    "strip_labels",
    "label_occurrences",
    "is_fill_formula",
    "subformulas",
]


class ParseError(ValueError):
    """Raised when formula or sequent text does not parse."""


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return formula_text(self)


@dataclass(frozen=True)
class UnitI:
    def __str__(self) -> str:
        return formula_text(self)


@dataclass(frozen=True)
class UnitBot:
    def __str__(self) -> str:
        return formula_text(self)


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return formula_text(self)


@dataclass(frozen=True)
class Par:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return formula_text(self)


@dataclass(frozen=True)
class Lolli:
    left: "Formula"
    right: "Formula"
    label: int = 0

    def __str__(self) -> str:
        return formula_text(self)


@dataclass(frozen=True)
class Excl:
    left: "Formula"
    right: "Formula"
    label: int = 0

    def __str__(self) -> str:
        return formula_text(self)


Formula = Union[Atom, UnitI, UnitBot, Tensor, Par, Lolli, Excl]


def formula_key(f: Formula) -> tuple:
    """Total order key.  Includes arrow labels, so occurrences introduced at
    different points stay distinct even when they print the same."""
    match f:
        case Atom(name=n):
            return (0, n)
        case UnitI():
            return (1,)
        case UnitBot():
            return (2,)
        case Tensor(left=l, right=r):
            return (3, formula_key(l), formula_key(r))
        case Par(left=l, right=r):
            return (4, formula_key(l), formula_key(r))
        case Lolli(left=l, right=r, label=k):
            return (5, formula_key(l), formula_key(r), k)
        case Excl(left=l, right=r, label=k):
            return (6, formula_key(l), formula_key(r), k)
    raise TypeError(f"not a formula: {f!r}")


def formula_size(f: Formula) -> int:
    """Node count: every atom, unit, and connective occurrence."""
    match f:
        case Atom() | UnitI() | UnitBot():
            return 1
        case Tensor(left=l, right=r) | Par(left=l, right=r) | Lolli(left=l, right=r) | Excl(left=l, right=r):
            return 1 + formula_size(l) + formula_size(r)
    raise TypeError(f"not a formula: {f!r}")


def connective_count(f: Formula) -> int:
    """Number of binary connective occurrences."""
    match f:
        case Atom() | UnitI() | UnitBot():
            return 0
        case Tensor(left=l, right=r) | Par(left=l, right=r) | Lolli(left=l, right=r) | Excl(left=l, right=r):
            return 1 + connective_count(l) + connective_count(r)
    raise TypeError(f"not a formula: {f!r}")


def arrow_count(f: Formula) -> int:
    """Number of implication and exclusion occurrences."""
    match f:
        case Atom() | UnitI() | UnitBot():
            return 0
        case Tensor(left=l, right=r) | Par(left=l, right=r):
            return arrow_count(l) + arrow_count(r)
        case Lolli(left=l, right=r) | Excl(left=l, right=r):
            return 1 + arrow_count(l) + arrow_count(r)
    raise TypeError(f"not a formula: {f!r}")


def strip_labels(f: Formula) -> Formula:
    match f:
        case Atom() | UnitI() | UnitBot():
            return f
        case Tensor(left=l, right=r):
            return Tensor(strip_labels(l), strip_labels(r))
        case Par(left=l, right=r):
            return Par(strip_labels(l), strip_labels(r))
        case Lolli(left=l, right=r):
            return Lolli(strip_labels(l), strip_labels(r))
        case Excl(left=l, right=r):
            return Excl(strip_labels(l), strip_labels(r))
    raise TypeError(f"not a formula: {f!r}")


def label_occurrences(f: Formula, start: int = 1) -> tuple[Formula, int]:
    """Assign labels `start, start+1, ...` to every arrow occurrence in
    prefix order (node before children, left subtree before right).
    Returns the labelled formula and the next unused label."""
    match f:
        case Atom() | UnitI() | UnitBot():
            return f, start
        case Tensor(left=l, right=r):
            ll, n = label_occurrences(l, start)
            rr, n = label_occurrences(r, n)
            return Tensor(ll, rr), n
        case Par(left=l, right=r):
            ll, n = label_occurrences(l, start)
            rr, n = label_occurrences(r, n)
            return Par(ll, rr), n
        case Lolli(left=l, right=r):
            ll, n = label_occurrences(l, start + 1)
            rr, n = label_occurrences(r, n)
            return Lolli(ll, rr, start), n
        case Excl(left=l, right=r):
            ll, n = label_occurrences(l, start + 1)
            rr, n = label_occurrences(r, n)
            return Excl(ll, rr, start), n
    raise TypeError(f"not a formula: {f!r}")


def is_fill_formula(f: Formula) -> bool:
    """True when the formula stays inside FILL, i.e. contains no exclusion."""
    match f:
        case Atom() | UnitI() | UnitBot():
            return True
        case Excl():
            return False
        case Tensor(left=l, right=r) | Par(left=l, right=r) | Lolli(left=l, right=r):
            return is_fill_formula(l) and is_fill_formula(r)
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula occurrences in prefix order, the formula itself first."""
    yield f
    match f:
        case Tensor(left=l, right=r) | Par(left=l, right=r) | Lolli(left=l, right=r) | Excl(left=l, right=r):
            yield from subformulas(l)
            yield from subformulas(r)


# ---------------------------------------------------------------- parsing

def _tokenize(text: str) -> list[str]:
    toks: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()*|":
            toks.append(c)
            i += 1
        elif c == "1":
            toks.append("1")
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


class _Parser:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> str | None:
        tok = self.peek()
        self.i += 1
        return tok

    def impl(self) -> Formula:
        left = self.excl()
        if self.peek() == "-o":
            self.take()
            return Lolli(left, self.impl())
        return left

    def excl(self) -> Formula:
        f = self.mult()
        while self.peek() == "-<":
            self.take()
            f = Excl(f, self.mult())
        return f

    def mult(self) -> Formula:
        f = self.unary()
        while self.peek() in ("*", "|"):
            op = self.take()
            g = self.unary()
            f = Tensor(f, g) if op == "*" else Par(f, g)
        return f

    def unary(self) -> Formula:
        tok = self.take()
        if tok is None:
            raise ParseError("unexpected end of formula")
        if tok == "(":
            f = self.impl()
            if self.take() != ")":
                raise ParseError("unbalanced '('")
            return f
        if tok == "1":
            return UnitI()
        if tok == "bot":
            return UnitBot()
        if "a" <= tok[0] <= "z":
            return Atom(tok)
        raise ParseError(f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    f = p.impl()
    if p.peek() is not None:
        raise ParseError(f"trailing input at token {p.peek()!r}")
    return f


# --------------------------------------------------------------- printing

_PREC_ARROW, _PREC_EXCL, _PREC_MULT, _PREC_ATOM = 0, 1, 2, 3


def _prec(f: Formula) -> int:
    match f:
        case Lolli():
            return _PREC_ARROW
        case Excl():
            return _PREC_EXCL
        case Tensor() | Par():
            return _PREC_MULT
        case _:
            return _PREC_ATOM


def _wrap(f: Formula, cond: bool) -> str:
    t = formula_text(f)
    return f"({t})" if cond else t


def formula_text(f: Formula) -> str:
    """Render with minimal parentheses; mixed `*`/`|` chains keep theirs so
    the grouping stays visible.  Labels do not print."""
    match f:
        case Atom(name=n):
            return n
        case UnitI():
            return "1"
        case UnitBot():
            return "bot"
        case Tensor(left=l, right=r) | Par(left=l, right=r):
            op = "*" if isinstance(f, Tensor) else "|"
            lt = _wrap(l, _prec(l) < _PREC_MULT or (_prec(l) == _PREC_MULT and type(l) is not type(f)))
            rt = _wrap(r, _prec(r) <= _PREC_MULT)
            return f"{lt}{op}{rt}"
        case Lolli(left=l, right=r):
            lt = _wrap(l, _prec(l) <= _PREC_ARROW)
            return f"{lt} -o {formula_text(r)}"
        case Excl(left=l, right=r):
            lt = _wrap(l, _prec(l) < _PREC_EXCL)
            rt = _wrap(r, _prec(r) <= _PREC_EXCL)
            return f"{lt} -< {rt}"
    raise TypeError(f"not a formula: {f!r}")
