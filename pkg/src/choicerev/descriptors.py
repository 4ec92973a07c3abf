"""Descriptors: conditions on belief sets, built from "believes phi" atoms.

An atomic descriptor B(phi) is satisfied by a belief set X iff phi is in
X's theory.  Molecular descriptors combine atoms with !, &, |, ->.  A
composite descriptor is a set of molecular ones, satisfied when every
member is.  The choice descriptor of a nonempty input set A is the
disjunction of B(phi) over phi in A; a belief set satisfies it exactly
when its theory meets A.

Concrete syntax:  B(p0) & !B(p1 -> p0), members of a composite separated
by commas.  Operator binding, tightest first: !, &, |, -> (right-assoc).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .logic import (
    BeliefSet,
    InputSet,
    LanguageSpec,
    ParseError,
    SentenceClass,
    _Parser,
    entails,
    format_formula,
    parse_formula,
)


class DescriptorError(ValueError):
    pass


@dataclass(frozen=True)
class BelAtom:
    cls: SentenceClass


@dataclass(frozen=True)
class DescNot:
    child: "Molecular"


@dataclass(frozen=True)
class DescAnd:
    left: "Molecular"
    right: "Molecular"


@dataclass(frozen=True)
class DescOr:
    left: "Molecular"
    right: "Molecular"


@dataclass(frozen=True)
class DescImplies:
    left: "Molecular"
    right: "Molecular"


Molecular = Union[BelAtom, DescNot, DescAnd, DescOr, DescImplies]
Descriptor = frozenset  # of Molecular


def satisfies(x: BeliefSet, d: Molecular) -> bool:
    """Recursive satisfaction of one molecular descriptor."""
    if isinstance(d, BelAtom):
        return entails(x, d.cls)
    if isinstance(d, DescNot):
        return not satisfies(x, d.child)
    if isinstance(d, DescAnd):
        return satisfies(x, d.left) and satisfies(x, d.right)
    if isinstance(d, DescOr):
        return satisfies(x, d.left) or satisfies(x, d.right)
    if isinstance(d, DescImplies):
        return not satisfies(x, d.left) or satisfies(x, d.right)
    raise TypeError(f"not a descriptor: {d!r}")


def satisfies_composite(x: BeliefSet, descriptor: Descriptor) -> bool:
    return all(satisfies(x, d) for d in descriptor)


def choice_descriptor(a: InputSet) -> Molecular:
    """B(phi0) | B(phi1) | ... over the members of a, in canonical order.

    Satisfied by X iff X's theory intersects a.  Undefined for empty a.
    """
    members = sorted(a.classes)
    if not members:
        raise DescriptorError("choice descriptor undefined for the empty input set")
    node: Molecular = BelAtom(members[0])
    for c in members[1:]:
        node = DescOr(node, BelAtom(c))
    return node


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------

class _DescParser:
    def __init__(self, text: str, lang: LanguageSpec):
        self.text = text
        self.lang = lang
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_composite(self) -> Descriptor:
        members = [self.parse_implies()]
        while self.peek() == ",":
            self.pos += 1
            members.append(self.parse_implies())
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return frozenset(members)

    def parse_implies(self) -> Molecular:
        left = self.parse_or()
        self.skip_ws()
        if self.text.startswith("->", self.pos):
            self.pos += 2
            return DescImplies(left, self.parse_implies())
        return left

    def parse_or(self) -> Molecular:
        node = self.parse_and()
        while self.peek() == "|":
            self.pos += 1
            node = DescOr(node, self.parse_and())
        return node

    def parse_and(self) -> Molecular:
        node = self.parse_unary()
        while self.peek() == "&":
            self.pos += 1
            node = DescAnd(node, self.parse_unary())
        return node

    def parse_unary(self) -> Molecular:
        ch = self.peek()
        if ch == "!":
            self.pos += 1
            return DescNot(self.parse_unary())
        if ch == "(":
            self.pos += 1
            node = self.parse_implies()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return node
        if ch == "B":
            self.pos += 1
            if self.peek() != "(":
                raise ParseError("expected '(' after 'B'", self.pos)
            self.pos += 1
            # hand off to the formula parser at the current offset
            sub = _Parser(self.text, self.lang)
            sub.pos = self.pos
            formula = sub.parse_implies()
            self.pos = sub.pos
            if self.peek() != ")":
                raise ParseError("expected ')' closing 'B('", self.pos)
            self.pos += 1
            from .logic import class_of

            return BelAtom(class_of(formula, self.lang))
        if ch == "":
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected {ch!r}", self.pos)


def parse_descriptor(text: str, lang: LanguageSpec) -> Descriptor:
    """Parse a composite descriptor (comma-separated molecular members)."""
    return _DescParser(text, lang).parse_composite()


def parse_molecular(text: str, lang: LanguageSpec) -> Molecular:
    d = parse_descriptor(text, lang)
    if len(d) != 1:
        raise DescriptorError("expected a single molecular descriptor")
    return next(iter(d))


_PREC = {DescImplies: 1, DescOr: 2, DescAnd: 3, DescNot: 4}


def format_molecular(d: Molecular) -> str:
    def render(node: Molecular, parent_prec: int, right_of_implies: bool) -> str:
        if isinstance(node, BelAtom):
            # render a canonical formula for the class: disjunction of minterms
            return f"B({_class_text(node.cls)})"
        if isinstance(node, DescNot):
            return "!" + render(node.child, _PREC[DescNot], False)
        prec = _PREC[type(node)]
        if isinstance(node, DescImplies):
            body = render(node.left, prec + 1, False) + " -> " + render(node.right, prec, True)
        elif isinstance(node, DescOr):
            body = render(node.left, prec, False) + " | " + render(node.right, prec + 1, False)
        else:
            body = render(node.left, prec, False) + " & " + render(node.right, prec + 1, False)
        if prec < parent_prec or (prec == parent_prec and not right_of_implies and isinstance(node, DescImplies)):
            return "(" + body + ")"
        return body

    return render(d, 0, False)


def format_descriptor(descriptor: Descriptor) -> str:
    return ", ".join(sorted(format_molecular(m) for m in descriptor))


def _class_text(c: SentenceClass) -> str:
    """A formula whose class is c: disjunction of model minterms."""
    if c.is_contradiction:
        return "F"
    if c.is_tautology:
        return "T"
    terms = []
    for v in c.models():
        lits = []
        for i in range(c.lang.atom_count):
            lits.append(f"p{i}" if v >> i & 1 else f"~p{i}")
        terms.append(" & ".join(lits) if len(lits) == 1 else "(" + " & ".join(lits) + ")")
    return " | ".join(terms)


def formula_for_class(c: SentenceClass) -> str:
    """Readable source text denoting exactly this class."""
    text = _class_text(c)
    # sanity: the text must parse back to the same class
    from .logic import class_of

    assert class_of(parse_formula(text, c.lang), c.lang) == c
    return text


__all__ = [
    "BelAtom",
    "DescNot",
    "DescAnd",
    "DescOr",
    "DescImplies",
    "Molecular",
    "Descriptor",
    "DescriptorError",
    "satisfies",
    "satisfies_composite",
    "choice_descriptor",
    "parse_descriptor",
    "parse_molecular",
    "format_molecular",
    "format_descriptor",
    "formula_for_class",
    "format_formula",
]
