"""Finite propositional core: formulas, sentence classes, belief sets.

Everything downstream works over a language with a small fixed number of
atoms (p0, p1, ...).  A valuation is an int in [0, 2**atom_count) whose
bit i is the truth value of atom i.  A formula denotes the set of
valuations satisfying it, packed into an int bitmask (bit v set iff
valuation v is a model).  Two formulas are interchangeable for every
operation in this package exactly when they have the same mask, so the
mask itself serves as the canonical sentence-class identity.

Belief sets are deductively closed theories, represented by their set of
models (same bitmask packing).  The empty mask is the inconsistent
theory (every sentence follows), the full mask is the trivial theory
(only tautologies follow).  Entailment, conjunction and theory queries
are all O(1) bit operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

# Hard caps. Valuation masks stay machine-word sized below these, and the
# exhaustive sweeps (all classes, all belief sets) stay enumerable.
MAX_ATOMS = 4
MAX_EXHAUSTIVE_ATOMS = 3


class LanguageError(ValueError):
    """Language or cap violation (too many atoms, exhaustive sweep too big)."""


class ParseError(ValueError):
    """Syntax error; carries the 0-based offset where parsing failed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class LanguageSpec:
    """A propositional language with atoms p0 .. p(atom_count-1)."""

    atom_count: int

    def __post_init__(self) -> None:
        if not 1 <= self.atom_count <= MAX_ATOMS:
            raise LanguageError(
                f"atom_count must be in 1..{MAX_ATOMS}, got {self.atom_count}"
            )

    @property
    def valuation_count(self) -> int:
        return 1 << self.atom_count

    @property
    def full_mask(self) -> int:
        return (1 << self.valuation_count) - 1

    def valuations(self) -> range:
        return range(self.valuation_count)

    def require_exhaustive(self) -> None:
        """Guard for operations that enumerate all 2**2**atom_count classes."""
        if self.atom_count > MAX_EXHAUSTIVE_ATOMS:
            raise LanguageError(
                f"exhaustive enumeration needs atom_count <= {MAX_EXHAUSTIVE_ATOMS}, "
                f"got {self.atom_count}"
            )


def valuation_to_bits(valuation: int, lang: LanguageSpec) -> str:
    """Encode a valuation as a bitstring; char i is the truth value of atom i."""
    return "".join("1" if valuation >> i & 1 else "0" for i in range(lang.atom_count))


def bits_to_valuation(bits: str, lang: LanguageSpec) -> int:
    if len(bits) != lang.atom_count or any(c not in "01" for c in bits):
        raise LanguageError(f"bad valuation string {bits!r} for {lang.atom_count} atoms")
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


# ---------------------------------------------------------------------------
# Formula syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Top, Bottom, Not, And, Or, Implies]


def evaluate(formula: Formula, valuation: int) -> bool:
    if isinstance(formula, Atom):
        return bool(valuation >> formula.index & 1)
    if isinstance(formula, Top):
        return True
    if isinstance(formula, Bottom):
        return False
    if isinstance(formula, Not):
        return not evaluate(formula.child, valuation)
    if isinstance(formula, And):
        return evaluate(formula.left, valuation) and evaluate(formula.right, valuation)
    if isinstance(formula, Or):
        return evaluate(formula.left, valuation) or evaluate(formula.right, valuation)
    if isinstance(formula, Implies):
        return not evaluate(formula.left, valuation) or evaluate(formula.right, valuation)
    raise TypeError(f"not a formula: {formula!r}")


class _Parser:
    """Recursive descent over: `->` (loosest, right-assoc), `|`, `&`, `~` (tightest)."""

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

    def parse(self) -> Formula:
        node = self.parse_implies()
        self.skip_ws()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return node

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        self.skip_ws()
        if self.text.startswith("->", self.pos):
            self.pos += 2
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek() == "|":
            self.pos += 1
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Formula:
        node = self.parse_unary()
        while self.peek() == "&":
            self.pos += 1
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self) -> Formula:
        ch = self.peek()
        if ch == "~":
            self.pos += 1
            return Not(self.parse_unary())
        if ch == "(":
            self.pos += 1
            node = self.parse_implies()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return node
        if ch == "T":
            self.pos += 1
            return Top()
        if ch == "F":
            self.pos += 1
            return Bottom()
        if ch == "p":
            start = self.pos
            self.pos += 1
            digits = ""
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                digits += self.text[self.pos]
                self.pos += 1
            if not digits:
                raise ParseError("expected atom index after 'p'", start)
            index = int(digits)
            if index >= self.lang.atom_count:
                raise ParseError(
                    f"atom index {index} out of range for {self.lang.atom_count} atoms",
                    start,
                )
            return Atom(index)
        if ch == "":
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected {ch!r}", self.pos)


def parse_formula(text: str, lang: LanguageSpec) -> Formula:
    return _Parser(text, lang).parse()


_PRECEDENCE = {Implies: 1, Or: 2, And: 3, Not: 4}


def format_formula(formula: Formula) -> str:
    """Render with minimal parentheses; parses back to the same tree."""

    def render(node: Formula, parent_prec: int, right_of_implies: bool) -> str:
        if isinstance(node, Atom):
            return f"p{node.index}"
        if isinstance(node, Top):
            return "T"
        if isinstance(node, Bottom):
            return "F"
        if isinstance(node, Not):
            return "~" + render(node.child, _PRECEDENCE[Not], False)
        prec = _PRECEDENCE[type(node)]
        if isinstance(node, Implies):
            # right-associative: only the right child may carry another bare ->
            body = (
                render(node.left, prec + 1, False)
                + " -> "
                + render(node.right, prec, True)
            )
        elif isinstance(node, Or):
            body = render(node.left, prec, False) + " | " + render(node.right, prec + 1, False)
        else:
            body = render(node.left, prec, False) + " & " + render(node.right, prec + 1, False)
        if prec < parent_prec or (prec == parent_prec and not right_of_implies and isinstance(node, Implies)):
            return "(" + body + ")"
        return body

    return render(formula, 0, False)


# ---------------------------------------------------------------------------
# Sentence classes and belief sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class SentenceClass:
    """A formula up to logical equivalence: its set of models, as a bitmask.

    Ordering (and every tie-break in this package) is by (lang, mask),
    which matches ordering by the canonical encoding.
    """

    lang: LanguageSpec
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.lang.full_mask:
            raise LanguageError(f"class mask {self.mask} out of range")

    @property
    def is_contradiction(self) -> bool:
        return self.mask == 0

    @property
    def is_tautology(self) -> bool:
        return self.mask == self.lang.full_mask

    def models(self) -> tuple[int, ...]:
        return tuple(v for v in self.lang.valuations() if self.mask >> v & 1)

    def entails(self, other: "SentenceClass") -> bool:
        return self.mask & ~other.mask == 0

    def conj(self, other: "SentenceClass") -> "SentenceClass":
        return SentenceClass(self.lang, self.mask & other.mask)

    def neg(self) -> "SentenceClass":
        return SentenceClass(self.lang, ~self.mask & self.lang.full_mask)

    def encode(self) -> list[str]:
        """Canonical form: sorted valuation bitstrings."""
        return sorted(valuation_to_bits(v, self.lang) for v in self.models())

    @classmethod
    def decode(cls, bits: Iterable[str], lang: LanguageSpec) -> "SentenceClass":
        mask = 0
        for b in bits:
            mask |= 1 << bits_to_valuation(b, lang)
        return cls(lang, mask)

    @classmethod
    def from_models(cls, lang: LanguageSpec, models: Iterable[int]) -> "SentenceClass":
        mask = 0
        for v in models:
            mask |= 1 << v
        return cls(lang, mask)


def class_of(formula: Union[Formula, str], lang: LanguageSpec) -> SentenceClass:
    """Map a formula (tree or source text) to its sentence class."""
    if isinstance(formula, str):
        formula = parse_formula(formula, lang)
    mask = 0
    for v in lang.valuations():
        if evaluate(formula, v):
            mask |= 1 << v
    return SentenceClass(lang, mask)


@dataclass(frozen=True, order=True)
class BeliefSet:
    """A deductively closed theory, identified by its set of models.

    mask == 0 is the inconsistent theory, mask == full the trivial one.
    A sentence is in the theory iff every model of the set satisfies it.
    """

    lang: LanguageSpec
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= self.lang.full_mask:
            raise LanguageError(f"belief set mask {self.mask} out of range")

    @property
    def is_consistent(self) -> bool:
        return self.mask != 0

    def believes(self, c: SentenceClass) -> bool:
        return self.mask & ~c.mask == 0

    def models(self) -> tuple[int, ...]:
        return tuple(v for v in self.lang.valuations() if self.mask >> v & 1)

    def encode(self) -> list[str]:
        return sorted(valuation_to_bits(v, self.lang) for v in self.models())

    @classmethod
    def decode(cls, bits: Iterable[str], lang: LanguageSpec) -> "BeliefSet":
        mask = 0
        for b in bits:
            mask |= 1 << bits_to_valuation(b, lang)
        return cls(lang, mask)

    @classmethod
    def trivial(cls, lang: LanguageSpec) -> "BeliefSet":
        return cls(lang, lang.full_mask)

    @classmethod
    def inconsistent(cls, lang: LanguageSpec) -> "BeliefSet":
        return cls(lang, 0)

    @classmethod
    def closure_of(cls, classes: Iterable[SentenceClass], lang: LanguageSpec) -> "BeliefSet":
        """Close a set of accepted sentences: intersect their models."""
        mask = lang.full_mask
        for c in classes:
            mask &= c.mask
        return cls(lang, mask)

    def theory_classes(self) -> Iterator[SentenceClass]:
        """All sentence classes this theory entails. Exhaustive-cap guarded."""
        self.lang.require_exhaustive()
        for m in range(self.lang.full_mask + 1):
            if self.mask & ~m == 0:
                yield SentenceClass(self.lang, m)


def entails(x: BeliefSet, c: SentenceClass) -> bool:
    """Theory membership: c follows from x iff every model of x satisfies c."""
    return x.mask & ~c.mask == 0


# ---------------------------------------------------------------------------
# Input sets (finite sets of sentences offered for acceptance)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InputSet:
    """A finite set of sentence classes. The empty set is allowed."""

    lang: LanguageSpec
    classes: frozenset[SentenceClass]

    @classmethod
    def of(cls, lang: LanguageSpec, *items: Union[SentenceClass, Formula, str]) -> "InputSet":
        out = set()
        for it in items:
            out.add(it if isinstance(it, SentenceClass) else class_of(it, lang))
        return cls(lang, frozenset(out))

    @classmethod
    def empty(cls, lang: LanguageSpec) -> "InputSet":
        return cls(lang, frozenset())

    def __iter__(self) -> Iterator[SentenceClass]:
        return iter(sorted(self.classes))

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, c: SentenceClass) -> bool:
        return c in self.classes

    @property
    def mask_tuple(self) -> tuple[int, ...]:
        """Sorted member masks; the canonical identity of this set."""
        return tuple(sorted(c.mask for c in self.classes))

    def union(self, other: "InputSet") -> "InputSet":
        return InputSet(self.lang, self.classes | other.classes)

    def issubset(self, other: "InputSet") -> bool:
        return self.classes <= other.classes

    def encode(self) -> list[list[str]]:
        return [c.encode() for c in sorted(self.classes)]

    @classmethod
    def decode(cls, data: Iterable[Iterable[str]], lang: LanguageSpec) -> "InputSet":
        return cls(lang, frozenset(SentenceClass.decode(bits, lang) for bits in data))


def parse_input_set(text: str, lang: LanguageSpec) -> InputSet:
    """Comma-separated formulas -> InputSet. Blank text is the empty set."""
    if not text.strip():
        return InputSet.empty(lang)
    return InputSet.of(lang, *[part.strip() for part in text.split(",")])


def conj_all(a: InputSet) -> SentenceClass:
    """Conjunction of every member; the empty conjunction is the tautology."""
    mask = a.lang.full_mask
    for c in a.classes:
        mask &= c.mask
    return SentenceClass(a.lang, mask)


def pairwise_conj(a: InputSet, b: InputSet) -> InputSet:
    """All conjunctions of one member from each set."""
    return InputSet(
        a.lang,
        frozenset(
            SentenceClass(a.lang, x.mask & y.mask)
            for x, y in itertools.product(a.classes, b.classes)
        ),
    )


def set_equiv(a: InputSet, b: InputSet) -> bool:
    """Element-wise equivalence in both directions.

    Members are sentence classes (already quotiented by equivalence), so
    this is exactly set equality.
    """
    return a.classes == b.classes


# ---------------------------------------------------------------------------
# Exhaustive enumerations (small languages only)
# ---------------------------------------------------------------------------

def enumerate_classes(lang: LanguageSpec) -> list[SentenceClass]:
    """Every sentence class, ascending by mask (contradiction first)."""
    lang.require_exhaustive()
    return [SentenceClass(lang, m) for m in range(lang.full_mask + 1)]


def enumerate_belief_sets(lang: LanguageSpec) -> list[BeliefSet]:
    """Every theory, ascending by mask (inconsistent first, trivial last)."""
    lang.require_exhaustive()
    return [BeliefSet(lang, m) for m in range(lang.full_mask + 1)]
