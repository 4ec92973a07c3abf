"""Choice operators over a bounded input universe, plus the postulate
verification engine.

An operator is a total table from input sets (finite sets of sentence
classes, size-capped by a UniverseSpec) to outcome belief sets.  The
checker evaluates each rationality postulate as an explicit quantified
formula over the universe, vectorized with numpy boolean matrices.  The
recurring primitive is "the input set meets the outcome's theory":
A meets X iff some member of A follows from X.

Verdicts are reported per postulate with the first counterexample found
in deterministic scan order; quantifier instances whose constructed sets
(unions) fall outside the bounded universe are skipped and tallied, so a
"holds" verdict is always a claim about the stated bound only.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

import numpy as np

from . import graphs
from .logic import (
    And,
    Atom,
    BeliefSet,
    Bottom,
    Formula,
    Implies,
    InputSet,
    LanguageError,
    LanguageSpec,
    Not,
    Or,
    SentenceClass,
    Top,
    format_formula,
)
from .models import RelationalModel, choice_revise_via_model

UNIVERSE_CAP = 2000


class OutsideUniverseError(KeyError):
    def __init__(self, a: InputSet):
        super().__init__(f"input set of size {len(a)} is outside the bounded universe")
        self.input_set = a


class OperatorFormatError(ValueError):
    """Malformed operator file; message carries the offending location."""


def theory_meets(a: InputSet, x: BeliefSet) -> bool:
    """Does the theory of x contain some member of a?"""
    return any(x.mask & ~c.mask == 0 for c in a.classes)


@dataclass(frozen=True)
class UniverseSpec:
    """All input sets over the language's sentence classes up to a size cap."""

    lang: LanguageSpec
    max_input_size: int

    def __post_init__(self) -> None:
        if self.max_input_size < 0:
            raise LanguageError("max_input_size must be >= 0")
        self.lang.require_exhaustive()
        count = self.size
        if count > UNIVERSE_CAP:
            raise LanguageError(
                f"universe cap exceeded: {count} input sets > {UNIVERSE_CAP}"
            )

    @property
    def class_count(self) -> int:
        return self.lang.full_mask + 1

    @property
    def size(self) -> int:
        c = self.class_count
        return sum(math.comb(c, k) for k in range(min(self.max_input_size, c) + 1))


class _Tables:
    """Per-universe index structures, shared by every operator on it."""

    def __init__(self, u: UniverseSpec):
        self.u = u
        lang = u.lang
        c = u.class_count
        classes = [SentenceClass(lang, m) for m in range(c)]
        sets: list[InputSet] = []
        for k in range(min(u.max_input_size, c) + 1):
            for combo in itertools.combinations(range(c), k):
                sets.append(InputSet(lang, frozenset(classes[i] for i in combo)))
        self.sets = sets
        self.index = {s.mask_tuple: i for i, s in enumerate(sets)}
        n = len(sets)
        maxk = max(1, u.max_input_size)
        self.member = np.zeros((n, maxk), dtype=np.int64)
        self.valid = np.zeros((n, maxk), dtype=bool)
        for i, s in enumerate(sets):
            for j, m in enumerate(s.mask_tuple):
                self.member[i, j] = m
                self.valid[i, j] = True
        self.sizes = self.valid.sum(axis=1)
        self.empty_index = self.index[()]
        # one bit per sentence class: fast subset/union arithmetic
        self._bits = [sum(1 << m for m in s.mask_tuple) for s in sets]

    @functools.cached_property
    def singleton_index(self) -> np.ndarray:
        """Universe index of {class} for each class mask, -1 when absent."""
        c = self.u.class_count
        out = np.full(c, -1, dtype=np.int32)
        for m in range(c):
            out[m] = self.index.get((m,), -1)
        return out

    @functools.cached_property
    def subset(self) -> np.ndarray:
        n = len(self.sets)
        bits = self._bits
        out = np.zeros((n, n), dtype=bool)
        for a in range(n):
            ba = bits[a]
            out[a] = [ba & ~bb == 0 for bb in bits]
        return out

    @functools.cached_property
    def union_index(self) -> np.ndarray:
        n = len(self.sets)
        out = np.full((n, n), -1, dtype=np.int32)
        for a in range(n):
            ta = self.sets[a].mask_tuple
            for b in range(a, n):
                merged = tuple(sorted(set(ta) | set(self.sets[b].mask_tuple)))
                idx = self.index.get(merged, -1)
                out[a, b] = out[b, a] = idx
        return out

    @functools.cached_property
    def conj_sets(self) -> list[list[frozenset[int]]]:
        """Pairwise-conjunction member masks for every pair (may exceed the cap)."""
        n = len(self.sets)
        tuples = [s.mask_tuple for s in self.sets]
        out = []
        for a in range(n):
            row = []
            ta = tuples[a]
            for b in range(n):
                row.append(frozenset(x & y for x in ta for y in tuples[b]))
            out.append(row)
        return out

    @functools.cached_property
    def conj_index(self) -> np.ndarray:
        """Universe index of each pairwise conjunction, -1 when outside."""
        n = len(self.sets)
        out = np.full((n, n), -1, dtype=np.int32)
        for a in range(n):
            row = self.conj_sets[a]
            for b in range(n):
                out[a, b] = self.index.get(tuple(sorted(row[b])), -1)
        return out

    @functools.cached_property
    def conj3_index(self) -> np.ndarray:
        """Index of A conj B conj C, -1 when outside. Only for small universes."""
        n = len(self.sets)
        if n > 300:
            raise LanguageError(
                f"triple-conjunction table needs universe <= 300 sets, got {n}"
            )
        tuples = [s.mask_tuple for s in self.sets]
        memo: dict[tuple[frozenset[int], int], int] = {}
        out = np.full((n, n, n), -1, dtype=np.int32)
        for a in range(n):
            row = self.conj_sets[a]
            for b in range(n):
                ab = row[b]
                for c_i in range(n):
                    key = (ab, c_i)
                    got = memo.get(key)
                    if got is None:
                        members = frozenset(
                            x & y for x in ab for y in tuples[c_i]
                        )
                        got = self.index.get(tuple(sorted(members)), -1)
                        memo[key] = got
                    out[a, b, c_i] = got
        return out


@functools.lru_cache(maxsize=None)
def _tables(u: UniverseSpec) -> _Tables:
    return _Tables(u)


def enumerate_universe(u: UniverseSpec) -> list[InputSet]:
    """Deterministic order: size ascending, then member masks lexicographic."""
    return list(_tables(u).sets)


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChoiceOperator:
    """Total outcome table over a universe; outputs aligned with its order."""

    universe: UniverseSpec
    K: BeliefSet
    outputs: tuple[BeliefSet, ...]
    _stash: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.K.is_consistent:
            raise ValueError("K must be consistent")
        t = _tables(self.universe)
        if len(self.outputs) != len(t.sets):
            raise ValueError(
                f"table must cover all {len(t.sets)} universe inputs, got {len(self.outputs)}"
            )

    @property
    def lang(self) -> LanguageSpec:
        return self.universe.lang

    def outcome(self, a: InputSet) -> BeliefSet:
        i = _tables(self.universe).index.get(a.mask_tuple)
        if i is None:
            raise OutsideUniverseError(a)
        return self.outputs[i]

    @property
    def table(self) -> dict[InputSet, BeliefSet]:
        return dict(zip(_tables(self.universe).sets, self.outputs))

    @classmethod
    def from_function(
        cls, u: UniverseSpec, k: BeliefSet, fn: Callable[[InputSet], BeliefSet]
    ) -> "ChoiceOperator":
        return cls(u, k, tuple(fn(a) for a in _tables(u).sets))

    @classmethod
    def from_model(cls, model: RelationalModel, max_input_size: int) -> "ChoiceOperator":
        model.require_valid()
        u = UniverseSpec(model.lang, max_input_size)
        return cls.from_function(u, model.K, lambda a: choice_revise_via_model(model, a))

    def _kernel(self) -> "_OpKernel":
        if not self._stash:
            self._stash.append(_OpKernel(self))
        return self._stash[0]

    def to_json(self) -> dict:
        t = _tables(self.universe)
        return {
            "atoms": self.lang.atom_count,
            "max_input_size": self.universe.max_input_size,
            "K": self.K.encode(),
            "entries": [
                {"input": a.encode(), "output": o.encode()}
                for a, o in zip(t.sets, self.outputs)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChoiceOperator":
        try:
            lang = LanguageSpec(int(data["atoms"]))
            u = UniverseSpec(lang, int(data["max_input_size"]))
            k = BeliefSet.decode(data["K"], lang)
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise OperatorFormatError(f"bad operator data: {exc}") from exc
        t = _tables(u)
        got: dict[tuple[int, ...], BeliefSet] = {}
        for pos, e in enumerate(entries):
            try:
                a = InputSet.decode(e["input"], lang)
                o = BeliefSet.decode(e["output"], lang)
            except (KeyError, TypeError, ValueError) as exc:
                raise OperatorFormatError(f"entry {pos}: {exc}") from exc
            key = a.mask_tuple
            if key not in t.index:
                raise OperatorFormatError(f"entry {pos}: input outside the universe")
            if key in got:
                raise OperatorFormatError(f"entry {pos}: duplicate input")
            got[key] = o
        missing = [s for s in t.sets if s.mask_tuple not in got]
        if missing:
            raise OperatorFormatError(
                f"table not total: {len(missing)} universe inputs missing "
                f"(first: {missing[0].encode()})"
            )
        if not k.is_consistent:
            raise OperatorFormatError("K must be consistent")
        return cls(u, k, tuple(got[s.mask_tuple] for s in t.sets))


def random_operator(seed: int, u: UniverseSpec) -> ChoiceOperator:
    """Seeded table with outcomes uniform over all belief sets; K consistent."""
    rng = random.Random(seed)
    lang = u.lang
    k = BeliefSet(lang, rng.randrange(1, lang.full_mask + 1))
    outputs = tuple(
        BeliefSet(lang, rng.randrange(0, lang.full_mask + 1)) for _ in _tables(u).sets
    )
    return ChoiceOperator(u, k, outputs)


def save_operator(op: ChoiceOperator, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(op.to_json(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_operator(path: str) -> ChoiceOperator:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise OperatorFormatError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    if not isinstance(data, dict):
        raise OperatorFormatError(f"{path}: expected a JSON object")
    try:
        return ChoiceOperator.from_json(data)
    except OperatorFormatError as exc:
        raise OperatorFormatError(f"{path}: {exc}") from exc


class _OpKernel:
    """Numpy views of one operator: outcome masks and the meets matrix."""

    def __init__(self, op: ChoiceOperator):
        t = _tables(op.universe)
        self.t = t
        self.out = np.array([o.mask for o in op.outputs], dtype=np.int64)
        x = self.out[None, :, None]
        m = t.member[:, None, :]
        v = t.valid[:, None, :]
        # meets[a, b]: some member of A_a follows from the outcome of A_b
        self.meets = (((x & ~m) == 0) & v).any(axis=2)
        self.diag = self.meets.diagonal().copy()
        kmask = np.int64(op.K.mask)
        self.eq_k = self.out == kmask
        self.meets_k = (((kmask & ~t.member) == 0) & t.valid).any(axis=1)


# ---------------------------------------------------------------------------
# Postulates
# ---------------------------------------------------------------------------

class PostulateId(str, Enum):
    CLOSURE = "closure"
    RELATIVE_SUCCESS = "relative_success"
    REGULARITY = "regularity"
    CONFIRMATION = "confirmation"
    RECIPROCITY = "reciprocity"
    SUCCESS = "success"
    VACUITY = "vacuity"
    CONSISTENCY = "consistency"
    SYNTAX_IRRELEVANCE = "syntax_irrelevance"
    CAUTIOUSNESS = "cautiousness"
    DICHOTOMY = "dichotomy"
    STRONG_RECIPROCITY = "strong_reciprocity"


BASIC_POSTULATES = (
    PostulateId.CLOSURE,
    PostulateId.RELATIVE_SUCCESS,
    PostulateId.REGULARITY,
    PostulateId.CONFIRMATION,
    PostulateId.RECIPROCITY,
)

SUPPLEMENTARY_POSTULATES = (
    PostulateId.SUCCESS,
    PostulateId.VACUITY,
    PostulateId.CONSISTENCY,
)


@dataclass(frozen=True)
class Witness:
    inputs: tuple[InputSet, ...]
    outcomes: tuple[BeliefSet, ...]
    note: str

    def to_dict(self) -> dict:
        return {
            "inputs": [a.encode() for a in self.inputs],
            "outcomes": [o.encode() for o in self.outcomes],
            "note": self.note,
        }


@dataclass(frozen=True)
class PostulateReport:
    postulate: PostulateId
    holds: bool
    checked: int
    skipped: int = 0
    witness: Optional[Witness] = None

    def to_dict(self) -> dict:
        return {
            "postulate": self.postulate.value,
            "holds": self.holds,
            "checked": self.checked,
            "skipped": self.skipped,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def _pair_witness(op: ChoiceOperator, a: int, b: int, note: str) -> Witness:
    t = _tables(op.universe)
    return Witness(
        inputs=(t.sets[a], t.sets[b]),
        outcomes=(op.outputs[a], op.outputs[b]),
        note=note,
    )


def _check_closure(op: ChoiceOperator) -> PostulateReport:
    # outcomes are belief sets by construction (model sets are closed);
    # verify language agreement as the honest structural remnant
    for i, o in enumerate(op.outputs):
        if o.lang != op.lang:
            t = _tables(op.universe)
            return PostulateReport(
                PostulateId.CLOSURE,
                False,
                len(op.outputs),
                witness=Witness((t.sets[i],), (o,), "outcome over a different language"),
            )
    return PostulateReport(PostulateId.CLOSURE, True, len(op.outputs))


def _check_relative_success(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    bad = ~(k.eq_k | k.diag)
    n = len(op.outputs)
    if not bad.any():
        return PostulateReport(PostulateId.RELATIVE_SUCCESS, True, n)
    a = int(np.flatnonzero(bad)[0])
    t = _tables(op.universe)
    w = Witness(
        (t.sets[a],),
        (op.outputs[a],),
        "outcome differs from K yet contains no member of the input",
    )
    return PostulateReport(PostulateId.RELATIVE_SUCCESS, False, n, witness=w)


def _check_regularity(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    viol = k.meets & ~k.diag[:, None]
    n = len(op.outputs)
    if not viol.any():
        return PostulateReport(PostulateId.REGULARITY, True, n * n)
    a, b = (int(v) for v in np.argwhere(viol)[0])
    w = _pair_witness(
        op, a, b, "first set meets the second's outcome but not its own"
    )
    return PostulateReport(PostulateId.REGULARITY, False, n * n, witness=w)


def _check_confirmation(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    viol = k.meets_k & ~k.eq_k
    n = len(op.outputs)
    if not viol.any():
        return PostulateReport(PostulateId.CONFIRMATION, True, n)
    a = int(np.flatnonzero(viol)[0])
    t = _tables(op.universe)
    w = Witness(
        (t.sets[a],),
        (op.outputs[a],),
        "input meets K's theory but the outcome is not K",
    )
    return PostulateReport(PostulateId.CONFIRMATION, False, n, witness=w)


def _check_reciprocity(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    neq = k.out[:, None] != k.out[None, :]
    viol = k.meets & k.meets.T & neq
    n = len(op.outputs)
    if not viol.any():
        return PostulateReport(PostulateId.RECIPROCITY, True, n * n)
    a, b = (int(v) for v in np.argwhere(viol)[0])
    w = _pair_witness(op, a, b, "each set meets the other's outcome yet outcomes differ")
    return PostulateReport(PostulateId.RECIPROCITY, False, n * n, witness=w)


def _check_success(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    viol = (k.t.sizes > 0) & ~k.diag
    n = len(op.outputs)
    if not viol.any():
        return PostulateReport(PostulateId.SUCCESS, True, n)
    a = int(np.flatnonzero(viol)[0])
    t = _tables(op.universe)
    w = Witness((t.sets[a],), (op.outputs[a],), "nonempty input missing from its outcome")
    return PostulateReport(PostulateId.SUCCESS, False, n, witness=w)


def _check_vacuity(op: ChoiceOperator) -> PostulateReport:
    t = _tables(op.universe)
    e = t.empty_index
    if op.outputs[e] == op.K:
        return PostulateReport(PostulateId.VACUITY, True, 1)
    w = Witness((t.sets[e],), (op.outputs[e],), "empty input must return K")
    return PostulateReport(PostulateId.VACUITY, False, 1, witness=w)


def _check_consistency(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    t = k.t
    viol = k.out == 0
    bottom = t.index.get((0,))
    if bottom is not None:
        viol = viol.copy()
        viol[bottom] = False
    n = len(op.outputs)
    if not viol.any():
        return PostulateReport(PostulateId.CONSISTENCY, True, n)
    a = int(np.flatnonzero(viol)[0])
    w = Witness(
        (t.sets[a],),
        (op.outputs[a],),
        "inconsistent outcome for an input not equivalent to the contradiction singleton",
    )
    return PostulateReport(PostulateId.CONSISTENCY, False, n, witness=w)


def _check_syntax_irrelevance(op: ChoiceOperator) -> PostulateReport:
    # inputs are sentence classes: equivalent sets are the same set, so the
    # table cannot distinguish them; see syntax_probe for AST-level sampling
    return PostulateReport(PostulateId.SYNTAX_IRRELEVANCE, True, len(op.outputs))


def _check_cautiousness(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    t = k.t
    neq = k.out[:, None] != k.out[None, :]
    viol = t.subset & k.meets & neq
    n = len(op.outputs)
    if not viol.any():
        return PostulateReport(PostulateId.CAUTIOUSNESS, True, n * n)
    a, b = (int(v) for v in np.argwhere(viol)[0])
    w = _pair_witness(
        op, a, b, "subset meets the superset's outcome yet outcomes differ"
    )
    return PostulateReport(PostulateId.CAUTIOUSNESS, False, n * n, witness=w)


def _check_dichotomy(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    t = k.t
    n = len(op.outputs)
    ia, ib = np.triu_indices(n)
    uidx = t.union_index[ia, ib]
    valid = uidx >= 0
    outu = k.out[np.clip(uidx, 0, None)]
    viol = valid & (outu != k.out[ia]) & (outu != k.out[ib])
    checked = int(valid.sum())
    skipped = int((~valid).sum())
    if not viol.any():
        return PostulateReport(PostulateId.DICHOTOMY, True, checked, skipped)
    first = int(np.flatnonzero(viol)[0])
    a, b, u = int(ia[first]), int(ib[first]), int(uidx[first])
    w = Witness(
        (t.sets[a], t.sets[b], t.sets[u]),
        (op.outputs[a], op.outputs[b], op.outputs[u]),
        "outcome of the union matches neither part's outcome",
    )
    return PostulateReport(PostulateId.DICHOTOMY, False, checked, skipped, witness=w)


def _check_strong_reciprocity(op: ChoiceOperator) -> PostulateReport:
    k = op._kernel()
    t = k.t
    n = len(op.outputs)
    comps = graphs.strongly_connected_components(k.meets)
    for comp in comps:
        first = comp[0]
        for node in comp[1:]:
            if k.out[node] != k.out[first]:
                cycle = _scc_cycle(k.meets, comp, first, node)
                w = Witness(
                    tuple(t.sets[i] for i in cycle),
                    tuple(op.outputs[i] for i in cycle),
                    "loop of mutually meeting inputs with unequal outcomes",
                )
                return PostulateReport(
                    PostulateId.STRONG_RECIPROCITY, False, n * n, witness=w
                )
    return PostulateReport(PostulateId.STRONG_RECIPROCITY, True, n * n)


def _scc_cycle(adj: np.ndarray, comp: list[int], x: int, y: int) -> list[int]:
    """A directed cycle through x and y inside one strongly connected component."""
    inside = np.zeros(adj.shape[0], dtype=bool)
    inside[comp] = True
    sub = adj & inside[:, None] & inside[None, :]
    there = graphs.shortest_path(sub, x, y)
    back = graphs.shortest_path(sub, y, x)
    assert there is not None and back is not None
    return there + back[1:-1]


_CHECKERS = {
    PostulateId.CLOSURE: _check_closure,
    PostulateId.RELATIVE_SUCCESS: _check_relative_success,
    PostulateId.REGULARITY: _check_regularity,
    PostulateId.CONFIRMATION: _check_confirmation,
    PostulateId.RECIPROCITY: _check_reciprocity,
    PostulateId.SUCCESS: _check_success,
    PostulateId.VACUITY: _check_vacuity,
    PostulateId.CONSISTENCY: _check_consistency,
    PostulateId.SYNTAX_IRRELEVANCE: _check_syntax_irrelevance,
    PostulateId.CAUTIOUSNESS: _check_cautiousness,
    PostulateId.DICHOTOMY: _check_dichotomy,
    PostulateId.STRONG_RECIPROCITY: _check_strong_reciprocity,
}


def check_postulate(op: ChoiceOperator, p: PostulateId) -> PostulateReport:
    return _CHECKERS[p](op)


def check_postulates(
    op: ChoiceOperator, ps: Optional[Iterable[PostulateId]] = None
) -> dict[PostulateId, PostulateReport]:
    ps = tuple(ps) if ps is not None else tuple(PostulateId)
    return {p: check_postulate(op, p) for p in ps}


def passes(op: ChoiceOperator, ps: Iterable[PostulateId]) -> bool:
    return all(check_postulate(op, p).holds for p in ps)


def strong_reciprocity_bounded_loops(
    op: ChoiceOperator, max_len: int = 3
) -> Optional[Witness]:
    """Independent slow check: scan all simple loops up to max_len.

    Returns a violating loop witness or None.  Used to cross-validate the
    SCC criterion; a loop found here always implies an SCC violation.
    """
    k = op._kernel()
    t = k.t
    for cycle in graphs.simple_cycles_bounded(k.meets, max_len):
        outs = {int(k.out[i]) for i in cycle}
        if len(outs) > 1:
            return Witness(
                tuple(t.sets[i] for i in cycle),
                tuple(op.outputs[i] for i in cycle),
                f"violating loop of length {len(cycle)}",
            )
    return None


def witness_violates(op: ChoiceOperator, p: PostulateId, w: Witness) -> bool:
    """Re-evaluate a reported witness against the defining formula."""
    k = op.K
    if p == PostulateId.RELATIVE_SUCCESS:
        (a,) = w.inputs
        out = op.outcome(a)
        return out != k and not theory_meets(a, out)
    if p == PostulateId.REGULARITY:
        a, b = w.inputs
        return theory_meets(a, op.outcome(b)) and not theory_meets(a, op.outcome(a))
    if p == PostulateId.CONFIRMATION:
        (a,) = w.inputs
        return theory_meets(a, k) and op.outcome(a) != k
    if p == PostulateId.RECIPROCITY:
        a, b = w.inputs
        return (
            theory_meets(a, op.outcome(b))
            and theory_meets(b, op.outcome(a))
            and op.outcome(a) != op.outcome(b)
        )
    if p == PostulateId.SUCCESS:
        (a,) = w.inputs
        return len(a) > 0 and not theory_meets(a, op.outcome(a))
    if p == PostulateId.VACUITY:
        (a,) = w.inputs
        return len(a) == 0 and op.outcome(a) != k
    if p == PostulateId.CONSISTENCY:
        (a,) = w.inputs
        return a.mask_tuple != (0,) and not op.outcome(a).is_consistent
    if p == PostulateId.CAUTIOUSNESS:
        a, b = w.inputs
        return (
            a.issubset(b)
            and theory_meets(a, op.outcome(b))
            and op.outcome(a) != op.outcome(b)
        )
    if p == PostulateId.DICHOTOMY:
        a, b, u = w.inputs
        if a.union(b) != u:
            return False
        return op.outcome(u) != op.outcome(a) and op.outcome(u) != op.outcome(b)
    if p == PostulateId.STRONG_RECIPROCITY:
        cycle = w.inputs
        if len(cycle) < 2:
            return False
        edges_ok = all(
            theory_meets(cycle[i], op.outcome(cycle[(i + 1) % len(cycle)]))
            for i in range(len(cycle))
        )
        outs = {op.outcome(a) for a in cycle}
        return edges_ok and len(outs) > 1
    return False


# ---------------------------------------------------------------------------
# Derived-property equivalences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceItem:
    name: str
    applicable: bool
    holds: Optional[bool]
    detail: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "applicable": self.applicable,
            "holds": self.holds,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class EquivalenceReport:
    items: tuple[EquivalenceItem, ...]

    @property
    def all_confirmed(self) -> bool:
        return all(it.holds for it in self.items if it.applicable)

    def to_dict(self) -> dict:
        return {"items": [it.to_dict() for it in self.items], "all_confirmed": self.all_confirmed}


def check_equivalences(op: ChoiceOperator) -> EquivalenceReport:
    """Conditional equivalences between the core and derived postulates.

    Each item is checked only when its antecedent postulates hold on this
    operator; inapplicable items carry holds=None.
    """
    r = check_postulates(op)
    items = []

    ante = r[PostulateId.RELATIVE_SUCCESS].holds and r[PostulateId.REGULARITY].holds
    items.append(
        EquivalenceItem(
            "reciprocity_iff_cautiousness",
            ante,
            (r[PostulateId.RECIPROCITY].holds == r[PostulateId.CAUTIOUSNESS].holds)
            if ante
            else None,
            "given relative_success and regularity",
        )
    )

    ante = r[PostulateId.REGULARITY].holds
    items.append(
        EquivalenceItem(
            "reciprocity_iff_strong_reciprocity",
            ante,
            (r[PostulateId.RECIPROCITY].holds == r[PostulateId.STRONG_RECIPROCITY].holds)
            if ante
            else None,
            "given regularity",
        )
    )

    ante = all(r[p].holds for p in BASIC_POSTULATES)
    items.append(
        EquivalenceItem(
            "syntax_irrelevance_derived",
            ante,
            r[PostulateId.SYNTAX_IRRELEVANCE].holds if ante else None,
            "given the five core postulates",
        )
    )
    d = r[PostulateId.DICHOTOMY]
    items.append(
        EquivalenceItem(
            "dichotomy_derived",
            ante,
            d.holds if ante else None,
            f"given the five core postulates ({d.skipped} union instances outside the universe skipped)",
        )
    )
    return EquivalenceReport(tuple(items))


# ---------------------------------------------------------------------------
# AST-level syntax probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeDifference:
    left: tuple[str, ...]
    right: tuple[str, ...]
    left_outcome: list[str]
    right_outcome: list[str]


@dataclass(frozen=True)
class ProbeReport:
    samples: int
    differences: tuple[ProbeDifference, ...]

    @property
    def clean(self) -> bool:
        return not self.differences

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "differences": [d.__dict__ for d in self.differences],
        }


def lift_operator_to_syntax(op: ChoiceOperator) -> Callable[[frozenset], BeliefSet]:
    """Adapter evaluating formula sets through their sentence classes."""

    def run(formulas: frozenset) -> BeliefSet:
        a = InputSet.of(op.lang, *formulas)
        return op.outcome(a)

    return run


def _random_formula(rng: random.Random, lang: LanguageSpec, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.8:
            return Atom(rng.randrange(lang.atom_count))
        return Top() if roll < 0.9 else Bottom()
    kind = rng.randrange(4)
    if kind == 0:
        return Not(_random_formula(rng, lang, depth - 1))
    left = _random_formula(rng, lang, depth - 1)
    right = _random_formula(rng, lang, depth - 1)
    return [And, Or, Implies][kind - 1](left, right)


def _equivalent_variant(rng: random.Random, f: Formula) -> Formula:
    """AST-distinct formula with the same truth table."""
    roll = rng.randrange(3)
    if roll == 0:
        return Not(Not(f))
    if roll == 1:
        return And(f, Top())

    def commute(node: Formula) -> Formula:
        if isinstance(node, And):
            return And(commute(node.right), commute(node.left))
        if isinstance(node, Not):
            return Not(commute(node.child))
        if isinstance(node, Or):
            return Or(commute(node.right), commute(node.left))
        return node

    swapped = commute(f)
    return swapped if swapped != f else Not(Not(f))


def syntax_probe(
    op_syntactic: Callable[[frozenset], BeliefSet],
    samples: int,
    lang: Optional[LanguageSpec] = None,
    seed: int = 0,
    max_input_size: int = 2,
) -> ProbeReport:
    """Sample AST-distinct but logically identical input sets and compare.

    A syntax-sensitive adapter shows up as a nonempty difference list.
    """
    if lang is None:
        lang = LanguageSpec(2)
    rng = random.Random(seed)
    differences = []
    for _ in range(samples):
        size = rng.randrange(1, max_input_size + 1)
        left = frozenset(_random_formula(rng, lang, 2) for _ in range(size))
        right = frozenset(_equivalent_variant(rng, f) for f in left)
        if left == right:
            right = frozenset(Not(Not(f)) for f in left)
        out_l = op_syntactic(left)
        out_r = op_syntactic(right)
        if out_l != out_r:
            differences.append(
                ProbeDifference(
                    tuple(sorted(format_formula(f) for f in left)),
                    tuple(sorted(format_formula(f) for f in right)),
                    out_l.encode(),
                    out_r.encode(),
                )
            )
    return ProbeReport(samples, tuple(differences))
