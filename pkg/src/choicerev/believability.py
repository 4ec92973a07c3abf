"""Believability orderings and their set-level counterparts.

A single-sentence relation ranks sentence classes by how willing the
agent is to accept them; the set-level relation compares finite input
sets ("it is at least as easy to accept some member of A as some member
of B").  Three interchangeable backings answer set-level queries: an
explicit table over a bounded universe, a pointwise lift of a
single-sentence relation, and a derivation from a choice operator's
outcome table.  Postulate suites for both levels, the lift/projection
translations, relation-driven revision, and the metatheorem checkers
used by the test battery all live here.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from . import graphs
from .logic import (
    BeliefSet,
    InputSet,
    LanguageError,
    LanguageSpec,
    SentenceClass,
    conj_all,
    pairwise_conj,
)
from .models import GenerationError
from .operators import (
    ChoiceOperator,
    OutsideUniverseError,
    UniverseSpec,
    _tables,
)


class RelationOperationError(ValueError):
    """A relation operation hit a precondition failure at runtime."""


class RelationFormatError(ValueError):
    """Malformed relation file; message carries the offending location."""


class RelationPostulateId(str, Enum):
    TRANSITIVITY = "transitivity"
    WEAK_COUPLING = "weak_coupling"
    COUPLING = "coupling"
    COUNTER_DOMINANCE = "counter_dominance"
    MINIMALITY = "minimality"
    MAXIMALITY = "maximality"
    COMPLETENESS = "completeness"
    DETERMINATION = "determination"
    UNION = "union"


QUASI_LINEAR_POSTULATES = (
    RelationPostulateId.TRANSITIVITY,
    RelationPostulateId.WEAK_COUPLING,
    RelationPostulateId.COUPLING,
    RelationPostulateId.COUNTER_DOMINANCE,
    RelationPostulateId.MINIMALITY,
    RelationPostulateId.MAXIMALITY,
    RelationPostulateId.COMPLETENESS,
)

STANDARD_POSTULATES = tuple(RelationPostulateId)

# the ones whose set-level form needs constructed conjunction sets
_SINGLE_ONLY = ()
_MULTI_ONLY = (RelationPostulateId.DETERMINATION, RelationPostulateId.UNION)


@dataclass(frozen=True)
class RelationWitness:
    items: tuple[Union[SentenceClass, InputSet], ...]
    note: str

    def to_dict(self) -> dict:
        return {"items": [x.encode() for x in self.items], "note": self.note}


@dataclass(frozen=True)
class RelationReport:
    postulate: RelationPostulateId
    variant: str  # "single" | "multi"
    holds: bool
    checked: int
    skipped: int = 0
    witness: Optional[RelationWitness] = None

    def to_dict(self) -> dict:
        return {
            "postulate": self.postulate.value,
            "variant": self.variant,
            "holds": self.holds,
            "checked": self.checked,
            "skipped": self.skipped,
            "witness": self.witness.to_dict() if self.witness else None,
        }


# ---------------------------------------------------------------------------
# Single-sentence relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BelievabilityRelation:
    """Total boolean matrix over sentence classes, one row bitmask per class.

    Bit j of rows[i] set means: the class with mask i is at least as easy
    to accept as the class with mask j.
    """

    lang: LanguageSpec
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        self.lang.require_exhaustive()
        c = self.lang.full_mask + 1
        if len(self.rows) != c:
            raise ValueError(f"expected {c} rows, got {len(self.rows)}")
        limit = 1 << c
        for i, r in enumerate(self.rows):
            if not 0 <= r < limit:
                raise ValueError(f"row {i} out of range")

    @property
    def class_count(self) -> int:
        return self.lang.full_mask + 1

    def holds(self, a: SentenceClass, b: SentenceClass) -> bool:
        return bool((self.rows[a.mask] >> b.mask) & 1)

    def equiv(self, a: SentenceClass, b: SentenceClass) -> bool:
        return self.holds(a, b) and self.holds(b, a)

    def matrix(self) -> np.ndarray:
        c = self.class_count
        out = np.zeros((c, c), dtype=bool)
        for i, r in enumerate(self.rows):
            for j in range(c):
                out[i, j] = (r >> j) & 1
        return out

    @classmethod
    def from_matrix(cls, lang: LanguageSpec, m: np.ndarray) -> "BelievabilityRelation":
        c = lang.full_mask + 1
        rows = tuple(int(sum(1 << j for j in range(c) if m[i, j])) for i in range(c))
        return cls(lang, rows)

    @classmethod
    def from_layers(cls, lang: LanguageSpec, layers: list[list[int]]) -> "BelievabilityRelation":
        """Total preorder: class in an earlier layer is easier to accept."""
        c = lang.full_mask + 1
        rank = {}
        for i, layer in enumerate(layers):
            for m in layer:
                rank[m] = i
        total = sum(len(layer) for layer in layers)
        if total != c or sorted(rank) != list(range(c)):
            raise ValueError("layers must partition the class universe")
        rows = tuple(
            sum(1 << j for j in range(c) if rank[i] <= rank[j]) for i in range(c)
        )
        return cls(lang, rows)

    def layers(self) -> list[list[int]]:
        """Recover ordered layers when the relation is a total preorder."""
        c = self.class_count
        score = [bin(self.rows[i]).count("1") for i in range(c)]
        order = sorted(range(c), key=lambda i: -score[i])
        out: list[list[int]] = []
        for i in order:
            if out and score[out[-1][0]] == score[i]:
                out[-1].append(i)
            else:
                out.append([i])
        return out


# ---------------------------------------------------------------------------
# Set-level relations
# ---------------------------------------------------------------------------

class MultiBelievabilityRelation:
    """Set-level comparison with memoized point queries.

    kind is "table" (bounded, explicit matrix), "lifted" (unbounded,
    backed by a single-sentence relation), or "operator" (bounded,
    derived from a revision operator's table).
    """

    def __init__(
        self,
        lang: LanguageSpec,
        fn: Callable[[InputSet, InputSet], bool],
        universe: Optional[UniverseSpec] = None,
        kind: str = "custom",
    ):
        self.lang = lang
        self.universe = universe
        self.kind = kind
        self._fn = fn
        self._memo: dict[tuple, bool] = {}
        self._table_cache: dict[UniverseSpec, np.ndarray] = {}
        self._base: Optional[BelievabilityRelation] = None

    def holds(self, a: InputSet, b: InputSet) -> bool:
        key = (a.mask_tuple, b.mask_tuple)
        got = self._memo.get(key)
        if got is None:
            got = self._memo[key] = bool(self._fn(a, b))
        return got

    def strictly(self, a: InputSet, b: InputSet) -> bool:
        return self.holds(a, b) and not self.holds(b, a)

    def equiv(self, a: InputSet, b: InputSet) -> bool:
        return self.holds(a, b) and self.holds(b, a)

    def table_over(self, u: UniverseSpec) -> np.ndarray:
        got = self._table_cache.get(u)
        if got is None:
            got = self._table_cache[u] = self._materialize(u)
        return got

    def _materialize(self, u: UniverseSpec) -> np.ndarray:
        if self._base is not None:
            return _lift_table(self._base, u)
        sets = _tables(u).sets
        n = len(sets)
        out = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                out[i, j] = self.holds(a, b)
        return out

    @classmethod
    def from_table(
        cls, u: UniverseSpec, matrix: np.ndarray, kind: str = "table"
    ) -> "MultiBelievabilityRelation":
        t = _tables(u)
        n = len(t.sets)
        if matrix.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {matrix.shape}")
        m = matrix.astype(bool)

        def fn(a: InputSet, b: InputSet) -> bool:
            ia = t.index.get(a.mask_tuple)
            ib = t.index.get(b.mask_tuple)
            if ia is None:
                raise OutsideUniverseError(a)
            if ib is None:
                raise OutsideUniverseError(b)
            return bool(m[ia, ib])

        rel = cls(u.lang, fn, universe=u, kind=kind)
        rel._table_cache[u] = m
        return rel


def _lift_table(base: BelievabilityRelation, u: UniverseSpec) -> np.ndarray:
    t = _tables(u)
    single = base.matrix()
    mem = t.member
    look = single[mem[:, None, :, None], mem[None, :, None, :]]
    v_b = t.valid[None, :, None, :]
    all_b = (look | ~v_b).all(axis=3)
    m = (all_b & t.valid[:, None, :]).any(axis=2)
    m[:, t.empty_index] = True
    return m


def lift(base: BelievabilityRelation) -> MultiBelievabilityRelation:
    """Set comparison through best members.

    A is at least as acceptable as B iff B is empty or some member of A
    is at least as acceptable as every member of B.  Answers queries of
    any size; in particular the empty set sits above nonempty sets only.
    """

    def fn(a: InputSet, b: InputSet) -> bool:
        if len(b) == 0:
            return True
        return any(
            all(base.holds(x, y) for y in b.classes) for x in a.classes
        )

    rel = MultiBelievabilityRelation(base.lang, fn, universe=None, kind="lifted")
    rel._base = base
    return rel


def project(mb: MultiBelievabilityRelation) -> BelievabilityRelation:
    """Restriction to singleton comparisons."""
    lang = mb.lang
    c = lang.full_mask + 1
    m = np.zeros((c, c), dtype=bool)
    for i in range(c):
        a = InputSet.of(lang, SentenceClass(lang, i))
        for j in range(c):
            m[i, j] = mb.holds(a, InputSet.of(lang, SentenceClass(lang, j)))
    return BelievabilityRelation.from_matrix(lang, m)


def package_relation(base: BelievabilityRelation, a: InputSet, b: InputSet) -> bool:
    """Whole-package comparison: reduce each set to its conjunction."""
    return base.holds(conj_all(a), conj_all(b))


def derive_mb_from_operator(op: ChoiceOperator) -> MultiBelievabilityRelation:
    """Read a set-level ordering off an operator's table.

    A counts as at least as acceptable as B when either B's outcome
    rejects all of B, or A's outcome accepts part of A and a chain of
    inputs, each meeting the next one's outcome, links A's outcome to
    B's.  Chains are resolved by reachability over the outcome-equality
    quotient, computed once.
    """
    k = op._kernel()
    n = len(op.outputs)
    uniq, inv = np.unique(k.out, return_inverse=True)
    g = len(uniq)
    ge = np.zeros((g, g), dtype=bool)
    groups = [np.flatnonzero(inv == i) for i in range(g)]
    for i in range(g):
        for j in range(g):
            ge[i, j] = k.meets[np.ix_(groups[i], groups[j])].any()
    reach = graphs.reachability(ge) | np.eye(g, dtype=bool)
    m = (~k.diag)[None, :] | (k.diag[:, None] & reach[inv[:, None], inv[None, :]])
    return MultiBelievabilityRelation.from_table(op.universe, m, kind="operator")


# ---------------------------------------------------------------------------
# Relation-driven revision
# ---------------------------------------------------------------------------

def representation_element(mb: MultiBelievabilityRelation, a: InputSet) -> SentenceClass:
    """A member exactly as acceptable as the whole set.

    Deterministic tie-break: smallest canonical class encoding.
    """
    if len(a) == 0:
        raise ValueError("input set must be nonempty")
    found = [
        c
        for c in a.classes
        if mb.equiv(InputSet.of(a.lang, c), a)
    ]
    if not found:
        raise RelationOperationError("no representation element")
    return min(found, key=lambda c: c.encode())


def revise_via_mb(
    mb: MultiBelievabilityRelation, k: BeliefSet, a: InputSet
) -> BeliefSet:
    """Revision determined by a set-level ordering.

    When the input is strictly easier to accept than the empty set, the
    outcome's theory collects every class whose adjunction leaves the
    input's rank unchanged; otherwise the prior state is kept.  The
    collected theory must be deductively closed.
    """
    lang = k.lang
    empty = InputSet.empty(lang)
    if not (mb.holds(a, empty) and not mb.holds(empty, a)):
        return k
    full = lang.full_mask
    chosen: list[int] = []
    for m in range(full + 1):
        adjoined = pairwise_conj(a, InputSet.of(lang, SentenceClass(lang, m)))
        if mb.equiv(a, adjoined):
            chosen.append(m)
    mask = full
    for m in chosen:
        mask &= m
    closed = [x for x in range(full + 1) if mask & ~x & full == 0]
    if closed != chosen:
        raise RelationOperationError("result not closed")
    return BeliefSet(lang, mask)


# ---------------------------------------------------------------------------
# Postulate checks: single variant
# ---------------------------------------------------------------------------

def _single_report(
    p: RelationPostulateId,
    holds: bool,
    checked: int,
    witness: Optional[RelationWitness] = None,
) -> RelationReport:
    return RelationReport(p, "single", holds, checked, 0, witness)


def _cls(lang: LanguageSpec, m: int) -> SentenceClass:
    return SentenceClass(lang, m)


def _check_single(r: BelievabilityRelation, p: RelationPostulateId) -> RelationReport:
    lang = r.lang
    c = r.class_count
    l = r.matrix()

    if p == RelationPostulateId.TRANSITIVITY:
        viol = (l @ l) & ~l
        if not viol.any():
            return _single_report(p, True, c ** 3)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        mid = int(np.flatnonzero(l[a] & l[:, b])[0])
        w = RelationWitness(
            (_cls(lang, a), _cls(lang, mid), _cls(lang, b)),
            "chain holds but the endpoints do not compare",
        )
        return _single_report(p, False, c ** 3, w)

    if p == RelationPostulateId.COUPLING:
        masks = np.arange(c)
        conj = masks[:, None] & masks[None, :]
        eq = l & l.T
        target = eq[np.arange(c)[:, None], conj]
        viol = eq & ~target
        if not viol.any():
            return _single_report(p, True, c * c)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        w = RelationWitness(
            (_cls(lang, a), _cls(lang, b), _cls(lang, a & b)),
            "equally acceptable pair whose conjunction drops rank",
        )
        return _single_report(p, False, c * c, w)

    if p == RelationPostulateId.WEAK_COUPLING:
        masks = np.arange(c)
        eq = l & l.T
        for a in range(c):
            prem = eq[a, a & masks]
            pair = prem[:, None] & prem[None, :]
            triple = (a & masks)[:, None] & masks[None, :]
            concl = eq[a, triple]
            viol = pair & ~concl
            if viol.any():
                b, d = (int(v) for v in np.argwhere(viol)[0])
                w = RelationWitness(
                    (_cls(lang, a), _cls(lang, b), _cls(lang, d)),
                    "both single adjunctions keep rank but the joint one drops it",
                )
                return _single_report(p, False, c ** 3, w)
        return _single_report(p, True, c ** 3)

    if p == RelationPostulateId.COUNTER_DOMINANCE:
        masks = np.arange(c)
        ent = (masks[:, None] & ~masks[None, :] & lang.full_mask) == 0
        viol = ent & ~l.T
        if not viol.any():
            return _single_report(p, True, c * c)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        w = RelationWitness(
            (_cls(lang, a), _cls(lang, b)),
            "logically weaker class is not at least as acceptable",
        )
        return _single_report(p, False, c * c, w)

    if p == RelationPostulateId.MINIMALITY:
        bottom = [m for m in range(c) if bool(l[m].all())]
        k_mask = lang.full_mask
        for m in bottom:
            k_mask &= m
        closed = [m for m in range(c) if k_mask & ~m & lang.full_mask == 0]
        if k_mask == 0:
            w = RelationWitness(tuple(), "universally acceptable classes force an inconsistent state")
            return _single_report(p, False, c, w)
        if closed != bottom:
            off = next(iter(set(closed) ^ set(bottom)))
            w = RelationWitness(
                (_cls(lang, off),),
                "universally acceptable classes do not form a deductively closed theory",
            )
            return _single_report(p, False, c, w)
        return _single_report(p, True, c)

    if p == RelationPostulateId.MAXIMALITY:
        top = np.flatnonzero(l.all(axis=0))
        bad = [int(m) for m in top if m != 0]
        if not bad:
            return _single_report(p, True, c)
        w = RelationWitness(
            (_cls(lang, bad[0]),),
            "a satisfiable class sits at the very top",
        )
        return _single_report(p, False, c, w)

    if p == RelationPostulateId.COMPLETENESS:
        viol = ~l & ~l.T
        if not viol.any():
            return _single_report(p, True, c * c)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        w = RelationWitness((_cls(lang, a), _cls(lang, b)), "incomparable pair")
        return _single_report(p, False, c * c, w)

    raise ValueError(f"postulate {p.value} has no single-sentence variant")


# ---------------------------------------------------------------------------
# Postulate checks: multi variant
# ---------------------------------------------------------------------------

def _check_multi(
    rel: MultiBelievabilityRelation, p: RelationPostulateId, u: UniverseSpec
) -> RelationReport:
    t = _tables(u)
    m = rel.table_over(u)
    sets = t.sets
    n = len(sets)
    lang = u.lang

    def report(holds, checked, skipped=0, witness=None):
        return RelationReport(p, "multi", holds, checked, skipped, witness)

    if p == RelationPostulateId.TRANSITIVITY:
        viol = (m @ m) & ~m
        if not viol.any():
            return report(True, n ** 3)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        mid = int(np.flatnonzero(m[a] & m[:, b])[0])
        w = RelationWitness(
            (sets[a], sets[mid], sets[b]),
            "chain holds but the endpoints do not compare",
        )
        return report(False, n ** 3, witness=w)

    if p == RelationPostulateId.COUPLING:
        eq = m & m.T
        c2 = t.conj_index
        ok = c2 >= 0
        target = eq[np.arange(n)[:, None], np.clip(c2, 0, None)]
        viol = eq & ok & ~target
        skipped = int((~ok).sum())
        checked = n * n - skipped
        if not viol.any():
            return report(True, checked, skipped)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        w = RelationWitness(
            (sets[a], sets[b], sets[int(c2[a, b])]),
            "equally acceptable pair whose pairwise conjunction drops rank",
        )
        return report(False, checked, skipped, w)

    if p == RelationPostulateId.WEAK_COUPLING:
        eq = m & m.T
        c2 = t.conj_index
        c3 = t.conj3_index
        checked = 0
        skipped = 0
        first = None
        for a in range(n):
            row2 = c2[a]
            ok2 = row2 >= 0
            prem = np.zeros(n, dtype=bool)
            prem[ok2] = eq[a, row2[ok2]]
            tgt = c3[a]
            ok3 = tgt >= 0
            evaluable = ok2[:, None] & ok2[None, :] & ok3
            checked += int(evaluable.sum())
            skipped += n * n - int(evaluable.sum())
            concl = eq[a, np.clip(tgt, 0, None)]
            viol = evaluable & prem[:, None] & prem[None, :] & ~concl
            if first is None and viol.any():
                b, d = (int(v) for v in np.argwhere(viol)[0])
                first = RelationWitness(
                    (sets[a], sets[b], sets[d]),
                    "both pairwise adjunctions keep rank but the triple one drops it",
                )
        if first is None:
            return report(True, checked, skipped)
        return report(False, checked, skipped, first)

    if p == RelationPostulateId.COUNTER_DOMINANCE:
        masks = np.arange(lang.full_mask + 1)
        ent = (masks[:, None] & ~masks[None, :] & lang.full_mask) == 0
        mem = t.member
        look = ent[mem[None, :, :, None], mem[:, None, None, :]]
        v_a = t.valid[:, None, None, :]
        exists = (look & v_a).any(axis=3)
        ante = (exists | ~t.valid[None, :, :]).all(axis=2)
        viol = ante & ~m
        if not viol.any():
            return report(True, n * n)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        w = RelationWitness(
            (sets[a], sets[b]),
            "every member of the second set entails some member of the first, yet the first does not rank at least as high",
        )
        return report(False, n * n, witness=w)

    if p == RelationPostulateId.MINIMALITY:
        if u.max_input_size < 1:
            raise ValueError("minimality needs singletons in the universe")
        sing = t.singleton_index
        c = lang.full_mask + 1
        univ_row = m.all(axis=1)
        bottom = [x for x in range(c) if univ_row[sing[x]]]
        k_mask = lang.full_mask
        for x in bottom:
            k_mask &= x
        closed = [x for x in range(c) if k_mask & ~x & lang.full_mask == 0]
        if k_mask == 0 or closed != bottom:
            w = RelationWitness(
                tuple(),
                "universally acceptable singletons do not determine a consistent closed theory",
            )
            return report(False, c + n, witness=w)
        in_theory = np.zeros(c, dtype=bool)
        in_theory[bottom] = True
        expected = (in_theory[t.member] & t.valid).any(axis=1)
        viol = univ_row != expected
        if not viol.any():
            return report(True, c + n)
        a = int(np.flatnonzero(viol)[0])
        w = RelationWitness(
            (sets[a],),
            "set ranks below everything exactly when it shares a class with the prior theory; this one does not",
        )
        return report(False, c + n, witness=w)

    if p == RelationPostulateId.MAXIMALITY:
        nonempty = t.sizes > 0
        col_all = m[nonempty].all(axis=0)
        bottom_single = t.index.get((0,), -1)
        viol = nonempty & col_all & (np.arange(n) != bottom_single)
        if not viol.any():
            return report(True, n)
        b = int(np.flatnonzero(viol)[0])
        w = RelationWitness(
            (sets[b],),
            "a set other than the contradiction singleton sits at the very top",
        )
        return report(False, n, witness=w)

    if p == RelationPostulateId.COMPLETENESS:
        viol = ~m & ~m.T
        if not viol.any():
            return report(True, n * n)
        a, b = (int(v) for v in np.argwhere(viol)[0])
        w = RelationWitness((sets[a], sets[b]), "incomparable pair")
        return report(False, n * n, witness=w)

    if p == RelationPostulateId.DETERMINATION:
        e = t.empty_index
        nonempty = t.sizes > 0
        strictly = m[:, e] & ~m[e, :]
        viol = nonempty & ~strictly
        if not viol.any():
            return report(True, n)
        a = int(np.flatnonzero(viol)[0])
        w = RelationWitness(
            (sets[a],),
            "nonempty set not strictly easier to accept than the empty set",
        )
        return report(False, n, witness=w)

    if p == RelationPostulateId.UNION:
        uidx = t.union_index
        ia, ib = np.triu_indices(n)
        flat = uidx[ia, ib]
        ok = flat >= 0
        target = np.clip(flat, 0, None)
        viol = ok & ~m[ia, target] & ~m[ib, target]
        checked = int(ok.sum())
        skipped = int((~ok).sum())
        if not viol.any():
            return report(True, checked, skipped)
        first = int(np.flatnonzero(viol)[0])
        a, b, uu = int(ia[first]), int(ib[first]), int(flat[first])
        w = RelationWitness(
            (sets[a], sets[b], sets[uu]),
            "neither part ranks at least as high as the union",
        )
        return report(False, checked, skipped, w)

    raise ValueError(f"unknown postulate {p!r}")


def check_relation_postulate(
    r: Union[BelievabilityRelation, MultiBelievabilityRelation],
    p: RelationPostulateId,
    u: Optional[UniverseSpec] = None,
) -> RelationReport:
    """Verdict with witness; set-level checks are bounded by the universe.

    Constructed conjunction or union sets falling outside the universe
    are skipped and tallied.
    """
    if isinstance(r, BelievabilityRelation):
        return _check_single(r, p)
    if u is None:
        u = r.universe
    if u is None:
        raise ValueError("set-level checks need a universe")
    return _check_multi(r, p, u)


def is_quasi_linear(r: BelievabilityRelation) -> bool:
    return all(_check_single(r, p).holds for p in QUASI_LINEAR_POSTULATES)


def is_standard(rel: MultiBelievabilityRelation, u: UniverseSpec) -> bool:
    return all(_check_multi(rel, p, u).holds for p in STANDARD_POSTULATES)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def random_quasi_linear(seed: int, lang: LanguageSpec) -> BelievabilityRelation:
    """Seeded total preorder passing all seven single-sentence postulates.

    Draw a prior state, pin its theory to the bottom layer and the
    contradiction class strictly to the top, rank the remaining classes
    by noisy scores that respect entailment, then merge layers until the
    conjunction-compatibility postulates hold.  Validated post hoc.
    """
    lang.require_exhaustive()
    rng = random.Random(seed)
    full = lang.full_mask
    c = full + 1
    for _ in range(500):
        k_mask = rng.randrange(1, c)
        theory = [m for m in range(c) if k_mask & ~m & full == 0]
        others = [m for m in range(c) if m not in theory and m != 0]
        noise = {m: rng.random() for m in others}
        score = {
            m: max(noise[x] for x in others if m & ~x & full == 0) for m in others
        }
        layers: list[list[int]] = [theory]
        for s in sorted(set(score.values())):
            layers.append(sorted(m for m in others if score[m] == s))
        layers.append([0])
        merged = _merge_for_coupling(layers)
        if merged is None:
            continue
        rel = BelievabilityRelation.from_layers(lang, merged)
        if is_quasi_linear(rel):
            return rel
    raise GenerationError(f"no quasi-linear relation found for seed {seed}")


def _merge_for_coupling(layers: list[list[int]]) -> Optional[list[list[int]]]:
    """Merge adjacent layer spans until same-layer conjunctions stay put.

    Returns None when a conjunction of co-layered classes lands in the
    top (contradiction) layer, which cannot be merged away.
    """
    layers = [list(x) for x in layers]
    while True:
        rank = {}
        for i, layer in enumerate(layers):
            for m in layer:
                rank[m] = i
        bad = None
        for i, layer in enumerate(layers):
            for a, b in itertools.combinations_with_replacement(layer, 2):
                j = rank[a & b]
                if j != i:
                    bad = (min(i, j), max(i, j))
                    break
            if bad:
                break
        if bad is None:
            return layers
        lo, hi = bad
        if hi == len(layers) - 1:
            return None
        fused = [m for layer in layers[lo : hi + 1] for m in layer]
        layers = layers[:lo] + [sorted(fused)] + layers[hi + 1 :]


def enumerate_quasi_linear(lang: LanguageSpec) -> list[BelievabilityRelation]:
    """All relations passing the seven postulates; tiny class universes only."""
    c = lang.full_mask + 1
    if c > 4:
        raise LanguageError(
            f"exhaustive relation enumeration needs at most 4 classes, got {c}"
        )
    seen = set()
    found = []
    for assignment in itertools.product(range(c), repeat=c):
        levels = sorted(set(assignment))
        layers = [[m for m in range(c) if assignment[m] == lv] for lv in levels]
        rel = BelievabilityRelation.from_layers(lang, layers)
        if rel.rows in seen:
            continue
        seen.add(rel.rows)
        if is_quasi_linear(rel):
            found.append(rel)
    return sorted(found, key=lambda r: r.rows)


# ---------------------------------------------------------------------------
# Metatheorem checkers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetatheoremReport:
    name: str
    antecedents: dict
    applicable: bool
    holds: bool
    checked: int
    skipped: int = 0
    witness: Optional[RelationWitness] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "antecedents": dict(self.antecedents),
            "applicable": self.applicable,
            "holds": self.holds,
            "checked": self.checked,
            "skipped": self.skipped,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def _antecedents(
    rel: MultiBelievabilityRelation, u: UniverseSpec, ps: tuple
) -> dict:
    return {p.value: _check_multi(rel, p, u).holds for p in ps}


def check_member_reduction(
    rel: MultiBelievabilityRelation, u: UniverseSpec
) -> MetatheoremReport:
    """Set comparisons reduce to member comparisons, both directions.

    For nonempty sets: A ranks at least as high as B iff some member of
    A does, and iff A ranks at least as high as every singleton from B.
    Sound under transitivity, counter dominance, union and determination.
    """
    ante = _antecedents(
        rel,
        u,
        (
            RelationPostulateId.DETERMINATION,
            RelationPostulateId.TRANSITIVITY,
            RelationPostulateId.COUNTER_DOMINANCE,
            RelationPostulateId.UNION,
        ),
    )
    t = _tables(u)
    m = rel.table_over(u)
    n = len(t.sets)
    sing = t.singleton_index
    nonempty = t.sizes > 0
    rowsel = sing[t.member]
    left = (m[np.clip(rowsel, 0, None)] & t.valid[:, :, None]).any(axis=1)
    colsel = m[:, np.clip(rowsel, 0, None)]
    right = (colsel | ~t.valid[None, :, :]).all(axis=2)
    scope = nonempty[:, None] & nonempty[None, :]
    viol = scope & ((m != left) | (m != right))
    checked = int(scope.sum())
    applicable = all(ante.values())
    if not viol.any():
        return MetatheoremReport(
            "member_reduction", ante, applicable, True, checked
        )
    a, b = (int(v) for v in np.argwhere(viol)[0])
    w = RelationWitness(
        (t.sets[a], t.sets[b]),
        "set-level comparison disagrees with its member-level reduction",
    )
    return MetatheoremReport(
        "member_reduction", ante, applicable, False, checked, witness=w
    )


def check_coupling_collapse(
    rel: MultiBelievabilityRelation, u: UniverseSpec
) -> MetatheoremReport:
    """Under transitivity, counter dominance and union: completeness is
    forced, and the weak and plain conjunction-compatibility postulates
    agree."""
    ante = _antecedents(
        rel,
        u,
        (
            RelationPostulateId.TRANSITIVITY,
            RelationPostulateId.COUNTER_DOMINANCE,
            RelationPostulateId.UNION,
        ),
    )
    comp = _check_multi(rel, RelationPostulateId.COMPLETENESS, u)
    wc = _check_multi(rel, RelationPostulateId.WEAK_COUPLING, u)
    cp = _check_multi(rel, RelationPostulateId.COUPLING, u)
    holds = comp.holds and (wc.holds == cp.holds)
    applicable = all(ante.values())
    witness = None
    if not holds:
        witness = (comp.witness or wc.witness or cp.witness)
    return MetatheoremReport(
        "coupling_collapse",
        ante,
        applicable,
        holds,
        comp.checked + wc.checked + cp.checked,
        wc.skipped + cp.skipped,
        witness,
    )


def check_representation_existence(
    rel: MultiBelievabilityRelation, u: UniverseSpec
) -> MetatheoremReport:
    """Every nonempty set has a member exactly as acceptable as the set.

    Sound under transitivity, counter dominance and union.
    """
    ante = _antecedents(
        rel,
        u,
        (
            RelationPostulateId.TRANSITIVITY,
            RelationPostulateId.COUNTER_DOMINANCE,
            RelationPostulateId.UNION,
        ),
    )
    t = _tables(u)
    m = rel.table_over(u)
    eq = m & m.T
    sing = t.singleton_index
    rowsel = sing[t.member]
    # ok[i, j]: member j of set i is exactly as acceptable as set i
    ok = eq[np.clip(rowsel, 0, None), np.arange(len(t.sets))[:, None]]
    has = (ok & t.valid).any(axis=1)
    nonempty = t.sizes > 0
    viol = nonempty & ~has
    checked = int(nonempty.sum())
    applicable = all(ante.values())
    if not viol.any():
        return MetatheoremReport(
            "representation_existence", ante, applicable, True, checked
        )
    a = int(np.flatnonzero(viol)[0])
    w = RelationWitness(
        (t.sets[a],), "no member is exactly as acceptable as the whole set"
    )
    return MetatheoremReport(
        "representation_existence", ante, applicable, False, checked, witness=w
    )


def check_member_equivalence(
    rel: MultiBelievabilityRelation, u: UniverseSpec
) -> MetatheoremReport:
    """For each member: adjoining it leaves the set's rank unchanged iff
    the member alone is exactly as acceptable as the set.

    Sound under transitivity and counter dominance.
    """
    ante = _antecedents(
        rel,
        u,
        (
            RelationPostulateId.TRANSITIVITY,
            RelationPostulateId.COUNTER_DOMINANCE,
        ),
    )
    t = _tables(u)
    m = rel.table_over(u)
    eq = m & m.T
    lang = u.lang
    checked = 0
    first = None
    for i, a in enumerate(t.sets):
        for c in a.classes:
            adjoined = pairwise_conj(a, InputSet.of(lang, c))
            j = t.index[adjoined.mask_tuple]
            s = t.index[(c.mask,)]
            checked += 1
            if bool(eq[i, j]) != bool(eq[s, i]) and first is None:
                first = RelationWitness(
                    (a, InputSet.of(lang, c)),
                    "adjunction test and member test disagree",
                )
    applicable = all(ante.values())
    return MetatheoremReport(
        "member_equivalence", ante, applicable, first is None, checked, witness=first
    )


def check_equivalence_preserves_outcome(op: ChoiceOperator) -> MetatheoremReport:
    """For the ordering read off an operator: equally ranked inputs get
    identical outcomes."""
    rel = derive_mb_from_operator(op)
    m = rel.table_over(op.universe)
    k = op._kernel()
    eq = m & m.T
    neq_out = k.out[:, None] != k.out[None, :]
    viol = eq & neq_out
    t = _tables(op.universe)
    n = len(t.sets)
    if not viol.any():
        return MetatheoremReport(
            "equivalence_preserves_outcome", {}, True, True, n * n
        )
    a, b = (int(v) for v in np.argwhere(viol)[0])
    w = RelationWitness(
        (t.sets[a], t.sets[b]), "equally ranked inputs with different outcomes"
    )
    return MetatheoremReport(
        "equivalence_preserves_outcome", {}, True, False, n * n, witness=w
    )


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

def save_relation(
    rel: Union[BelievabilityRelation, MultiBelievabilityRelation], path: str
) -> None:
    with open(path, "w") as fh:
        json.dump(relation_to_json(rel), fh, sort_keys=True, indent=2)
        fh.write("\n")


def relation_to_json(
    rel: Union[BelievabilityRelation, MultiBelievabilityRelation]
) -> dict:
    if isinstance(rel, BelievabilityRelation):
        lang = rel.lang
        c = rel.class_count
        pairs = [
            [_cls(lang, i).encode(), _cls(lang, j).encode()]
            for i in range(c)
            for j in range(c)
            if rel.holds(_cls(lang, i), _cls(lang, j))
        ]
        return {"atoms": lang.atom_count, "kind": "single", "pairs": pairs}
    if rel.universe is None:
        raise ValueError(
            "only bounded relations can be serialized; materialize a table first"
        )
    u = rel.universe
    t = _tables(u)
    m = rel.table_over(u)
    pairs = [
        [t.sets[i].encode(), t.sets[j].encode()]
        for i in range(len(t.sets))
        for j in range(len(t.sets))
        if m[i, j]
    ]
    return {
        "atoms": u.lang.atom_count,
        "kind": "multi",
        "max_input_size": u.max_input_size,
        "pairs": pairs,
    }


def relation_from_json(
    data: dict,
) -> Union[BelievabilityRelation, MultiBelievabilityRelation]:
    try:
        lang = LanguageSpec(int(data["atoms"]))
        kind = data["kind"]
        pairs = data["pairs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise RelationFormatError(f"bad relation data: {exc}") from exc
    if kind == "single":
        c = lang.full_mask + 1
        m = np.zeros((c, c), dtype=bool)
        for pos, pair in enumerate(pairs):
            try:
                a = SentenceClass.decode(pair[0], lang)
                b = SentenceClass.decode(pair[1], lang)
            except (ValueError, TypeError, IndexError) as exc:
                raise RelationFormatError(f"pair {pos}: {exc}") from exc
            m[a.mask, b.mask] = True
        return BelievabilityRelation.from_matrix(lang, m)
    if kind == "multi":
        size = data.get("max_input_size")
        decoded = []
        for pos, pair in enumerate(pairs):
            try:
                a = InputSet.decode(pair[0], lang)
                b = InputSet.decode(pair[1], lang)
            except (ValueError, TypeError, IndexError) as exc:
                raise RelationFormatError(f"pair {pos}: {exc}") from exc
            decoded.append((a, b))
        if size is None:
            size = max((max(len(a), len(b)) for a, b in decoded), default=0)
        u = UniverseSpec(lang, int(size))
        t = _tables(u)
        n = len(t.sets)
        m = np.zeros((n, n), dtype=bool)
        for pos, (a, b) in enumerate(decoded):
            ia = t.index.get(a.mask_tuple)
            ib = t.index.get(b.mask_tuple)
            if ia is None or ib is None:
                raise RelationFormatError(f"pair {pos}: set outside the universe")
            m[ia, ib] = True
        return MultiBelievabilityRelation.from_table(u, m)
    raise RelationFormatError(f"unknown relation kind {kind!r}")


def load_relation(
    path: str,
) -> Union[BelievabilityRelation, MultiBelievabilityRelation]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise RelationFormatError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    if not isinstance(data, dict):
        raise RelationFormatError(f"{path}: expected a JSON object")
    try:
        return relation_from_json(data)
    except RelationFormatError as exc:
        raise RelationFormatError(f"{path}: {exc}") from exc
