"""Representation machinery run as algorithms.

Each construction that justifies an operator characterization is
executed, not just cited: an ordered outcome model is synthesized from
any operator passing the core postulates and must regenerate it exactly;
a set-level believability ordering is derived from the operator's table
and must both satisfy its postulate set and regenerate the operator; the
single/set-level translations must round-trip.  Reports carry
re-checkable witnesses and a content hash of the synthesized artifact.

Single-sentence revision operators live here too, with their own
postulate battery and the classic three-cycle counterexample showing the
loop-form of reciprocity is strictly stronger than the two-point form.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from . import graphs
from .believability import (
    BelievabilityRelation,
    MultiBelievabilityRelation,
    RelationPostulateId,
    check_relation_postulate,
    derive_mb_from_operator,
    is_quasi_linear,
    lift,
    project,
    revise_via_mb,
)
from .logic import (
    BeliefSet,
    LanguageError,
    LanguageSpec,
    SentenceClass,
)
from .models import RelationalModel, choice_revise_via_model
from .operators import (
    BASIC_POSTULATES,
    SUPPLEMENTARY_POSTULATES,
    ChoiceOperator,
    PostulateId,
    UniverseSpec,
    _tables,
    check_postulates,
    enumerate_universe,
)

THEOREM_IDS = (1, 2, 3, 4, 5)


class SynthesisError(ValueError):
    def __init__(self, message: str, reports: Optional[dict] = None):
        super().__init__(message)
        self.reports = reports or {}


# ---------------------------------------------------------------------------
# Model synthesis
# ---------------------------------------------------------------------------

def synthesize_model(op: ChoiceOperator) -> RelationalModel:
    """Build an ordered outcome model whose first satisfier rule
    regenerates the operator.

    Outcomes are the distinct table values; one outcome precedes another
    when a chain of inputs, each meeting the next one's outcome, links
    them.  The chain preorder is made total by a stable topological sort
    with ties broken by canonical belief-set encoding.
    """
    reports = check_postulates(op, BASIC_POSTULATES)
    for p in BASIC_POSTULATES:
        if not reports[p].holds:
            raise SynthesisError(f"postulate violation: {p.value}", reports)
    k = op._kernel()
    uniq, inv = np.unique(k.out, return_inverse=True)
    g = len(uniq)
    groups = [np.flatnonzero(inv == i) for i in range(g)]
    ge = np.zeros((g, g), dtype=bool)
    for i in range(g):
        for j in range(g):
            ge[i, j] = k.meets[np.ix_(groups[i], groups[j])].any()
    chain = graphs.reachability(ge)
    if not chain.diagonal().all():
        raise SynthesisError("chain relation not reflexive on some outcome")
    anti = chain & chain.T & ~np.eye(g, dtype=bool)
    if anti.any():
        raise SynthesisError(
            "antisymmetry violation: distinct outcomes reach each other"
        )
    lang = op.lang
    sets_of = [BeliefSet(lang, int(m)) for m in uniq]
    order = graphs.stable_topological_order(
        g, chain, lambda i: tuple(sets_of[i].encode())
    )
    assert order is not None
    outcomes = tuple(sets_of[i] for i in order)
    model = RelationalModel(lang, op.K, outcomes)
    model.require_valid()
    return model


# ---------------------------------------------------------------------------
# Round-trip verification
# ---------------------------------------------------------------------------

def _hash_artifact(data: dict) -> str:
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class RoundTripReport:
    theorem: int
    passed: bool
    detail: str
    witness: Optional[dict] = None
    artifact: Optional[dict] = None
    universe: Optional[dict] = None

    @property
    def artifact_hash(self) -> Optional[str]:
        return _hash_artifact(self.artifact) if self.artifact is not None else None

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "passed": self.passed,
            "detail": self.detail,
            "witness": self.witness,
            "artifact_hash": self.artifact_hash,
            "universe": self.universe,
        }


def _universe_header(u: UniverseSpec) -> dict:
    return {
        "atoms": u.lang.atom_count,
        "max_input_size": u.max_input_size,
        "input_sets": u.size,
    }


def verify_roundtrip_model(
    op: ChoiceOperator, require_extended: bool = False
) -> RoundTripReport:
    """Synthesize an ordered outcome model and replay it over the universe.

    With require_extended, the operator must also pass success, vacuity
    and consistency, and the synthesized model must then contain the
    inconsistent outcome and settle every satisfiable class before it.
    """
    theorem = 2 if require_extended else 1
    header = _universe_header(op.universe)
    gate = list(BASIC_POSTULATES)
    if require_extended:
        gate += list(SUPPLEMENTARY_POSTULATES)
    reports = check_postulates(op, gate)
    for p in gate:
        if not reports[p].holds:
            w = reports[p].witness
            return RoundTripReport(
                theorem,
                False,
                f"operator fails {p.value}",
                witness={"kind": "postulate", "postulate": p.value,
                         "witness": w.to_dict() if w else None},
                universe=header,
            )
    try:
        model = synthesize_model(op)
    except SynthesisError as exc:
        return RoundTripReport(
            theorem,
            False,
            str(exc),
            witness={"kind": "synthesis_error", "message": str(exc)},
            universe=header,
        )
    artifact = model.to_json()
    for a in enumerate_universe(op.universe):
        regenerated = choice_revise_via_model(model, a)
        expected = op.outcome(a)
        if regenerated != expected:
            return RoundTripReport(
                theorem,
                False,
                "regenerated outcome differs",
                witness={
                    "kind": "mismatch",
                    "input": a.encode(),
                    "expected": expected.encode(),
                    "regenerated": regenerated.encode(),
                },
                artifact=artifact,
                universe=header,
            )
    if require_extended:
        from .models import check_extended_conditions

        flags = check_extended_conditions(model)
        if not (flags.has_X3 and flags.has_leq3):
            return RoundTripReport(
                theorem,
                False,
                "synthesized model lacks an extended condition",
                witness={
                    "kind": "flags",
                    "has_X3": flags.has_X3,
                    "has_leq3": flags.has_leq3,
                },
                artifact=artifact,
                universe=header,
            )
    suffix = " with extended conditions" if require_extended else ""
    return RoundTripReport(
        theorem,
        True,
        f"synthesized model regenerates the operator on all "
        f"{header['input_sets']} inputs{suffix}",
        artifact=artifact,
        universe=header,
    )


_CORE_RELATION_SET = (
    RelationPostulateId.TRANSITIVITY,
    RelationPostulateId.WEAK_COUPLING,
    RelationPostulateId.COUNTER_DOMINANCE,
    RelationPostulateId.MINIMALITY,
    RelationPostulateId.UNION,
)

_STANDARD_OPERATOR_GATE = (
    PostulateId.CLOSURE,
    PostulateId.SUCCESS,
    PostulateId.VACUITY,
    PostulateId.CONFIRMATION,
    PostulateId.RECIPROCITY,
    PostulateId.CONSISTENCY,
)


def verify_roundtrip_relation(op: ChoiceOperator, standard: bool = False) -> RoundTripReport:
    """Derive a set-level ordering from the operator and replay it.

    The derived relation must satisfy the five representation postulates
    (all nine with standard=True), and revision driven by it must rebuild
    the operator's table exactly.
    """
    theorem = 5 if standard else 4
    header = _universe_header(op.universe)
    gate = _STANDARD_OPERATOR_GATE if standard else BASIC_POSTULATES
    reports = check_postulates(op, gate)
    for p in gate:
        if not reports[p].holds:
            w = reports[p].witness
            return RoundTripReport(
                theorem,
                False,
                f"operator fails {p.value}",
                witness={"kind": "postulate", "postulate": p.value,
                         "witness": w.to_dict() if w else None},
                universe=header,
            )
    mb = derive_mb_from_operator(op)
    from .believability import relation_to_json

    artifact = relation_to_json(mb)
    wanted = tuple(RelationPostulateId) if standard else _CORE_RELATION_SET
    for p in wanted:
        rep = check_relation_postulate(mb, p, op.universe)
        if not rep.holds:
            return RoundTripReport(
                theorem,
                False,
                f"derived relation fails {p.value}",
                witness={
                    "kind": "relation_postulate",
                    "postulate": p.value,
                    "witness": rep.witness.to_dict() if rep.witness else None,
                },
                artifact=artifact,
                universe=header,
            )
    for a in enumerate_universe(op.universe):
        regenerated = revise_via_mb(mb, op.K, a)
        expected = op.outcome(a)
        if regenerated != expected:
            return RoundTripReport(
                theorem,
                False,
                "regenerated outcome differs",
                witness={
                    "kind": "mismatch",
                    "input": a.encode(),
                    "expected": expected.encode(),
                    "regenerated": regenerated.encode(),
                },
                artifact=artifact,
                universe=header,
            )
    label = "all nine" if standard else "the five"
    return RoundTripReport(
        theorem,
        True,
        f"derived relation satisfies {label} postulates and regenerates "
        f"the operator on all {header['input_sets']} inputs",
        artifact=artifact,
        universe=header,
    )


def verify_translation(
    r: Union[BelievabilityRelation, MultiBelievabilityRelation],
    max_input_size: int = 2,
) -> RoundTripReport:
    """Round-trip the single/set-level translations.

    Single relations must be quasi-linear; their lift must be standard on
    the bounded universe and project back identically.  Set-level
    relations must be standard; their projection must be quasi-linear and
    lift back to the identical table.
    """
    if isinstance(r, BelievabilityRelation):
        u = UniverseSpec(r.lang, max_input_size)
        header = _universe_header(u)
        for p in (
            RelationPostulateId.TRANSITIVITY,
            RelationPostulateId.WEAK_COUPLING,
            RelationPostulateId.COUPLING,
            RelationPostulateId.COUNTER_DOMINANCE,
            RelationPostulateId.MINIMALITY,
            RelationPostulateId.MAXIMALITY,
            RelationPostulateId.COMPLETENESS,
        ):
            rep = check_relation_postulate(r, p)
            if not rep.holds:
                return RoundTripReport(
                    3,
                    False,
                    f"relation fails {p.value}",
                    witness={
                        "kind": "relation_postulate",
                        "postulate": p.value,
                        "witness": rep.witness.to_dict() if rep.witness else None,
                    },
                    universe=header,
                )
        lifted = lift(r)
        bad = [
            p.value
            for p in RelationPostulateId
            if not check_relation_postulate(lifted, p, u).holds
        ]
        if bad:
            return RoundTripReport(
                3,
                False,
                f"lifted relation fails {bad[0]}",
                witness={"kind": "relation_postulate", "postulate": bad[0]},
                universe=header,
            )
        back = project(lifted)
        if back != r:
            return RoundTripReport(
                3,
                False,
                "projection of the lift differs from the original",
                witness={"kind": "mismatch"},
                universe=header,
            )
        from .believability import relation_to_json

        return RoundTripReport(
            3,
            True,
            "lift is standard on the bounded universe and projects back identically",
            artifact=relation_to_json(r),
            universe=header,
        )

    u = r.universe or UniverseSpec(r.lang, max_input_size)
    header = _universe_header(u)
    bad = [
        p.value
        for p in RelationPostulateId
        if not check_relation_postulate(r, p, u).holds
    ]
    if bad:
        return RoundTripReport(
            3,
            False,
            f"relation fails {bad[0]}",
            witness={"kind": "relation_postulate", "postulate": bad[0]},
            universe=header,
        )
    base = project(r)
    if not is_quasi_linear(base):
        return RoundTripReport(
            3,
            False,
            "projection is not quasi-linear",
            witness={"kind": "relation_postulate"},
            universe=header,
        )
    lifted = lift(base)
    if not np.array_equal(lifted.table_over(u), r.table_over(u)):
        m1 = lifted.table_over(u)
        m2 = r.table_over(u)
        t = _tables(u)
        a, b = (int(v) for v in np.argwhere(m1 != m2)[0])
        return RoundTripReport(
            3,
            False,
            "lift of the projection differs from the original",
            witness={
                "kind": "mismatch",
                "left": t.sets[a].encode(),
                "right": t.sets[b].encode(),
            },
            universe=header,
        )
    from .believability import relation_to_json

    return RoundTripReport(
        3,
        True,
        "projection is quasi-linear and lifts back identically",
        artifact=relation_to_json(project(r)),
        universe=header,
    )


# ---------------------------------------------------------------------------
# Single-sentence operators
# ---------------------------------------------------------------------------

class SententialPostulateId(str, Enum):
    CLOSURE = "closure"
    RELATIVE_SUCCESS = "relative_success"
    CONFIRMATION = "confirmation"
    REGULARITY = "regularity"
    RECIPROCITY = "reciprocity"
    EXTENSIONALITY = "extensionality"
    STRONG_RECIPROCITY = "strong_reciprocity"


SENTENTIAL_CORE = (
    SententialPostulateId.CLOSURE,
    SententialPostulateId.RELATIVE_SUCCESS,
    SententialPostulateId.CONFIRMATION,
    SententialPostulateId.REGULARITY,
    SententialPostulateId.RECIPROCITY,
)


@dataclass(frozen=True)
class SententialWitness:
    items: tuple[SentenceClass, ...]
    outcomes: tuple[BeliefSet, ...]
    note: str

    def to_dict(self) -> dict:
        return {
            "items": [c.encode() for c in self.items],
            "outcomes": [o.encode() for o in self.outcomes],
            "note": self.note,
        }


@dataclass(frozen=True)
class SententialReport:
    postulate: SententialPostulateId
    holds: bool
    checked: int
    witness: Optional[SententialWitness] = None

    def to_dict(self) -> dict:
        return {
            "postulate": self.postulate.value,
            "holds": self.holds,
            "checked": self.checked,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass(frozen=True)
class SententialOperator:
    """Total map from single sentence classes to outcome belief sets."""

    K: BeliefSet
    outputs: tuple[BeliefSet, ...]

    def __post_init__(self) -> None:
        if not self.K.is_consistent:
            raise ValueError("K must be consistent")
        c = self.K.lang.full_mask + 1
        if len(self.outputs) != c:
            raise ValueError(f"table must cover all {c} classes, got {len(self.outputs)}")

    @property
    def lang(self) -> LanguageSpec:
        return self.K.lang

    def outcome(self, c: SentenceClass) -> BeliefSet:
        return self.outputs[c.mask]

    @classmethod
    def from_function(
        cls, lang: LanguageSpec, k: BeliefSet, fn: Callable[[SentenceClass], BeliefSet]
    ) -> "SententialOperator":
        lang.require_exhaustive()
        return cls(
            k,
            tuple(fn(SentenceClass(lang, m)) for m in range(lang.full_mask + 1)),
        )


def footnote7_operator(lang: Optional[LanguageSpec] = None) -> SententialOperator:
    """Three-clause operator over three designated atom conjunctions.

    Inputs squeezed between a two-atom conjunction and one of its atoms
    are sent to that conjunction's closure; everything else to its own
    closure.  The prior state believes only tautologies.  This table
    passes the five core single-sentence postulates yet admits a loop of
    three inputs with pairwise-meeting outcomes that are not equal.
    """
    lang = lang or LanguageSpec(3)
    if lang.atom_count < 3:
        raise LanguageError("language too small: need at least 3 atoms")

    def atom_mask(i: int) -> int:
        return sum(1 << v for v in lang.valuations() if (v >> i) & 1)

    p = [atom_mask(i) for i in range(3)]
    pairs = [
        (p[0] & p[1], p[0]),
        (p[1] & p[2], p[1]),
        (p[0] & p[2], p[2]),
    ]

    def table(c: SentenceClass) -> BeliefSet:
        m = c.mask
        for conj, single in pairs:
            if conj & ~m == 0 and m & ~single == 0:
                return BeliefSet(lang, conj)
        return BeliefSet(lang, m)

    return SententialOperator.from_function(
        lang, BeliefSet.trivial(lang), table
    )


def check_sentential_postulates(
    op: SententialOperator,
) -> dict[SententialPostulateId, SententialReport]:
    """Verdicts for the five core postulates, extensionality, and the
    loop form of reciprocity (all outcomes equal within each strongly
    connected component of the membership graph)."""
    lang = op.lang
    c = lang.full_mask + 1
    full = lang.full_mask
    masks = np.arange(c)
    out = np.array([o.mask for o in op.outputs], dtype=np.int64)
    kmask = op.K.mask
    # member[x, y]: class x follows from the outcome for y
    member = (out[None, :] & ~masks[:, None] & full) == 0
    in_k = (kmask & ~masks & full) == 0
    diag = member.diagonal().copy()
    eq_k = out == kmask

    def cls(m: int) -> SentenceClass:
        return SentenceClass(lang, int(m))

    reports = {}

    reports[SententialPostulateId.CLOSURE] = SententialReport(
        SententialPostulateId.CLOSURE, True, c
    )

    viol = ~(eq_k | diag)
    w = None
    if viol.any():
        x = int(np.flatnonzero(viol)[0])
        w = SententialWitness(
            (cls(x),), (op.outputs[x],), "outcome differs from the prior state yet drops the input"
        )
    reports[SententialPostulateId.RELATIVE_SUCCESS] = SententialReport(
        SententialPostulateId.RELATIVE_SUCCESS, not viol.any(), c, w
    )

    viol = in_k & ~eq_k
    w = None
    if viol.any():
        x = int(np.flatnonzero(viol)[0])
        w = SententialWitness(
            (cls(x),), (op.outputs[x],), "already believed input must leave the state unchanged"
        )
    reports[SententialPostulateId.CONFIRMATION] = SententialReport(
        SententialPostulateId.CONFIRMATION, not viol.any(), c, w
    )

    viol_m = member & ~diag[:, None]
    w = None
    if viol_m.any():
        x, y = (int(v) for v in np.argwhere(viol_m)[0])
        w = SententialWitness(
            (cls(x), cls(y)),
            (op.outputs[x], op.outputs[y]),
            "input accepted in another's outcome but not in its own",
        )
    reports[SententialPostulateId.REGULARITY] = SententialReport(
        SententialPostulateId.REGULARITY, not viol_m.any(), c * c, w
    )

    viol_m = member & member.T & (out[:, None] != out[None, :])
    w = None
    if viol_m.any():
        x, y = (int(v) for v in np.argwhere(viol_m)[0])
        w = SententialWitness(
            (cls(x), cls(y)),
            (op.outputs[x], op.outputs[y]),
            "mutually accepted pair with different outcomes",
        )
    reports[SententialPostulateId.RECIPROCITY] = SententialReport(
        SententialPostulateId.RECIPROCITY, not viol_m.any(), c * c, w
    )

    # classes quotient syntax, so equivalent inputs share a table row
    reports[SententialPostulateId.EXTENSIONALITY] = SententialReport(
        SententialPostulateId.EXTENSIONALITY, True, c
    )

    holds = True
    w = None
    for comp in graphs.strongly_connected_components(member):
        base = comp[0]
        for node in comp[1:]:
            if out[node] != out[base]:
                holds = False
                inside = np.zeros(c, dtype=bool)
                inside[comp] = True
                sub = member & inside[:, None] & inside[None, :]
                there = graphs.shortest_path(sub, base, node)
                back = graphs.shortest_path(sub, node, base)
                cycle = there + back[1:-1] if there and back else [base, node]
                w = SententialWitness(
                    tuple(cls(i) for i in cycle),
                    tuple(op.outputs[i] for i in cycle),
                    "loop of successively accepted inputs with unequal outcomes",
                )
                break
        if not holds:
            break
    reports[SententialPostulateId.STRONG_RECIPROCITY] = SententialReport(
        SententialPostulateId.STRONG_RECIPROCITY, holds, c * c, w
    )
    return reports
