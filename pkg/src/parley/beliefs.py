"""Core belief machinery: propositions, ranked endorsements, knowledge bases,
evidence pieces, and threshold-based belief revision.

Belief strengths form a three-step scale (weak < strong < warranted).  An
evidence piece pairs a believed proposition with a believed evidential
relation and is only as strong as the weaker of the two.  Revision sums the
strengths on each side of a target proposition and compares the difference
against a threshold; a belief whose entire derivation basis has been refuted
is abandoned rather than merely doubted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import Iterable, Iterator, Optional, Union


class StructureError(ValueError):
    """A value violates a structural requirement of the model."""


class ContradictionError(StructureError):
    """A belief store holds both a proposition and its negation."""


class ContractViolation(RuntimeError):
    """An operation was invoked outside its stated contract."""


# ---------------------------------------------------------------------------
# strengths and expertise


class StrengthLevel(IntEnum):
    WEAK = 1
    STRONG = 2
    WARRANTED = 3

    def render(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "StrengthLevel":
        try:
            return cls[text.upper()]
        except KeyError:
            raise StructureError(f"unknown strength level: {text!r}") from None


class Expertise(str, Enum):
    EXPERT = "expert"
    NON_EXPERT = "non-expert"

    @classmethod
    def parse(cls, text: str) -> "Expertise":
        for member in cls:
            if member.value == text:
                return member
        raise StructureError(f"unknown expertise: {text!r}")


def assertion_strength(expertise: Expertise) -> StrengthLevel:
    """Strength at which a bare assertion is endorsed, by speaker expertise."""
    if expertise is Expertise.EXPERT:
        return StrengthLevel.WARRANTED
    return StrengthLevel.STRONG


# ---------------------------------------------------------------------------
# propositions

SUPPORTS = "supports"

_PREDICATE_RE = re.compile(r"[a-z_][a-z0-9_]*\Z")
_IDENT_RE = re.compile(r"[a-z0-9_]+\Z")


@dataclass(frozen=True)
class Proposition:
    """A ground literal, or an evidential relation between two literals.

    Relation propositions use the reserved predicate ``supports`` and take
    exactly two proposition arguments; every other predicate takes plain
    identifier arguments.
    """

    negated: bool
    predicate: str
    args: tuple = ()

    def __post_init__(self) -> None:
        if not _PREDICATE_RE.match(self.predicate):
            raise StructureError(f"bad predicate: {self.predicate!r}")
        object.__setattr__(self, "args", tuple(self.args))
        if self.predicate == SUPPORTS:
            if len(self.args) != 2 or not all(isinstance(a, Proposition) for a in self.args):
                raise StructureError("supports(...) takes exactly two propositions")
        else:
            for a in self.args:
                if not isinstance(a, str) or not _IDENT_RE.match(a):
                    raise StructureError(f"bad argument {a!r} for {self.predicate}")

    @property
    def is_relation(self) -> bool:
        return self.predicate == SUPPORTS

    def negate(self) -> "Proposition":
        return replace(self, negated=not self.negated)

    def render(self, ascii_not: bool = False) -> str:
        mark = "~" if ascii_not else "¬"
        inner = ", ".join(
            a.render(ascii_not) if isinstance(a, Proposition) else a for a in self.args
        )
        body = self.predicate if not self.args else f"{self.predicate}({inner})"
        return f"{mark}{body}" if self.negated else body

    def __str__(self) -> str:
        return self.render()

    def __lt__(self, other: "Proposition") -> bool:
        return self.render() < other.render()

    def __le__(self, other: "Proposition") -> bool:
        return self.render() <= other.render()


def supports_prop(antecedent: Proposition, consequent: Proposition) -> Proposition:
    return Proposition(False, SUPPORTS, (antecedent, consequent))


def parse_proposition(text: str) -> Proposition:
    """Parse a proposition from text.  Accepts either ``~`` or ``¬`` negation."""
    prop, pos = _parse_prop(text, 0)
    if text[pos:].strip():
        raise StructureError(f"trailing input after proposition: {text[pos:]!r}")
    return prop


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_prop(text: str, pos: int) -> tuple[Proposition, int]:
    pos = _skip_ws(text, pos)
    negated = False
    while pos < len(text) and text[pos] in "~¬":
        negated = not negated
        pos = _skip_ws(text, pos + 1)
    m = re.match(r"[a-z_][a-z0-9_]*", text[pos:])
    if not m:
        raise StructureError(f"expected predicate at position {pos} in {text!r}")
    predicate = m.group(0)
    pos += len(predicate)
    pos = _skip_ws(text, pos)
    args: list = []
    if pos < len(text) and text[pos] == "(":
        pos = _skip_ws(text, pos + 1)
        while pos < len(text) and text[pos] != ")":
            if predicate == SUPPORTS:
                arg, pos = _parse_prop(text, pos)
            else:
                m = re.match(r"[a-z0-9_]+", text[pos:])
                if not m:
                    raise StructureError(f"expected argument at position {pos} in {text!r}")
                arg = m.group(0)
                pos += len(arg)
            args.append(arg)
            pos = _skip_ws(text, pos)
            if pos < len(text) and text[pos] == ",":
                pos = _skip_ws(text, pos + 1)
                if pos >= len(text) or text[pos] == ")":
                    raise StructureError(f"dangling ',' at position {pos} in {text!r}")
            elif pos < len(text) and text[pos] != ")":
                raise StructureError(f"expected ',' or ')' at position {pos} in {text!r}")
        if pos >= len(text):
            raise StructureError(f"unterminated argument list in {text!r}")
        pos += 1
    return Proposition(negated, predicate, tuple(args)), pos


# ---------------------------------------------------------------------------
# endorsements and beliefs


class SourceKind(str, Enum):
    KB_RECORD = "kb-record"
    ASSERTION = "assertion"
    STEREOTYPE = "stereotype"
    DERIVED = "derived"


@dataclass(frozen=True)
class Endorsement:
    """How strongly a belief is held and where that strength comes from."""

    level: StrengthLevel
    kind: SourceKind
    speaker: Optional[str] = None
    expertise: Optional[Expertise] = None
    support: frozenset = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "support", frozenset(self.support))
        if self.kind is SourceKind.ASSERTION:
            if self.speaker is None or self.expertise is None:
                raise StructureError("assertion endorsements need speaker and expertise")
        if self.kind is SourceKind.DERIVED and not self.support:
            raise StructureError("derived endorsements need a nonempty support set")

    @classmethod
    def kb_record(cls, level: StrengthLevel) -> "Endorsement":
        return cls(level, SourceKind.KB_RECORD)

    @classmethod
    def stereotype(cls, level: StrengthLevel) -> "Endorsement":
        return cls(level, SourceKind.STEREOTYPE)

    @classmethod
    def assertion(
        cls, level: StrengthLevel, speaker: str, expertise: Expertise
    ) -> "Endorsement":
        return cls(level, SourceKind.ASSERTION, speaker=speaker, expertise=expertise)

    @classmethod
    def derived(cls, level: StrengthLevel, support: Iterable[Proposition]) -> "Endorsement":
        return cls(level, SourceKind.DERIVED, support=frozenset(support))


@dataclass(frozen=True)
class Belief:
    prop: Proposition
    endorsement: Endorsement

    @property
    def rank(self) -> int:
        return int(self.endorsement.level)


class Direction(str, Enum):
    SUPPORTS = "supports"
    ATTACKS = "attacks"


@dataclass(frozen=True)
class EvidencePiece:
    """A believed proposition plus a believed relation tying it to a target."""

    belief: Belief
    relation: Belief
    direction: Direction

    def __post_init__(self) -> None:
        rel = self.relation.prop
        if not rel.is_relation or rel.negated:
            raise StructureError("evidence relation must be a positive supports(...)")
        if rel.args[0] != self.belief.prop:
            raise StructureError("relation antecedent must match the believed proposition")

    @property
    def consequent(self) -> Proposition:
        return self.relation.prop.args[1]

    def key(self) -> tuple[str, str]:
        return (self.belief.prop.render(), self.relation.prop.render())


def piece_strength(piece: EvidencePiece) -> StrengthLevel:
    # weakest-link rule: a piece is only as strong as its weakest component
    return min(piece.belief.endorsement.level, piece.relation.endorsement.level)


def assertion_piece(
    prop: Proposition,
    speaker: str,
    expertise: Expertise,
    *,
    level: Optional[StrengthLevel] = None,
    target: Optional[Proposition] = None,
) -> EvidencePiece:
    """Package a bare assertion of ``prop`` as direct evidence.

    The synthetic self-relation is warranted, so the piece carries exactly
    the assertion's endorsed strength.  ``target`` fixes the direction when
    the assertion argues against some other proposition.
    """
    if target is None:
        target = prop
    if prop == target:
        direction = Direction.SUPPORTS
    elif prop == target.negate():
        direction = Direction.ATTACKS
    else:
        raise StructureError("assertion must address the target or its negation")
    endorsed = Belief(
        prop, Endorsement.assertion(level or assertion_strength(expertise), speaker, expertise)
    )
    relation = Belief(supports_prop(prop, prop), Endorsement.kb_record(StrengthLevel.WARRANTED))
    return EvidencePiece(endorsed, relation, direction)


# ---------------------------------------------------------------------------
# knowledge bases


def _index(beliefs: tuple[Belief, ...], label: str) -> dict[Proposition, Belief]:
    by_prop: dict[Proposition, Belief] = {}
    for b in beliefs:
        if b.prop in by_prop:
            raise StructureError(f"duplicate belief in {label}: {b.prop}")
        by_prop[b.prop] = b
    for prop in by_prop:
        if prop.negate() in by_prop:
            raise ContradictionError(f"{label} holds both {prop} and {prop.negate()}")
    return by_prop


@dataclass(frozen=True)
class KnowledgeBase:
    """An agent's own beliefs plus its model of the other conversant.

    Both stores are contradiction-free and keyed by proposition.  All update
    helpers return a new instance; instances are never mutated.
    """

    own: tuple[Belief, ...]
    user_model: tuple[Belief, ...] = ()
    expertise: Expertise = Expertise.EXPERT
    _own_idx: dict = field(init=False, repr=False, compare=False, hash=False, default=None)
    _model_idx: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self) -> None:
        own = tuple(sorted(self.own, key=lambda b: b.prop.render()))
        model = tuple(sorted(self.user_model, key=lambda b: b.prop.render()))
        object.__setattr__(self, "own", own)
        object.__setattr__(self, "user_model", model)
        object.__setattr__(self, "_own_idx", _index(own, "own beliefs"))
        object.__setattr__(self, "_model_idx", _index(model, "user model"))

    def own_belief(self, prop: Proposition) -> Optional[Belief]:
        return self._own_idx.get(prop)

    def holds(self, prop: Proposition) -> bool:
        return prop in self._own_idx

    def model_belief(self, prop: Proposition) -> Optional[Belief]:
        return self._model_idx.get(prop)

    def own_add(self, belief: Belief) -> "KnowledgeBase":
        kept = [
            b
            for b in self.own
            if b.prop not in (belief.prop, belief.prop.negate())
        ]
        return replace(self, own=tuple(kept) + (belief,))

    def own_remove(self, prop: Proposition) -> "KnowledgeBase":
        return replace(self, own=tuple(b for b in self.own if b.prop != prop))

    def model_add(self, belief: Belief) -> "KnowledgeBase":
        kept = [
            b
            for b in self.user_model
            if b.prop not in (belief.prop, belief.prop.negate())
        ]
        return replace(self, user_model=tuple(kept) + (belief,))

    def model_remove(self, prop: Proposition) -> "KnowledgeBase":
        return replace(self, user_model=tuple(b for b in self.user_model if b.prop != prop))


# ---------------------------------------------------------------------------
# evidence collection and revision


class VerdictOutcome(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    ABANDON = "abandon"
    UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class Verdict:
    outcome: VerdictOutcome
    support_score: int
    attack_score: int


def build_evidence_set(
    kb: KnowledgeBase,
    target: Proposition,
    proposed_accepted: Iterable[EvidencePiece] = (),
) -> tuple[EvidencePiece, ...]:
    """Collect every evidence piece bearing on ``target``.

    Combines the pieces derivable from ``kb.own`` (a held relation whose
    antecedent is also held) with accepted proposed pieces supplied by the
    caller.  Pieces are deduplicated by (belief, relation), keeping the
    stronger reading, and returned in canonical order.
    """
    negated = target.negate()
    pieces: list[EvidencePiece] = []
    for rel in kb.own:
        p = rel.prop
        if not p.is_relation or p.negated:
            continue
        antecedent, consequent = p.args
        if consequent == target:
            direction = Direction.SUPPORTS
        elif consequent == negated:
            direction = Direction.ATTACKS
        else:
            continue
        basis = kb.own_belief(antecedent)
        if basis is None:
            continue
        pieces.append(EvidencePiece(basis, rel, direction))
    for pc in proposed_accepted:
        if pc.consequent == target:
            direction = Direction.SUPPORTS
        elif pc.consequent == negated:
            direction = Direction.ATTACKS
        else:
            raise StructureError(f"evidence piece does not address {target}: {pc.relation.prop}")
        if pc.direction is not direction:
            pc = EvidencePiece(pc.belief, pc.relation, direction)
        pieces.append(pc)
    best: dict[tuple[str, str], EvidencePiece] = {}
    for pc in pieces:
        prev = best.get(pc.key())
        if prev is None or piece_strength(pc) > piece_strength(prev):
            best[pc.key()] = pc
    return tuple(sorted(best.values(), key=lambda pc: pc.key()))


def _refuted(kb: KnowledgeBase, prop: Proposition, seen: frozenset) -> bool:
    """A proposition is refuted when the store no longer backs it."""
    held = kb.own_belief(prop)
    if held is None:
        return True
    return not _standing(kb, held, seen)


def _standing(kb: KnowledgeBase, belief: Belief, seen: frozenset = frozenset()) -> bool:
    """A derived belief stands only while some member of its basis survives."""
    if belief.endorsement.kind is not SourceKind.DERIVED:
        return True
    if belief.prop in seen:
        return False
    seen = seen | {belief.prop}
    return any(not _refuted(kb, member, seen) for member in belief.endorsement.support)


@dataclass(frozen=True)
class ReviseDetail:
    verdict: Verdict
    support_pieces: tuple[EvidencePiece, ...]
    attack_pieces: tuple[EvidencePiece, ...]
    prior_support: Optional[Belief]
    prior_attack: Optional[Belief]

    def winning_strength(self) -> StrengthLevel:
        side = (
            (self.support_pieces, self.prior_support)
            if self.verdict.outcome is VerdictOutcome.ACCEPT
            else (self.attack_pieces, self.prior_attack)
        )
        pieces, prior = side
        ranks = [piece_strength(p) for p in pieces]
        if prior is not None:
            ranks.append(prior.endorsement.level)
        if not ranks:
            raise ContractViolation("no credited evidence on the winning side")
        return min(max(ranks), StrengthLevel.WARRANTED)


def _dedupe_side(pieces: list[EvidencePiece]) -> list[EvidencePiece]:
    best: dict[tuple[str, str], EvidencePiece] = {}
    for pc in pieces:
        prev = best.get(pc.key())
        if prev is None or piece_strength(pc) > piece_strength(prev):
            best[pc.key()] = pc
    return sorted(best.values(), key=lambda pc: pc.key())


def revise_detail(
    kb: KnowledgeBase,
    target: Proposition,
    presented_support: Iterable[EvidencePiece] = (),
    presented_attack: Iterable[EvidencePiece] = (),
    tau: int = 1,
    *,
    trace=None,
    agent: str = "",
    note: str = "",
    method: str = "scores",
) -> ReviseDetail:
    """Revision with the credited evidence exposed.  See :func:`revise`."""
    if tau < 1:
        raise ContractViolation(f"threshold must be at least 1, got {tau}")
    negated = target.negate()
    for pc in presented_support:
        if pc.consequent != target:
            raise StructureError(f"support piece does not address {target}: {pc.relation.prop}")
    for pc in presented_attack:
        if pc.consequent != negated:
            raise StructureError(f"attack piece does not address {negated}: {pc.relation.prop}")

    pool = build_evidence_set(kb, target, tuple(presented_support) + tuple(presented_attack))
    support = [pc for pc in pool if pc.consequent == target]
    attack = [pc for pc in pool if pc.consequent == negated]

    prior_t = kb.own_belief(target)
    prior_n = kb.own_belief(negated)
    t_counts = prior_t is not None and _standing(kb, prior_t)
    n_counts = prior_n is not None and _standing(kb, prior_n)

    # a standing prior subsumes a bare self-assertion of the same proposition
    if t_counts:
        support = [pc for pc in support if pc.belief.prop != target]
    if n_counts:
        attack = [pc for pc in attack if pc.belief.prop != negated]
    support = _dedupe_side(support)
    attack = _dedupe_side(attack)

    support_score = sum(int(piece_strength(pc)) for pc in support)
    attack_score = sum(int(piece_strength(pc)) for pc in attack)
    if t_counts:
        support_score += prior_t.rank
    if n_counts:
        attack_score += prior_n.rank

    if support_score - attack_score >= tau:
        outcome = VerdictOutcome.ACCEPT
    elif attack_score - support_score >= tau:
        outcome = VerdictOutcome.REJECT
    elif (
        prior_t is not None
        and prior_t.endorsement.kind is SourceKind.DERIVED
        and not t_counts
    ):
        outcome = VerdictOutcome.ABANDON
    else:
        outcome = VerdictOutcome.UNCERTAIN

    verdict = Verdict(outcome, support_score, attack_score)
    if trace is not None:
        payload = {
            "agent": agent,
            "target": target.render(),
            "supportScore": support_score,
            "attackScore": attack_score,
            "outcome": outcome.value,
            "method": method,
        }
        if note:
            payload["note"] = note
        trace.emit("revise", **payload)
    return ReviseDetail(
        verdict,
        tuple(support),
        tuple(attack),
        prior_t if t_counts else None,
        prior_n if n_counts else None,
    )


def revise(
    kb: KnowledgeBase,
    target: Proposition,
    presented_support: Iterable[EvidencePiece] = (),
    presented_attack: Iterable[EvidencePiece] = (),
    tau: int = 1,
    *,
    trace=None,
    agent: str = "",
    note: str = "",
) -> Verdict:
    """Weigh all evidence about ``target`` and return a verdict.

    Scores are rank sums over the deduplicated evidence on each side, plus
    the agent's own prior on the matching side when it independently stands.
    Accept and reject require a margin of at least ``tau``; a derived prior
    whose entire basis is refuted is abandoned; everything else is uncertain.
    """
    return revise_detail(
        kb,
        target,
        presented_support,
        presented_attack,
        tau,
        trace=trace,
        agent=agent,
        note=note,
    ).verdict


# ---------------------------------------------------------------------------
# assimilation


def _adopt(
    kb: KnowledgeBase, prop: Proposition, evidence: Iterable[EvidencePiece]
) -> KnowledgeBase:
    relevant = [pc for pc in evidence if pc.consequent == prop]
    prior = kb.own_belief(prop)
    if not relevant:
        if prior is None:
            raise ContractViolation(f"cannot adopt {prop} with no evidence and no prior")
        return kb.own_remove(prop.negate()) if kb.holds(prop.negate()) else kb
    win = min(max(piece_strength(pc) for pc in relevant), StrengthLevel.WARRANTED)
    if prior is not None and prior.endorsement.level >= win:
        return kb
    basis = sorted({pc.belief.prop for pc in relevant if pc.belief.prop != prop})
    if basis:
        endorsement = Endorsement.derived(win, basis)
    else:
        # bare assertion: keep the assertion provenance rather than a
        # self-referential derivation
        direct = max(relevant, key=piece_strength)
        endorsement = replace(direct.belief.endorsement, level=win)
    return kb.own_add(Belief(prop, endorsement))


def assimilate(
    kb: KnowledgeBase,
    verdict: Verdict,
    target: Proposition,
    evidence: Iterable[EvidencePiece] = (),
) -> KnowledgeBase:
    """Fold a revision verdict into the store.

    Accepting adopts the target (at the winning strength, derived from the
    credited evidence) and drops its negation; rejecting does the mirror
    image; abandoning removes the target without endorsing its negation.
    """
    evidence = tuple(evidence)
    if verdict.outcome is VerdictOutcome.ACCEPT:
        return _adopt(kb, target, evidence)
    if verdict.outcome is VerdictOutcome.REJECT:
        kb = kb.own_remove(target)
        return _adopt(kb, target.negate(), evidence)
    if verdict.outcome is VerdictOutcome.ABANDON:
        return kb.own_remove(target)
    raise ContractViolation("an uncertain verdict cannot be assimilated")
