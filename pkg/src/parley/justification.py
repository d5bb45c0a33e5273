"""Evidence-based justification of a claim for a particular hearer.

Before uttering a counter-claim, an agent checks whether the hearer would
take it on bare say-so.  If not, it assembles chains of its own evidence,
recursively justifying any link the hearer would balk at, then picks the
cheapest sufficient bundle: highest worst-link confidence, then most novel
to the hearer, then fewest beliefs, then canonical order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .beliefs import (
    Belief,
    Direction,
    Endorsement,
    EvidencePiece,
    Expertise,
    KnowledgeBase,
    Proposition,
    StrengthLevel,
    VerdictOutcome,
    assertion_piece,
    build_evidence_set,
    revise,
)


class NoSufficientJustification(RuntimeError):
    """No combination of available evidence would convince the hearer."""


@dataclass(frozen=True)
class JustificationLink:
    """One piece of offered evidence: a belief, the relation tying it to its
    parent claim, and the strengths both are held at."""

    prop: Proposition
    relation: Proposition
    belief_level: StrengthLevel
    relation_level: StrengthLevel
    children: tuple["JustificationLink", ...] = ()

    def min_confidence(self) -> StrengthLevel:
        own = min(self.belief_level, self.relation_level)
        return min([own] + [c.min_confidence() for c in self.children])

    def belief_count(self) -> int:
        return 1 + sum(c.belief_count() for c in self.children)


@dataclass(frozen=True)
class JustificationChain:
    claim: Proposition
    link: JustificationLink

    def min_confidence(self) -> StrengthLevel:
        return self.link.min_confidence()

    def belief_count(self) -> int:
        return self.link.belief_count()

    def direct_piece(self) -> EvidencePiece:
        return EvidencePiece(
            Belief(self.link.prop, Endorsement.kb_record(self.link.belief_level)),
            Belief(self.link.relation, Endorsement.kb_record(self.link.relation_level)),
            Direction.SUPPORTS,
        )

    def key(self) -> tuple[str, ...]:
        out: list[str] = []

        def dfs(link: JustificationLink) -> None:
            out.append(link.prop.render())
            for child in link.children:
                dfs(child)

        dfs(self.link)
        return tuple(out)


@dataclass(frozen=True)
class JustificationChoice:
    claim: Proposition
    chains: tuple[JustificationChain, ...]


def needs_justification(
    model: KnowledgeBase,
    claim: Proposition,
    speaker: str,
    expertise: Expertise,
    tau: int = 1,
) -> bool:
    """Would the hearer decline the claim on the speaker's word alone?"""
    verdict = revise(model, claim, [assertion_piece(claim, speaker, expertise)], tau=tau)
    return verdict.outcome is not VerdictOutcome.ACCEPT


def _bare_accept(
    model: KnowledgeBase, prop: Proposition, speaker: str, expertise: Expertise, tau: int
) -> bool:
    verdict = revise(model, prop, [assertion_piece(prop, speaker, expertise)], tau=tau)
    return verdict.outcome is VerdictOutcome.ACCEPT


def build_justification_chains(
    kb: KnowledgeBase,
    model: KnowledgeBase,
    claim: Proposition,
    tau: int = 1,
    *,
    speaker: str,
    expertise: Expertise,
    _path: frozenset = frozenset(),
) -> tuple[JustificationChain, ...]:
    """Every way the speaker's own evidence can back ``claim`` for this
    hearer.  Links the hearer would reject bare are justified recursively;
    evidence with no convincing story behind it is dropped."""
    path = _path | {claim}
    chains: list[JustificationChain] = []
    for piece in build_evidence_set(kb, claim):
        if piece.direction is not Direction.SUPPORTS:
            continue
        prop = piece.belief.prop
        if prop == claim or prop in path or prop.negate() in path:
            continue
        levels = (piece.belief.endorsement.level, piece.relation.endorsement.level)
        if _bare_accept(model, prop, speaker, expertise, tau):
            chains.append(
                JustificationChain(claim, JustificationLink(prop, piece.relation.prop, *levels))
            )
            continue
        sub = build_justification_chains(
            kb, model, prop, tau, speaker=speaker, expertise=expertise, _path=path
        )
        children = _sufficient_children(model, prop, sub, speaker, expertise, tau)
        if children is None:
            continue
        chains.append(
            JustificationChain(
                claim, JustificationLink(prop, piece.relation.prop, *levels, children=children)
            )
        )
    return tuple(sorted(chains, key=lambda c: c.key()))


def _sufficient_children(
    model: KnowledgeBase,
    prop: Proposition,
    sub: tuple[JustificationChain, ...],
    speaker: str,
    expertise: Expertise,
    tau: int,
) -> Optional[tuple[JustificationLink, ...]]:
    """Smallest bundle of sub-chains that gets ``prop`` accepted, trying
    canonical order within each size; None when nothing suffices."""
    for size in range(1, len(sub) + 1):
        for combo in itertools.combinations(sub, size):
            presented = [assertion_piece(prop, speaker, expertise)]
            presented.extend(c.direct_piece() for c in combo)
            if revise(model, prop, presented, tau=tau).outcome is VerdictOutcome.ACCEPT:
                return tuple(c.link for c in combo)
    return None


def select_justification(
    chains: Iterable[JustificationChain],
    model: KnowledgeBase,
    claim: Proposition,
    tau: int = 1,
    *,
    speaker: str,
    expertise: Expertise,
    trace=None,
    agent: str = "",
) -> JustificationChoice:
    """Pick the bundle of chains to actually utter.

    A bundle survives when presenting its direct evidence with the claim
    makes the hearer accept; surviving supersets of surviving bundles are
    discarded.  Ties are broken by worst-link confidence, novelty to the
    hearer, total size, and finally canonical order.
    """
    pool = sorted(chains, key=lambda c: c.key())
    survivors: list[tuple[JustificationChain, ...]] = []
    for size in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            presented = [assertion_piece(claim, speaker, expertise)]
            presented.extend(c.direct_piece() for c in combo)
            if revise(model, claim, presented, tau=tau).outcome is VerdictOutcome.ACCEPT:
                survivors.append(combo)
    if not survivors:
        raise NoSufficientJustification(f"no sufficient justification for {claim}")

    def is_superset(combo, other) -> bool:
        return combo != other and set(other) <= set(combo)

    survivors = [c for c in survivors if not any(is_superset(c, o) for o in survivors)]

    def combo_props(combo) -> list[Proposition]:
        out: list[Proposition] = []

        def dfs(link: JustificationLink) -> None:
            out.append(link.prop)
            for child in link.children:
                dfs(child)

        for chain in combo:
            dfs(chain.link)
        return out

    def score(combo):
        props = combo_props(combo)
        fresh = sum(
            1
            for p in props
            if model.own_belief(p) is None and model.own_belief(p.negate()) is None
        )
        return (
            -int(min(c.min_confidence() for c in combo)),
            -fresh,
            sum(c.belief_count() for c in combo),
            tuple(c.key() for c in combo),
        )

    ranked = sorted(survivors, key=score)
    best = ranked[0]
    if trace is not None:
        if len(survivors) == 1:
            rule = "only"
        else:
            runner = ranked[1]
            b, r = score(best), score(runner)
            rule = ("confidence", "novelty", "size", "canonical")[
                next(i for i in range(4) if b[i] != r[i])
            ]
        trace.emit(
            "heuristic",
            agent=agent,
            claim=claim.render(),
            chosen=[c.key()[0] for c in best],
            candidates=len(survivors),
            rule=rule,
        )
    return JustificationChoice(claim, tuple(best))


def realized_beliefs(
    choice: JustificationChoice, model: KnowledgeBase
) -> tuple[Proposition, ...]:
    """What actually gets uttered: the claim, then each chain's beliefs in
    presentation order, with relations included only when the hearer is not
    already modelled as holding them."""
    out: list[Proposition] = [choice.claim]

    def dfs(link: JustificationLink) -> None:
        out.append(link.prop)
        if not model.holds(link.relation):
            out.append(link.relation)
        for child in link.children:
            dfs(child)

    for chain in choice.chains:
        dfs(chain.link)
    return tuple(out)
