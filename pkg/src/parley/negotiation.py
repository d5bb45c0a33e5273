"""Two-agent belief negotiation.

One agent proposes a belief tree; the other evaluates it and either agrees,
asks for more information, or tries to correct the flawed part.  A
correction is itself a claim that may need justifying, and the exchange
recurses: each counter-claim opens an embedded negotiation at one more
level of nesting.  When a correction lands, the original proposal is
modified accordingly, re-judged by its proposer, and the corrected form is
ratified, so both stores converge instead of merely trading assertions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .beliefs import (
    Belief,
    ContractViolation,
    Endorsement,
    Expertise,
    KnowledgeBase,
    Proposition,
    StrengthLevel,
    Verdict,
    VerdictOutcome,
    assertion_piece,
    assertion_strength,
    assimilate,
    revise_detail,
)
from .evaluation import (
    EvaluatedNode,
    ProposalNode,
    assimilate_evaluated,
    evaluate_proposal,
    record_proposal,
    render_tree,
)
from .focus import select_focus_modification
from .justification import (
    JustificationChoice,
    NoSufficientJustification,
    build_justification_chains,
    needs_justification,
    realized_beliefs,
    select_justification,
)
from .trace import Trace


class ActKind(str, Enum):
    PROPOSE = "propose"
    INFORM = "inform"
    ACCEPT = "accept"
    # defined for completeness; the current strategy corrects by informing
    REJECT_WITH_PROPOSAL = "reject-with-proposal"
    INFO_SHARE_REQUEST = "info-share-request"


_VERBS = {
    ActKind.PROPOSE: "PROPOSE",
    ActKind.INFORM: "INFORM",
    ActKind.ACCEPT: "ACCEPT",
    ActKind.REJECT_WITH_PROPOSAL: "REJECT",
    ActKind.INFO_SHARE_REQUEST: "INFOSHARE",
}


@dataclass(frozen=True)
class DiscourseAct:
    """One dialogue move.  ``level`` separates moves about the domain from
    moves steering the problem-solving process itself."""

    kind: ActKind
    speaker: str
    prop: Optional[Proposition] = None
    proposal: Optional[ProposalNode] = None

    @property
    def level(self) -> str:
        return "control" if self.kind is ActKind.INFO_SHARE_REQUEST else "domain"

    def realize(self) -> str:
        body = render_tree(self.proposal) if self.proposal is not None else self.prop.render()
        return f"{self.speaker}: {_VERBS[self.kind]} {body}"


class DepthExceededError(RuntimeError):
    """Negotiation nested deeper than the configured bound."""


@dataclass(frozen=True)
class NegotiationConfig:
    tau: int = 1
    max_depth: int = 16

    def __post_init__(self) -> None:
        if self.tau < 1:
            raise ContractViolation(f"threshold must be at least 1, got {self.tau}")
        if self.max_depth < 1:
            raise ContractViolation(f"max depth must be at least 1, got {self.max_depth}")


@dataclass(frozen=True)
class Transcript:
    acts: tuple[DiscourseAct, ...]
    outcome: str
    depth: int
    rounds: int
    ratified_root: Optional[Proposition]
    final_beliefs: dict[str, KnowledgeBase]
    conceded_by: Optional[str] = None

    def realize(self) -> list[str]:
        return [act.realize() for act in self.acts]


@dataclass
class _Session:
    kbs: dict[str, KnowledgeBase]
    config: NegotiationConfig
    trace: Trace
    acts: list[DiscourseAct] = field(default_factory=list)
    presented: dict[tuple[str, str], set] = field(default_factory=dict)
    conceded_by: Optional[str] = None
    depth_max: int = 0
    rounds: int = 0

    def expertise(self, agent: str) -> Expertise:
        return self.kbs[agent].expertise

    def model_of(self, agent: str) -> KnowledgeBase:
        other = next(a for a in self.kbs if a != agent)
        return KnowledgeBase(
            own=self.kbs[agent].user_model, expertise=self.expertise(other)
        )

    def act(
        self,
        kind: ActKind,
        speaker: str,
        *,
        prop: Optional[Proposition] = None,
        proposal: Optional[ProposalNode] = None,
    ) -> None:
        act = DiscourseAct(kind, speaker, prop=prop, proposal=proposal)
        self.acts.append(act)
        self.trace.emit(
            "act", speaker=speaker, act=kind.value, content=act.realize().split(": ", 1)[1]
        )

    def already_presented(self, speaker: str, claim: Proposition, props) -> bool:
        key = (speaker, claim.render())
        seen = self.presented.get(key)
        rendered = {p.render() for p in props}
        if seen is not None and rendered <= seen:
            return True
        self.presented.setdefault(key, set()).update(rendered)
        return False


@dataclass(frozen=True)
class _Result:
    status: str  # "settled" | "unresolved"
    ratified: Optional[Proposition]


@dataclass(frozen=True)
class _Step:
    kind: str  # "settled" | "retry" | "conceded" | "unresolved"
    ratified: Optional[Proposition] = None
    tree: Optional[ProposalNode] = None


def _asserted_level(kb: KnowledgeBase, prop: Proposition) -> StrengthLevel:
    held = kb.own_belief(prop)
    if held is not None:
        return held.endorsement.level
    detail = revise_detail(kb, prop)
    if detail.verdict.outcome is VerdictOutcome.ACCEPT:
        return detail.winning_strength()
    return assertion_strength(kb.expertise)


def _claim_tree(kb: KnowledgeBase, choice: JustificationChoice) -> ProposalNode:
    def from_link(link) -> ProposalNode:
        return ProposalNode(
            link.prop,
            link.belief_level,
            tuple(from_link(c) for c in link.children),
        )

    return ProposalNode(
        choice.claim,
        _asserted_level(kb, choice.claim),
        tuple(from_link(chain.link) for chain in choice.chains),
    )


def _apply_correction(tree: ProposalNode, member: Proposition) -> tuple[ProposalNode, Optional[str]]:
    """Drop the focused member from the proposal: pruning a belief node is a
    node modification, detaching a disputed relation removes the edge."""
    changed: list[str] = []

    def walk(node: ProposalNode) -> ProposalNode:
        kept: list[ProposalNode] = []
        for child in node.children:
            if child.prop == member:
                changed.append("modify-node")
                continue
            if node.relation_to(child) == member:
                changed.append("remove-node")
                continue
            kept.append(walk(child))
        return ProposalNode(node.prop, node.asserted_level, tuple(kept))

    pruned = walk(tree)
    return pruned, (changed[0] if changed else None)


def _hypothetical_concession(
    model: KnowledgeBase, member: Proposition, claim: Proposition, level: StrengthLevel
) -> KnowledgeBase:
    """Working copy of the hearer model assuming the pending claim lands."""
    from .focus import removal_closure

    for prop in sorted(removal_closure(model, (member,))):
        model = model.own_remove(prop)
    return model.own_add(Belief(claim, Endorsement.stereotype(level)))


def _observe_acceptance(session: _Session, observer: str, acceptor: str, props) -> None:
    level = assertion_strength(session.expertise(acceptor))
    kb = session.kbs[observer]
    for prop in sorted(props):
        existing = kb.model_belief(prop)
        if existing is not None and existing.endorsement.level >= level:
            continue
        kb = kb.model_add(
            Belief(prop, Endorsement.assertion(level, acceptor, session.expertise(acceptor)))
        )
    session.kbs[observer] = kb


def _concede(session: _Session, loser: str, winner: str, tree: ProposalNode) -> _Step:
    root = tree.prop
    evidence = [assertion_piece(root, winner, session.expertise(winner))]
    session.kbs[loser] = assimilate(
        session.kbs[loser], Verdict(VerdictOutcome.ACCEPT, 0, 0), root, evidence
    )
    session.act(ActKind.ACCEPT, loser, prop=root)
    session.conceded_by = loser
    _observe_acceptance(session, winner, loser, [root])
    return _Step("conceded", ratified=root)


def negotiate(
    kbs: dict[str, KnowledgeBase],
    proposer: str,
    proposal: ProposalNode,
    config: NegotiationConfig = NegotiationConfig(),
    *,
    trace: Optional[Trace] = None,
) -> Transcript:
    """Run one full negotiation and return its transcript.

    ``kbs`` maps exactly two agent names to their stores; ``proposer``
    speaks first.  The session mutates working copies only (callers keep
    their stores) and every verdict along the way lands in ``trace``.
    """
    if len(kbs) != 2 or proposer not in kbs:
        raise ContractViolation("negotiation needs exactly two agents, proposer included")
    evaluator = next(a for a in kbs if a != proposer)
    session = _Session(kbs=dict(kbs), config=config, trace=trace or Trace())

    session.act(ActKind.PROPOSE, proposer, proposal=proposal)
    session.already_presented(proposer, proposal.prop, proposal.props())
    result = _settle(session, proposer, evaluator, proposal, depth=0)

    outcome = "unresolved-needs-sharing"
    if result.status == "settled":
        outcome = (
            f"concession:{session.conceded_by}" if session.conceded_by else "agreement"
        )
    return Transcript(
        acts=tuple(session.acts),
        outcome=outcome,
        depth=session.depth_max,
        rounds=session.rounds,
        ratified_root=result.ratified,
        final_beliefs=dict(session.kbs),
        conceded_by=session.conceded_by,
    )


def _settle(
    session: _Session, proposer: str, evaluator: str, tree: ProposalNode, depth: int
) -> _Result:
    if depth > session.config.max_depth:
        raise DepthExceededError(f"nesting exceeded {session.config.max_depth}")
    session.depth_max = max(session.depth_max, depth)

    fresh = True
    current = tree
    guard = 0
    while True:
        guard += 1
        if guard > 256:
            raise ContractViolation("negotiation round failed to terminate")
        session.rounds += 1
        session.kbs[evaluator] = record_proposal(
            session.kbs[evaluator],
            current,
            speaker=proposer,
            expertise=session.expertise(proposer),
        )
        evaluated = evaluate_proposal(
            session.kbs[evaluator],
            current,
            session.config.tau,
            proposer=proposer,
            proposer_expertise=session.expertise(proposer),
            trace=session.trace,
            agent=evaluator,
        )
        outcome = evaluated.verdict.outcome

        if outcome is VerdictOutcome.ACCEPT:
            if fresh:
                session.act(ActKind.ACCEPT, evaluator, prop=current.prop)
            session.kbs[evaluator], agreed = assimilate_evaluated(
                session.kbs[evaluator],
                evaluated,
                proposer=proposer,
                proposer_expertise=session.expertise(proposer),
            )
            _observe_acceptance(session, proposer, evaluator, agreed)
            return _Result("settled", current.prop)

        if outcome is VerdictOutcome.UNCERTAIN:
            session.act(ActKind.INFO_SHARE_REQUEST, evaluator, prop=current.prop)
            return _Result("unresolved", None)

        step = _handle_rejection(session, proposer, evaluator, current, evaluated, depth)
        if step.kind == "unresolved":
            return _Result("unresolved", None)
        if step.kind in ("settled", "conceded"):
            return _Result("settled", step.ratified)
        current = step.tree
        fresh = False


def _handle_rejection(
    session: _Session,
    proposer: str,
    evaluator: str,
    tree: ProposalNode,
    evaluated: EvaluatedNode,
    depth: int,
) -> _Step:
    tau = session.config.tau
    model = session.model_of(evaluator)
    foci = select_focus_modification(
        evaluated, model, tau, trace=session.trace, agent=evaluator
    )
    if foci.focus is None:
        return _concede(session, evaluator, proposer, tree)

    members = sorted(foci.focus)
    session.trace.emit(
        "recipe",
        agent=evaluator,
        recipe="correct-node",
        focus=[m.render() for m in members],
        mutual_beliefs=[m.negate().render() for m in members],
    )

    working = model
    counters: list[ProposalNode] = []
    informs: list[Proposition] = []
    for member in members:
        claim = member.negate()
        if needs_justification(
            working, claim, evaluator, session.expertise(evaluator), tau
        ):
            chains = build_justification_chains(
                session.kbs[evaluator],
                working,
                claim,
                tau,
                speaker=evaluator,
                expertise=session.expertise(evaluator),
            )
            try:
                choice = select_justification(
                    chains,
                    working,
                    claim,
                    tau,
                    speaker=evaluator,
                    expertise=session.expertise(evaluator),
                    trace=session.trace,
                    agent=evaluator,
                )
            except NoSufficientJustification:
                return _concede(session, evaluator, proposer, tree)
        else:
            choice = JustificationChoice(claim, ())
        realized = realized_beliefs(choice, working)
        if session.already_presented(evaluator, claim, realized):
            return _concede(session, evaluator, proposer, tree)
        informs.extend(realized)
        counters.append(_claim_tree(session.kbs[evaluator], choice))
        working = _hypothetical_concession(
            working, member, claim, assertion_strength(session.expertise(evaluator))
        )

    for prop in informs:
        session.act(ActKind.INFORM, evaluator, prop=prop)

    for counter in counters:
        sub = _settle(session, evaluator, proposer, counter, depth + 1)
        if sub.status == "unresolved":
            return _Step("unresolved")

    achieved = all(not session.kbs[proposer].holds(m) for m in members)
    if not achieved:
        return _Step("retry", tree=tree)

    current = tree
    for member in members:
        if member == current.prop:
            continue
        current, recipe = _apply_correction(current, member)
        if recipe is not None:
            session.trace.emit(
                "recipe", agent=proposer, recipe=recipe, target=member.render()
            )

    detail = revise_detail(
        session.kbs[proposer],
        current.prop,
        tau=tau,
        trace=session.trace,
        agent=proposer,
        note="re-revise",
    )
    verdict = detail.verdict
    if verdict.outcome is VerdictOutcome.ACCEPT:
        return _Step("retry", tree=current)
    if verdict.outcome is VerdictOutcome.UNCERTAIN:
        session.act(ActKind.INFO_SHARE_REQUEST, proposer, prop=current.prop)
        return _Step("unresolved")

    session.kbs[proposer] = assimilate(
        session.kbs[proposer],
        verdict,
        current.prop,
        detail.support_pieces + detail.attack_pieces,
    )
    negated = current.prop.negate()
    corrected = negated if session.kbs[evaluator].holds(negated) else None
    session.trace.emit(
        "recipe",
        agent=proposer,
        recipe="alter-node",
        target=current.prop.render(),
        corrected=None if corrected is None else corrected.render(),
    )
    if corrected is None:
        # the claim is withdrawn outright and nothing replaces it
        return _Step("settled", ratified=None)

    session.trace.emit(
        "recipe", agent=proposer, recipe="insert-correction", target=corrected.render()
    )
    corrected_tree = ProposalNode(
        corrected, _asserted_level(session.kbs[evaluator], corrected)
    )
    session.kbs[proposer] = record_proposal(
        session.kbs[proposer],
        corrected_tree,
        speaker=evaluator,
        expertise=session.expertise(evaluator),
    )
    ratified = evaluate_proposal(
        session.kbs[proposer],
        corrected_tree,
        tau,
        proposer=evaluator,
        proposer_expertise=session.expertise(evaluator),
        trace=session.trace,
        agent=proposer,
    )
    if ratified.verdict.outcome is VerdictOutcome.ACCEPT:
        session.kbs[proposer], agreed = assimilate_evaluated(
            session.kbs[proposer],
            ratified,
            proposer=evaluator,
            proposer_expertise=session.expertise(evaluator),
        )
        _observe_acceptance(session, evaluator, proposer, agreed)
        return _Step("settled", ratified=corrected)
    if ratified.verdict.outcome is VerdictOutcome.UNCERTAIN:
        session.act(ActKind.INFO_SHARE_REQUEST, proposer, prop=corrected)
        return _Step("unresolved")

    # the correction itself is disputed: the corrector must defend it
    session.act(ActKind.PROPOSE, evaluator, proposal=corrected_tree)
    session.already_presented(evaluator, corrected, corrected_tree.props())
    sub = _settle(session, evaluator, proposer, corrected_tree, depth)
    return _Step("settled" if sub.status == "settled" else "unresolved", ratified=sub.ratified)
