"""Choosing what part of a rejected proposal to try to change.

The rejecting agent simulates the proposer with its user model: it predicts
how the proposer would re-judge each disputed proposition if particular
beliefs were given up and the evidence from both sides were on the table.
The smallest set of beliefs whose removal flips the proposer becomes the
focus of modification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .beliefs import (
    ContractViolation,
    EvidencePiece,
    KnowledgeBase,
    Proposition,
    SourceKind,
    Verdict,
    VerdictOutcome,
    revise,
)
from .evaluation import EvaluatedNode


def flips(verdict: Verdict) -> bool:
    return verdict.outcome in (VerdictOutcome.REJECT, VerdictOutcome.ABANDON)


def removal_closure(model: KnowledgeBase, removed: Iterable[Proposition]) -> frozenset:
    """Everything lost when ``removed`` goes: the set itself plus every
    modelled belief derived solely from members of the growing set."""
    closure = set(removed)
    changed = True
    while changed:
        changed = False
        for belief in model.own:
            if belief.prop in closure:
                continue
            e = belief.endorsement
            if e.kind is SourceKind.DERIVED and e.support <= closure:
                closure.add(belief.prop)
                changed = True
    return frozenset(closure)


def predict(
    model: KnowledgeBase,
    target: Proposition,
    hypothesized: Iterable[EvidencePiece] = (),
    removed: Iterable[Proposition] = (),
    tau: int = 1,
    *,
    trace=None,
    agent: str = "",
    note: str = "",
) -> Verdict:
    """Simulate the modelled agent revising ``target``.

    ``removed`` beliefs (and everything resting solely on them) are taken
    out of the model first; hypothesized evidence touching a removed
    proposition is discarded rather than presented.  The target itself is
    never deleted, so a derivation left baseless is abandoned, not merely
    forgotten.
    """
    closure = removal_closure(model, removed)
    hyp = [
        pc
        for pc in hypothesized
        if pc.belief.prop not in closure and pc.relation.prop not in closure
    ]
    pruned = model
    for prop in sorted(closure):
        if prop != target:
            pruned = pruned.own_remove(prop)
    support = [pc for pc in hyp if pc.consequent == target]
    attack = [pc for pc in hyp if pc.consequent == target.negate()]
    verdict = revise(pruned, target, support, attack, tau)
    if trace is not None:
        payload = {
            "agent": agent,
            "target": target.render(),
            "supportScore": verdict.support_score,
            "attackScore": verdict.attack_score,
            "outcome": verdict.outcome.value,
            "removed": sorted(p.render() for p in removed),
        }
        if note:
            payload["note"] = note
        trace.emit("predict", **payload)
    return verdict


def select_min_set(
    target: Proposition,
    cand_set: Iterable[Proposition],
    model: KnowledgeBase,
    tau: int = 1,
    *,
    hypothesized: Iterable[EvidencePiece] = (),
    weights: Optional[Mapping[Proposition, int]] = None,
    trace=None,
    agent: str = "",
) -> tuple[Proposition, ...]:
    """Find a smallest subset of candidates whose removal flips the target.

    The full candidate set must already flip it.  Among same-size subsets,
    the one whose members carry the most total weight wins; remaining ties
    fall back to canonical text order.
    """
    cand = sorted(set(cand_set))
    if not cand:
        raise ContractViolation("no candidates to select from")
    hypothesized = tuple(hypothesized)
    if not flips(predict(model, target, hypothesized, cand, tau)):
        raise ContractViolation("full candidate set does not flip the target")

    def weight(prop: Proposition) -> int:
        return weights.get(prop, 0) if weights else 0

    for size in range(1, len(cand) + 1):
        qualifying = [
            combo
            for combo in itertools.combinations(cand, size)
            if flips(predict(model, target, hypothesized, combo, tau))
        ]
        if qualifying:
            chosen = min(
                qualifying,
                key=lambda combo: (
                    -sum(weight(m) for m in combo),
                    tuple(m.render() for m in combo),
                ),
            )
            if trace is not None:
                trace.emit(
                    "minset",
                    agent=agent,
                    target=target.render(),
                    candidates=[m.render() for m in cand],
                    chosen=[m.render() for m in chosen],
                    size=size,
                )
            return tuple(chosen)
    raise ContractViolation("unreachable: full set flips but no subset found")


@dataclass(frozen=True)
class FociNode:
    """Per-node outcome of focus selection; ``focus`` is None when no
    modification of this subtree looks winnable."""

    target: Proposition
    step: str
    focus: Optional[frozenset]
    cand_set: tuple[Proposition, ...] = ()
    children: tuple["FociNode", ...] = ()


def select_focus_modification(
    evaluated: EvaluatedNode,
    model: KnowledgeBase,
    tau: int = 1,
    *,
    trace=None,
    agent: str = "",
) -> FociNode:
    """Walk an evaluated (and unaccepted) proposal choosing what to dispute.

    Leaves are flippable or not by direct prediction.  For internal nodes,
    first try undermining the flippable members alone, then a head-on
    counter, then both combined; each stage predicts with the proposer's
    own presented evidence, plus this agent's counterevidence for the
    head-on stages.
    """

    def emit(node: FociNode) -> FociNode:
        if trace is not None:
            trace.emit(
                "foci",
                agent=agent,
                target=node.target.render(),
                step=node.step,
                focus=None if node.focus is None else sorted(p.render() for p in node.focus),
                cand=[p.render() for p in node.cand_set],
            )
        return node

    def relation_focus(child) -> Optional[frozenset]:
        verdict = predict(
            model,
            child.relation,
            child.rel_u_evid + child.rel_s_attack,
            (),
            tau,
            trace=trace,
            agent=agent,
            note="relation",
        )
        return frozenset({child.relation}) if flips(verdict) else None

    def walk(ev: EvaluatedNode) -> FociNode:
        if not ev.children:
            verdict = predict(
                model,
                ev.prop,
                ev.u_evid + ev.s_attack,
                (),
                tau,
                trace=trace,
                agent=agent,
                note="leaf",
            )
            focus = frozenset({ev.prop}) if flips(verdict) else None
            return emit(FociNode(ev.prop, "leaf", focus))

        kids: list[FociNode] = []
        member_focus: dict[Proposition, frozenset] = {}
        for child in ev.children:
            if child.counted:
                continue
            if not child.evaluated.accepted:
                sub = walk(child.evaluated)
                focus = sub.focus
                if focus is None and not child.relation_accepted:
                    # belief cannot be shaken; see whether the link can
                    focus = relation_focus(child)
                    if focus is not None:
                        sub = FociNode(sub.target, sub.step, focus, sub.cand_set, sub.children)
                kids.append(sub)
            else:
                focus = relation_focus(child)
                kids.append(emit(FociNode(child.relation, "relation", focus)))
            if focus is not None:
                member_focus[child.evaluated.prop] = focus

        cand = tuple(sorted(member_focus))
        kids_t = tuple(kids)

        if cand:
            verdict = predict(
                model, ev.prop, ev.u_evid, cand, tau, trace=trace, agent=agent, note="evidence"
            )
            if flips(verdict):
                chosen = select_min_set(
                    ev.prop,
                    cand,
                    model,
                    tau,
                    hypothesized=ev.u_evid,
                    trace=trace,
                    agent=agent,
                )
                focus = frozenset().union(*(member_focus[m] for m in chosen))
                return emit(FociNode(ev.prop, "evidence", focus, cand, kids_t))

        verdict = predict(
            model,
            ev.prop,
            ev.u_evid + ev.s_attack,
            (),
            tau,
            trace=trace,
            agent=agent,
            note="belief",
        )
        if flips(verdict):
            return emit(FociNode(ev.prop, "belief", frozenset({ev.prop}), cand, kids_t))

        if cand:
            verdict = predict(
                model,
                ev.prop,
                ev.u_evid + ev.s_attack,
                cand,
                tau,
                trace=trace,
                agent=agent,
                note="both",
            )
            if flips(verdict):
                chosen = select_min_set(
                    ev.prop,
                    cand,
                    model,
                    tau,
                    hypothesized=ev.u_evid + ev.s_attack,
                    trace=trace,
                    agent=agent,
                )
                focus = frozenset({ev.prop}).union(*(member_focus[m] for m in chosen))
                return emit(FociNode(ev.prop, "both", focus, cand, kids_t))

        return emit(FociNode(ev.prop, "nil", None, cand, kids_t))

    return walk(evaluated)
