"""Shared helpers: bundled scenario loading and seeded random generators."""

from __future__ import annotations

import random
from importlib import resources

import pytest

from parley import (
    Belief,
    Endorsement,
    Expertise,
    KnowledgeBase,
    NegotiationConfig,
    ProposalNode,
    Proposition,
    Scenario,
    StrengthLevel,
    negotiate,
    parse_scenario,
    supports_prop,
)
from parley.trace import Trace

LEVELS = (StrengthLevel.WEAK, StrengthLevel.STRONG, StrengthLevel.WARRANTED)


def load_bundled(name: str) -> Scenario:
    text = resources.files("parley.scenarios").joinpath(f"{name}.scenario").read_text()
    return parse_scenario(text)


def run_scenario(scenario: Scenario, trace: Trace | None = None):
    return negotiate(
        {agent.id: agent.kb for agent in scenario.agents},
        scenario.proposer.id,
        scenario.proposal,
        NegotiationConfig(tau=scenario.tau, max_depth=scenario.max_depth),
        trace=trace,
    )


@pytest.fixture
def smith() -> Scenario:
    return load_bundled("smith")


def ground(name: str, negated: bool = False) -> Proposition:
    return Proposition(negated, name, ("x",))


# ---------------------------------------------------------------------------
# random belief stores for the search and robustness suites


def random_store(rng: random.Random, names: list[str], max_beliefs: int = 6) -> KnowledgeBase:
    """A contradiction-free store over ground props and relations on them."""
    polarity = {name: rng.choice([False, True]) for name in names}

    def lit(name: str) -> Proposition:
        return ground(name, polarity[name])

    held: list[str] = []
    beliefs: list[Belief] = []
    seen: set[Proposition] = set()
    for name in rng.sample(names, rng.randint(1, min(max_beliefs, len(names)))):
        level = rng.choice(LEVELS)
        if held and rng.random() < 0.25:
            basis = rng.sample(held, rng.randint(1, min(2, len(held))))
            endorsement = Endorsement.derived(level, [lit(b) for b in basis])
        else:
            endorsement = rng.choice(
                [Endorsement.kb_record(level), Endorsement.stereotype(level)]
            )
        beliefs.append(Belief(lit(name), endorsement))
        seen.add(lit(name))
        held.append(name)
    for _ in range(rng.randint(0, max_beliefs)):
        a, b = rng.sample(names, 2)
        rel = supports_prop(lit(a), ground(b, rng.choice([False, True])))
        if rel in seen:
            continue
        seen.add(rel)
        beliefs.append(Belief(rel, Endorsement.kb_record(rng.choice(LEVELS))))
    return KnowledgeBase(own=tuple(beliefs), expertise=rng.choice(list(Expertise)))


def random_revision_case(rng: random.Random):
    """A store, a target, presented evidence for both sides, and a threshold."""
    from parley import Direction, EvidencePiece
    from parley.beliefs import assertion_strength

    names = [f"p{i}" for i in range(5)]
    kb = random_store(rng, names)
    target = ground(rng.choice(names), rng.choice([False, True]))
    speaker_level = rng.choice(LEVELS)
    presented = []
    for _ in range(rng.randint(0, 3)):
        side = rng.choice([target, target.negate()])
        basis = ground(rng.choice(names + ["q"]), rng.choice([False, True]))
        if basis in (side, side.negate()):
            continue
        presented.append(
            EvidencePiece(
                Belief(basis, Endorsement.kb_record(rng.choice(LEVELS))),
                Belief(supports_prop(basis, side), Endorsement.kb_record(speaker_level)),
                Direction.SUPPORTS if side == target else Direction.ATTACKS,
            )
        )
    support = [pc for pc in presented if pc.consequent == target]
    attack = [pc for pc in presented if pc.consequent == target.negate()]
    return kb, target, support, attack, rng.choice([1, 2, 3])


def random_scenario(rng: random.Random) -> Scenario:
    """A small two-agent scenario with a real chance of disagreement."""
    from parley.scenario import AgentSpec

    names = [f"p{i}" for i in range(rng.randint(3, 6))]
    kb_a = random_store(rng, names)
    kb_b = random_store(rng, names)

    root_name = rng.choice(names)
    root_held = kb_a.own_belief(ground(root_name)) or kb_a.own_belief(ground(root_name, True))
    if root_held is not None:
        root = root_held.prop
        root_level = root_held.endorsement.level
    else:
        root = ground(root_name, rng.choice([False, True]))
        root_level = rng.choice(LEVELS)

    children = []
    for name in rng.sample(names, rng.randint(0, 2)):
        if name == root_name:
            continue
        held = kb_a.own_belief(ground(name)) or kb_a.own_belief(ground(name, True))
        if held is None:
            continue
        children.append(ProposalNode(held.prop, held.endorsement.level))
    proposal = ProposalNode(root, root_level, tuple(children))

    return Scenario(
        agents=(AgentSpec("A", kb_a), AgentSpec("B", kb_b)),
        proposal=proposal,
        tau=rng.choice([1, 1, 2]),
        max_depth=16,
    )
