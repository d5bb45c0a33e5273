"""Scenario files: a versioned JSON description of two agents, their belief
stores, and the opening proposal.

Negation is written with ``~`` in files (``¬`` is accepted too).  Parsing is
strict: unknown fields, bad levels, malformed propositions, and
contradictory stores are all reported with the JSON path to the offender.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from .beliefs import (
    Belief,
    ContradictionError,
    Endorsement,
    Expertise,
    KnowledgeBase,
    Proposition,
    SourceKind,
    StrengthLevel,
    StructureError,
    parse_proposition,
)
from .evaluation import ProposalNode, validate_tree

FORMAT_VERSION = 1


class ScenarioError(ValueError):
    """A scenario file is malformed; ``path`` locates the problem."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AgentSpec:
    id: str
    kb: KnowledgeBase


@dataclass(frozen=True)
class Scenario:
    agents: tuple[AgentSpec, AgentSpec]
    proposal: ProposalNode
    tau: int = 1
    max_depth: int = 16

    @property
    def proposer(self) -> AgentSpec:
        return self.agents[0]

    @property
    def evaluator(self) -> AgentSpec:
        return self.agents[1]


def _expect_object(value: Any, path: str, allowed: set) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(path, f"expected an object, got {type(value).__name__}")
    unknown = set(value) - allowed
    if unknown:
        raise ScenarioError(path, f"unknown field(s): {', '.join(sorted(unknown))}")
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ScenarioError(path, f"expected a list, got {type(value).__name__}")
    return value


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioError(path, "expected a non-empty string")
    return value


def _parse_prop(text: Any, path: str) -> Proposition:
    raw = _expect_str(text, path)
    try:
        return parse_proposition(raw)
    except StructureError as exc:
        raise ScenarioError(path, str(exc)) from None


def _parse_level(value: Any, path: str) -> StrengthLevel:
    raw = _expect_str(value, path)
    try:
        return StrengthLevel.parse(raw)
    except StructureError as exc:
        raise ScenarioError(path, str(exc)) from None


def _parse_source(value: Any, level: StrengthLevel, path: str) -> Endorsement:
    if isinstance(value, str):
        if value == "kb-record":
            return Endorsement.kb_record(level)
        if value == "stereotype":
            return Endorsement.stereotype(level)
        raise ScenarioError(path, f"unknown source: {value!r}")
    if isinstance(value, dict):
        if set(value) == {"assertion"}:
            body = _expect_object(value["assertion"], f"{path}.assertion", {"speaker", "expertise"})
            if "speaker" not in body or "expertise" not in body:
                raise ScenarioError(f"{path}.assertion", "needs speaker and expertise")
            speaker = _expect_str(body["speaker"], f"{path}.assertion.speaker")
            try:
                expertise = Expertise.parse(
                    _expect_str(body["expertise"], f"{path}.assertion.expertise")
                )
            except StructureError as exc:
                raise ScenarioError(f"{path}.assertion.expertise", str(exc)) from None
            return Endorsement.assertion(level, speaker, expertise)
        if set(value) == {"derived"}:
            body = _expect_object(value["derived"], f"{path}.derived", {"from"})
            props = _expect_list(body.get("from"), f"{path}.derived.from")
            if not props:
                raise ScenarioError(f"{path}.derived.from", "must not be empty")
            support = [
                _parse_prop(p, f"{path}.derived.from[{i}]") for i, p in enumerate(props)
            ]
            return Endorsement.derived(level, support)
        raise ScenarioError(path, "source object must be {'assertion': ...} or {'derived': ...}")
    raise ScenarioError(path, f"bad source: {value!r}")


def _parse_belief(value: Any, path: str) -> Belief:
    obj = _expect_object(value, path, {"prop", "level", "source"})
    for key in ("prop", "level", "source"):
        if key not in obj:
            raise ScenarioError(path, f"missing field: {key}")
    prop = _parse_prop(obj["prop"], f"{path}.prop")
    level = _parse_level(obj["level"], f"{path}.level")
    return Belief(prop, _parse_source(obj["source"], level, f"{path}.source"))


def _parse_agent(value: Any, path: str) -> AgentSpec:
    obj = _expect_object(value, path, {"id", "expertise", "beliefs", "userModel"})
    for key in ("id", "expertise", "beliefs"):
        if key not in obj:
            raise ScenarioError(path, f"missing field: {key}")
    agent_id = _expect_str(obj["id"], f"{path}.id")
    try:
        expertise = Expertise.parse(_expect_str(obj["expertise"], f"{path}.expertise"))
    except StructureError as exc:
        raise ScenarioError(f"{path}.expertise", str(exc)) from None
    beliefs = [
        _parse_belief(b, f"{path}.beliefs[{i}]")
        for i, b in enumerate(_expect_list(obj["beliefs"], f"{path}.beliefs"))
    ]
    model = [
        _parse_belief(b, f"{path}.userModel[{i}]")
        for i, b in enumerate(_expect_list(obj.get("userModel", []), f"{path}.userModel"))
    ]
    try:
        kb = KnowledgeBase(own=tuple(beliefs), user_model=tuple(model), expertise=expertise)
    except (ContradictionError, StructureError) as exc:
        raise ScenarioError(path, str(exc)) from None
    return AgentSpec(agent_id, kb)


def _parse_node(value: Any, path: str) -> ProposalNode:
    obj = _expect_object(value, path, {"prop", "assertedLevel", "children"})
    for key in ("prop", "assertedLevel"):
        if key not in obj:
            raise ScenarioError(path, f"missing field: {key}")
    prop = _parse_prop(obj["prop"], f"{path}.prop")
    level = _parse_level(obj["assertedLevel"], f"{path}.assertedLevel")
    children = tuple(
        _parse_node(c, f"{path}.children[{i}]")
        for i, c in enumerate(_expect_list(obj.get("children", []), f"{path}.children"))
    )
    return ProposalNode(prop, level, children)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None

    obj = _expect_object(data, "$", {"v", "agents", "proposal", "config"})
    for key in ("v", "agents", "proposal"):
        if key not in obj:
            raise ScenarioError("$", f"missing field: {key}")
    if obj["v"] != FORMAT_VERSION:
        raise ScenarioError("$.v", f"unsupported version: {obj['v']!r}")

    agents_raw = _expect_list(obj["agents"], "$.agents")
    if len(agents_raw) != 2:
        raise ScenarioError("$.agents", f"expected exactly 2 agents, got {len(agents_raw)}")
    agents = tuple(_parse_agent(a, f"$.agents[{i}]") for i, a in enumerate(agents_raw))
    if agents[0].id == agents[1].id:
        raise ScenarioError("$.agents", f"agent ids must differ, both are {agents[0].id!r}")

    proposal = _parse_node(obj["proposal"], "$.proposal")
    try:
        validate_tree(proposal)
    except StructureError as exc:
        raise ScenarioError("$.proposal", str(exc)) from None

    tau, max_depth = 1, 16
    if "config" in obj:
        config = _expect_object(obj["config"], "$.config", {"tau", "maxDepth"})
        if "tau" in config:
            tau = config["tau"]
            if not isinstance(tau, int) or isinstance(tau, bool) or tau < 1:
                raise ScenarioError("$.config.tau", "must be an integer >= 1")
        if "maxDepth" in config:
            max_depth = config["maxDepth"]
            if not isinstance(max_depth, int) or isinstance(max_depth, bool) or max_depth < 1:
                raise ScenarioError("$.config.maxDepth", "must be an integer >= 1")

    return Scenario(agents, proposal, tau, max_depth)


def _render_source(endorsement: Endorsement) -> Any:
    if endorsement.kind is SourceKind.KB_RECORD:
        return "kb-record"
    if endorsement.kind is SourceKind.STEREOTYPE:
        return "stereotype"
    if endorsement.kind is SourceKind.ASSERTION:
        return {
            "assertion": {
                "speaker": endorsement.speaker,
                "expertise": endorsement.expertise.value,
            }
        }
    return {"derived": {"from": [p.render(ascii_not=True) for p in sorted(endorsement.support)]}}


def _render_belief(belief: Belief) -> dict:
    return {
        "prop": belief.prop.render(ascii_not=True),
        "level": belief.endorsement.level.render(),
        "source": _render_source(belief.endorsement),
    }


def _render_node(node: ProposalNode) -> dict:
    return {
        "prop": node.prop.render(ascii_not=True),
        "assertedLevel": node.asserted_level.render(),
        "children": [_render_node(c) for c in node.children],
    }


def render_scenario(scenario: Scenario) -> str:
    """Canonical text form; parsing it yields an equal Scenario."""
    data = {
        "v": FORMAT_VERSION,
        "agents": [
            {
                "id": agent.id,
                "expertise": agent.kb.expertise.value,
                "beliefs": [_render_belief(b) for b in agent.kb.own],
                "userModel": [_render_belief(b) for b in agent.kb.user_model],
            }
            for agent in scenario.agents
        ],
        "proposal": _render_node(scenario.proposal),
        "config": {"tau": scenario.tau, "maxDepth": scenario.max_depth},
    }
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
