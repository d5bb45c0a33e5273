import json

import pytest

from parley import (
    Scenario,
    ScenarioError,
    parse_scenario,
    render_scenario,
)

from conftest import load_bundled

BUNDLED = ("smith", "evidence", "visit", "both", "nest", "tie")


def minimal(**overrides) -> dict:
    doc = {
        "v": 1,
        "agents": [
            {
                "id": "U",
                "expertise": "non-expert",
                "beliefs": [{"prop": "p(a)", "level": "strong", "source": "kb-record"}],
            },
            {"id": "S", "expertise": "expert", "beliefs": []},
        ],
        "proposal": {"prop": "p(a)", "assertedLevel": "strong"},
    }
    doc.update(overrides)
    return doc


def parse(doc) -> Scenario:
    return parse_scenario(json.dumps(doc))


def err(doc) -> ScenarioError:
    with pytest.raises(ScenarioError) as info:
        parse(doc)
    return info.value


@pytest.mark.parametrize("name", BUNDLED)
def test_round_trip_bundled(name):
    scenario = load_bundled(name)
    assert parse_scenario(render_scenario(scenario)) == scenario


def test_minimal_document_defaults():
    s = parse(minimal())
    assert (s.tau, s.max_depth) == (1, 16)
    assert s.proposer.id == "U" and s.evaluator.id == "S"
    assert s.agents[0].kb.expertise.value == "non-expert"


def test_config_overrides():
    s = parse(minimal(config={"tau": 2, "maxDepth": 3}))
    assert (s.tau, s.max_depth) == (2, 3)


def test_negation_spellings_agree():
    doc = minimal()
    doc["proposal"]["prop"] = "~p(a)"
    ascii_form = parse(doc)
    doc["proposal"]["prop"] = "¬p(a)"
    assert parse(doc).proposal == ascii_form.proposal


def test_syntax_error_reports_line_and_column():
    with pytest.raises(ScenarioError) as info:
        parse_scenario('{"v": 1,\n  "agents": }')
    assert "line 2" in str(info.value)
    assert "column 13" in str(info.value)


@pytest.mark.parametrize(
    "mutate, path_hint",
    [
        (lambda d: d.update(v=2), "$.v"),
        (lambda d: d.update(extra=True), "$"),
        (lambda d: d.pop("proposal"), "$"),
        (lambda d: d.update(agents=d["agents"][:1]), "$.agents"),
        (lambda d: d["agents"][1].update(id="U"), "$.agents"),
        (lambda d: d["agents"][0]["beliefs"][0].update(level="severe"), "$.agents[0].beliefs[0].level"),
        (lambda d: d["agents"][0]["beliefs"][0].update(source="hearsay"), "$.agents[0].beliefs[0].source"),
        (lambda d: d["agents"][0]["beliefs"][0].update(prop="Bad("), "$.agents[0].beliefs[0].prop"),
        (lambda d: d.update(config={"tau": 0}), "$.config.tau"),
        (lambda d: d.update(config={"tau": True}), "$.config.tau"),
        (lambda d: d.update(config={"maxDepth": "deep"}), "$.config.maxDepth"),
    ],
)
def test_diagnostics_name_the_offending_path(mutate, path_hint):
    doc = minimal()
    mutate(doc)
    assert err(doc).path == path_hint


def test_derived_source_requires_basis():
    doc = minimal()
    doc["agents"][0]["beliefs"][0]["source"] = {"derived": {"from": []}}
    assert err(doc).path == "$.agents[0].beliefs[0].source.derived.from"


def test_assertion_source_round_trips():
    doc = minimal()
    doc["agents"][0]["beliefs"][0]["source"] = {
        "assertion": {"speaker": "S", "expertise": "expert"}
    }
    s = parse(doc)
    assert parse_scenario(render_scenario(s)) == s


def test_contradictory_store_rejected():
    doc = minimal()
    doc["agents"][0]["beliefs"].append(
        {"prop": "~p(a)", "level": "weak", "source": "kb-record"}
    )
    assert err(doc).path == "$.agents[0]"


def test_cyclic_proposal_rejected():
    doc = minimal()
    doc["proposal"]["children"] = [{"prop": "~p(a)", "assertedLevel": "weak"}]
    assert err(doc).path == "$.proposal"


def test_render_is_stable():
    scenario = load_bundled("smith")
    text = render_scenario(scenario)
    assert text.endswith("\n")
    assert render_scenario(parse_scenario(text)) == text
    assert "¬" not in text  # files stay plain ASCII
