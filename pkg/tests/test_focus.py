import pytest

from parley import (
    Belief,
    ContractViolation,
    Endorsement,
    Expertise,
    KnowledgeBase,
    ProposalNode,
    StrengthLevel,
    evaluate_proposal,
    predict,
    select_focus_modification,
    select_min_set,
    supports_prop,
    VerdictOutcome,
)
from parley.focus import removal_closure
from parley.trace import Trace

from conftest import ground

W, S, T = StrengthLevel.WEAK, StrengthLevel.STRONG, StrengthLevel.WARRANTED
A, Q, R, TGT = ground("a"), ground("q"), ground("r"), ground("t")


def kb_of(*beliefs, expertise=Expertise.EXPERT) -> KnowledgeBase:
    return KnowledgeBase(own=tuple(beliefs), expertise=expertise)


def rec(prop, level=T) -> Belief:
    return Belief(prop, Endorsement.kb_record(level))


def der(prop, level, *basis) -> Belief:
    return Belief(prop, Endorsement.derived(level, basis))


class TestRemovalClosure:
    def test_pulls_in_solely_derived(self):
        model = kb_of(rec(A), der(TGT, S, A), der(Q, S, TGT))
        assert removal_closure(model, [A]) == frozenset({A, TGT, Q})

    def test_leaves_partially_backed(self):
        model = kb_of(rec(A), rec(R), der(TGT, S, A, R))
        assert removal_closure(model, [A]) == frozenset({A})


class TestPredict:
    def test_removal_spares_target_so_it_abandons(self):
        model = kb_of(rec(A), der(TGT, S, A))
        v = predict(model, TGT, removed=[A])
        assert v.outcome is VerdictOutcome.ABANDON

    def test_hypothesized_evidence_in_closure_is_dropped(self):
        model = kb_of(rec(A), der(TGT, S, A))
        piece = evaluate_proposal(
            kb_of(), ProposalNode(TGT, S), 1,
            proposer="u", proposer_expertise=Expertise.EXPERT,
        ).u_evid[0]
        kept = predict(model, TGT, [piece])
        dropped = predict(model, TGT, [piece], removed=[A])
        assert kept.outcome is VerdictOutcome.ACCEPT
        assert dropped.outcome is VerdictOutcome.ABANDON
        assert dropped.support_score == 0  # the assertion fell with the closure

    def test_emits_trace_record(self):
        trace = Trace()
        predict(kb_of(rec(TGT)), TGT, trace=trace, agent="s", note="leaf")
        (record,) = trace.by_kind("predict")
        assert record.payload["note"] == "leaf"
        assert record.payload["removed"] == []


class TestSelectMinSet:
    def model(self) -> KnowledgeBase:
        # a and b jointly keep t accepted against c's standing counterweight
        return kb_of(
            rec(A, S),
            rec(ground("b"), S),
            rec(ground("c")),
            rec(supports_prop(A, TGT)),
            rec(supports_prop(ground("b"), TGT)),
            rec(supports_prop(ground("c"), TGT.negate())),
        )

    def test_singleton_beats_pair(self):
        chosen = select_min_set(TGT, [A, ground("b")], self.model())
        assert chosen == (A,)  # canonical tie-break between equal singletons

    def test_weights_break_ties(self):
        chosen = select_min_set(
            TGT, [A, ground("b")], self.model(), weights={ground("b"): 5}
        )
        assert chosen == (ground("b"),)

    def test_requires_candidates(self):
        with pytest.raises(ContractViolation):
            select_min_set(TGT, [], self.model())

    def test_requires_flipping_full_set(self):
        model = kb_of(rec(TGT), rec(A, S), rec(supports_prop(A, TGT)))
        with pytest.raises(ContractViolation):
            select_min_set(TGT, [A], model)

    def test_needs_both_when_singletons_fail(self):
        model = kb_of(
            rec(A, S),
            rec(ground("b"), S),
            der(TGT, W, A, ground("b")),
            rec(supports_prop(A, TGT)),
            rec(supports_prop(ground("b"), TGT)),
        )
        trace = Trace()
        chosen = select_min_set(TGT, [A, ground("b")], model, trace=trace, agent="s")
        assert chosen == (A, ground("b"))
        (record,) = trace.by_kind("minset")
        assert record.payload["size"] == 2


def run_sfm(evaluator: KnowledgeBase, model: KnowledgeBase, tree: ProposalNode):
    ev = evaluate_proposal(
        evaluator, tree, 1, proposer="u", proposer_expertise=Expertise.EXPERT
    )
    assert not ev.accepted
    return select_focus_modification(ev, model, 1, agent="s")


class TestFocusSelection:
    def counterweight(self, prop, basis, level=T) -> list[Belief]:
        return [
            rec(prop.negate()),
            rec(basis, level),
            rec(supports_prop(basis, prop.negate()), level),
        ]

    def test_leaf_flips(self):
        evaluator = kb_of(*self.counterweight(TGT, Q))
        model = kb_of(rec(TGT, S))
        node = run_sfm(evaluator, model, ProposalNode(TGT, S))
        assert (node.step, node.focus) == ("leaf", frozenset({TGT}))

    def test_leaf_unshakeable(self):
        evaluator = kb_of(*self.counterweight(TGT, Q))
        model = kb_of(rec(TGT), rec(ground("d")), rec(supports_prop(ground("d"), TGT)))
        node = run_sfm(evaluator, model, ProposalNode(TGT, S))
        assert (node.step, node.focus) == ("leaf", None)

    def test_member_alone_suffices(self):
        evaluator = kb_of(
            *self.counterweight(A, Q), *self.counterweight(TGT, R),
            rec(supports_prop(A, TGT)),
        )
        model = kb_of(rec(A, S), der(TGT, S, A), rec(supports_prop(A, TGT)))
        node = run_sfm(evaluator, model, ProposalNode(TGT, S, (ProposalNode(A, T),)))
        assert (node.step, node.focus) == ("evidence", frozenset({A}))
        assert node.cand_set == (A,)
        assert [k.step for k in node.children] == ["leaf"]

    def test_head_on_counter(self):
        evaluator = kb_of(
            *self.counterweight(A, Q), *self.counterweight(TGT, R),
            rec(supports_prop(A, TGT)),
        )
        model = kb_of(rec(A), rec(TGT, S), rec(supports_prop(A, TGT)))
        node = run_sfm(evaluator, model, ProposalNode(TGT, S, (ProposalNode(A, T),)))
        assert (node.step, node.focus) == ("belief", frozenset({TGT}))

    def test_member_plus_counter(self):
        evaluator = kb_of(
            *self.counterweight(A, Q), *self.counterweight(TGT, R, level=W),
            rec(supports_prop(A, TGT)),
        )
        model = kb_of(rec(A, S), rec(TGT, S), rec(supports_prop(A, TGT)))
        node = run_sfm(evaluator, model, ProposalNode(TGT, S, (ProposalNode(A, S),)))
        assert (node.step, node.focus) == ("both", frozenset({A, TGT}))

    def test_nothing_winnable(self):
        evaluator = kb_of(*self.counterweight(TGT, Q))
        model = kb_of(
            rec(A), rec(TGT, S), rec(supports_prop(A, TGT)),
            rec(ground("d")), rec(supports_prop(ground("d"), TGT)),
        )
        node = run_sfm(evaluator, model, ProposalNode(TGT, S, (ProposalNode(A, T),)))
        assert (node.step, node.focus) == ("nil", None)
