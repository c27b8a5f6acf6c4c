import random

import pytest

from wqlang import Nfa, canonical, equivalence_counterexample, nl_learn
from wqlang.learn import LearnerDiverged, ObservationState
from wqlang.residual import isomorphic_to_canonical

from conftest import A, B, rand_nfa


def make_teacher(target: Nfa):
    calls = []

    def teacher(word: bytes) -> bool:
        calls.append(word)
        return target.member(word)

    return teacher, calls


def make_oracle(target: Nfa):
    queries = []

    def oracle(candidate: Nfa):
        queries.append(candidate)
        return equivalence_counterexample(candidate, target)

    return oracle, queries


def test_learn_everything_language():
    target = Nfa(1, [(0, A, 0), (0, B, 0)], [0], [0])
    teacher, _ = make_teacher(target)
    oracle, queries = make_oracle(target)
    learned = nl_learn(teacher, oracle, [A, B])
    assert equivalence_counterexample(learned, target) is None
    assert learned.state_count == 1
    assert len(queries) <= 2
    assert isomorphic_to_canonical(learned, canonical(target))


def test_learn_small_targets_canonical():
    rng = random.Random(80)
    learned_count = 0
    while learned_count < 25:
        target = rand_nfa(rng, max_states=3, n_syms=2)
        if target.determinize().minimize().state_count > 4:
            continue
        learned_count += 1
        teacher, _ = make_teacher(target)
        oracle, _ = make_oracle(target)
        learned = nl_learn(teacher, oracle, [A, B])
        assert equivalence_counterexample(learned, target) is None
        assert isomorphic_to_canonical(learned, canonical(target))


def test_learner_only_uses_callbacks():
    target = Nfa(2, [(0, A, 1), (1, B, 0)], [0], [0])
    teacher, member_calls = make_teacher(target)
    oracle, eq_calls = make_oracle(target)
    learned = nl_learn(teacher, oracle, [A, B])
    assert member_calls, "membership must flow through the teacher"
    assert eq_calls, "equivalence must flow through the oracle"
    assert equivalence_counterexample(learned, target) is None


def test_observation_rows_and_quasiorder_agree():
    target = Nfa(2, [(0, A, 0), (0, B, 1), (1, B, 1)], [0], [1])  # a*b+

    tables = []

    def snapshot(obs: ObservationState, hypothesis: Nfa):
        tables.append((list(obs.prefixes), list(obs.suffixes)))
        words = list(obs.prefixes) + [
            p + bytes([a]) for p in obs.prefixes for a in obs.alphabet
        ]
        for u in words:
            for v in words:
                # row containment must coincide with suffix-restricted
                # residual inclusion queried independently
                quot_u = {s for s in obs.suffixes if target.member(u + s)}
                quot_v = {s for s in obs.suffixes if target.member(v + s)}
                assert obs.row_leq(u, v) == (quot_u <= quot_v)
        # join of strictly-below rows equals the union of their quotients
        for u in words:
            join = obs.join_below(u)
            union = set()
            for p in obs.prefixes:
                qp = {s for s in obs.suffixes if target.member(p + s)}
                qu = {s for s in obs.suffixes if target.member(u + s)}
                if qp != qu and qp <= qu:
                    union |= qp
            assert {s for s, bit in zip(obs.suffixes, join) if bit} == union

    learned = nl_learn(target.member, lambda c: equivalence_counterexample(c, target), [A, B], on_hypothesis=snapshot)
    assert tables
    assert equivalence_counterexample(learned, target) is None


def test_prefix_and_suffix_closure_maintained():
    target = Nfa(3, [(0, A, 1), (1, A, 2), (2, B, 2)], [0], [2])

    def snapshot(obs, hypothesis):
        for p in obs.prefixes:
            for cut in range(len(p)):
                assert p[:cut] in obs.prefixes
        for s in obs.suffixes:
            for cut in range(1, len(s) + 1):
                assert s[cut:] in obs.suffixes

    learned = nl_learn(
        target.member, lambda c: equivalence_counterexample(c, target), [A, B], on_hypothesis=snapshot
    )
    assert equivalence_counterexample(learned, target) is None


def test_learner_cap():
    # a lying oracle never accepts; the learner must fail loudly
    target = Nfa(1, [(0, A, 0)], [0], [0])

    def bad_oracle(_candidate):
        return b"a"

    with pytest.raises(LearnerDiverged):
        nl_learn(target.member, bad_oracle, [A], max_queries=5)


def test_learn_empty_language():
    target = Nfa(1, [(0, A, 0)], [0], [])
    learned = nl_learn(
        target.member, lambda c: equivalence_counterexample(c, target), [A]
    )
    assert learned.state_count == 0
    assert equivalence_counterexample(learned, target) is None
