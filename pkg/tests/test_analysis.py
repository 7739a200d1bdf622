import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from generators import random_triple, triples
from secretgame.analysis import (
    SymmetricMixedProfile,
    case_terms,
    check_lemma1,
    check_symmetric_mixed,
    construct_feasible_q,
    eve_middle_dominance,
    halvings_needed,
    split_middle_report,
)
from secretgame.channel import ChannelTriple
from secretgame.game import EveStrategy, GameSpec, build_utility_matrix
from secretgame.solver import ArgumentError, verify_equilibrium

SYM = ChannelTriple.of("0.9", "0.8", "0.6")
SYM_SPEC = GameSpec(2, SYM, SYM)


def middle_p():
    return (F(0), F(1), F(0))


class TestSplitVersusMiddle:
    def test_examples(self):
        assert check_lemma1(SYM)
        r = split_middle_report(SYM, 2)
        assert (r.lhs, r.rhs, r.margin) == (F("0.54"), F("0.64"), F("0.1"))

    def test_midpoint_below_chord_fails(self):
        # not admissible, and the inequality genuinely fails: 0.54 > 0.49
        assert not check_lemma1(ChannelTriple.of("0.9", "0.7", "0.6"))

    @pytest.mark.parametrize("N", [2, 4, 8, 16])
    def test_independent_of_even_N(self, N):
        assert split_middle_report(SYM, N).holds

    def test_json(self):
        assert split_middle_report(SYM, 2).to_json() == {
            "lemma": "1", "holds": True, "lhs": "0.54", "rhs": "0.64", "margin": "0.1",
        }


class TestSymmetricMixed:
    def test_hand_profile(self):
        prof = SymmetricMixedProfile.from_q((F("0.45"), F("0.10"), F("0.45")), 2)
        rep = check_symmetric_mixed(SYM_SPEC, prof)
        assert rep.holds
        assert rep.near_alice == rep.near_bob == F("0.5805")
        assert rep.middle == F("0.64")

    def test_dominance_dict(self):
        prof = SymmetricMixedProfile.from_q((F("0.45"), F("0.10"), F("0.45")), 2)
        pay = eve_middle_dominance(SYM_SPEC, prof)
        assert pay == {EveStrategy.NearAlice: F("0.5805"), EveStrategy.Middle: F("0.64"), EveStrategy.NearBob: F("0.5805")}
        split_only = SymmetricMixedProfile.from_q((0, 1, 0), 2)
        assert list(eve_middle_dominance(SYM_SPEC, split_only).values()) == [F("0.54"), F("0.64"), F("0.54")]

    def test_zero_weight_rejected(self):
        with pytest.raises(ArgumentError):
            check_symmetric_mixed(SYM_SPEC, SymmetricMixedProfile.from_q((0, 1, 0), 2))

    def test_asymmetric_rejected(self):
        spec = GameSpec(2, ChannelTriple.of("0.99", "0.94", "0.80"), SYM)
        with pytest.raises(ArgumentError):
            check_symmetric_mixed(spec, SymmetricMixedProfile.from_q((F(1, 3),) * 3, 2))

    def test_column_order_round_trip(self):
        q = (F(1, 10), F(2, 10), F(4, 10), F(2, 10), F(1, 10))
        prof = SymmetricMixedProfile.from_q(q, 4)
        assert prof.as_q() == q and prof.q_A == prof.q_B


class TestConstruction:
    def test_case1_uniform(self):
        prof = construct_feasible_q(SYM_SPEC)
        assert prof.as_q() == (F(1, 3),) * 3
        assert halvings_needed(SYM_SPEC) == 0

    def test_case2_halves(self):
        t = ChannelTriple.of("0.99", "0.6", "0.1")
        spec = GameSpec(2, t, t)
        assert [c for *_, c in case_terms(spec)] == [2]
        prof = construct_feasible_q(spec)
        assert prof.as_q() == (F(1, 6), F(2, 3), F(1, 6))
        assert halvings_needed(spec) == 1
        assert check_symmetric_mixed(spec, prof).holds

    def test_case1_larger_N(self):
        t = ChannelTriple.of("0.99", "0.9", "0.5")
        assert [c for *_, c in case_terms(GameSpec(4, t, t))] == [1, 1]

    def test_float_mode(self):
        t = SYM.as_float()
        spec = GameSpec(4, t, t)
        prof = construct_feasible_q(spec)
        assert check_symmetric_mixed(spec, prof).holds
        assert verify_equilibrium(build_utility_matrix(spec), (middle_p(), prof.as_q())).ok

    def test_paired_with_middle_is_equilibrium(self):
        m = build_utility_matrix(SYM_SPEC)
        prof = construct_feasible_q(SYM_SPEC)
        rep = verify_equilibrium(m, (middle_p(), prof.as_q()), tol=0)
        assert rep.ok and rep.value == F("0.64")


@settings(max_examples=60, deadline=None)
@given(triples(), st.sampled_from([2, 4, 8]))
def test_split_below_middle_on_admissible_triples(t, N):
    assert check_lemma1(t, N)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([2, 4, 6, 8]))
def test_constructed_profile_certified(seed, N):
    t = random_triple(random.Random(seed))
    spec = GameSpec(N, t, t)
    prof = construct_feasible_q(spec)
    q = prof.as_q()
    assert all(x > 0 for x in q) and sum(q) == 1
    assert check_symmetric_mixed(spec, prof).holds
    assert verify_equilibrium(build_utility_matrix(spec), (middle_p(), q), tol=0).ok
