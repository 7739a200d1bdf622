from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from generators import triples
from secretgame.channel import (
    AssumptionViolation,
    ChannelError,
    ChannelModel,
    ChannelTriple,
    DomainError,
    GeometryParams,
    success_probability,
    triple_from_model,
    validate_assumption,
)
from secretgame.numeric import format_number, parse_number

ALICE = ChannelTriple.of("0.99", "0.94", "0.80")
BOB = ChannelTriple.of("0.90", "0.84", "0.70")


class TestNumbers:
    def test_decimal_strings_are_exact(self):
        assert parse_number("0.99") == F(99, 100)
        assert parse_number("15/29") == F(15, 29)

    def test_floats_stay_inexact(self):
        t = ChannelTriple.of(0.99, 0.94, 0.80)
        assert not t.exact
        assert ALICE.exact

    @pytest.mark.parametrize("x, text", [
        (F(189, 250), "0.756"), (F(15, 29), "15/29"), (F(0), "0"), (F(-17, 100), "-0.17"), (F(3), "3"),
    ])
    def test_format_round_trip(self, x, text):
        assert format_number(x) == text
        assert parse_number(text) == x

    def test_bad_number(self):
        with pytest.raises(ValueError):
            parse_number("zero point nine")


class TestSuccessProbability:
    def test_explicit_triple_at_epsilon(self):
        geom = GeometryParams.of(60, 10)
        m = ChannelModel.explicit(ALICE, geom)
        assert success_probability(m, 10) == F("0.99")
        assert success_probability(m, 30) == F("0.94")
        assert success_probability(m, 50) == F("0.80")

    def test_explicit_triple_other_distance(self):
        m = ChannelModel.explicit(ALICE, GeometryParams.of(60, 10))
        with pytest.raises(DomainError):
            success_probability(m, 20)

    def test_quadratic_direct_evaluation(self):
        m = ChannelModel.quadratic("0.99", "0.0001", 60)
        assert success_probability(m, 20) == F("0.95")

    def test_quadratic_flat_limit(self):
        a = 1 - F(1, 10**9)
        m = ChannelModel.quadratic(a, 0, 100)
        assert success_probability(m, 37) == a

    @pytest.mark.parametrize("d", [0, -1, 61])
    def test_outside_domain(self, d):
        m = ChannelModel.quadratic("0.99", "0.0001", 60)
        with pytest.raises(DomainError):
            success_probability(m, d)

    def test_quadratic_leaving_unit_interval_rejected(self):
        with pytest.raises(ChannelError):
            ChannelModel.quadratic("0.99", "0.001", 100)  # p(100) = -9.01

    def test_table_interpolation(self):
        m = ChannelModel.table([(1, "0.99"), (50, "0.9"), (100, "0.5")], 100)
        assert success_probability(m, 75) == F("0.7")
        assert success_probability(m, 50) == F("0.9")
        with pytest.raises(DomainError):
            success_probability(m, F(1, 2))


class TestTripleFromModel:
    def test_quadratic(self):
        m = ChannelModel.quadratic("0.95", "0.00005", 60)
        t = triple_from_model(m, GeometryParams.of(60, 10))
        assert t.as_tuple() == (F("0.945"), F("0.905"), F("0.825"))
        assert t.p_mid > (t.p_near + t.p_far) / 2

    def test_pointwise_consistency(self):
        geom = GeometryParams.of(60, 10)
        m = ChannelModel.quadratic("0.95", "0.00005", 60)
        t = triple_from_model(m, geom)
        assert t.as_tuple() == tuple(success_probability(m, d) for d in geom.distances)

    def test_constant_model_fails_part_iii(self):
        m = ChannelModel.quadratic("0.9", "0", 60)
        with pytest.raises(AssumptionViolation) as exc:
            triple_from_model(m, GeometryParams.of(60, 10))
        assert exc.value.part == "iii"

    def test_midpoint_on_chord_fails_part_iv(self):
        with pytest.raises(AssumptionViolation) as exc:
            ChannelTriple.of("0.9", "0.75", "0.6").validated()
        assert exc.value.part == "iv"
        assert "Assumption 1(iv)" in str(exc.value)

    def test_linear_table_fails_part_iv(self):
        # linear p(d): the midpoint sits exactly on the chord
        m = ChannelModel.table([(10, "0.9"), (50, "0.5")], 60)
        with pytest.raises(AssumptionViolation):
            triple_from_model(m, GeometryParams.of(60, 10))


class TestGeometry:
    @pytest.mark.parametrize("D, eps", [(60, 0), (60, 30), (60, 31), (0, 1)])
    def test_bad_geometry(self, D, eps):
        with pytest.raises(ChannelError):
            GeometryParams.of(D, eps)

    def test_distances(self):
        assert GeometryParams.of(60, 10).distances == (10, 30, 50)


class TestValidateAssumption:
    def test_worked_example_passes(self):
        report = validate_assumption(ALICE, BOB)
        assert report.ok
        assert len(report.notes) == 2

    def test_symmetric_passes(self):
        t = ChannelTriple.of("0.9", "0.8", "0.6")
        assert validate_assumption(t, t).ok

    def test_midpoint_below_chord(self):
        report = validate_assumption(ChannelTriple.of("0.9", "0.7", "0.6"), BOB)
        alice, bob = report.checks
        assert not report.ok
        assert alice.part_iii and not alice.part_iv
        assert bob.ok
        assert any("0.75" in v for v in alice.violations)

    def test_report_json(self):
        d = validate_assumption(ChannelTriple.of("0.9", "0.95", "0.6"), BOB).to_dict()
        assert d["senders"]["alice"]["Assumption 1(iii)"] is False


def test_json_descriptor_round_trip():
    desc = {"family": "explicit-triple", "p_near": "0.99", "p_mid": "0.94", "p_far": "0.8"}
    assert ChannelTriple.from_json(desc) == ALICE
    assert ALICE.to_json() == desc


@settings(max_examples=300, deadline=None)
@given(triples())
def test_accepted_triples_satisfy_assumption_inequalities(t):
    assert t.p_near > t.p_mid > t.p_far
    assert 2 * t.p_mid > t.p_near + t.p_far
    assert t.p_near * t.p_far < t.p_mid ** 2
