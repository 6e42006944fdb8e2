import numpy as np
import pytest

from cvcluster import graphs, presets
from cvcluster.criteria import (
    Criterion,
    Term,
    diamond_criteria,
    evaluate,
    full_inseparability_report,
    linear_criteria,
    optimal_gains_analytic,
    optimal_gains_numeric,
    realize,
    resolve_gains,
    threshold_r,
    unit_gains,
    vlf_bound,
)
from cvcluster.gaussian import quadrature_variance, vacuum_state


def linear_state(r):
    return presets.cluster_state(presets.chain8_unitary(), presets.experiment_pattern(r))


def diamond_state(r):
    return presets.cluster_state(presets.diamond8_unitary(), presets.experiment_pattern(r))


STATE_BUILDERS = {"3": linear_state, "4": diamond_state}


def builder_for(criterion):
    return STATE_BUILDERS[criterion.cid[0]]


class TestCriterionSets:
    def test_counts(self):
        assert len(linear_criteria()) == 7
        assert len(diamond_criteria()) == 9

    def test_3a_template(self):
        c = linear_criteria()[0]
        assert c.u == (Term(1, "p", 1.0), Term(2, "x", -1.0))
        assert c.v == (Term(2, "p", 1.0), Term(1, "x", -1.0), Term(3, "x", -1.0, "g_L3"))
        assert c.bipartition == (1, 2)

    def test_4e_template(self):
        c = diamond_criteria()[4]
        assert c.cid == "4e"
        assert c.u == (
            Term(4, "p", 1.0),
            Term(1, "x", -1.0, "g_D6"),
            Term(2, "x", -1.0, "g_D6"),
            Term(5, "x", -1.0),
        )
        assert c.v == (
            Term(5, "p", 1.0),
            Term(4, "x", -1.0),
            Term(7, "x", -1.0, "g_D6"),
            Term(8, "x", -1.0, "g_D6"),
        )
        assert c.bipartition == (4, 5)

    def test_bipartitions(self):
        assert [c.bipartition for c in linear_criteria()] == [
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8),
        ]
        assert [c.bipartition for c in diamond_criteria()] == [
            (1, 3), (2, 3), (1, 4), (2, 4), (4, 5), (5, 7), (5, 8), (6, 7), (6, 8),
        ]

    @pytest.mark.parametrize(
        "criteria,graph",
        [
            (linear_criteria(), graphs.linear_chain(8)),
            (diamond_criteria(), graphs.two_diamond()),
        ],
    )
    def test_unit_gains_reduce_to_two_nullifiers(self, criteria, graph):
        nullifier_vecs = {
            nf.mode: presets.nullifier_vectors(graph)[nf.mode - 1]
            for nf in graphs.nullifiers(graph)
        }
        for c in criteria:
            gains = unit_gains(c)
            for terms in (c.u, c.v):
                vec = realize(terms, c.n, gains)
                p_mode = next(t.mode for t in terms if t.quadrature == "p")
                assert np.allclose(vec, nullifier_vecs[p_mode], atol=1e-14), c.cid


class TestBound:
    def test_unit_gain_bound_is_one_for_all(self):
        for c in linear_criteria() + diamond_criteria():
            assert vlf_bound(c, unit_gains(c)) == pytest.approx(1.0, abs=1e-12)

    def test_epr_style_bound(self):
        epr = Criterion(
            "epr",
            (Term(1, "x", 1.0), Term(2, "x", -1.0)),
            (Term(1, "p", 1.0), Term(2, "p", 1.0)),
            (1, 2),
            n=2,
        )
        assert vlf_bound(epr, {}) == pytest.approx(1.0, abs=1e-14)

    def test_3a_bound_with_scaled_gain(self):
        c = linear_criteria()[0]
        assert vlf_bound(c, {"g_L3": 0.5}) == pytest.approx(1.0, abs=1e-14)

    def test_missing_gain_rejected(self):
        c = linear_criteria()[0]
        with pytest.raises(ValueError):
            vlf_bound(c, {})
        with pytest.raises(ValueError):
            evaluate(c, linear_state(0.3), {})


class TestEvaluate:
    def test_3a_at_effective_squeezing(self):
        c = linear_criteria()[0]
        result = evaluate(c, linear_state(0.30), unit_gains(c))
        assert result.lhs == pytest.approx(1.25 * np.exp(-0.6), abs=1e-12)
        assert result.lhs == pytest.approx(0.686, abs=5e-4)
        assert result.satisfied

    def test_3b_at_effective_squeezing(self):
        c = linear_criteria()[1]
        result = evaluate(c, linear_state(0.30), unit_gains(c))
        assert result.lhs == pytest.approx(1.5 * np.exp(-0.6), abs=1e-12)
        assert result.lhs == pytest.approx(0.823, abs=5e-4)

    def test_vacuum_not_certified(self):
        state = vacuum_state(8)
        for c in linear_criteria():
            result = evaluate(c, state, unit_gains(c))
            assert result.lhs >= result.bound
            assert not result.satisfied

    def test_unit_gain_lhs_equals_nullifier_variance_sum(self):
        for criteria_set, graph, state in (
            (linear_criteria(), graphs.linear_chain(8), linear_state(0.37)),
            (diamond_criteria(), graphs.two_diamond(), diamond_state(0.37)),
        ):
            vectors = presets.nullifier_vectors(graph)
            for c in criteria_set:
                u_mode = next(t.mode for t in c.u if t.quadrature == "p")
                v_mode = next(t.mode for t in c.v if t.quadrature == "p")
                expected = quadrature_variance(state, vectors[u_mode - 1])
                expected += quadrature_variance(state, vectors[v_mode - 1])
                result = evaluate(c, state, unit_gains(c))
                assert result.lhs == pytest.approx(expected, abs=1e-12)


class TestOptimalGains:
    def test_analytic_values_at_half(self):
        gains = optimal_gains_analytic(0.5)
        assert gains["g_D6"] == pytest.approx(0.6005, abs=5e-5)
        assert abs(gains["g_D6"] - 0.60) < 0.02  # quoted tuned value
        assert gains["g_L1"] == pytest.approx(0.7978, abs=5e-5)

    def test_analytic_zero_squeezing_gives_zero(self):
        assert all(v == pytest.approx(0.0, abs=1e-14) for v in optimal_gains_analytic(0.0).values())

    def test_numeric_matches_analytic_single_slot(self):
        c = linear_criteria()[0]
        numeric = optimal_gains_numeric(c, linear_state(0.5))
        assert numeric["g_L3"] == pytest.approx(optimal_gains_analytic(0.5)["g_L3"], abs=1e-6)

    def test_numeric_zero_squeezing(self):
        c = linear_criteria()[0]
        numeric = optimal_gains_numeric(c, linear_state(0.0))
        assert numeric["g_L3"] == pytest.approx(0.0, abs=1e-9)

    def test_numeric_4e(self):
        c = diamond_criteria()[4]
        numeric = optimal_gains_numeric(c, diamond_state(0.5))
        assert numeric["g_D6"] == pytest.approx(0.6005, abs=5e-5)

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 1.0])
    def test_numeric_matches_analytic_everywhere(self, r):
        analytic = optimal_gains_analytic(r)
        for c in linear_criteria() + diamond_criteria():
            numeric = optimal_gains_numeric(c, builder_for(c)(r))
            for name, value in numeric.items():
                assert value == pytest.approx(analytic[name], abs=1e-6), (c.cid, name)

    def test_lhs_convex_in_each_gain(self):
        state = linear_state(0.4)
        for c in linear_criteria():
            gains = unit_gains(c)
            for name in c.gain_names:
                def lhs(g):
                    trial = {**gains, name: g}
                    return evaluate(c, state, trial).lhs

                second_difference = lhs(1.5) - 2 * lhs(0.5) + lhs(-0.5)
                assert second_difference >= 0


class TestThresholds:
    def test_3a_unit_threshold(self):
        value = threshold_r(linear_criteria()[0], linear_state, "unit")
        assert value == pytest.approx(0.5 * np.log(1.25), abs=1e-4)

    def test_4c_unit_threshold(self):
        value = threshold_r(diamond_criteria()[2], diamond_state, "unit")
        assert value == pytest.approx(0.5 * np.log(1.75), abs=1e-4)

    def test_3a_optimal_never_crosses(self):
        assert threshold_r(linear_criteria()[0], linear_state, "optimal") is None

    def test_threshold_brackets_the_crossing(self):
        c = linear_criteria()[0]
        value = threshold_r(c, linear_state, "unit")
        eps = 1e-4
        above = evaluate(c, linear_state(value + eps), unit_gains(c))
        below = evaluate(c, linear_state(value - eps), unit_gains(c))
        assert above.lhs < above.bound < below.lhs

    def test_invalid_gain_mode_rejected(self):
        with pytest.raises(ValueError):
            threshold_r(linear_criteria()[0], linear_state, "tuned")


class TestReports:
    def test_linear_all_satisfied_at_effective_squeezing(self):
        criteria = linear_criteria()
        report = full_inseparability_report(criteria, linear_state(0.30), unit_gains(criteria))
        assert report.all_satisfied
        assert len(report.results) == 7

    def test_vacuum_fails_everywhere(self):
        criteria = linear_criteria()
        report = full_inseparability_report(criteria, vacuum_state(8), unit_gains(criteria))
        assert not report.all_satisfied
        assert all(not r.satisfied for r in report.results)

    def test_diamond_with_tuned_gain_all_satisfied(self):
        criteria = diamond_criteria()
        gains = resolve_gains(criteria, {"g_D6": 0.60})
        report = full_inseparability_report(criteria, diamond_state(0.30), gains)
        assert report.all_satisfied
        assert len(report.results) == 9

    def test_resolve_gains_validation(self):
        criteria = linear_criteria()
        with pytest.raises(ValueError):
            resolve_gains(criteria, {"g_D6": 0.5})  # not a chain slot
        with pytest.raises(ValueError):
            resolve_gains(criteria, "optimal")  # needs a state
        with pytest.raises(ValueError):
            resolve_gains(criteria, 3.5)
