"""Tests for the mistake-mechanism sampler: policies, closed forms,
determinism, and agreement with the exact state machinery."""

import numpy as np
import pytest

from wigner_lab import core, protocol
from wigner_lab.montecarlo import (
    MistakePolicy,
    TrialConfig,
    analytic_mistake_table,
    compare_distributions,
    run_trials,
)
from wigner_lab.protocol import AliceOutcome, WrongStateLabel


class TestMistakePolicy:
    def test_parse_named(self):
        assert MistakePolicy.parse("correct").mistake_probability == 0.0
        assert MistakePolicy.parse("uniform").mistake_probability == 0.5
        assert MistakePolicy.parse("alternating").mistake_probability is None

    def test_parse_biased(self):
        assert MistakePolicy.parse("biased:0.3").mistake_probability == 0.3

    @pytest.mark.parametrize("text", ["biased:1.5", "biased:x", "sometimes", "biased:"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            MistakePolicy.parse(text)

    def test_epsilon_range(self):
        with pytest.raises(ValueError, match="epsilon"):
            MistakePolicy.biased(-0.1)

    def test_named_policies_take_no_epsilon(self):
        with pytest.raises(ValueError, match="epsilon"):
            MistakePolicy("uniform", 0.5)


class TestTrialConfig:
    def test_rejects_negative_trials(self):
        with pytest.raises(ValueError, match="n_trials"):
            TrialConfig(-1, 0, MistakePolicy.uniform_random())

    def test_rejects_bad_seed(self):
        with pytest.raises(ValueError, match="seed"):
            TrialConfig(1, -5, MistakePolicy.uniform_random())

    def test_rejects_bad_mode(self):
        with pytest.raises(ValueError, match="mode"):
            TrialConfig(1, 0, MistakePolicy.uniform_random(), mode="exact")


class TestAnalyticTable:
    def test_uniform(self):
        dist = analytic_mistake_table(MistakePolicy.uniform_random())
        assert dist.probability("AB") == pytest.approx(1 / 2)
        assert dist.probability("ABht") == pytest.approx(1 / 6)
        assert dist.probability("ABth") == pytest.approx(1 / 3)

    def test_always_correct(self):
        dist = analytic_mistake_table(MistakePolicy.always_correct())
        assert dist.frequencies == {"AB": 1.0, "ABht": 0.0, "ABth": 0.0}

    def test_biased(self):
        dist = analytic_mistake_table(MistakePolicy.biased(0.3))
        assert dist.probability("AB") == pytest.approx(0.7)
        assert dist.probability("ABht") == pytest.approx(0.1)
        assert dist.probability("ABth") == pytest.approx(0.2)

    def test_alternating_rejected(self):
        with pytest.raises(ValueError, match="closed form"):
            analytic_mistake_table(MistakePolicy.alternating())


class TestRunTrials:
    def test_always_correct_never_misses(self):
        result = run_trials(TrialConfig(100_000, 3, MistakePolicy.always_correct()))
        assert result.resultant_states.probability("AB") == 1.0
        assert result.resultant_states.counts["ABht"] == 0

    def test_uniform_matches_closed_form(self):
        config = TrialConfig(100_000, 42, MistakePolicy.uniform_random())
        result = run_trials(config)
        report = compare_distributions(
            result.resultant_states, analytic_mistake_table(config.policy), 4.0
        )
        assert report.passed

    def test_biased_cross_check_large_n(self):
        config = TrialConfig(1_000_000, 5, MistakePolicy.biased(0.3))
        result = run_trials(config)
        report = compare_distributions(
            result.resultant_states, analytic_mistake_table(config.policy), 4.0
        )
        assert report.passed

    def test_correct_policy_charlie_marginal(self):
        # joint Hadamard-basis probabilities (1/12, 1/12, 1/12, 9/12), 4 sigma
        result = run_trials(TrialConfig(100_000, 7, MistakePolicy.always_correct()))
        expected = core.born_probabilities(
            protocol.target_state(), [protocol.charlie_basis("A"), protocol.charlie_basis("B")]
        )
        report = compare_distributions(result.charlie, expected, 4.0)
        assert report.passed
        assert abs(result.charlie.probability("ok_ok") - 1 / 12) <= 0.0035

    def test_zero_trials(self):
        result = run_trials(TrialConfig(0, 0, MistakePolicy.uniform_random()))
        assert result.resultant_states.total == 0
        assert all(c == 0 for c in result.charlie.counts.values())

    def test_analytic_mode_measures_target_state_only(self):
        config = TrialConfig(50_000, 11, MistakePolicy.uniform_random(), mode="analytic")
        result = run_trials(config, collect_traces=True)
        assert result.resultant_states.probability("AB") == 1.0
        assert all(t.alice_outcome is None and t.applied_transform is None for t in result.traces)
        expected = core.born_probabilities(
            protocol.target_state(), [protocol.charlie_basis("A"), protocol.charlie_basis("B")]
        )
        assert compare_distributions(result.charlie, expected, 4.0).passed


class TestDeterminism:
    def test_identical_configs_identical_results(self):
        config = TrialConfig(70_000, 9, MistakePolicy.uniform_random())
        a = run_trials(config, collect_traces=True)
        b = run_trials(config, collect_traces=True)
        assert a.resultant_states.counts == b.resultant_states.counts
        assert a.charlie.counts == b.charlie.counts
        assert a.traces == b.traces

    def test_trials_depend_only_on_seed_and_index(self):
        short = run_trials(TrialConfig(100, 13, MistakePolicy.uniform_random()), collect_traces=True)
        long = run_trials(TrialConfig(250, 13, MistakePolicy.uniform_random()), collect_traces=True)
        assert long.traces[:100] == short.traces

    def test_different_seeds_differ(self):
        a = run_trials(TrialConfig(10_000, 1, MistakePolicy.uniform_random()))
        b = run_trials(TrialConfig(10_000, 2, MistakePolicy.uniform_random()))
        assert a.resultant_states.counts != b.resultant_states.counts


class TestTraces:
    def test_alternating_applies_each_transform_exactly_half(self):
        result = run_trials(TrialConfig(2_000, 21, MistakePolicy.alternating()), collect_traces=True)
        applied = [t.applied_transform for t in result.traces]
        assert applied.count("A_h0") == 1_000
        assert applied.count("A_t01") == 1_000
        assert applied[:4] == ["A_h0", "A_t01", "A_h0", "A_t01"]

    def test_resultant_label_consistency(self):
        result = run_trials(TrialConfig(3_000, 17, MistakePolicy.uniform_random()), collect_traces=True)
        for t in result.traces:
            matches = (t.applied_transform == "A_h0") == (t.alice_outcome is AliceOutcome.HEADS)
            assert (t.resultant_state == "AB") == matches

    def test_convergent_evolution_spot_check(self):
        # every matching trial's matrix chain lands on the target state
        result = run_trials(TrialConfig(1_500, 23, MistakePolicy.uniform_random()), collect_traces=True)
        canonical = {
            "AB": protocol.target_state(),
            "ABht": protocol.wrong_state(WrongStateLabel.ABHT),
            "ABth": protocol.wrong_state(WrongStateLabel.ABTH),
        }
        resets = {"A_h0": protocol.reset_matrix(AliceOutcome.HEADS), "A_t01": protocol.reset_matrix(AliceOutcome.TAILS)}
        assert sum(t.resultant_state == "AB" for t in result.traces) >= 500
        for t in result.traces:
            evolved = core.apply(
                protocol.entangle_matrix(),
                core.apply(resets[t.applied_transform], protocol.initial_register(t.alice_outcome)),
            )
            diff = np.abs(evolved.amplitudes - canonical[t.resultant_state].amplitudes).max()
            assert diff <= 1e-12

    def test_trace_count_and_indices(self):
        result = run_trials(TrialConfig(500, 29, MistakePolicy.always_correct()), collect_traces=True)
        assert [t.trial_index for t in result.traces] == list(range(500))

    def test_traces_off_by_default(self):
        assert run_trials(TrialConfig(10, 0, MistakePolicy.uniform_random())).traces is None


class TestCompareDistributions:
    def test_exact_match_zero_margins(self):
        analytic = analytic_mistake_table(MistakePolicy.uniform_random())
        empirical = core.OutcomeDistribution.from_counts({"AB": 3, "ABht": 1, "ABth": 2})
        report = compare_distributions(empirical, analytic, 4.0)
        assert report.passed
        assert all(c.margin == pytest.approx(0.0) for c in report.checks)

    def test_seeded_uniform_run_passes(self):
        result = run_trials(TrialConfig(100_000, 42, MistakePolicy.uniform_random()))
        report = compare_distributions(
            result.resultant_states, analytic_mistake_table(MistakePolicy.uniform_random()), 4.0
        )
        assert report.passed

    def test_gross_mismatch_fails_every_label(self):
        empirical = core.OutcomeDistribution.from_counts(
            {"AB": 90_000, "ABht": 5_000, "ABth": 5_000}
        )
        report = compare_distributions(
            empirical, analytic_mistake_table(MistakePolicy.uniform_random()), 4.0
        )
        assert not report.passed
        assert all(not c.passed for c in report.checks)

    def test_label_mismatch(self):
        empirical = core.OutcomeDistribution.from_counts({"X": 1})
        with pytest.raises(ValueError, match="label sets"):
            compare_distributions(empirical, analytic_mistake_table(MistakePolicy.uniform_random()), 4.0)

    def test_zero_total(self):
        empirical = core.OutcomeDistribution.from_counts({"AB": 0, "ABht": 0, "ABth": 0})
        with pytest.raises(ValueError, match="no samples"):
            compare_distributions(empirical, analytic_mistake_table(MistakePolicy.uniform_random()), 4.0)
