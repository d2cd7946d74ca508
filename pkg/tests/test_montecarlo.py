from fractions import Fraction

import pytest

from realityvote import Mechanism
from realityvote.errors import DegenerateParams, SampleTooLarge
from realityvote.montecarlo import (
    Experiment,
    hoeffding_diagnostic,
    run_proxy_whp,
    run_safety_whp,
)

from conftest import binary_profile, interval_profile

F = Fraction


def whp_experiment(honest_p=6, honest_r=14, sybil_p=5, n_plus=10, tau=F(1, 2), **kw):
    template = binary_profile(active="p" * honest_p + "r" * honest_r, sybil="p" * sybil_p)
    defaults = dict(
        profile=template,
        mechanism=Mechanism("mj", re_tau=tau, participation="active"),
        base=Mechanism("mj"),
        alpha_prime=F(1, 10),
        trials=200,
        seed=99,
        n_plus=n_plus,
    )
    defaults.update(kw)
    return Experiment(**defaults)


def proxy_experiment(n_plus=5, trials=100, **kw):
    template = interval_profile(
        0, active=[2 * i for i in range(40)], sybil=[150] * 10
    )
    defaults = dict(
        profile=template,
        mechanism=Mechanism("md", re_tau=F(1, 4), participation="proxy"),
        base=Mechanism("md"),
        alpha_prime=F(1, 20),
        trials=trials,
        seed=5,
        n_plus=n_plus,
    )
    defaults.update(kw)
    return Experiment(**defaults)


class TestExperimentValidation:
    def test_needs_trials(self):
        with pytest.raises(DegenerateParams):
            whp_experiment(trials=0)

    def test_needs_positive_alpha_prime(self):
        with pytest.raises(DegenerateParams):
            whp_experiment(alpha_prime=0)

    def test_sample_must_fit(self):
        with pytest.raises(SampleTooLarge):
            whp_experiment(n_plus=21)


class TestSafetyWhp:
    def test_seed_determinism(self):
        a = run_safety_whp(whp_experiment())
        b = run_safety_whp(whp_experiment())
        assert a == b

    def test_different_seeds_vary(self):
        # Without the wrapper the sybils flip roughly half the draws, so
        # violation counts move with the seed.
        rates = {
            run_safety_whp(whp_experiment(tau=F(0), seed=s, trials=60)).violation_count
            for s in range(6)
        }
        assert len(rates) > 1

    def test_full_participation_is_deterministic(self):
        exp = whp_experiment(n_plus=20, trials=50)
        stats = run_safety_whp(exp)
        assert stats.empirical_rate in (F(0), F(1))

    def test_gate_passes_above_threshold(self):
        # tau = 1/2 is far above sigma/(1 - mu) for this template.
        stats = run_safety_whp(whp_experiment(trials=400))
        assert stats.passes_gate()

    def test_rate_is_exact_fraction(self):
        stats = run_safety_whp(whp_experiment(trials=7))
        assert stats.empirical_rate == F(stats.violation_count, 7)

    def test_tightness_template_violates_often(self):
        # Below the random-participation threshold the adversarial template
        # (all sybils on the proposal, honest gap inside the slack) breaks
        # safety on a constant fraction of draws: at least 0.45 here.
        template = binary_profile(active="p" * 110 + "r" * 210, sybil="p" * 80)
        exp = Experiment(
            profile=template,
            mechanism=Mechanism("mj", participation="active"),
            base=Mechanism("mj"),
            alpha_prime=F(1, 10),
            trials=400,
            seed=55,
            n_plus=240,
        )
        stats = run_safety_whp(exp)
        assert stats.empirical_rate >= F(45, 100)


class TestProxyWhp:
    def test_seed_determinism(self):
        a = run_proxy_whp(proxy_experiment(), F(1, 20))
        b = run_proxy_whp(proxy_experiment(), F(1, 20))
        assert a == b

    def test_full_sample_never_violates_when_tau_covers_sigma(self):
        # All honest active: z equals the all-active outcome; with the
        # virtual mass matching the sybil count the envelope pins safety.
        exp = proxy_experiment(n_plus=40, trials=20)
        stats = run_proxy_whp(exp, F(1, 20))
        assert stats.violation_count == 0

    def test_bound_decays_with_sample_size(self):
        small = run_proxy_whp(proxy_experiment(n_plus=4, trials=30), F(1, 10))
        large = run_proxy_whp(proxy_experiment(n_plus=30, trials=30), F(1, 10))
        assert large.bound_value < small.bound_value

    def test_c_must_be_interior(self):
        with pytest.raises(DegenerateParams):
            run_proxy_whp(proxy_experiment(trials=5), F(0))

    def test_tracks_good_event_failures(self):
        stats = run_proxy_whp(proxy_experiment(trials=50), F(1, 20))
        assert stats.y_failure_count is not None
        assert 0 <= stats.y_failure_count <= 50

    def test_full_replacement_budget_never_violates(self):
        # As c approaches 1 the probed budget covers every honest voter, so
        # the reachable range swallows any outcome on the honest side.
        stats = run_proxy_whp(proxy_experiment(trials=40), F(99, 100))
        assert stats.violation_count == 0
        assert stats.bound_value < 1e-9


class TestHoeffdingDiagnostic:
    TEMPLATE = binary_profile(active="p" * 50 + "r" * 50)

    def test_impossible_excess_never_fires(self):
        stats = hoeffding_diagnostic(self.TEMPLATE, 20, F(3, 5), trials=100, seed=1)
        assert stats.violation_count == 0

    def test_full_sample_has_no_noise(self):
        stats = hoeffding_diagnostic(self.TEMPLATE, 100, F(1, 100), trials=50, seed=2)
        assert stats.violation_count == 0

    def test_bound_and_gate(self):
        stats = hoeffding_diagnostic(self.TEMPLATE, 25, F(1, 10), trials=800, seed=3)
        assert 0 < stats.bound_value < 1
        assert stats.passes_gate()

    def test_determinism(self):
        a = hoeffding_diagnostic(self.TEMPLATE, 25, F(1, 10), trials=100, seed=4)
        b = hoeffding_diagnostic(self.TEMPLATE, 25, F(1, 10), trials=100, seed=4)
        assert a == b
