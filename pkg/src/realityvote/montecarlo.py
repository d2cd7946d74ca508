"""Seed-deterministic random-participation experiments.

Each trial draws the active honest set uniformly without replacement from
the template's honest population and checks the safety predicate through
the verifier, so there is exactly one definition of a violation.  Trials
use substreams derived from (seed, trial index); serial and parallel
execution therefore agree bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import proxy, verifier
from .errors import DegenerateParams, SampleTooLarge
from .guarantees import Setting, safety_threshold
from .population import Profile, Rational, VoterClass, as_fraction, build_profile


@dataclass(frozen=True)
class Experiment:
    """A safety-with-high-probability experiment.

    ``profile`` is the template: full honest private ballots plus sybil
    ballots; which honest voters are active is what gets resampled.
    ``alpha_prime`` is the probed safety budget (strictly above the
    guarantee's alpha), ``n_plus`` the active sample size.
    """

    profile: Profile
    mechanism: Mechanism
    base: Mechanism
    alpha_prime: Fraction
    trials: int
    seed: int
    n_plus: int

    def __post_init__(self):
        object.__setattr__(self, "alpha_prime", as_fraction(self.alpha_prime))
        if self.trials < 1:
            raise DegenerateParams("need at least one trial")
        if self.alpha_prime <= 0:
            raise DegenerateParams("alpha_prime must be positive")
        if not self.profile.has_full_honest_ballots():
            raise DegenerateParams("template needs every honest ballot")
        if self.n_plus > self.profile.n_honest or self.n_plus < 1:
            raise SampleTooLarge("active sample must fit inside the honest set")


@dataclass(frozen=True)
class TrialStats:
    """Empirical violation tally against its analytic comparator.

    ``standard_error`` is the binomial standard error of the comparator
    rate at this trial count (deterministic given the experiment), and the
    acceptance gates allow three of them as slack.
    """

    violation_count: int
    trials: int
    empirical_rate: Fraction
    bound_value: float
    standard_error: float
    y_failure_count: Optional[int] = None

    @property
    def y_failure_rate(self) -> Optional[Fraction]:
        if self.y_failure_count is None:
            return None
        return Fraction(self.y_failure_count, self.trials)

    def passes_gate(self) -> bool:
        return float(self.empirical_rate) <= self.bound_value + 3 * self.standard_error


def _binomial_se(bound: float, trials: int) -> float:
    return math.sqrt(max(bound * (1.0 - bound), 0.0) / trials)


def _trial_seed(seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(trial,))


def _binary_template_counts(profile: Profile):
    p = profile.domain.proposal
    honest_p = sum(
        1
        for c, b in profile.voters
        if c is not VoterClass.SYBIL and b == p
    )
    return honest_p, profile.n_honest - honest_p


def _binary_trial_profile(exp: Experiment, active_p: int) -> Profile:
    """Rebuild the trial population from the drawn active p-count.

    Ballots are anonymous to every rule here, so the uniform draw of the
    active set is fully captured by how many proposal supporters it hits;
    that count follows the exact hypergeometric law.
    """
    domain = exp.profile.domain
    r, p = domain.status_quo, domain.proposal
    honest_p, honest_r = _binary_template_counts(exp.profile)
    active_r = exp.n_plus - active_p
    voters = [(VoterClass.HONEST_ACTIVE, p)] * active_p
    voters += [(VoterClass.HONEST_ACTIVE, r)] * active_r
    voters += [(VoterClass.HONEST_PASSIVE, p)] * (honest_p - active_p)
    voters += [(VoterClass.HONEST_PASSIVE, r)] * (honest_r - active_r)
    voters += [(VoterClass.SYBIL, b) for b in exp.profile.sybil_ballots()]
    return build_profile(domain, voters)


def run_safety_whp(exp: Experiment) -> TrialStats:
    """Empirical rate of safety violations under random participation,
    compared against the Hoeffding-style tail bound."""
    if exp.profile.domain.kind != "binary":
        raise DegenerateParams("the w.h.p. safety experiment is binary")
    honest_p, honest_r = _binary_template_counts(exp.profile)
    n = exp.profile.n
    sigma = exp.profile.sigma
    mu = Fraction(exp.profile.n_honest - exp.n_plus, n)
    tau = exp.mechanism.re_tau

    threshold = safety_threshold(Setting.RANDOM_FINITE, sigma, mu, tau)
    slack = float(exp.alpha_prime - threshold)
    if slack > 0:
        bound = math.exp(-(slack**2) * exp.n_plus / float((1 - sigma) ** 2))
    else:
        bound = 1.0

    violations = 0
    for trial in range(exp.trials):
        rng = np.random.Generator(np.random.Philox(_trial_seed(exp.seed, trial)))
        active_p = int(
            rng.hypergeometric(ngood=honest_p, nbad=honest_r, nsample=exp.n_plus)
        )
        trial_profile = _binary_trial_profile(exp, active_p)
        if not verifier.is_safe(exp.mechanism, exp.base, trial_profile, exp.alpha_prime):
            violations += 1
    return TrialStats(
        violation_count=violations,
        trials=exp.trials,
        empirical_rate=Fraction(violations, exp.trials),
        bound_value=bound,
        standard_error=_binomial_se(bound, exp.trials),
    )


def run_proxy_whp(exp: Experiment, c: Rational) -> TrialStats:
    """Proxy-delegation trials: violation when the proxy median leaves the
    safety region for budget alpha' = c + max(0, (sigma - tau)/(2(1-sigma))).

    Also tallies how often the good event fails: the passive stretch from
    the all-active counterfactual outcome to the next active honest voter
    exceeding a c fraction of the honest voters.  Both rates are bounded by
    (1 - c)^(active sample size).
    """
    c = as_fraction(c)
    if not 0 < c < 1:
        raise DegenerateParams("c must lie strictly between 0 and 1")
    if exp.profile.domain.kind != "interval":
        raise DegenerateParams("proxy experiments run on the interval domain")
    sigma = exp.profile.sigma
    tau = exp.mechanism.re_tau
    alpha_prime = c + max(Fraction(0), (sigma - tau) / (2 * (1 - sigma)))

    region = verifier.outcome_range(
        exp.base, verifier.honest_only(exp.profile), alpha_prime
    ).safe_region(exp.profile.domain)

    h = exp.profile.n_honest
    bound = float((1 - c)) ** exp.n_plus
    violations = 0
    y_failures = 0
    for trial in range(exp.trials):
        z, analysis = proxy.sample_and_run(
            exp.profile, exp.n_plus, tau, _trial_seed(exp.seed, trial)
        )
        if not region.contains(z):
            violations += 1
        if analysis.j_hat > c * h:
            y_failures += 1
    return TrialStats(
        violation_count=violations,
        trials=exp.trials,
        empirical_rate=Fraction(violations, exp.trials),
        bound_value=bound,
        standard_error=_binomial_se(bound, exp.trials),
        y_failure_count=y_failures,
    )


def hoeffding_diagnostic(
    template: Profile,
    n_plus: int,
    epsilon: Rational,
    trials: int,
    seed: int,
) -> TrialStats:
    """How often does the active proposal share overshoot its expectation by
    epsilon?  Compared against exp(-2 * epsilon^2 * n_plus)."""
    epsilon = as_fraction(epsilon)
    if template.domain.kind != "binary":
        raise DegenerateParams("the diagnostic runs on binary templates")
    if trials < 1:
        raise DegenerateParams("need at least one trial")
    honest_p = sum(
        1
        for cls, b in template.voters
        if cls is not VoterClass.SYBIL and b == template.domain.proposal
    )
    honest = template.n_honest
    if n_plus > honest or n_plus < 1:
        raise SampleTooLarge("active sample must fit inside the honest set")
    psi = Fraction(honest_p, honest)
    cutoff = (psi + epsilon) * n_plus

    overshoots = 0
    for trial in range(trials):
        rng = np.random.Generator(np.random.Philox(_trial_seed(seed, trial)))
        active_p = int(
            rng.hypergeometric(ngood=honest_p, nbad=honest - honest_p, nsample=n_plus)
        )
        if active_p >= cutoff:
            overshoots += 1
    bound = math.exp(-2 * float(epsilon) ** 2 * n_plus)
    return TrialStats(
        violation_count=overshoots,
        trials=trials,
        empirical_rate=Fraction(overshoots, trials),
        bound_value=bound,
        standard_error=_binomial_se(bound, trials),
    )
