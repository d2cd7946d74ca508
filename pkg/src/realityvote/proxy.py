"""Nearest-active-voter delegation on the line and the proxy-weighted median.

Passive honest voters delegate their unit vote to the nearest active entity;
the status quo participates as a proxy carrying the virtual vote mass.  The
proxy median is the weighted median of the active entities.  The analysis
helpers compute the quantities used to certify the mechanism's safety
envelope on concrete instances.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import rules
from .errors import (
    EmptyEntries,
    MissingPrivateBallots,
    NoProxyAvailable,
    SampleTooLarge,
)
from .population import (
    DomainSpec,
    Profile,
    Rational,
    VoterClass,
    as_fraction,
    build_profile,
)

SeedLike = Union[int, np.random.SeedSequence]


@dataclass(frozen=True)
class ProxyEntity:
    """One active entity: a voter in V+ or the status quo itself."""

    position: Fraction
    weight: Fraction
    is_status_quo: bool = False


@dataclass(frozen=True)
class DelegationWeights:
    """Per-entity weights: 1 + follower count for voters, and the virtual
    mass plus followers for the status quo."""

    entities: Tuple[ProxyEntity, ...]

    @property
    def total_weight(self) -> Fraction:
        return sum(e.weight for e in self.entities)

    def entries(self) -> List[Tuple[Fraction, Fraction]]:
        return [(e.position, e.weight) for e in self.entities]


def _nearest_position(
    sorted_positions: Sequence[Fraction], target: Fraction, r: Fraction
) -> Fraction:
    """Nearest of the candidate positions to target.

    Exact distance ties go to the candidate closer to r, and to r itself
    when r is one of the tied candidates (r cannot lie strictly between two
    consecutive candidates here, since it is always a candidate).
    """
    i = bisect.bisect_left(sorted_positions, target)
    if i == len(sorted_positions):
        return sorted_positions[-1]
    if i == 0:
        return sorted_positions[0]
    right, left = sorted_positions[i], sorted_positions[i - 1]
    d_right, d_left = right - target, target - left
    if d_left < d_right:
        return left
    if d_right < d_left:
        return right
    # Exact midpoint: the candidate closer to r wins; r itself on a further
    # tie (unreachable when r is in the pool, but kept for safety).
    dl, dr = abs(left - r), abs(right - r)
    if dl != dr:
        return left if dl < dr else right
    if right == r:
        return right
    return left


def delegate(
    profile: Profile,
    re_tau: Rational,
    include_status_quo: bool = True,
    r_unit_weight: bool = False,
) -> DelegationWeights:
    """Assign every passive honest voter's unit weight to its proxy.

    The proxy pool is the active voters plus (by default) the status quo.
    ``r_unit_weight`` switches to the variant that also gives the status quo
    a base weight of 1 like any other entity.
    """
    if profile.domain.kind != "interval":
        raise NoProxyAvailable("delegation is defined on the interval domain")
    re_tau = as_fraction(re_tau)
    r = profile.domain.status_quo_position

    active_positions: List[Fraction] = []
    passive_positions: List[Fraction] = []
    for cls, ballot in profile.voters:
        if cls is VoterClass.HONEST_PASSIVE:
            if ballot is None:
                raise MissingPrivateBallots(
                    "delegation needs every passive voter's position"
                )
            passive_positions.append(as_fraction(ballot))
        else:
            active_positions.append(as_fraction(ballot))

    if not include_status_quo and not active_positions:
        raise NoProxyAvailable("no active voters and the status quo is excluded")

    pool = sorted(set(active_positions) | ({r} if include_status_quo else set()))
    followers = {pos: 0 for pos in pool}
    # One monotone sweep over the sorted passives: segment boundaries are
    # the midpoints between consecutive proxies; an exact-midpoint tie goes
    # to the side nearer the status quo (r never sits strictly inside a
    # segment, so "nearer r" is simply r's side of the midpoint).
    boundaries = [
        (pool[i] + pool[i + 1]) / 2 for i in range(len(pool) - 1)
    ]
    segment = 0
    for pos in sorted(passive_positions):
        while segment < len(boundaries) and (
            pos > boundaries[segment]
            or (pos == boundaries[segment] and boundaries[segment] < r)
        ):
            segment += 1
        followers[pool[segment]] += 1

    entities: List[ProxyEntity] = []
    remaining = dict(followers)
    for pos in active_positions:
        entities.append(
            ProxyEntity(position=pos, weight=Fraction(1) + remaining.pop(pos, 0))
        )
    if include_status_quo:
        base = Fraction(1) if r_unit_weight else Fraction(0)
        weight = base + re_tau * profile.n + remaining.pop(r, 0)
        entities.append(ProxyEntity(position=r, weight=weight, is_status_quo=True))
    return DelegationWeights(entities=tuple(entities))


def weighted_median(entries: Sequence[Tuple[Rational, Rational]]) -> Fraction:
    """The minimal position whose inclusive prefix weight covers the
    exclusive suffix weight, positions sorted ascending."""
    merged = rules.merge_masses(
        [(as_fraction(p), as_fraction(w)) for p, w in entries]
    )
    total = sum(w for _, w in merged)
    if not merged or total <= 0:
        raise EmptyEntries("weighted median needs positive total weight")
    prefix = Fraction(0)
    for pos, weight in merged:
        prefix += weight
        if 2 * prefix >= total:
            return pos
    raise EmptyEntries("unreachable: prefix never covered suffix")


def md_proxy(profile: Profile, re_tau: Rational, r_unit_weight: bool = False) -> Fraction:
    """Proxy-weighted median: active entities weighted by followers, the
    status quo carrying its followers plus the virtual mass."""
    weights = delegate(profile, re_tau, r_unit_weight=r_unit_weight)
    return weighted_median(weights.entries())


def nearest_entity_to(
    profile: Profile, re_tau: Rational, target: Rational
) -> Fraction:
    """Position of the active entity (status quo included) nearest to a
    target, with the delegation tie rule."""
    r = profile.domain.status_quo_position
    pool = sorted(
        {
            as_fraction(b)
            for cls, b in profile.voters
            if cls is not VoterClass.HONEST_PASSIVE
        }
        | {r}
    )
    return _nearest_position(pool, as_fraction(target), r)


# ---------------------------------------------------------------------------
# Instance analysis.


@dataclass(frozen=True)
class ProxyAnalysis:
    """Quantities certifying the proxy mechanism's behavior on one instance.

    All positions are reported in normalized orientation: the instance is
    mirrored around the status quo when the honest median falls below it,
    so ``h_star >= r`` always holds here.  ``z`` is the mechanism outcome
    recomputed on the normalized instance.
    """

    r: Fraction
    n: int
    n_honest: int
    h_star: Fraction
    nearest_active_position: Fraction
    d_star: Fraction
    h_hat: Fraction
    h_hat_bar: Optional[Fraction]
    h_hat_under: Optional[Fraction]
    z: Fraction
    j_hat: int
    envelope_holds: Optional[bool]
    range_holds: bool
    j_bound_holds: bool


def j_count(
    passive_positions: Sequence[Fraction], s: Fraction, s_prime: Fraction
) -> int:
    """Directional count of passive voters in (s, s']; antisymmetric."""
    if s_prime == s:
        return 0
    if s_prime < s:
        return -j_count(passive_positions, s_prime, s)
    return sum(1 for p in passive_positions if s < p <= s_prime)


def _mirrored(profile: Profile) -> Profile:
    r = profile.domain.status_quo_position
    flipped = [
        (cls, None if b is None else 2 * r - as_fraction(b))
        for cls, b in profile.voters
    ]
    return build_profile(DomainSpec.interval(r), flipped)


def analyze(profile: Profile, re_tau: Rational) -> ProxyAnalysis:
    """Compute the analysis quantities and the per-instance guarantee verdicts.

    Requires the passive voters' private positions.  Verdicts:

    * ``envelope_holds``: z within [r, h* + d*]; only meaningful (non-None)
      when the virtual mass matches or exceeds the sybil count,
    * ``range_holds``: z within [r, first active honest position above the
      all-active counterfactual outcome],
    * ``j_bound_holds``: the counterfactual outcome equals r, or the
      directional passive count from the honest median to it is at most
      (sigma - tau)/2 of the population.
    """
    if not profile.has_full_honest_ballots():
        raise MissingPrivateBallots("analysis needs all honest positions")
    re_tau = as_fraction(re_tau)
    r = profile.domain.status_quo_position

    honest = [as_fraction(b) for c, b in profile.voters if c is not VoterClass.SYBIL]
    h_star_raw = rules.median_with_status_quo([(p, Fraction(1)) for p in honest], r)
    mirrored = h_star_raw < r
    work = _mirrored(profile) if mirrored else profile

    passive_positions = [
        as_fraction(b) for c, b in work.voters if c is VoterClass.HONEST_PASSIVE
    ]
    active_honest = sorted(
        as_fraction(b) for c, b in work.voters if c is VoterClass.HONEST_ACTIVE
    )
    actives = sorted(
        as_fraction(b) for c, b in work.voters if c is not VoterClass.HONEST_PASSIVE
    )

    if mirrored:
        honest_positions = [
            as_fraction(b) for c, b in work.voters if c is not VoterClass.SYBIL
        ]
        h_star = rules.median_with_status_quo(
            [(p, Fraction(1)) for p in honest_positions], r
        )
    else:
        h_star = h_star_raw
    nearest_active = _nearest_position(actives, h_star, r)
    d_star = abs(nearest_active - h_star)

    all_positions = [(as_fraction(b), Fraction(1)) for _, b in work.voters]
    all_positions.append((r, re_tau * work.n))
    h_hat = rules.median_with_status_quo(all_positions, r)

    above = [p for p in active_honest if p >= h_hat]
    below = [p for p in active_honest if p <= h_hat]
    h_hat_bar = min(above) if above else None
    h_hat_under = max(below) if below else None

    z = md_proxy(work, re_tau)

    if h_hat_bar is None:
        j_hat = sum(1 for p in passive_positions if p > h_hat)
    else:
        j_hat = j_count(passive_positions, h_hat, h_hat_bar)

    sigma, tau = work.sigma, re_tau
    envelope: Optional[bool] = None
    if tau >= sigma:
        envelope = r <= z <= h_star + d_star
    range_holds = r <= z and (h_hat_bar is None or z <= h_hat_bar)
    if h_hat == r:
        j_bound = True
    else:
        j_bound = Fraction(
            j_count(passive_positions, h_star, h_hat)
        ) <= (sigma - tau) / 2 * work.n

    return ProxyAnalysis(
        r=r,
        n=work.n,
        n_honest=work.n_honest,
        h_star=h_star,
        nearest_active_position=nearest_active,
        d_star=d_star,
        h_hat=h_hat,
        h_hat_bar=h_hat_bar,
        h_hat_under=h_hat_under,
        z=z,
        j_hat=abs(j_hat),
        envelope_holds=envelope,
        range_holds=range_holds,
        j_bound_holds=j_bound,
    )


def sample_and_run(
    template: Profile,
    n_plus: int,
    re_tau: Rational,
    seed: SeedLike,
) -> Tuple[Fraction, ProxyAnalysis]:
    """Draw the active honest set uniformly without replacement and run the
    proxy mechanism.

    The template's honest voters (with their private positions) form the
    pool; the drawn voters become active, the rest delegate.  Deterministic
    given the seed.  Returns the outcome on the original orientation plus
    the normalized-instance analysis.
    """
    if template.domain.kind != "interval":
        raise NoProxyAvailable("proxy sampling is interval-only")
    if not template.has_full_honest_ballots():
        raise MissingPrivateBallots("template needs every honest position")
    honest = [
        as_fraction(b) for c, b in template.voters if c is not VoterClass.SYBIL
    ]
    sybils = [as_fraction(b) for c, b in template.voters if c is VoterClass.SYBIL]
    if n_plus > len(honest) or n_plus < 1:
        raise SampleTooLarge(f"cannot draw {n_plus} of {len(honest)} honest voters")

    seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.Generator(np.random.Philox(seed_seq))
    chosen = set(rng.choice(len(honest), size=n_plus, replace=False).tolist())

    voters = [
        (
            VoterClass.HONEST_ACTIVE if i in chosen else VoterClass.HONEST_PASSIVE,
            pos,
        )
        for i, pos in enumerate(honest)
    ]
    voters.extend((VoterClass.SYBIL, pos) for pos in sybils)
    trial = build_profile(template.domain, voters)
    z = md_proxy(trial, re_tau)
    return z, analyze(trial, re_tau)
