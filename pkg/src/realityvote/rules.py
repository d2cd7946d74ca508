"""Base voting rules, the reality-enforcing wrapper, and active-only restriction.

Every rule returns a single alternative and settles ties toward the status
quo.  The reality-enforcing wrapper adds a virtual vote mass ``q`` for the
status quo before the base rule runs; ``q`` is kept as an exact rational
(tau times the visible electorate), never rounded to a whole number of
voters, which keeps the supermajority and suppressed-median equivalences
exact on knife-edge profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from .errors import (
    EmptyElectorate,
    MechanismMismatch,
    MissingPrivateBallots,
    NonRankingBallot,
)
from .population import Ballot, DomainSpec, Profile, Rational, as_fraction

PARTICIPATION_MODES = ("full", "active", "proxy")
BASE_RULES = ("mj", "pl", "smj", "cc", "scc", "imj", "md", "som")

_DOMAIN_FOR_BASE = {
    "mj": ("binary",),
    "pl": ("categorical",),
    "smj": ("binary", "categorical"),
    "cc": ("categorical",),
    "scc": ("categorical",),
    "imj": ("hypercube",),
    "md": ("interval",),
    "som": ("interval",),
}


@dataclass(frozen=True)
class Mechanism:
    """A base rule, its own threshold (if any), the RE parameter, and the
    participation treatment.

    ``re_tau`` is the reality-enforcing tau; 0 means no wrapper.  ``base_tau``
    parameterizes smj/scc/som and is ignored by the other base rules.
    """

    base: str
    base_tau: Fraction = Fraction(0)
    re_tau: Fraction = Fraction(0)
    participation: str = "full"

    def __post_init__(self):
        if self.base not in BASE_RULES:
            raise MechanismMismatch(f"unknown base rule {self.base!r}")
        if self.participation not in PARTICIPATION_MODES:
            raise MechanismMismatch(f"unknown participation mode {self.participation!r}")
        object.__setattr__(self, "base_tau", as_fraction(self.base_tau))
        object.__setattr__(self, "re_tau", as_fraction(self.re_tau))
        if self.base_tau < 0 or self.re_tau < 0:
            raise MechanismMismatch("tau parameters must be nonnegative")
        if self.base == "som" and not self.base_tau < 1:
            raise MechanismMismatch("suppression fraction must lie in [0, 1)")

    def describe(self) -> str:
        name = self.base
        if self.base in ("smj", "scc", "som"):
            name = f"{self.base}:{self.base_tau}"
        if self.re_tau:
            name += f" re:{self.re_tau}"
        return f"{name} mode:{self.participation}"


@dataclass(frozen=True)
class Tally:
    """Cast vote masses per alternative plus the virtual status-quo mass q.

    Cast masses are nonnegative integers (counts); q = re_tau times the
    number of voters visible to the mechanism, an exact rational.
    """

    counts: Dict[Ballot, int] = field(default_factory=dict)
    q: Fraction = Fraction(0)

    @property
    def cast_total(self) -> int:
        return sum(self.counts.values())

    def mass(self, alternative: Ballot) -> Fraction:
        return Fraction(self.counts.get(alternative, 0))


def tally_ballots(ballots: Iterable[Ballot], q: Rational = 0) -> Tally:
    counts: Dict[Ballot, int] = {}
    for ballot in ballots:
        counts[ballot] = counts.get(ballot, 0) + 1
    return Tally(counts=counts, q=as_fraction(q))


# ---------------------------------------------------------------------------
# Weighted-median machinery shared by md / som (exact rational masses).

MassEntry = Tuple[Fraction, Fraction]  # (position, mass)


def merge_masses(entries: Iterable[MassEntry]) -> List[MassEntry]:
    items = []
    for pos, mass in entries:
        if mass < 0:
            raise EmptyElectorate("negative mass")
        if mass:
            items.append((pos, mass))
    items.sort(key=lambda e: e[0])
    merged: List[MassEntry] = []
    for pos, mass in items:
        if merged and merged[-1][0] == pos:
            merged[-1] = (pos, merged[-1][1] + mass)
        else:
            merged.append((pos, mass))
    return merged


def median_bounds(entries: Iterable[MassEntry]) -> Tuple[Fraction, Fraction]:
    """The closed interval of weighted-median positions [lo, hi].

    lo is the least position whose inclusive prefix mass reaches half the
    total; hi the least position whose prefix strictly exceeds half.  When
    no exact half-split occurs the two coincide.
    """
    items = merge_masses(entries)
    if not items:
        raise EmptyElectorate("weighted median of zero total mass")
    # Scale masses to a common denominator: prefix sums run in integers.
    scale = 1
    for _, mass in items:
        d = mass.denominator
        if d != 1:
            scale = scale * d // math.gcd(scale, d)
    scaled = [
        (pos, mass.numerator * (scale // mass.denominator)) for pos, mass in items
    ]
    total = sum(m for _, m in scaled)
    if total <= 0:
        raise EmptyElectorate("weighted median of zero total mass")
    lo = hi = None
    prefix = 0
    for pos, mass in scaled:
        prefix += mass
        if lo is None and 2 * prefix >= total:
            lo = pos
        if hi is None and 2 * prefix > total:
            hi = pos
            break
    return lo, hi


def median_with_status_quo(entries: Iterable[MassEntry], r: Fraction) -> Fraction:
    """Weighted median with the status-quo tie rule.

    When the total mass admits two middle points, one extra unit vote at r
    settles the tie; for integer masses that is literally what happens, and
    in general it selects the median-interval point nearest r.
    """
    lo, hi = median_bounds(entries)
    return max(lo, min(as_fraction(r), hi))


# ---------------------------------------------------------------------------
# Base rules.  Each consumes a Tally built from the visible ballots.


def majority(tally: Tally, domain: DomainSpec) -> Ballot:
    """Binary majority: the proposal wins only by strictly outmassing the
    status quo plus the virtual mass q; ties go to the status quo."""
    r, p = domain.status_quo, domain.proposal
    if tally.mass(p) > tally.mass(r) + tally.q:
        return p
    return r


def supermajority(tau: Fraction, tally: Tally, domain: DomainSpec) -> Ballot:
    """tau-supermajority: elect the (unique) non-status-quo alternative whose
    cast votes strictly exceed a (1/2 + tau) fraction of all votes seen,
    virtual mass included; otherwise keep the status quo."""
    tau = as_fraction(tau)
    r = domain.r
    total = tally.cast_total + tally.q
    threshold = (Fraction(1, 2) + tau) * total
    for alternative in domain.alternative_list():
        if alternative == r:
            continue
        if tally.mass(alternative) > threshold:
            return alternative
    return r


def plurality(tally: Tally, domain: DomainSpec) -> Ballot:
    """Most cast votes wins, with q credited to the status quo.  Ties
    involving the status quo keep it; ties among challengers break by the
    domain's alternative order."""
    r = domain.r
    scores = {}
    for alternative in domain.alternative_list():
        score = tally.mass(alternative)
        if alternative == r:
            score += tally.q
        scores[alternative] = score
    top = max(scores.values())
    if scores[r] == top:
        return r
    for alternative in domain.alternative_list():
        if scores[alternative] == top:
            return alternative


def condorcet_conservative(tau: Fraction, tally: Tally, domain: DomainSpec) -> Ballot:
    """Pick the alternative that tau-super-beats every other; else status quo.

    Ballots must be full rankings.  An alternative beats another when
    strictly more than (1/2 + tau) of the contest's votes prefer it; the
    virtual mass q sides with the status quo in every contest involving it
    and abstains elsewhere.
    """
    tau = as_fraction(tau)
    r = domain.r
    alternatives = domain.alternative_list()
    pref: Dict[Tuple[Ballot, Ballot], int] = {}
    cast = 0
    for ranking, count in tally.counts.items():
        if not isinstance(ranking, tuple):
            raise NonRankingBallot(f"expected a ranking, got {ranking!r}")
        cast += count
        for i, upper in enumerate(ranking):
            for lower in ranking[i + 1 :]:
                pref[(upper, lower)] = pref.get((upper, lower), 0) + count

    def beats(a: Ballot, b: Ballot) -> bool:
        support = Fraction(pref.get((a, b), 0))
        contest_total = Fraction(cast)
        if r in (a, b):
            contest_total += tally.q
            if a == r:
                support += tally.q
        return support > (Fraction(1, 2) + tau) * contest_total

    for candidate in alternatives:
        if candidate == r:
            continue
        if all(beats(candidate, other) for other in alternatives if other != candidate):
            return candidate
    return r


def issuewise_majority(tally: Tally, domain: DomainSpec) -> Ballot:
    """Per-coordinate binary majority with q on the status quo's value and
    per-coordinate ties kept at the status quo.  The winning point may be
    one nobody voted for."""
    r = domain.status_quo_point
    result = []
    for j in range(domain.dimension):
        ones = Fraction(sum(c for b, c in tally.counts.items() if b[j] == 1))
        zeros = Fraction(tally.cast_total) - ones
        if r[j] == 0:
            result.append(1 if ones > zeros + tally.q else 0)
        else:
            result.append(0 if zeros > ones + tally.q else 1)
    return tuple(result)


def _interval_masses(tally: Tally, r: Fraction) -> List[MassEntry]:
    entries: List[MassEntry] = [
        (as_fraction(pos), Fraction(count)) for pos, count in tally.counts.items()
    ]
    if tally.q:
        entries.append((r, tally.q))
    return entries


def median(tally: Tally, domain: DomainSpec) -> Fraction:
    """Median position of the cast votes plus the virtual mass at r."""
    if tally.cast_total == 0 and tally.q == 0:
        raise EmptyElectorate("median of an empty electorate")
    r = domain.status_quo_position
    return median_with_status_quo(_interval_masses(tally, r), r)


def suppress_outer_median(tau: Fraction, tally: Tally, domain: DomainSpec) -> Fraction:
    """Suppress-outer-votes median.

    Compute the median m; if it sits off the status quo, discard exactly a
    tau fraction of the vote mass from the far side (splitting one voter's
    unit mass if tau times the electorate is fractional), recompute, and
    keep the new median only if it stayed on the same side of r.
    """
    tau = as_fraction(tau)
    r = domain.status_quo_position
    entries = _interval_masses(tally, r)
    total = sum(m for _, m in entries)
    if total <= 0:
        raise EmptyElectorate("suppressed median of an empty electorate")
    m = median_with_status_quo(entries, r)
    if m == r:
        return r
    cut = tau * total
    items = merge_masses(entries)
    if m > r:
        items.reverse()  # trim the highest votes first
    kept: List[MassEntry] = []
    for pos, mass in items:
        if cut >= mass:
            cut -= mass
            continue
        kept.append((pos, mass - cut))
        cut = Fraction(0)
    if not kept:
        return r
    m_reduced = median_with_status_quo(kept, r)
    if (m_reduced > r) == (m > r) and m_reduced != r:
        return m_reduced
    return r


# ---------------------------------------------------------------------------
# Dispatch.


def visible_ballots(mechanism: Mechanism, profile: Profile) -> Tuple[Ballot, ...]:
    if mechanism.participation == "full":
        if not profile.has_full_honest_ballots():
            raise MissingPrivateBallots(
                "full participation needs ballots for every honest voter"
            )
        return profile.all_ballots()
    return profile.visible_ballots()


def virtual_mass(mechanism: Mechanism, profile: Profile) -> Fraction:
    """q scales with the electorate the mechanism sees: the active voters
    under active-only restriction, the whole population otherwise (the
    proxy mechanism knows how many voters delegated)."""
    if mechanism.participation == "active":
        return mechanism.re_tau * profile.n_visible
    return mechanism.re_tau * profile.n


def build_tally(mechanism: Mechanism, profile: Profile) -> Tally:
    return tally_ballots(
        visible_ballots(mechanism, profile), virtual_mass(mechanism, profile)
    )


def evaluate_tally(mechanism: Mechanism, tally: Tally, domain: DomainSpec) -> Ballot:
    """Dispatch a prepared tally to the base rule (no participation logic)."""
    if domain.kind not in _DOMAIN_FOR_BASE[mechanism.base]:
        raise MechanismMismatch(
            f"base rule {mechanism.base!r} does not apply to {domain.kind} domains"
        )
    if mechanism.base == "mj":
        return majority(tally, domain)
    if mechanism.base == "pl":
        return plurality(tally, domain)
    if mechanism.base == "smj":
        return supermajority(mechanism.base_tau, tally, domain)
    if mechanism.base == "cc":
        return condorcet_conservative(Fraction(0), tally, domain)
    if mechanism.base == "scc":
        return condorcet_conservative(mechanism.base_tau, tally, domain)
    if mechanism.base == "imj":
        return issuewise_majority(tally, domain)
    if mechanism.base == "md":
        return median(tally, domain)
    return suppress_outer_median(mechanism.base_tau, tally, domain)


def apply(mechanism: Mechanism, profile: Profile) -> Ballot:
    """Evaluate a mechanism on a profile.

    Restricts to the ballots the participation mode exposes, adds the
    virtual status-quo mass, and dispatches to the base rule.  Same inputs
    always give the same output; there is no hidden randomness anywhere in
    the rule set.
    """
    domain = profile.domain
    if domain.kind not in _DOMAIN_FOR_BASE[mechanism.base]:
        raise MechanismMismatch(
            f"base rule {mechanism.base!r} does not apply to {domain.kind} domains"
        )
    if mechanism.participation == "proxy":
        if domain.kind != "interval" or mechanism.base != "md":
            raise MechanismMismatch("proxy participation is median-on-interval only")
        from . import proxy  # local import; proxy builds on this module

        return proxy.md_proxy(profile, mechanism.re_tau)

    return evaluate_tally(mechanism, build_tally(mechanism, profile), domain)
