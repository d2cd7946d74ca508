"""Shared builders for test populations."""

from fractions import Fraction

import pytest

from realityvote import DomainSpec, build_profile
from realityvote.population import VoterClass

ACTIVE = VoterClass.HONEST_ACTIVE
PASSIVE = VoterClass.HONEST_PASSIVE
SYBIL = VoterClass.SYBIL


def binary_profile(active="", passive="", sybil="", domain=None):
    """Compact binary builder: strings of 'r'/'p' per class."""
    domain = domain or DomainSpec.binary()
    voters = [(ACTIVE, c) for c in active]
    voters += [(PASSIVE, c) for c in passive]
    voters += [(SYBIL, c) for c in sybil]
    return build_profile(domain, voters)


def interval_profile(r, active=(), passive=(), sybil=()):
    domain = DomainSpec.interval(Fraction(r))
    voters = [(ACTIVE, Fraction(x)) for x in active]
    voters += [(PASSIVE, Fraction(x)) for x in passive]
    voters += [(SYBIL, Fraction(x)) for x in sybil]
    return build_profile(domain, voters)


@pytest.fixture
def example_full():
    """Five voters, full participation: honest r, r, p; sybils p, p."""
    return binary_profile(active="rrp", sybil="pp")


@pytest.fixture
def example_partial():
    """Same population, but only one honest voter is active (on r)."""
    return binary_profile(active="r", passive="rr", sybil="pp")


@pytest.fixture
def delegation_population():
    """The worked delegation example: r=4, actives {5,13}, sybils {8,15,15},
    passives {2,7,11,12,12,16,17}."""
    return interval_profile(
        4,
        active=(5, 13),
        passive=(2, 7, 11, 12, 12, 16, 17),
        sybil=(8, 15, 15),
    )
