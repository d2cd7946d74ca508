from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from realityvote import DomainSpec, build_profile, project_to_pair
from realityvote.errors import (
    InvalidBallot,
    MixedBallotKind,
    NoActiveHonest,
    PassiveSybil,
    SybilWithoutBallot,
)
from realityvote.population import NonatomicProfile

from conftest import ACTIVE, PASSIVE, SYBIL, binary_profile, interval_profile


class TestBuildProfile:
    def test_full_participation_fractions(self, example_full):
        assert example_full.sigma == Fraction(2, 5)
        assert example_full.mu == 0
        assert example_full.phi == 1

    def test_partial_participation_fractions(self, example_partial):
        assert example_partial.sigma == Fraction(2, 5)
        assert example_partial.mu == Fraction(2, 5)
        assert example_partial.phi == Fraction(1, 3)

    def test_singleton(self):
        p = binary_profile(active="r")
        assert (p.sigma, p.mu, p.phi) == (0, 0, 1)

    def test_fraction_identity(self, example_partial):
        p = example_partial
        assert p.sigma + p.mu + p.h_plus == 1

    def test_sybil_needs_ballot(self):
        with pytest.raises(SybilWithoutBallot):
            build_profile(DomainSpec.binary(), [(ACTIVE, "r"), (SYBIL, None)])

    def test_all_passive_rejected(self):
        with pytest.raises(NoActiveHonest):
            build_profile(DomainSpec.binary(), [(PASSIVE, "r"), (PASSIVE, None)])

    def test_empty_rejected(self):
        with pytest.raises(NoActiveHonest):
            build_profile(DomainSpec.binary(), [])

    def test_ballot_type_checked(self):
        with pytest.raises(InvalidBallot):
            build_profile(DomainSpec.binary(), [(ACTIVE, "q")])

    def test_unknown_voter_class_rejected(self):
        with pytest.raises(PassiveSybil):
            build_profile(DomainSpec.binary(), [(ACTIVE, "r"), ("passive_sybil", "p")])

    def test_mixed_rankings_rejected(self):
        domain = DomainSpec.categorical(["r", "a", "b"], "r")
        with pytest.raises(MixedBallotKind):
            build_profile(domain, [(ACTIVE, "a"), (ACTIVE, ("a", "b", "r"))])

    def test_passive_may_omit_ballot(self):
        p = build_profile(DomainSpec.binary(), [(ACTIVE, "r"), (PASSIVE, None)])
        assert not p.has_full_honest_ballots()


class TestDomainSpec:
    def test_categorical_duplicates_rejected(self):
        with pytest.raises(InvalidBallot):
            DomainSpec.categorical(["a", "a"], "a")

    def test_status_quo_must_be_member(self):
        with pytest.raises(InvalidBallot):
            DomainSpec.categorical(["a", "b"], "c")

    def test_hypercube_alternatives(self):
        domain = DomainSpec.hypercube(2, (0, 0))
        assert domain.alternative_list() == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_ranking_must_be_permutation(self):
        domain = DomainSpec.categorical(["r", "a", "b"], "r")
        with pytest.raises(InvalidBallot):
            domain.validate_ballot(("a", "b"))


class TestProjectToPair:
    def test_closer_point(self):
        prof = interval_profile(0, active=(4,))
        out = project_to_pair(prof, 3, 6)
        assert out.voters[0][1] == "3"

    def test_tie_selects_status_quo_side(self):
        prof = interval_profile(0, active=(Fraction(9, 2),))
        out = project_to_pair(prof, 3, 6)
        assert out.voters[0][1] == "3"

    def test_delegation_population_projection(self, delegation_population):
        # Pair (4, 13): midpoint 8.5; positions {2,5,7,8} land on 4, the
        # other eight (11,12,12,13,15,15,16,17) on 13.
        out = project_to_pair(delegation_population, 4, 13)
        votes = [b for _, b in out.voters if b is not None]
        assert votes.count("4") == 4
        assert votes.count("13") == 8
        assert [c for c, _ in out.voters] == [c for c, _ in delegation_population.voters]

    def test_requires_order(self, delegation_population):
        with pytest.raises(InvalidBallot):
            project_to_pair(delegation_population, 6, 6)

    @given(st.lists(st.sampled_from([0, 10]), min_size=1, max_size=12))
    def test_idempotent_on_two_point_profiles(self, xs):
        prof = interval_profile(0, active=xs)
        out = project_to_pair(prof, 0, 10)
        assert [b for _, b in out.voters] == [str(x) for x in xs]


class TestNonatomic:
    def test_masses_must_sum_to_one(self):
        with pytest.raises(InvalidBallot):
            NonatomicProfile(
                h_r=Fraction(1, 2),
                h_p=Fraction(1, 2),
                s_r=Fraction(1, 2),
                s_p=Fraction(0),
                participation=Fraction(1),
            )

    def test_from_profile(self, example_partial):
        pop = NonatomicProfile.from_profile(example_partial)
        assert pop.sigma == Fraction(2, 5)
        assert pop.mu == Fraction(2, 5)
        assert pop.active_honest_r == Fraction(1, 5)

    def test_active_mass_split(self):
        pop = NonatomicProfile(
            h_r=Fraction(2, 5),
            h_p=Fraction(1, 5),
            s_r=Fraction(0),
            s_p=Fraction(2, 5),
            participation=Fraction(1, 2),
        )
        assert pop.mu == Fraction(3, 10)
        assert pop.visible_mass == Fraction(7, 10)
