"""Exception types shared across the package."""


class RealityVoteError(Exception):
    """Base class for all errors raised by this package."""


class MixedBallotKind(RealityVoteError):
    """Ballots of incompatible kinds (e.g. rankings mixed with single choices)."""


class NoActiveHonest(RealityVoteError):
    """Population has no active honest voter (sigma + mu = 1)."""


class SybilWithoutBallot(RealityVoteError):
    """Sybil voters always vote; a sybil entry must carry a ballot."""


class PassiveSybil(RealityVoteError):
    """Sybils are active by assumption; 'passive sybil' is not a voter class."""


class InvalidBallot(RealityVoteError):
    """Ballot does not type-check against the domain."""


class EmptyTargetSet(RealityVoteError):
    """Between-set union over an empty target set."""


class NonRankingBallot(RealityVoteError):
    """Condorcet-family rules need full rankings as ballots."""


class EmptyElectorate(RealityVoteError):
    """A rule was applied with no visible ballots and no virtual mass."""


class EmptyEntries(RealityVoteError):
    """Weighted median of an empty entry list or zero total weight."""


class NoProxyAvailable(RealityVoteError):
    """No delegation target exists (no actives and the status quo is excluded)."""


class SampleTooLarge(RealityVoteError):
    """Requested active sample exceeds the honest population."""


class DegenerateParams(RealityVoteError):
    """Parameter combination outside a guarantee formula's domain (sigma + mu >= 1)."""


class BudgetExceeded(RealityVoteError):
    """Instance too large for exhaustive enumeration under the configured cap."""


class MissingPrivateBallots(RealityVoteError):
    """Operation needs the private ballots of passive honest voters."""


class UnrealizableShape(RealityVoteError):
    """Population shape has no integer realization."""


class RegimeMismatch(RealityVoteError):
    """Requested adversarial witness outside the violating parameter regime."""


class MechanismMismatch(RealityVoteError):
    """Mechanism is incompatible with the profile's domain."""
