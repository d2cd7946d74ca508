"""Interchange formats: the profile JSON document and the frontier CSV.

Rationals travel as 'p/q' strings, never floats; the JSON canonicalization
(sorted keys, compact separators) makes parse/serialize round-trips
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidBallot
from .guarantees import GuaranteeReport, Setting, report
from .population import (
    Ballot,
    DomainSpec,
    Profile,
    VoterClass,
    as_fraction,
    build_profile,
    format_rational,
)

PROFILE_FORMAT = "realityvote/profile/v1"
FRONTIER_SCHEMA_VERSIONS = (1,)

_CLASS_TO_TAG = {
    VoterClass.HONEST_ACTIVE: "honest_active",
    VoterClass.HONEST_PASSIVE: "honest_passive",
    VoterClass.SYBIL: "sybil",
}
_TAG_TO_CLASS = {tag: cls for cls, tag in _CLASS_TO_TAG.items()}


def _domain_to_json(domain: DomainSpec) -> dict:
    if domain.kind == "binary":
        return {"kind": "binary", "r": domain.status_quo, "p": domain.proposal}
    if domain.kind == "categorical":
        return {
            "kind": "categorical",
            "alternatives": list(domain.alternatives),
            "r": domain.status_quo,
        }
    if domain.kind == "hypercube":
        return {
            "kind": "hypercube",
            "d": domain.dimension,
            "r": list(domain.status_quo_point),
        }
    return {"kind": "interval", "r": format_rational(domain.status_quo_position)}


def _domain_from_json(doc: dict) -> DomainSpec:
    kind = doc.get("kind")
    if kind == "binary":
        return DomainSpec.binary(status_quo=doc["r"], proposal=doc["p"])
    if kind == "categorical":
        return DomainSpec.categorical(doc["alternatives"], doc["r"])
    if kind == "hypercube":
        return DomainSpec.hypercube(doc["d"], doc["r"])
    if kind == "interval":
        return DomainSpec.interval(Fraction(doc["r"]))
    raise InvalidBallot(f"unknown domain kind {kind!r}")


def _ballot_to_json(domain: DomainSpec, ballot: Optional[Ballot]):
    if ballot is None:
        return None
    if domain.kind == "interval":
        return format_rational(ballot)
    if domain.kind == "hypercube":
        return list(ballot)
    if isinstance(ballot, tuple):  # ranking
        return list(ballot)
    return ballot


def _ballot_from_json(domain: DomainSpec, raw) -> Optional[Ballot]:
    if raw is None:
        return None
    if domain.kind == "interval":
        if isinstance(raw, float):
            raise InvalidBallot("positions must be exact 'p/q' strings, not floats")
        return Fraction(raw)
    if domain.kind == "hypercube":
        return tuple(int(b) for b in raw)
    if isinstance(raw, list):
        return tuple(raw)
    return raw


def profile_to_json(profile: Profile) -> str:
    """Canonical JSON for a profile: stable key order, no whitespace."""
    doc = {
        "format": PROFILE_FORMAT,
        "domain": _domain_to_json(profile.domain),
        "voters": [
            {
                "class": _CLASS_TO_TAG[cls],
                "ballot": _ballot_to_json(profile.domain, ballot),
            }
            for cls, ballot in profile.voters
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def profile_from_json(text: str) -> Profile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidBallot(f"profile file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "domain" not in doc or "voters" not in doc:
        raise InvalidBallot("profile file needs 'domain' and 'voters' fields")
    domain = _domain_from_json(doc["domain"])
    entries = []
    for voter in doc["voters"]:
        tag = voter.get("class")
        if tag not in _TAG_TO_CLASS:
            raise InvalidBallot(f"unknown voter class {tag!r}")
        entries.append(
            (_TAG_TO_CLASS[tag], _ballot_from_json(domain, voter.get("ballot")))
        )
    return build_profile(domain, entries)


# ---------------------------------------------------------------------------
# Frontier CSV.

FRONTIER_COLUMNS = [
    "setting",
    "sigma",
    "sigma_dec",
    "mu",
    "mu_dec",
    "tau",
    "tau_dec",
    "alpha_star",
    "alpha_star_dec",
    "beta_star",
    "beta_star_dec",
    "feasible",
    "tau_lo",
    "tau_lo_dec",
    "tau_hi",
    "tau_hi_dec",
    "error",
]


def _dec(value: Optional[Fraction]) -> str:
    return "" if value is None else f"{float(value):.6g}"


def _rat(value: Optional[Fraction]) -> str:
    return "" if value is None else format_rational(value)


def frontier_rows(
    setting: Setting,
    sigma_grid: Sequence[Fraction],
    mu_grid: Sequence[Fraction],
    tau_grid: Sequence[Fraction],
) -> Iterable[List[str]]:
    """One row per grid point, lexicographic in (sigma, mu, tau).  Points
    with sigma + mu >= 1 come back with the error sentinel instead of
    threshold values."""
    for sigma in sigma_grid:
        for mu in mu_grid:
            for tau in tau_grid:
                base = [
                    setting.value,
                    _rat(sigma),
                    _dec(sigma),
                    _rat(mu),
                    _dec(mu),
                    _rat(tau),
                    _dec(tau),
                ]
                if sigma + mu >= 1 or sigma >= 1 or mu >= 1:
                    yield base + [""] * 9 + ["degenerate"]
                    continue
                rep: GuaranteeReport = report(setting, sigma, mu, tau)
                lo, hi = (rep.feasible_tau or (None, None))
                yield base + [
                    _rat(rep.alpha_star),
                    _dec(rep.alpha_star),
                    _rat(rep.beta_star),
                    _dec(rep.beta_star),
                    "0" if rep.impossibility else "1",
                    _rat(lo),
                    _dec(lo),
                    _rat(hi),
                    _dec(hi),
                    "",
                ]


def write_frontier_csv(
    setting: Setting,
    sigma_grid: Sequence[Fraction],
    mu_grid: Sequence[Fraction],
    tau_grid: Sequence[Fraction],
    schema_version: int = 1,
) -> str:
    if schema_version not in FRONTIER_SCHEMA_VERSIONS:
        raise InvalidBallot(f"unknown frontier schema version {schema_version}")
    buffer = io.StringIO()
    buffer.write(f"# realityvote-frontier-v{schema_version}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FRONTIER_COLUMNS)
    for row in frontier_rows(setting, sigma_grid, mu_grid, tau_grid):
        writer.writerow(row)
    return buffer.getvalue()


def parse_rational_list(raw: str) -> Tuple[Fraction, ...]:
    """Comma-separated exact rationals, e.g. '0,1/20,1/10'."""
    items = [piece.strip() for piece in raw.split(",") if piece.strip()]
    if not items:
        raise InvalidBallot("empty grid")
    try:
        return tuple(as_fraction(Fraction(piece)) for piece in items)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidBallot(f"bad rational in grid: {exc}") from None
