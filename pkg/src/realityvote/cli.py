"""Command-line surface: evaluate profiles, sweep the feasibility frontier,
cross-check formulas against the brute-force oracle, and run simulations.

Exit codes: 0 ok, 1 oracle/formula mismatch, 2 bad input, 3 domain or
mechanism mismatch, 4 enumeration budget exceeded, 5 statistical gate
failure.  Every command is deterministic given its arguments.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import List, Optional

from . import formats, guarantees, montecarlo, rules, verifier
from .errors import (
    BudgetExceeded,
    MechanismMismatch,
    NonRankingBallot,
    RealityVoteError,
)
from .guarantees import Setting
from .population import as_fraction, format_rational
from .rules import Mechanism

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4
EXIT_GATE = 5

_SETTINGS = {
    "arbitrary": Setting.ARBITRARY_BINARY,
    "random": Setting.RANDOM_NONATOMIC,
    "random-finite": Setting.RANDOM_FINITE,
    "multialt": Setting.MULTI_ALT_SMJ,
    "proxy": Setting.PROXY_INTERVAL,
}


def parse_mechanism(spec: str) -> Mechanism:
    """Grammar: base{mj|pl|smj:T|cc|scc:T|imj|md|som:T} [re:T] [mode:{full|active|proxy}]."""
    tokens = spec.split()
    if not tokens:
        raise MechanismMismatch("empty mechanism spec")
    head = tokens[0]
    if ":" in head:
        name, _, raw_tau = head.partition(":")
        base_tau = as_fraction(Fraction(raw_tau))
    else:
        name, base_tau = head, Fraction(0)
    re_tau = Fraction(0)
    mode = "full"
    for token in tokens[1:]:
        if token.startswith("re:"):
            re_tau = as_fraction(Fraction(token[3:]))
        elif token.startswith("mode:"):
            raw_mode = token[5:]
            if raw_mode not in ("full", "active", "proxy"):
                raise MechanismMismatch(f"unknown mode {raw_mode!r}")
            mode = raw_mode
        else:
            raise MechanismMismatch(f"unrecognized mechanism token {token!r}")
    return Mechanism(base=name, base_tau=base_tau, re_tau=re_tau, participation=mode)


def _load_profile(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return formats.profile_from_json(handle.read())


def _format_outcome(outcome) -> str:
    if isinstance(outcome, tuple):
        return "".join(str(b) for b in outcome)
    if isinstance(outcome, Fraction):
        return format_rational(outcome)
    return str(outcome)


def _tally_order(domain, counts):
    if domain.kind in ("binary", "categorical"):
        order = {a: i for i, a in enumerate(domain.alternative_list())}
        return sorted(
            counts,
            key=lambda b: (0, order[b]) if b in order else (1, tuple(order[x] for x in b)),
        )
    return sorted(counts)  # positions and hypercube points sort naturally


def cmd_eval(args) -> int:
    profile = _load_profile(args.profile)
    mechanism = parse_mechanism(args.mechanism)
    outcome = rules.apply(mechanism, profile)
    print(f"mechanism: {mechanism.describe()}")
    print(f"outcome: {_format_outcome(outcome)}")
    if mechanism.participation != "proxy":
        tally = rules.build_tally(mechanism, profile)
        print(f"visible: {tally.cast_total}")
        print(f"q: {format_rational(tally.q)}")
        print("tally:")
        for ballot in _tally_order(profile.domain, tally.counts):
            print(f"  {_format_outcome(ballot)}: {tally.counts[ballot]}")
    else:
        from . import proxy

        weights = proxy.delegate(profile, mechanism.re_tau)
        print("entities:")
        for entity in sorted(weights.entities, key=lambda e: (e.position, not e.is_status_quo)):
            tag = " (status quo)" if entity.is_status_quo else ""
            print(
                f"  {format_rational(entity.position)}: "
                f"{format_rational(entity.weight)}{tag}"
            )
    return EXIT_OK


def cmd_frontier(args) -> int:
    setting = _SETTINGS[args.setting]
    sigma_grid = formats.parse_rational_list(args.sigma_grid)
    mu_grid = formats.parse_rational_list(args.mu_grid)
    tau_grid = formats.parse_rational_list(args.tau_grid)
    text = formats.write_frontier_csv(
        setting, sigma_grid, mu_grid, tau_grid, schema_version=args.schema_version
    )
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    return EXIT_OK


def _parse_shape(raw: str):
    pieces = raw.split(",")
    if len(pieces) != 3:
        raise RealityVoteError("shape must be n,sigma,mu")
    return int(pieces[0]), Fraction(pieces[1]), Fraction(pieces[2])


def _setting_for(mechanism: Mechanism) -> Setting:
    return Setting.MULTI_ALT_SMJ if mechanism.base == "smj" else Setting.ARBITRARY_BINARY


def _oracle_tau(mechanism: Mechanism) -> Fraction:
    return mechanism.base_tau if mechanism.base == "smj" else mechanism.re_tau


def cmd_oracle(args) -> int:
    n, sigma, mu = _parse_shape(args.shape)
    if n > verifier.enumeration_cap():
        raise BudgetExceeded(
            f"n={n} above the enumeration cap {verifier.enumeration_cap()} "
            f"(override with {verifier.ENUM_CAP_ENV})"
        )
    mechanism = parse_mechanism(args.mechanism)
    base = parse_mechanism(args.base) if args.base else Mechanism(base="mj")
    setting = _setting_for(mechanism)
    tau = _oracle_tau(mechanism)
    shape = (n, sigma, mu)

    if args.liveness:
        units = int((1 - mu) * n - sigma * n) if mechanism.participation == "active" else int((1 - sigma) * n)
        threshold = guarantees.liveness_threshold(setting, sigma, mu, tau)
        finite = verifier.smallest_live_beta(
            mechanism, shape, args.target or "p", max_units=args.max_units
        )
        adjusted_units = int(threshold * units) + 1  # least multiple strictly above
        adjusted = Fraction(adjusted_units, units)
        print(f"finite beta: {format_rational(finite)}")
        print(f"formula threshold (open): {format_rational(threshold)}")
        print(f"granularity-adjusted: {format_rational(adjusted)}")
        mismatch = finite != adjusted
    else:
        finite = verifier.min_alpha(mechanism, base, shape)
        t = guarantees.safety_threshold(setting, sigma, mu, tau)
        h = n - int(sigma * n)
        adjusted = max(Fraction(0), Fraction(math.ceil(t * h), h))
        print(f"finite min alpha: {format_rational(finite)}")
        print(f"formula threshold: {format_rational(t)}")
        print(f"granularity-adjusted: {format_rational(adjusted)}")
        mismatch = finite != adjusted
    print(f"match: {'no' if mismatch else 'yes'}")
    return EXIT_MISMATCH if mismatch else EXIT_OK


def _print_stats(label: str, stats: montecarlo.TrialStats) -> None:
    print(f"{label}:")
    print(f"  trials: {stats.trials}")
    print(f"  violations: {stats.violation_count}")
    print(f"  empirical rate: {float(stats.empirical_rate):.6g}")
    print(f"  bound: {stats.bound_value:.6g}")
    print(f"  standard error: {stats.standard_error:.6g}")
    if stats.y_failure_count is not None:
        print(f"  good-event failures: {stats.y_failure_count}")
    print(f"  gate (bound + 3 s.e.): {'pass' if stats.passes_gate() else 'FAIL'}")


def cmd_simulate(args) -> int:
    template = _load_profile(args.template)
    if args.trials < 1:
        raise RealityVoteError("trials must be positive")
    rows = []
    n_grid = (
        [int(x) for x in args.n_plus_grid.split(",")]
        if args.n_plus_grid
        else [args.n_plus]
    )
    ok = True
    for n_plus in n_grid:
        if args.kind == "whp":
            mech = Mechanism(
                base="mj", re_tau=Fraction(args.tau), participation="active"
            )
            exp = montecarlo.Experiment(
                profile=template,
                mechanism=mech,
                base=Mechanism(base="mj"),
                alpha_prime=Fraction(args.alpha_prime),
                trials=args.trials,
                seed=args.seed,
                n_plus=n_plus,
            )
            stats = montecarlo.run_safety_whp(exp)
        elif args.kind == "proxy":
            mech = Mechanism(base="md", re_tau=Fraction(args.tau), participation="proxy")
            exp = montecarlo.Experiment(
                profile=template,
                mechanism=mech,
                base=Mechanism(base="md"),
                alpha_prime=Fraction(args.c),
                trials=args.trials,
                seed=args.seed,
                n_plus=n_plus,
            )
            stats = montecarlo.run_proxy_whp(exp, Fraction(args.c))
        else:  # hoeffding
            stats = montecarlo.hoeffding_diagnostic(
                template, n_plus, Fraction(args.epsilon), args.trials, args.seed
            )
        _print_stats(f"{args.kind} n+={n_plus}", stats)
        ok = ok and stats.passes_gate()
        rows.append(
            [
                str(n_plus),
                str(stats.violation_count),
                str(stats.trials),
                f"{float(stats.empirical_rate):.8g}",
                f"{stats.bound_value:.8g}",
                f"{stats.standard_error:.8g}",
            ]
        )
    if args.curve_out:
        import csv

        with open(args.curve_out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(
                ["n_plus", "violations", "trials", "rate", "bound", "stderr"]
            )
            writer.writerows(rows)
    return EXIT_OK if ok else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realityvote",
        description="Sybil-resilient status-quo-anchored voting: evaluation, "
        "guarantees, verification, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a mechanism on a profile file")
    p_eval.add_argument("--profile", required=True)
    p_eval.add_argument("--mechanism", required=True)
    p_eval.set_defaults(func=cmd_eval)

    p_frontier = sub.add_parser("frontier", help="sweep the feasibility frontier")
    p_frontier.add_argument("--setting", choices=sorted(_SETTINGS), required=True)
    p_frontier.add_argument("--sigma-grid", required=True)
    p_frontier.add_argument("--mu-grid", required=True)
    p_frontier.add_argument("--tau-grid", required=True)
    p_frontier.add_argument("--out", required=True, help="output CSV path or -")
    p_frontier.add_argument("--schema-version", type=int, default=1)
    p_frontier.set_defaults(func=cmd_frontier)

    p_oracle = sub.add_parser("oracle", help="brute-force vs closed-form cross-check")
    p_oracle.add_argument("--shape", required=True, help="n,sigma,mu")
    p_oracle.add_argument("--mechanism", required=True)
    p_oracle.add_argument("--base", default=None)
    p_oracle.add_argument("--liveness", action="store_true")
    p_oracle.add_argument("--target", default=None)
    p_oracle.add_argument("--max-units", type=int, default=64)
    p_oracle.set_defaults(func=cmd_oracle)

    p_sim = sub.add_parser("simulate", help="random-participation experiments")
    p_sim.add_argument("--kind", choices=("whp", "proxy", "hoeffding"), required=True)
    p_sim.add_argument("--template", required=True)
    p_sim.add_argument("--n-plus", type=int, default=10)
    p_sim.add_argument("--n-plus-grid", default=None, help="comma list for decay curves")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--alpha-prime", default="1/100")
    p_sim.add_argument("--tau", default="0")
    p_sim.add_argument("--c", default="1/20")
    p_sim.add_argument("--epsilon", default="1/10")
    p_sim.add_argument("--curve-out", default=None)
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error (budget): {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (MechanismMismatch, NonRankingBallot) as exc:
        print(f"error (mechanism/domain): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (RealityVoteError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error (input): {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
