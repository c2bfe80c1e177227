"""Command-line entry point.

Exit codes: 0 yes/success, 1 no/refuted, 2 input error, 3 ambiguous.
Reports are canonical JSON on stdout, or in the file given by ``--out``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus
from .documents import (
    DocumentError,
    GameDocument,
    format_rational,
    parse_certificate,
    parse_game,
    parse_profile,
    parse_rational,
    serialize_certificate,
    serialize_game,
)
from .game import PureProfile, check_nash, profitable_deviation
from .minmax import PromiseInstance, Verdict, classify_bounds, minmax_bounds, normalize_instance
from .reduction import BOT, TheoremConfig, build_gprime, verify_theorem
from .refinement import (
    DEFAULT_K_BOUND,
    CertificationFailure,
    build_witness_sequence,
    certify_witness,
    check_perfect_two_player,
    epsilon_perfection_oracle,
    verify_certificate,
)

YES, NO, INPUT_ERROR, AMBIGUOUS = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(args, obj: dict) -> None:
    _emit(args, json.dumps(obj, separators=(",", ":")) + "\n")


def _vec(v):
    return [format_rational(p) for p in v]


def cmd_check_nash(args) -> int:
    doc = parse_game(_read(args.game))
    profile = parse_profile(_read(args.profile), doc.game)
    if check_nash(doc.game, profile):
        _report(args, {"nash": True})
        return YES
    dev = profitable_deviation(doc.game, profile)
    _report(args, {"nash": False, "deviation": {
        "player": dev.player, "action": doc.game.actions[dev.player][dev.action], "gain": format_rational(dev.gain)}})
    return NO


def cmd_reduce(args) -> int:
    doc = parse_game(_read(args.game))
    game, r = doc.game, args.r
    if game.n_players != 3:
        raise InputError(f"reduce needs a 3-player game, got {game.n_players}")
    if args.normalize:
        game, r = normalize_instance(game, r)
    reduced = build_gprime(game, r)
    meta = {"bot": list(reduced.bot_index), "r": format_rational(r),
            "source": doc.metadata.get("name", Path(args.game).stem)}
    _emit(args, serialize_game(GameDocument(reduced.gprime, meta)))
    return YES


def cmd_certify(args) -> int:
    doc = parse_game(_read(args.gprime))
    if doc.bot_index is None:
        raise InputError("game document has no metadata.bot; was it produced by 'reduce'?")
    tau = parse_profile(_read(args.tau), doc.game)
    mu = PureProfile(doc.bot_index)
    family = build_witness_sequence(doc.game, mu, tau)
    result = certify_witness(doc.game, mu, family, args.k_bound)
    if isinstance(result, CertificationFailure):
        _report(args, {"certified": False, "player": result.player,
                       "action": doc.game.actions[result.player][result.action],
                       "interval": [format_rational(result.span.lo), format_rational(result.span.hi)],
                       "reason": result.reason})
        return NO
    _emit(args, serialize_certificate(result))
    return YES


def cmd_verify_certificate(args) -> int:
    doc = parse_game(_read(args.game))
    cert = parse_certificate(_read(args.certificate))
    ok = verify_certificate(doc.game, cert)
    _report(args, {"valid": ok, "k0": cert.k0})
    return YES if ok else NO


def cmd_minmax(args) -> int:
    doc = parse_game(_read(args.game))
    if doc.game.n_players != 3:
        raise InputError(f"minmax needs a 3-player game, got {doc.game.n_players}")
    b = minmax_bounds(doc.game, args.grid)
    out = {"lower": format_rational(b.lower), "upper": format_rational(b.upper),
           "tau2": _vec(b.upper_witness[0]), "tau3": _vec(b.upper_witness[1]),
           "lower_certificate": _vec(b.lower_certificate)}
    code = YES
    if args.r is not None:
        verdict = classify_bounds(b, args.r)
        out["r"] = format_rational(args.r)
        out["verdict"] = verdict.value
        code = {Verdict.YES: YES, Verdict.NO: NO, Verdict.AMBIGUOUS: AMBIGUOUS}[verdict]
    _report(args, out)
    return code


def cmd_perfect2p(args) -> int:
    doc = parse_game(_read(args.game))
    profile = parse_profile(_read(args.profile), doc.game)
    res = check_perfect_two_player(doc.game, profile)
    _report(args, {"perfect": res.perfect, "players": [
        {"player": r.player, "verdict": r.verdict, "dominating": _vec(r.dominating) if r.dominating else None}
        for r in res.reports]})
    return YES if res.perfect else NO


def cmd_oracle(args) -> int:
    doc = parse_game(_read(args.game))
    profile = parse_profile(_read(args.profile), doc.game)
    res = epsilon_perfection_oracle(doc.game, profile, args.levels, args.cap)
    _report(args, {"verdict": res.verdict, "levels": res.levels_checked,
                   "witnesses": [[_vec(v) for v in w] for w in res.witnesses]})
    return YES if res.supported else NO


def cmd_verify_theorem(args) -> int:
    doc = parse_game(_read(args.game))
    if doc.game.n_players != 3:
        raise InputError(f"verify-theorem needs a 3-player game, got {doc.game.n_players}")
    game, r = doc.game, args.r
    if args.normalize:
        game, r = normalize_instance(game, r)
    config = TheoremConfig(grid_denominator=args.grid, k_bound=args.k_bound, family_size=args.family_size)
    rep = verify_theorem(PromiseInstance(game, r), config)
    out = {"verdict": rep.verdict.value, "consistent": rep.consistent, "r": format_rational(r),
           "lower": format_rational(rep.bounds.lower), "upper": format_rational(rep.bounds.upper)}
    if rep.certificate is not None:
        out["k0"] = rep.certificate.k0
    if rep.failure is not None:
        f = rep.failure
        out["failure"] = {"player": f.player, "action": rep.reduced.gprime.actions[f.player][f.action], "reason": f.reason}
    if rep.negative:
        out["negative_tests"] = len(rep.negative)
        out["bottom_beaten"] = sum(c.beaten for c in rep.negative)
    _report(args, out)
    if rep.verdict is Verdict.AMBIGUOUS:
        return AMBIGUOUS
    return YES if rep.consistent else NO


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    k = 0
    for want, batch in ((Verdict.YES, corpus.positive_instances(args.seed, args.count)),
                        (Verdict.NO, corpus.negative_instances(args.seed, args.count))):
        for inst in batch:
            name = f"instance_{k:03d}"
            meta = {"name": name, "r": format_rational(inst.r), "expected": want.value,
                    "provenance": f"tremble generate --seed {args.seed}"}
            (out / f"{name}.json").write_text(serialize_game(GameDocument(inst.game, meta)))
            k += 1
    sys.stdout.write(f"wrote {k} instances to {out}\n")
    return YES


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _levels(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 32:
        raise argparse.ArgumentTypeError("must be between 1 and 32")
    return value


def _rational_type(text: str) -> Fraction:
    try:
        return parse_rational(text, "r")
    except DocumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tremble", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write the result here instead of stdout")
        return p

    p = add("check-nash", cmd_check_nash, "verify a Nash equilibrium")
    p.add_argument("game")
    p.add_argument("profile")

    p = add("reduce", cmd_reduce, f"build the gadget game with '{BOT}' appended")
    p.add_argument("game")
    p.add_argument("r", type=_rational_type)
    p.add_argument("--normalize", action="store_true", help="scale payoffs so r is an integer")

    p = add("certify", cmd_certify, "certify the all-bottom profile along the tremble family")
    p.add_argument("gprime")
    p.add_argument("tau")
    p.add_argument("--k-bound", type=_positive_int, default=DEFAULT_K_BOUND)

    p = add("verify-certificate", cmd_verify_certificate, "re-validate a perfection certificate")
    p.add_argument("game")
    p.add_argument("certificate")

    p = add("minmax", cmd_minmax, "bound player 1's minmax value")
    p.add_argument("game")
    p.add_argument("--grid", type=_positive_int, default=4)
    p.add_argument("--r", type=_rational_type, default=None, help="classify against this threshold")

    p = add("perfect2p", cmd_perfect2p, "two-player perfection via undominated strategies")
    p.add_argument("game")
    p.add_argument("profile")

    p = add("oracle", cmd_oracle, "search tremble witnesses at eps = 2^-1 .. 2^-J")
    p.add_argument("game")
    p.add_argument("profile")
    p.add_argument("--levels", type=_levels, default=6)
    p.add_argument("--cap", type=_positive_int, default=64, help="grid denominator cap")

    p = add("verify-theorem", cmd_verify_theorem, "classify an instance and check the gadget direction")
    p.add_argument("game")
    p.add_argument("r", type=_rational_type)
    p.add_argument("--grid", type=_positive_int, default=4)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--k-bound", type=_positive_int, default=DEFAULT_K_BOUND)
    p.add_argument("--family-size", type=_positive_int, default=50)

    p = add("generate", cmd_generate, "write a corpus of instances with known verdicts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_positive_int, default=30)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else YES
    if args.command == "generate" and not args.out:
        sys.stderr.write("tremble generate: --out DIR is required\n")
        return INPUT_ERROR
    try:
        return args.fn(args)
    except (InputError, ValueError) as exc:  # document, dimension and equilibrium errors are ValueErrors
        sys.stderr.write(f"tremble {args.command}: {exc}\n")
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
