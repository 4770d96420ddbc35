"""Command-line front end.

Exit codes: 0 for a positive answer, 1 for a negative one (goal false, no
equilibrium, verification failed), 2 for usage or input-format errors, 3 when
a search exhausts its budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import files, game as gm, kripke, logic, randgen, solver, translate
from .game import Budget, BudgetExceeded, lift_global


def _budget_from(args):
    limit = args.budget or int(os.environ.get("OBSGAME_BUDGET", 10_000_000))
    return Budget(limit)


def _emit(args, data, human):
    if args.json:
        json.dump(data, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print(human)


def cmd_eval(args):
    game = files.load_game(args.game)
    u = files.load_profile(game, args.profile) if args.profile \
        else lift_global(game, gm.profile_empty(game))
    v = game.mask_of([x for x in args.valuation.split(",") if x]) if args.valuation else 0
    s = u.profile_at(game, v)
    if args.formula:
        phi = logic.parse_formula(args.formula, game)
        truth = logic.evaluate(game, v, s, phi)
        _emit(args, {"formula": args.formula, "holds": truth},
              f"{args.formula}: {truth}")
        return 0 if truth else 1
    outcomes = {str(i): gm.outcome(game, v, s, i) for i in game.players()}
    lines = [f"player {i}: goal {'holds' if b else 'fails'} (outcome {b})"
             for i, b in outcomes.items()]
    _emit(args, {"outcomes": outcomes}, "\n".join(lines))
    return 0


def cmd_classify(args):
    game = files.load_game(args.game)
    rows = {}
    for i in game.players():
        report = logic.classify(game.goals[i - 1], i, game)
        rows[str(i)] = {
            "goal": logic.pretty(game.goals[i - 1]),
            "boolean": report.is_boolean,
            "kw": report.is_kw,
            "nnf": report.is_nnf,
            "positive": report.is_positive,
            "self_positive": report.self_positive_for is not None,
            "guarded": report.is_guarded,
            "type": sorted(logic.goal_type(game, i)),
        }
    human = "\n".join(
        f"player {i}: type={row['type']} "
        + " ".join(k for k in ("boolean", "kw", "nnf", "positive",
                               "self_positive", "guarded") if row[k])
        for i, row in rows.items())
    _emit(args, rows, human)
    return 0


def cmd_verify(args):
    game = files.load_game(args.game)
    u = files.load_profile(game, args.profile)
    budget = _budget_from(args)
    try:
        if args.relation == "max":
            res = solver.max_ne_verify_pointwise(game, u, budget)
        else:
            res = solver.ne_verify(game, args.relation, u, budget)
    except BudgetExceeded as exc:
        _emit(args, {"error": str(exc)}, f"budget exceeded: {exc}")
        return 3
    data = {"relation": args.relation, "is_ne": res.is_ne}
    human = f"equilibrium under {args.relation}: {res.is_ne}"
    if res.witness:
        data["witness"] = {
            "player": res.witness.player,
            "valuation": sorted(game.names_of(res.witness.valuation)),
            "replacement": {
                str(j): game.names_of(res.witness.replacement[j - 1])
                for j in game.players() if j != res.witness.player},
        }
        human += (f"\nimproving deviation: player {res.witness.player} at "
                  f"valuation {data['witness']['valuation']}")
    _emit(args, data, human)
    return 0 if res.is_ne else 1


def cmd_exists(args):
    game = files.load_game(args.game)
    budget = _budget_from(args)
    outcome = solver.ne_exists(game, args.relation, budget)
    report = files.search_report(game, args.relation, outcome)
    human = f"{args.relation}: {outcome.status}"
    if outcome.found:
        human += "\n" + json.dumps(report["witness"], indent=2, sort_keys=True)
    _emit(args, report, human)
    return {"witness": 0, "empty": 1, "budget_exceeded": 3}[outcome.status]


def cmd_enumerate(args):
    game = files.load_game(args.game)
    budget = _budget_from(args)
    try:
        found = solver.ne_enumerate(game, args.relation, budget)
    except BudgetExceeded as exc:
        _emit(args, {"error": str(exc)}, f"budget exceeded: {exc}")
        return 3
    data = {"relation": args.relation, "count": len(found),
            "equilibria": [files.profile_to_dict(game, u) for u in found]}
    _emit(args, data, f"{len(found)} equilibria under {args.relation}")
    return 0 if found else 1


def cmd_construct(args):
    game = files.load_game(args.game)
    budget = _budget_from(args)
    try:
        if args.algorithm == "guarded":
            u = solver.algorithm1(game, args.mode, budget)
        elif args.algorithm == "kw-max":
            u = solver.algorithm2(game, budget)
        elif args.algorithm == "type2-max":
            u = solver.construct_type2_max_ne(game, budget)
        else:
            u = solver.two_player_kw_pess_ne(game, budget)
    except solver.UnsupportedGameError as exc:
        _emit(args, {"error": str(exc)}, f"unsupported game: {exc}")
        return 2
    except BudgetExceeded as exc:
        _emit(args, {"error": str(exc)}, f"budget exceeded: {exc}")
        return 3
    data = files.profile_to_dict(game, u)
    if args.out:
        files.save_profile(game, u, args.out)
    _emit(args, data, json.dumps(data, indent=2, sort_keys=True))
    return 0


def cmd_translate(args):
    game = files.load_game(args.game)
    if args.direction == "bool2kw":
        if not isinstance(game, translate.BooleanGame):
            _emit(args, {"error": "input is not a boolean game"},
                  "input is not a boolean game")
            return 2
        target = translate.bool_to_kw(game, args.variant)
        data = {"game": files.game_to_dict(target)}
    else:
        try:
            target, provenance = translate.kw_to_bool(game)
        except (solver.NotKwGame, ValueError) as exc:
            _emit(args, {"error": str(exc)}, f"cannot translate: {exc}")
            return 2
        data = {"game": files.game_to_dict(target, kind="boolean"),
                "provenance": provenance}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data["game"], fh, indent=2, sort_keys=True)
            fh.write("\n")
        if "provenance" in data:
            with open(args.out + ".provenance.json", "w") as fh:
                json.dump(data["provenance"], fh, indent=2, sort_keys=True)
                fh.write("\n")
    _emit(args, data, json.dumps(data["game"], indent=2, sort_keys=True))
    return 0


def cmd_kripke_check(args):
    game = files.load_game(args.game)
    rng = randgen.rng_from_seed(args.seed)
    samples = args.samples
    mismatches = 0
    for _ in range(samples):
        v = randgen.random_valuation(rng, game)
        s = randgen.random_profile(rng, game)
        phi = randgen.random_general_formula(rng, game, 4)
        direct = logic.evaluate(game, v, s, phi)
        model = kripke.build_observation_model(game, s)
        if direct != kripke.kripke_eval(model, v, phi, game):
            mismatches += 1
    im = kripke.build_initial_model(game)
    iso_failures = 0
    for _ in range(max(1, samples // 5)):
        s = randgen.random_profile(rng, game)
        for small in (False, True):
            prod = kripke.product(im, kripke.build_action_model(game, s, small))
            if kripke.isomorphic(prod, kripke.build_observation_model(game, s)) is None:
                iso_failures += 1
    ok = mismatches == 0 and iso_failures == 0
    _emit(args, {"samples": samples, "eval_mismatches": mismatches,
                 "product_iso_failures": iso_failures},
          f"eval mismatches: {mismatches}; product isomorphism failures: {iso_failures}")
    return 0 if ok else 1


def cmd_selftest(args):
    from . import selftest
    return selftest.run(filter_text=args.filter, json_output=args.json)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="obsgame",
        description="Analyze Boolean observation games: evaluate goals, "
                    "verify and search equilibria, run the constructive "
                    "algorithms, translate to and from Boolean games.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, game=True):
        if game:
            p.add_argument("--game", required=True, help="game JSON file")
        p.add_argument("--json", action="store_true", help="JSON output")
        p.add_argument("--budget", type=int, default=None,
                       help="work budget (default $OBSGAME_BUDGET or 10^7)")
        p.add_argument("--threads", type=int, default=1,
                       help="parallelism cap (searches run sequentially)")
        p.add_argument("--seed", type=int, default=0, help="random seed")

    p = sub.add_parser("eval", help="evaluate goals or a formula at a valuation")
    common(p)
    p.add_argument("--profile", help="uniform profile JSON file")
    p.add_argument("--valuation", default="", help="comma-separated true variables")
    p.add_argument("--formula", help="formula text (defaults to all goals)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", help="fragment and type report per goal")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="check a uniform profile for equilibrium")
    common(p)
    p.add_argument("--profile", required=True)
    p.add_argument("--relation", required=True,
                   choices=["pess", "opt", "real", "max"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exists", help="search for an equilibrium")
    common(p)
    p.add_argument("--relation", required=True,
                   choices=["pess", "opt", "real", "max"])
    p.set_defaults(func=cmd_exists)

    p = sub.add_parser("enumerate", help="list all equilibria (desk scale)")
    common(p)
    p.add_argument("--relation", required=True,
                   choices=["pess", "opt", "real", "max"])
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("construct", help="run a constructive algorithm")
    common(p)
    p.add_argument("--algorithm", required=True,
                   choices=["guarded", "kw-max", "type2-max", "2p-kw-pess"])
    p.add_argument("--mode", default="pess", choices=["pess", "opt"],
                   help="outcome relation for the guarded construction")
    p.add_argument("--out", help="write the profile to this file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("translate", help="convert between game kinds")
    common(p)
    p.add_argument("--direction", required=True, choices=["bool2kw", "kw2bool"])
    p.add_argument("--variant", default="next", choices=["next", "prev", "public"])
    p.add_argument("--out", help="write the target game to this file")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("kripke-check",
                       help="cross-validate the evaluator against explicit models")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_kripke_check)

    p = sub.add_parser("selftest", help="run the bundled example corpus")
    common(p, game=False)
    p.add_argument("--filter", default="", help="run only matching checks")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
