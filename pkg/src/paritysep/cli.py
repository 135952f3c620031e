"""Command-line entry points wiring the library into reproducible runs.

Exit codes: 0 success / PASS, 1 input or parse error, 2 FAIL or
divergence (with a witness in the report), 3 cap exceeded.  All reports
are JSON with the full configuration echoed, so identical invocations
produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .automata import (
    automaton_from_json,
    automaton_to_json,
    counter_separator,
    register_product_separator,
    tree_separator,
)
from .games import parse_pgsolver
from .lowerbound import lower_bound_report, validate_separator
from .solvers import lift_solve, solve_by_separation, zielonka
from .trees import (
    CapExceeded,
    FullTreeIndex,
    count_trees,
    g_value,
    min_universal_size,
    size_bounds,
    succinct_leaf_count,
    succinct_tree,
)

OK, ERR_INPUT, ERR_FAIL, ERR_CAP = 0, 1, 2, 3


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(obj, out_path):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _report(command, config):
    return {"tool": "paritysep", "version": __version__, "command": command, "config": config}


ALGOS = ("zielonka", "sep-counter", "sep-tree", "sep-register", "lift-full", "lift-succinct")


def _run_algo(game, algo):
    stats = {"product_states": None, "lift_count": None}
    t0 = time.perf_counter()
    if algo == "zielonka":
        sol = zielonka(game)
        even, strategy = sol.even_wins, {str(v): list(e) for v, e in sol.even_strategy.items()}
    elif algo.startswith("sep-"):
        if algo == "sep-counter":
            aut = counter_separator(game.n, game.d)
        elif algo == "sep-tree":
            aut = tree_separator(
                succinct_tree(game.n, game.d // 2), game.n, game.d, check=False
            )
        else:
            aut = register_product_separator(game.n, game.d)
        res = solve_by_separation(game, aut)
        even = res.even_wins
        # Even's winning strategy is finite-memory (memory = automaton
        # state); the report carries its size, not the full table.
        strategy = {"memory_states": res.automaton_states, "entries": len(res.even_product_strategy)}
        stats["product_states"] = res.product_vertices
    else:
        index = (
            FullTreeIndex(game.n, game.d // 2)
            if algo == "lift-full"
            else succinct_tree(game.n, game.d // 2)
        )
        res = lift_solve(game, index)
        even = res.even_wins
        strategy = {str(v): list(e) for v, e in res.even_strategy.items()}
        stats["lift_count"] = res.lift_count
    stats["time"] = round(time.perf_counter() - t0, 6)
    winner = ["even" if v in even else "odd" for v in range(game.n)]
    return {"winner_per_vertex": winner, "strategy": strategy, "stats": stats}


def _plain(x):
    return list(x) if isinstance(x, tuple) else x


def cmd_solve(args):
    try:
        game = parse_pgsolver(_read_input(args.game))
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return ERR_INPUT
    config = {"game": args.game, "algo": args.algo, "cross_check": args.cross_check}
    report = _report("solve", config)
    try:
        if args.cross_check:
            results = {algo: _run_algo(game, algo) for algo in ALGOS}
            reference = results["zielonka"]["winner_per_vertex"]
            diverged = {
                algo: r["winner_per_vertex"]
                for algo, r in results.items()
                if r["winner_per_vertex"] != reference
            }
            report["results"] = results
            report["agreement"] = not diverged
            if diverged:
                report["divergences"] = diverged
                _emit(report, args.out)
                return ERR_FAIL
        else:
            report.update(_run_algo(game, args.algo))
    except CapExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return ERR_CAP
    _emit(report, args.out)
    return OK


def cmd_separator(args):
    config = {k: getattr(args, k, None) for k in ("kind", "n", "d", "budget", "seed")}
    report = _report("separator %s" % args.sep_cmd, config)
    try:
        if args.sep_cmd == "gen":
            if args.kind == "counter":
                aut = counter_separator(args.n, args.d)
            elif args.kind == "tree":
                aut = tree_separator(succinct_tree(args.n, args.d // 2), args.n, args.d, check=False)
            else:
                aut = register_product_separator(args.n, args.d)
            payload = json.loads(automaton_to_json(aut))
            payload.update(report)
            _emit(payload, args.out)
            return OK

        aut = automaton_from_json(_read_input(args.automaton))
        if args.d is None:
            args.d = aut.d
            config["d"] = aut.d
        if args.sep_cmd == "validate":
            rep = validate_separator(aut, args.n, args.d, budget=args.budget, seed=args.seed)
            report.update(rep.to_dict())
            _emit(report, args.out)
            return OK if rep.verdict == "PASS" else ERR_FAIL
        if args.sep_cmd == "extract":
            from .lowerbound import OddCycleWitness, d_tree, extract_decomposition, make_accessible

            acc = make_accessible(aut)
            dec = extract_decomposition(acc, args.d or aut.d)
            if isinstance(dec, OddCycleWitness):
                report["verdict"] = "not-a-strong-separator"
                report["witness"] = {"prefix": list(dec.prefix), "period": list(dec.period)}
                _emit(report, args.out)
                return ERR_FAIL
            tree, leaf_map = d_tree(acc, dec)
            report["verdict"] = "ok"
            report["levels"] = {
                str(j): [[str(q) for q in cls] for cls in classes]
                for j, classes in dec.levels.items()
            }
            report["leaf_representatives"] = {
                "/".join(map(str, path)): str(q) for path, q in leaf_map.items()
            }
            _emit(report, args.out)
            return OK
        # lower-bound
        rep = lower_bound_report(aut, args.n, args.d)
        report.update(rep.to_dict())
        _emit(report, args.out)
        return OK if rep.verdict == "ok" else ERR_FAIL
    except CapExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return ERR_CAP
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return ERR_INPUT


def cmd_trees(args):
    config = {"leaves": args.leaves, "height": args.height}
    report = _report("trees %s" % args.trees_cmd, config)
    try:
        if args.trees_cmd == "bounds":
            sb = size_bounds(args.leaves, args.height)
            report.update(
                {
                    "g": sb.g,
                    "binom_lower": sb.binom_lower,
                    "jl_upper": sb.jl_upper,
                    "constructed": succinct_leaf_count(args.leaves, args.height),
                }
            )
            if count_trees(args.leaves, args.height) <= 200 and args.leaves <= 5:
                report["min_universal"] = min_universal_size(args.leaves, args.height)
            else:
                report["min_universal"] = None
            _emit(report, args.out)
            return OK
        report["min_universal"] = min_universal_size(args.leaves, args.height)
        report["g"] = g_value(args.leaves, args.height)
        _emit(report, args.out)
        return OK
    except CapExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return ERR_CAP
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return ERR_INPUT


def build_parser():
    parser = argparse.ArgumentParser(prog="paritysep", description=__doc__)
    parser.add_argument("--version", action="version", version="paritysep %s" % __version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_solve = sub.add_parser("solve", help="solve a parity game in PGSolver format")
    p_solve.add_argument("game", help="game file, or - for stdin")
    p_solve.add_argument("--algo", choices=ALGOS, default="zielonka")
    p_solve.add_argument("--cross-check", action="store_true", help="run all algorithms and diff")
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(fn=cmd_solve)

    p_sep = sub.add_parser("separator", help="generate, validate, and analyze separators")
    sep_sub = p_sep.add_subparsers(dest="sep_cmd", required=True)

    p_gen = sep_sub.add_parser("gen")
    p_gen.add_argument("--kind", choices=("counter", "tree", "register"), required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--d", type=int, required=True)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(fn=cmd_separator)

    for name in ("validate", "extract", "lower-bound"):
        p = sep_sub.add_parser(name)
        p.add_argument("automaton", help="automaton JSON file, or - for stdin")
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--budget", type=int, default=10**6)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.set_defaults(fn=cmd_separator)

    p_trees = sub.add_parser("trees", help="universal-tree size bounds")
    trees_sub = p_trees.add_subparsers(dest="trees_cmd", required=True)
    for name in ("bounds", "min"):
        p = trees_sub.add_parser(name, add_help=False)
        p.add_argument("--help", action="help")
        p.add_argument("-l", "--leaves", type=int, required=True)
        p.add_argument("-h", "--height", type=int, required=True)
        p.add_argument("--out", default=None)
        p.set_defaults(fn=cmd_trees)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
