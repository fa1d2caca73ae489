"""Command-line interface.

Exit codes: 0 the property holds (or the command succeeded), 1 refuted,
2 usage or input error, 3 internal failure, 4 iteration budget exhausted.
"""

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .cegar import EXHAUSTED, HOLDS, REFUTED, ag_cegar, monolithic_check
from .errors import (CombsimError, FormulaSyntaxError, ModelError, ModelSyntaxError,
                     NotDistinguishable, SchemaError, UnknownAtom, WrongQuantifierFamily)
from .generators import random_triple
from .logic import eval_atl, eval_qctl, parse_formula
from .logic.distinguish import distinguishing_formula
from .logic.formula import MDP_QUANTIFIERS, quantifiers
from .model import Mdp, compose_games
from .modelio import dumps, parse_model
from .relations import SimGame, max_alternating_simulation, max_combined_simulation, max_simulation

OK, REFUTE, USAGE, INTERNAL, EXHAUST = 0, 1, 2, 3, 4
INPUT_ERRORS = (ModelSyntaxError, SchemaError, ModelError, FormulaSyntaxError, UnknownAtom,
                WrongQuantifierFamily, OSError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _as_game(model):
    return model.game if isinstance(model, Mdp) else model


def _load_game(path):
    return _as_game(parse_model(Path(path)))


def _emit(out, obj):
    out.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def cmd_check(args, out):
    g, h = _load_game(args.left), _load_game(args.right)
    if args.relation == "sim":
        rel = max_simulation(g, h)
    elif args.relation == "alt":
        rel = max_alternating_simulation(g, h)
    else:
        rel = max_combined_simulation(g, h, skip_step=args.skip_step_opt)
    ok = (g.initial, h.initial) in rel
    out.write(("yes" if ok else "no") + "\n")
    if args.dump_relation:
        _emit(out, {"relation": args.relation, "pairs": [list(p) for p in rel.pairs()]})
    return OK if ok else REFUTE


def cmd_mono(args, out):
    g1, g2, spec = _load_game(args.c1), _load_game(args.c2), _load_game(args.spec)
    start = time.perf_counter()
    comp = compose_games(g1, g2)
    game = SimGame(comp, comp, spec, seeds=[comp.index.pos[comp.initial] * spec.index.n
                                            + spec.index.pos[spec.initial]],
                   skip_step=args.skip_step_opt)
    holds = bool(game.solve().proponent_win[game.pair_node(comp.initial, spec.initial)])
    stats = {"verdict": HOLDS if holds else REFUTED, "composite_states": len(comp.states),
             "peak_arena": game.n_nodes}
    if not args.no_time:
        stats["time_s"] = round(time.perf_counter() - start, 6)
    _emit(out, stats)
    return OK if holds else REFUTE


def cmd_ag(args, out):
    g1, g2, spec = _load_game(args.c1), _load_game(args.c2), _load_game(args.spec)
    res = ag_cegar(g1, g2, spec, max_iters=args.max_iters, improved_refine=args.improved_refine,
                   skip_step=args.skip_step_opt)
    _emit(out, res.stats.to_dict(timing=not args.no_time))
    if args.emit_cex and res.counterexample is not None:
        Path(args.emit_cex).write_text(dumps(res.counterexample.to_dict()), encoding="utf-8")
    return {HOLDS: OK, REFUTED: REFUTE, EXHAUSTED: EXHAUST}[res.verdict]


def cmd_eval(args, out):
    model = parse_model(Path(args.model))
    f = parse_formula(args.formula)
    strict = not args.lenient
    if isinstance(model, Mdp) and quantifiers(f).intersection(MDP_QUANTIFIERS):
        sat = eval_qctl(model, f, strict=strict)
    else:
        sat = eval_atl(_as_game(model), f, strict=strict)
    _emit(out, {"formula": str(f), "states": [s for s in model.states if s in sat]})
    return OK


def cmd_distinguish(args, out):
    g, h = _load_game(args.left), _load_game(args.right)
    parts = args.pair.split(",")
    if len(parts) != 2:
        raise _UsageError("--pair expects two state ids separated by a comma")
    s, t = (p.strip() for p in parts)
    for game, st in ((g, s), (h, t)):
        if st not in game.index.pos:
            raise _UsageError(f"unknown state {st!r}")
    try:
        f = distinguishing_formula(g, h, s, t)
    except NotDistinguishable:
        out.write("not distinguishable\n")
        return REFUTE
    out.write(str(f) + "\n")
    return OK


def bench_instance(seed, max_states):
    """Run ag and mono on the random triple drawn from `seed`."""
    g1, g2, spec = random_triple(random.Random(seed), max_states=max_states)
    mono = monolithic_check(g1, g2, spec)
    res = ag_cegar(g1, g2, spec)
    return {"seed": seed, "s1": len(g1.states), "s2": len(g2.states), "spec": len(spec.states),
            "mono": HOLDS if mono else REFUTED, "ag": res.verdict,
            "iterations": res.stats.iterations, "partition": res.stats.partition_size,
            "arena": res.stats.peak_arena, "agree": (res.verdict == HOLDS) == mono}


def worker_count(requested=None):
    cap = os.environ.get("COMBSIM_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise _UsageError("COMBSIM_THREADS must be an integer") from None
    return max(1, n)


def cmd_bench(args, out):
    master = random.Random(args.seed)
    seeds = [master.getrandbits(63) for _ in range(args.count)]
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=worker_count(args.threads)) as pool:
        rows = list(pool.map(lambda sd: bench_instance(sd, args.max_states), seeds))
    cols = ("#", "|S1|", "|S2|", "|spec|", "mono", "ag", "I", "|Π|", "arena", "agree")
    table = [cols] + [(str(i), str(r["s1"]), str(r["s2"]), str(r["spec"]), r["mono"], r["ag"],
                       str(r["iterations"]), str(r["partition"]), str(r["arena"]),
                       "yes" if r["agree"] else "NO") for i, r in enumerate(rows)]
    widths = [max(len(row[c]) for row in table) for c in range(len(cols))]
    for row in table:
        out.write("  ".join(x.rjust(w) for x, w in zip(row, widths)) + "\n")
    agree = sum(r["agree"] for r in rows)
    out.write(f"{agree}/{len(rows)} agreements between ag and mono\n")
    if not args.no_time:
        out.write(f"total time {time.perf_counter() - start:.3f} s\n")
    return OK if agree == len(rows) else INTERNAL


def build_parser():
    p = _Parser(prog="combsim", description="Simulation checks, logic evaluation and "
                "assume-guarantee verification for two-player games and MDPs.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide a simulation preorder between two models")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--relation", choices=("sim", "alt", "combined"), default="combined")
    c.add_argument("--dump-relation", action="store_true")
    c.add_argument("--skip-step-opt", action="store_true")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("mono", help="combined simulation of c1 ∥ c2 by spec, monolithically")
    for name in ("--c1", "--c2", "--spec"):
        c.add_argument(name, required=True)
    c.add_argument("--skip-step-opt", action="store_true")
    c.add_argument("--no-time", action="store_true", help="omit wall time from the output")
    c.set_defaults(func=cmd_mono)

    c = sub.add_parser("ag", help="combined simulation of c1 ∥ c2 by spec, by abstraction refinement")
    for name in ("--c1", "--c2", "--spec"):
        c.add_argument(name, required=True)
    c.add_argument("--max-iters", type=int, default=None)
    c.add_argument("--emit-cex", metavar="PATH")
    c.add_argument("--improved-refine", action="store_true")
    c.add_argument("--skip-step-opt", action="store_true")
    c.add_argument("--no-time", action="store_true", help="omit wall time from the output")
    c.set_defaults(func=cmd_ag)

    c = sub.add_parser("eval", help="states satisfying a C-ATL or QCTL formula")
    c.add_argument("--model", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--lenient", action="store_true", help="treat unknown atoms as false")
    c.set_defaults(func=cmd_eval)

    c = sub.add_parser("distinguish", help="C-ATL formula separating two states")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--pair", required=True, metavar="S,T")
    c.set_defaults(func=cmd_distinguish)

    c = sub.add_parser("bench", help="cross-check ag against mono on random instances")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--max-states", type=int, default=6)
    c.add_argument("--threads", type=int, default=None)
    c.add_argument("--no-time", action="store_true", help="omit wall time from the output")
    c.set_defaults(func=cmd_bench)
    return p


def run_command(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        err.write(f"{e}\n")
        return USAGE
    except SystemExit as e:          # --help
        return OK if not e.code else USAGE
    if args.verbose:
        import logging
        logging.basicConfig(level=logging.DEBUG, stream=err)
    try:
        return args.func(args, out)
    except _UsageError as e:
        err.write(f"error: {e}\n")
        return USAGE
    except INPUT_ERRORS as e:
        err.write(f"error: {e}\n")
        return USAGE
    except CombsimError as e:
        err.write(f"internal error: {type(e).__name__}: {e}\n")
        return INTERNAL


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
