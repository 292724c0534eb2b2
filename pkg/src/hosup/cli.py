"""Command line interface.

prove runs the saturation loop on a THF file and reports an SZS status,
unify shows the bounded unifier search for a single equation, and
schedule builds a strategy schedule from a run log.
"""

import argparse
import os
import sys

from .clausify import ClausifyConfig, clausify, preprocess
from .ordering import KBO
from .saturation import ProverConfig, extract_proof, saturate
from .scheduler import (
    estimate_all,
    evals_from_runs,
    format_schedule,
    greedy_schedule,
    greedy_schedule_expected,
    ingest_runlog,
    simulate_schedule,
)
from .terms import TermError, pp
from .tptp import FEq, FQuant, ParseError, parse_file
from .unification import depth_n_unifiers, TraceNode


def _onoff(v: str) -> bool:
    if v not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off, got %r" % v)
    return v == "on"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hosup")
    sub = ap.add_subparsers(dest="cmd", required=True)

    pv = sub.add_parser("prove", help="saturate a THF problem")
    pv.add_argument("file")
    pv.add_argument("--hol-unif-depth", type=int, default=2, metavar="N")
    pv.add_argument("--applicative-unif", type=_onoff, default=False, metavar="on|off")
    pv.add_argument("--func-ext", choices=("axiom", "off"), default="axiom")
    pv.add_argument("--equality-to-equiv", type=_onoff, default=False, metavar="on|off")
    pv.add_argument("--choice-axiom", type=_onoff, default=False, metavar="on|off")
    pv.add_argument("--literal-selection", choices=("paper", "none"), default="paper")
    pv.add_argument("--cnf-on-the-fly", default="eager", metavar="MODE")
    pv.add_argument("--time-limit", type=float, default=0.0, metavar="SECONDS")
    pv.add_argument("--iteration-limit", type=int, default=0, metavar="N")
    pv.add_argument("--proof", action="store_true")
    pv.add_argument("--random-seed", type=int, default=0, metavar="N")
    pv.add_argument("--shuffle", type=_onoff, default=False, metavar="on|off")
    pv.add_argument("--include-root", default=None, metavar="DIR")

    un = sub.add_parser("unify", help="bounded unification of one equation")
    un.add_argument("file")
    un.add_argument("--hol-unif-depth", type=int, default=2, metavar="N")
    un.add_argument("--trace", action="store_true")
    un.add_argument("--include-root", default=None, metavar="DIR")

    sc = sub.add_parser("schedule", help="build a schedule from a run log")
    sc.add_argument("runlog")
    sc.add_argument("--budget", type=float, default=960.0, metavar="T")
    sc.add_argument("--mode", choices=("deterministic", "expected"),
                    default="deterministic")
    sc.add_argument("--rounds", type=int, default=0, metavar="N")
    sc.add_argument("--cutoffs", default="1,10,30,60,120,960", metavar="LIST")
    return ap


def _prove(args) -> int:
    if args.cnf_on_the_fly != "eager":
        print("error: only eager clausification is implemented, got %r"
              % args.cnf_on_the_fly, file=sys.stderr)
        return 2
    problem = parse_file(args.file, args.include_root)
    ccfg = ClausifyConfig(
        equality_to_equiv=args.equality_to_equiv,
        func_ext=args.func_ext,
        choice_axiom=args.choice_axiom,
    )
    clauses = clausify(preprocess(problem, ccfg), ccfg)
    pcfg = ProverConfig(
        depth=args.hol_unif_depth,
        applicative=args.applicative_unif,
        selection=args.literal_selection,
        timeout=args.time_limit,
        shuffle=args.random_seed if args.shuffle else None,
    )
    if args.iteration_limit:
        pcfg.max_iterations = args.iteration_limit
    res = saturate(clauses, KBO.from_clauses([clauses]), pcfg)
    name = os.path.basename(args.file)
    if res.proved:
        status = "Theorem" if problem.conjecture is not None else "Unsatisfiable"
    elif res.status == "saturated":
        status = "Unknown"
    elif res.status == "timeout":
        status = "Timeout"
    else:  # clause or iteration budget
        status = "ResourceOut"
    print("%% SZS status %s for %s" % (status, name))
    if args.proof and res.proved:
        print("%% SZS output start Refutation for %s" % name)
        for inf in extract_proof(res.registry, res.empty_cid):
            print(inf.format())
        print("%% SZS output end Refutation for %s" % name)
    return 0 if res.proved else 1


def _print_trace(node: TraceNode, indent=0):
    pad = "  " * indent
    line = pad + node.label
    if node.pairs:
        line += "  " + "; ".join(node.pairs)
    if node.outcome:
        line += "  [%s]" % node.outcome
    print(line)
    for ch in node.children:
        _print_trace(ch, indent + 1)


def _unify(args) -> int:
    problem = parse_file(args.file, args.include_root)
    eq = None
    for st in problem.formulas:
        f = st.formula
        while isinstance(f, FQuant):
            f = f.body
        if isinstance(f, FEq):
            eq = f
    if eq is None:
        print("error: no equation statement to unify", file=sys.stderr)
        return 2
    trace = TraceNode("root") if args.trace else None
    unifs = depth_n_unifiers(eq.lhs, eq.rhs, args.hol_unif_depth, trace=trace)
    print("%d unifier(s) of %s =? %s at depth %d"
          % (len(unifs), pp(eq.lhs), pp(eq.rhs), args.hol_unif_depth))
    for i, u in enumerate(unifs):
        print("%d. %r" % (i, u.subst))
        for s, t in u.constraints:
            print("   constraint %s != %s" % (pp(s), pp(t)))
    if trace is not None:
        _print_trace(trace)
    return 0


def _schedule(args) -> int:
    try:
        cutoffs = tuple(float(c) for c in args.cutoffs.split(","))
    except ValueError:
        print("error: bad --cutoffs list %r" % args.cutoffs, file=sys.stderr)
        return 2
    runs = ingest_runlog(args.runlog)
    if args.mode == "deterministic":
        if args.rounds:
            print("error: --rounds only applies to --mode expected", file=sys.stderr)
            return 2
        sched = greedy_schedule(evals_from_runs(runs), args.budget)
    else:
        import random

        from .scheduler import iterative_reestimate

        rng = random.Random(0)
        cells = {}
        for r in runs:
            cells.setdefault((r.strategy, r.problem), []).append(r)

        def resample(s, p):
            # bootstrap from the log: draw further runs of the cell
            pool = cells[(s, p)]
            return [pool[rng.randrange(len(pool))] for _ in range(4)]

        build = lambda dists: greedy_schedule_expected(dists, args.budget)
        if args.rounds:
            sched = iterative_reestimate(runs, build, args.rounds, resample)
        else:
            sched = build(estimate_all(runs))
    truth = {(r.strategy, r.problem, r.seed): r for r in runs}
    report = simulate_schedule(sched, truth, cutoffs)
    sys.stdout.write(format_schedule(sched, report))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "prove":
            return _prove(args)
        if args.cmd == "unify":
            return _unify(args)
        return _schedule(args)
    except (ParseError, TermError, ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
