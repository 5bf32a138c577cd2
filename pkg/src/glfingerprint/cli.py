"""Command-line entry point ``glfp``.

Exit status is 0 on success, 1 when the inputs are well-formed but the
computation rejects them (infeasible knobs, corrupt files, length
mismatches) and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import codebook as cbmod
from .attack import PiratedWord, collude, parse_strategy
from .bias import gl_distribution, is_c_ind
from .params import (
    AuxiliaryValues,
    SecurityGoal,
    SolverKnobs,
    asymptotic_ratio,
    derive_params,
    params_from_auxiliary,
    tardos_length,
)
from .rng import stream
from .sim import ExperimentConfig, sweep
from .tracing import exact_score_table, rounded_score_table, trace

__all__ = ["main", "build_parser"]


def _int_at_least(minimum):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value

    return parse


def _unit_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {value}")
    return value


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _knobs(args) -> SolverKnobs:
    base = SolverKnobs.hhi(args.c) if args.hhi else SolverKnobs.proposal(args.c, delta=args.delta)
    eta1 = base.eta1 if args.eta1 is None else args.eta1
    eta2 = base.eta2 if args.eta2 is None else args.eta2
    return SolverKnobs(eta1, eta2, base.delta)


def _params(args):
    goal = SecurityGoal.from_total(args.c, args.N, args.eps)
    knobs = _knobs(args)
    if getattr(args, "aux", None):
        return params_from_auxiliary(AuxiliaryValues(*args.aux), goal, knobs)
    return derive_params(gl_distribution(args.c), goal, knobs)


def cmd_dist(args) -> int:
    dist = gl_distribution(args.c)
    c_check = args.c + args.c % 2
    report = is_c_ind(dist, c_check, tol=args.tol)
    text = dist.to_text()
    summary = (
        f"# c-ind check c={c_check}: {'ok' if report.ok else 'FAILED'} "
        f"max_residual={report.max_residual:.3e} worst={report.worst} tol={args.tol:g}\n"
    )
    if args.out:
        Path(args.out).write_text(text)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(text + summary)
    return 0 if report.ok else 1


def cmd_params(args) -> int:
    p = _params(args)
    report = p.as_dict()
    report["tardos_length"] = tardos_length(args.c, args.N, args.eps)
    report["ratio"] = p.m / report["tardos_length"]
    if args.json:
        _emit(json.dumps(report, indent=2) + "\n", None)
    else:
        _emit("".join(f"{k} = {v}\n" for k, v in report.items()), None)
    return 0


def cmd_gen(args) -> int:
    m = args.m if args.m is not None else _params(args).m
    cb = cbmod.generate(gl_distribution(args.c), m, args.N, args.seed, c=args.c, threads=args.threads)
    cbmod.save(cb, args.out)
    rep = cbmod.memory_report(cb)
    print(f"wrote {args.out}: c={cb.c} N={cb.N} m={cb.m} outputs={cb.dist.n_outputs} "
          f"bias_bits={rep.total_bias_bits}")
    return 0


def cmd_collude(args) -> int:
    cb = cbmod.load(args.codebook)
    pirates = [int(t) for t in args.pirates.split(",") if t.strip()]
    if not pirates:
        raise ValueError("empty coalition")
    if any(not 0 <= i < cb.N for i in pirates):
        raise ValueError(f"pirate index out of range [0, {cb.N})")
    y = collude(parse_strategy(args.strategy), cb.codewords(pirates), stream(args.seed, "attack"))
    _emit(y.to_text() + "\n", args.out)
    return 0


def cmd_trace(args) -> int:
    cb = cbmod.load(args.codebook)
    y = PiratedWord.from_text(Path(args.word).read_text())
    table = exact_score_table(cb.dist) if args.decimals is None else rounded_score_table(cb.dist, args.decimals)
    res = trace(cb, y, table, args.Z)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["user", "score", "accused"])
    accused = set(res.accused)
    for i, s in enumerate(res.scores):
        writer.writerow([i, repr(float(s)), int(i in accused)])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_simulate(args) -> int:
    strategies = args.strategy or ["majority"]
    ells = args.ell or [args.c]
    configs = [
        ExperimentConfig(SecurityGoal.from_total(args.c, args.N, args.eps), _knobs(args), s, ell, args.trials, args.seed)
        for s in strategies
        for ell in ells
    ]
    _emit(sweep(configs, threads=args.threads), args.out)
    return 0


def cmd_asymptote(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["c", "proposal", "hhi"])
    for c in range(2, args.c_max + 1, 2):
        prop = asymptotic_ratio(c, 0.5, c**0.5 / 2.0)
        hhi = asymptotic_ratio(c, 0.25, c / 2.0)
        writer.writerow([c, f"{prop:.6f}", f"{hhi:.6f}"])
    _emit(buf.getvalue(), args.out)
    return 0


def _add_goal(p, with_eps=True):
    p.add_argument("--c", type=_int_at_least(2), required=True, help="maximum coalition size")
    p.add_argument("--N", type=_int_at_least(2), required=True, help="number of users")
    if with_eps:
        p.add_argument("--eps", type=_unit_float, required=True, help="total error, split eps/N each way")
    p.add_argument("--eta1", type=float, default=None)
    p.add_argument("--eta2", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.0, help="score approximation budget")
    p.add_argument("--hhi", action="store_true", help="use the (1/4, c/2, 0) knob preset")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="glfp", description="Gauss-Legendre fingerprinting codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="print the Gauss-Legendre bias distribution")
    p.add_argument("--c", type=_int_at_least(2), required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("params", help="code length and threshold")
    _add_goal(p)
    p.add_argument("--aux", type=float, nargs=5, metavar=("R", "PSI1", "PSI2", "X1", "X2"),
                   help="use these auxiliary values instead of solving for them")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("gen", help="generate a codebook file")
    _add_goal(p)
    p.add_argument("--m", type=_int_at_least(1), default=None, help="override the derived length")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=_int_at_least(1), default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("collude", help="forge a pirated word")
    p.add_argument("--codebook", required=True)
    p.add_argument("--pirates", required=True, help="comma-separated user indices")
    p.add_argument("--strategy", default="majority")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_collude)

    p = sub.add_parser("trace", help="score users against a pirated word")
    p.add_argument("--codebook", required=True)
    p.add_argument("--word", required=True, help="text file over 0, 1, ?")
    p.add_argument("--Z", type=float, required=True, help="accusation threshold")
    p.add_argument("--decimals", type=_int_at_least(0), default=None,
                   help="round scores to this many places (delta = 0.5e-decimals)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("simulate", help="Monte Carlo error rates as CSV")
    _add_goal(p)
    p.add_argument("--strategy", action="append", help="repeatable; default majority")
    p.add_argument("--ell", type=_int_at_least(1), action="append", help="repeatable; default c")
    p.add_argument("--trials", type=_int_at_least(1), default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=_int_at_least(1), default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("asymptote", help="length ratio to Tardos codes for even c")
    p.add_argument("--c-max", type=_int_at_least(2), default=200)
    p.add_argument("--out")
    p.set_defaults(func=cmd_asymptote)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"glfp {args.command}: error: {exc}", file=sys.stderr)
        return 1
