"""Command-line interface.

Exit status: 0 on success, 2 on usage errors, 1 on domain errors. Domain
errors print one line to stderr of the form ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import secrets
import sys
from dataclasses import replace

from . import construct, core, experiments, fibmod, oeis
from .errors import FreeFibError

TABLE3_NS = [4, 6, 7, 9, 14, 23, 27, 43, 49]


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text: str) -> tuple[int, int]:
    xs = _int_list(text)
    if len(xs) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers, got {text!r}")
    return xs[0], xs[1]


class Output:
    def __init__(self, fmt: str, digits: int | None, stream=None):
        self.fmt = fmt
        self.digits = digits
        self.stream = stream or sys.stdout
        self._csv = csv.writer(self.stream, lineterminator="\n")

    def num(self, x) -> str:
        s = str(x)
        if self.digits and isinstance(x, int) and len(s.lstrip("-")) > self.digits:
            return f"{s[: self.digits]}…({len(s.lstrip('-'))} digits)"
        return s

    def line(self, text: str = ""):
        print(text, file=self.stream)

    def table(self, header, rows, plain=None):
        """CSV with a header row, or one item per line in plain mode."""
        rows = [[self.num(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in r]
                for r in rows]
        if self.fmt == "csv":
            self._csv.writerow(header)
            self._csv.writerows(rows)
        else:
            for r in rows:
                self.line(plain(r) if plain else " ".join(str(v) for v in r))


def _seed(args, out: Output) -> int:
    if args.seed is None:
        args.seed = secrets.randbelow(2**32)
        out.line(f"# seed: {args.seed}")
    return args.seed


def cmd_gen(args, out):
    run = core.generate(*args.start, args.n, args.count)
    out.table(
        ["index", "term", "power", "residue"],
        [[k, s.term, s.power, s.residue] for k, s in enumerate(run.steps, start=1)],
        plain=lambda r: r[1],
    )


def cmd_cycle(args, out):
    res = core.detect_cycle(*args.start, args.n, args.budget)
    if isinstance(res, core.Exhausted):
        rows = [["status", "exhausted"], ["budget", res.budget],
                ["last_pair", ",".join(out.num(x) for x in res.last_pair)]]
    else:
        prim, g = core.primitive_cycle(res.cycle_terms)
        rows = [["status", "cycle"], ["preperiod", res.preperiod], ["period", res.period],
                ["cycle", ",".join(map(str, res.cycle_terms))],
                ["content_gcd", g], ["primitive", ",".join(map(str, prim))]]
    out.table(["key", "value"], rows, plain=lambda r: f"{r[0]}: {r[1]}")


def _emit_run(out, terms, signature=None, residues=None):
    if out.fmt == "plain":
        out.line("# direction: forward, a_1 first, construction end last")
    sig = signature or [None] * len(terms)
    res = residues or [None] * len(terms)
    out.table(
        ["index", "term", "divisor", "residue"],
        [[k, t, "*" if d is None else d, "" if r is None else r]
         for k, (t, d, r) in enumerate(zip(terms, sig, res), start=1)],
        plain=lambda r: r[1],
    )


def cmd_construct(args, out):
    if args.kind == "rich":
        run = construct.build_division_rich(args.n, args.length, args.terminal)
        _emit_run(out, run.terms, run.signature, run.residues)
    elif args.kind == "predecessors":
        # listed from the given pair backwards
        terms = construct.two_free_predecessors(*args.start, args.count)
        _emit_run(out, terms[::-1])
    else:
        p = construct.RemainderPrescription.from_powers(args.n, args.remainders, args.powers)
        raw = construct.build_from_prescription(p, args.terminal)
        if args.adjust is not None:
            run = construct.adjust_positive(raw, args.n, args.adjust)
        else:
            run = core.replay(raw[0], raw[1], args.n, len(raw))
        _emit_run(out, run.terms, run.signature, run.residues)


def cmd_classify(args, out):
    recs = [fibmod.is_omni_factor(n, args.cap) for n in range(args.min, args.max + 1)]
    rows = [[r.n, int(r.omni_factor), int(not r.lucas_witness),
             "" if r.witness_start is None else f"{r.witness_start[0]} {r.witness_start[1]}"]
            for r in recs]
    out.table(["n", "omni_factor", "lucas_divides", "witness"], rows)
    if out.fmt == "plain":
        out.line("non_omni: " + ",".join(str(r.n) for r in recs if not r.omni_factor))


def cmd_orbits(args, out):
    n = args.n
    if args.successors:
        succ = fibmod.division_free_successors(n, args.cap)
        if not succ:
            print(f"warning: {n} is an omni-factor; no division-free pairs", file=sys.stderr)
        out.table(["residue", "successors"],
                  [[r, " ".join(map(str, sorted(s)))] for r, s in sorted(succ.items())],
                  plain=lambda r: f"{r[0]}: {r[1].replace(' ', ', ')}")
        return
    dec = fibmod.orbit_decomposition(n, args.cap)
    rows = [[i, c.length, int(c.contains_zero), " ".join(map(str, c.segments())),
             f"{c.pairs[0][0]} {c.pairs[0][1]}"] for i, c in enumerate(dec.cycles)]
    out.table(["cycle", "length", "contains_zero", "segments", "first_pair"], rows)
    if out.fmt == "plain":
        with_zero, zero_free = fibmod.count_zero_pairs(n, args.cap)
        sq, half = fibmod.cycle_length_moments(n, args.cap)
        out.line(f"cycles: {dec.cycle_count}")
        out.line(f"distinct_lengths: {dec.distinct_lengths}")
        out.line("census: " + ",".join(map(str, dec.census())))
        out.line(f"pairs_with_zero: {with_zero}")
        out.line(f"pairs_zero_free: {zero_free}")
        out.line(f"sum_squares: {sq}")
        out.line(f"rounded_half_mean: {half}")


def cmd_oeis(args, out):
    if args.bfile:
        oeis.export_bfile(args.id, args.count, args.bfile)
        return
    desc = oeis.descriptor(args.id)
    out.table(["index", "value"],
              [[desc.offset + i, v] for i, v in enumerate(oeis.emit(args.id, args.count))],
              plain=lambda r: r[1])


def _config(args, n):
    cfg = experiments.ExperimentConfig(
        n=n, trials=args.trials, length=args.length, init_low=args.init_low,
        init_high=args.init_high, master_seed=args.seed, tail_skip=args.tail_skip,
        averaging=args.averaging,
    )
    if args.paper_scale:
        cfg = replace(cfg, **experiments.PAPER_SCALE)
    return cfg


def _fmt(x, places=4):
    return "" if x is None else f"{x:.{places}f}"


def cmd_experiment(args, out):
    if args.what == "models":
        _seed(args, out)
        m3 = experiments.model3_bound(args.pairs, args.seed)
        m4 = experiments.model4_bound()
        rows = [
            ["avg_division_factor_3", _fmt(experiments.avg_division_factor(3), 6)],
            ["avg_division_factor_4", _fmt(experiments.avg_division_factor(4), 6)],
            ["model3_closed_form", _fmt(m3.closed_form, 6)],
            ["model3_case_bounds", " ".join(f"{k}={v}" for k, v in m3.case_bounds.items())],
            ["model3_simulated", _fmt(m3.simulated, 6)],
            ["model4_r_up", _fmt(m4.r_up, 6)],
            ["model4_r_down", _fmt(m4.r_down, 6)],
            ["model4_overall", _fmt(m4.overall, 6)],
        ]
        out.table(["quantity", "value"], rows, plain=lambda r: f"{r[0]}: {r[1]}")
        return
    _seed(args, out)
    if args.what == "growth":
        fits = [experiments.mc_growth(_config(args, n), args.workers) for n in args.n]
        out.table(["n", "g", "stderr", "trials", "length", "seed"],
                  [[f.n, _fmt(f.g), _fmt(f.stderr, 6), f.trials_used, f.length, f.seed] for f in fits])
        return
    ns = args.n or TABLE3_NS
    rows = experiments.growth_table(ns, _config(args, 2), args.workers)
    out.table(
        ["n", "omni_factor", "mc_growth", "entry_point", "avg_steps", "avg_division", "recurrence_growth"],
        [[r.n, int(r.omni_factor), _fmt(r.mc_growth), r.entry_point,
          "" if r.avg_steps is None else str(r.avg_steps), _fmt(r.avg_division, 3),
          _fmt(r.recurrence_growth, 3)] for r in rows],
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "csv"], default="plain")
    common.add_argument("--digits", type=int, default=None,
                        help="truncate integers longer than this many digits")
    common.add_argument("--manifest", default=None,
                        help="file of 'flag = value' lines; command-line flags win")

    p = argparse.ArgumentParser(prog="freefib", description="n-free Fibonacci sequences")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate an n-free sequence")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--start", type=_pair, default=(0, 1))
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("cycle", parents=[common], help="look for a cycle")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--start", type=_pair, default=(0, 1))
    s.add_argument("--budget", type=int, default=core.DEFAULT_BUDGET)
    s.set_defaults(func=cmd_cycle)

    s = sub.add_parser("construct", parents=[common], help="build runs backwards")
    s.add_argument("kind", choices=["rich", "predecessors", "prescription"])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--length", type=int, default=10)
    s.add_argument("--terminal", type=_pair, default=(1, 1))
    s.add_argument("--start", type=_pair, default=(3, 1), help="a_1,a_2 for predecessors")
    s.add_argument("--count", type=int, default=9)
    s.add_argument("--remainders", type=_int_list)
    s.add_argument("--powers", type=_int_list)
    s.add_argument("--adjust", type=int, default=None, metavar="M",
                   help="shift the start by multiples of n^M to make it positive")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("classify", parents=[common], help="omni-factor table")
    s.add_argument("--min", type=int, default=2)
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--cap", type=int, default=fibmod.DEFAULT_CAP)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("orbits", parents=[common], help="orbits of residue pairs mod n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cap", type=int, default=fibmod.DEFAULT_CAP)
    s.add_argument("--successors", action="store_true",
                   help="print the division-free successor table instead")
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("oeis", parents=[common], help="emit an OEIS sequence")
    s.add_argument("--id", required=True)
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--bfile", default=None)
    s.set_defaults(func=cmd_oeis)

    s = sub.add_parser("experiment", parents=[common], help="growth experiments")
    s.add_argument("what", choices=["growth", "table3", "models"])
    s.add_argument("--n", type=_int_list, default=None)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--length", type=int, default=300)
    s.add_argument("--init-low", type=int, default=1)
    s.add_argument("--init-high", type=int, default=1000)
    s.add_argument("--tail-skip", type=int, default=50)
    s.add_argument("--averaging", choices=["log", "arithmetic"], default="log")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--pairs", type=int, default=10**6, help="coin-flip pairs for models")
    s.add_argument("--paper-scale", action="store_true", help="10000 trials of length 500")
    s.set_defaults(func=cmd_experiment)
    return p


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise KeyError(command)


def _apply_manifest(parser, args, argv):
    sub = _subparser(parser, args.command)
    given = {a.split("=")[0] for a in argv if a.startswith("--")}
    with open(args.manifest) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            key, value = key.strip().lstrip("-"), value.strip()
            flag = "--" + key.replace("_", "-")
            action = next((a for a in sub._actions if flag in a.option_strings
                           or "--" + key in a.option_strings), None)
            if action is None:
                sub.error(f"manifest key {key!r} is not a flag of {args.command}")
            if set(action.option_strings) & given:
                continue
            if action.nargs == 0:
                val = value.lower() in ("1", "true", "yes", "on")
            else:
                val = action.type(value) if action.type else value
                if action.choices and val not in action.choices:
                    sub.error(f"manifest value {value!r} not allowed for {flag}")
            setattr(args, action.dest, val)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.manifest:
        try:
            _apply_manifest(parser, args, argv)
        except OSError as e:
            print(f"error: io: {e}", file=sys.stderr)
            return 1
    if args.command == "experiment" and args.what == "growth" and not args.n:
        parser.error("experiment growth needs --n")
    if args.command == "construct" and args.kind == "prescription" and (
            args.remainders is None or args.powers is None):
        parser.error("construct prescription needs --remainders and --powers")
    sys.set_int_max_str_digits(0)
    out = Output(args.format, args.digits)
    try:
        args.func(args, out)
    except FreeFibError as e:
        print(f"error: {e.kind}: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: invalid: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
