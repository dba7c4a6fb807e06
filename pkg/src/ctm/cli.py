"""``ctm`` command line.

Exit status is 0 on success, 1 on usage errors and 2 when a computation or
file operation fails.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import __version__
from ._backend import BACKEND
from .bounds import DEFAULT_CUT, bound_report
from .codec import Incomplete, Program, decode_stream
from .counts import (
    CountsFormatError,
    ExplorationPlan,
    PlanError,
    load_checkpoint,
    load_counts,
    save_counts,
    dumps_counts,
)
from .dyadic import DyadicRational
from .explorer import explore
from .machines import MachineIndex, machine_count, unrank
from .measure import (
    Distribution,
    MeasureError,
    complexity,
    compute_dk,
    compute_mk,
    min_k_positive,
    neg_log2,
    rank_compare,
)
from .simulate import Halted, SimConfig, simulate

MEASURE_HEADER = "# ctm-measure"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- formatting ---------------------------------------------------------------


def fmt_measure(x: float) -> str:
    return f"{x:.7g}"


def fmt_k(x: float) -> str:
    return f"{x:.4f}"


def fmt_value(v) -> str:
    if isinstance(v, DyadicRational):
        return str(v)
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_value(text: str):
    if "/2^" in text:
        return DyadicRational.parse(text)
    return Fraction(text)


def _header(out: TextIO, args, **extra) -> None:
    if args.quiet:
        return
    parts = [f"ctm {__version__}", f"backend={BACKEND}", f"command={args.command}"]
    parts += [f"{k}={v}" for k, v in extra.items()]
    print("# " + " ".join(parts), file=out)


def _parse_per_n(text: Optional[str], flag: str, cast) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, eq, value = item.strip().partition("=")
        try:
            out[int(key)] = cast(value)
        except ValueError:
            raise UsageError(f"{flag}: cannot parse {item!r}; expected n=value") from None
        if not eq:
            raise UsageError(f"{flag}: cannot parse {item!r}; expected n=value")
    return out


# -- measure files ------------------------------------------------------------


def render_measure(d: Distribution) -> list[str]:
    lines = [f"{MEASURE_HEADER} kind={d.kind} k={d.k} exactness={d.exactness}"]
    for s, v in d.ranked():
        lines.append(f"{s} {fmt_value(v)} {fmt_measure(float(v))} {fmt_k(neg_log2(v))}")
    return lines


def read_measure(path: Path) -> Distribution:
    kind, k, exactness = None, 0, "exact"
    entries = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if line.startswith(MEASURE_HEADER):
            fields = dict(f.split("=", 1) for f in line[len(MEASURE_HEADER) :].split())
            kind, k, exactness = fields["kind"], int(fields["k"]), fields["exactness"]
            continue
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise CountsFormatError(f"{path}:{lineno}: malformed measure line")
        entries[parts[0]] = parse_value(parts[1])
    if kind is None:
        raise CountsFormatError(f"{path}: missing '{MEASURE_HEADER}' line")
    return Distribution(kind, k, entries, exactness)


def _load_distribution(path: str, kind: str) -> Distribution:
    p = Path(path)
    with p.open(encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
    if first.startswith("ctm-counts"):
        t = load_counts(p)
        return compute_mk(t) if kind == "mk" else compute_dk(t)
    return read_measure(p)


# -- subcommands --------------------------------------------------------------


def cmd_enumerate(args, out: TextIO) -> None:
    n = args.states
    count = machine_count(n)
    stop = count if args.limit is None else min(count, args.start + args.limit)
    _header(out, args, states=n, start=args.start, limit=args.limit)
    for t in range(args.start, stop):
        print(f"{t} {unrank(MachineIndex(n, t))}", file=out)


def cmd_simulate(args, out: TextIO) -> None:
    m = unrank(MachineIndex(args.states, args.index))
    res = simulate(m, SimConfig(args.blank, args.max_steps))
    _header(out, args, states=args.states, index=args.index, blank=args.blank, max_steps=args.max_steps)
    if isinstance(res, Halted):
        items = [("output", res.output), ("status", "halted"), ("steps", res.steps)]
    else:
        items = [("status", "exhausted"), ("steps", res.steps)]
    if args.format == "lines":
        for k, v in items:
            print(f"{k}={v}", file=out)
    else:
        print(f"machine {m}", file=out)
        print(" ".join(f"{k}={v}" for k, v in items), file=out)


def _plan_from_args(args) -> ExplorationPlan:
    modes = _parse_per_n(args.mode, "--mode", str) if "=" in (args.mode or "") else (args.mode or "full")
    samples = _parse_per_n(args.samples, "--samples", int) if "=" in (args.samples or "") else int(args.samples or 0)
    return ExplorationPlan.build(
        args.max_states,
        mode=modes,
        samples=samples,
        cutoffs=_parse_per_n(args.max_steps, "--max-steps", int),
        seed=args.seed,
        use_blank_symmetry=not args.no_symmetry,
        prefilter=not args.no_prefilter,
    )


def cmd_explore(args, out: TextIO) -> None:
    plan = _plan_from_args(args)
    resume = load_checkpoint(args.resume) if args.resume else None
    checkpoint = args.checkpoint or (f"{args.out}.ckpt" if args.out else None)
    _header(out if args.out else sys.stderr, args, seed=plan.seed, workers=args.workers, plan=plan.digest()[:16])
    table = explore(plan, args.workers, resume=resume, checkpoint_path=checkpoint)
    if args.out:
        save_counts(table, args.out)
        if checkpoint and Path(checkpoint).exists():
            Path(checkpoint).unlink()
        for n in range(1, plan.max_states + 1):
            print(
                f"n={n} examined={table.examined[(n, 0)]}+{table.examined[(n, 1)]} "
                f"halted={table.halted[(n, 0)]}+{table.halted[(n, 1)]}",
                file=out,
            )
        print(f"wrote {args.out}", file=out)
    else:
        out.write(dumps_counts(table))


def cmd_measure(args, out: TextIO) -> None:
    t = load_counts(args.counts)
    d = compute_mk(t) if args.kind == "mk" else compute_dk(t)
    lines = render_measure(d)
    if args.out:
        Path(args.out).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    _header(out, args, counts=args.counts, kind=args.kind)
    for line in lines:
        print(line, file=out)


def cmd_complexity(args, out: TextIO) -> None:
    d = _load_distribution(args.counts, args.kind)
    k = complexity(d, args.string)
    _header(out, args, counts=args.counts, kind=args.kind)
    if k is None:
        print(f"string={args.string} K=no-estimate", file=out)
        return
    v = d[args.string]
    if args.format == "lines":
        print(f"K={k!r}", file=out)
        print(f"measure={fmt_value(v)}", file=out)
        print(f"string={args.string}", file=out)
    else:
        print(f"string={args.string} measure={fmt_measure(float(v))} K={fmt_k(k)}", file=out)


def cmd_bounds(args, out: TextIO) -> None:
    if args.k < 1 or args.cut < 10:
        raise UsageError("--k must be >= 1 and --cut >= 10")
    report = bound_report(args.k, args.cut)
    _header(out, args, k=args.k, cut=args.cut)
    items = report.items()
    if args.format == "text":
        width = max(len(k) for k, _ in items)
        for k, v in items:
            print(f"{k:<{width}}  {v!r}" if isinstance(v, float) else f"{k:<{width}}  {v}", file=out)
    for k, v in sorted(items):
        print(f"{k}={v:.7f}" if isinstance(v, float) else f"{k}={v}", file=out)


def cmd_decode(args, out: TextIO) -> None:
    items, rest = decode_stream(args.bits)
    _header(out, args)
    for item in items:
        kind = "program" if isinstance(item, Program) else "trivial-non-halting"
        idx = item.index if isinstance(item, Program) else item.raw_index
        print(f"{kind} n={item.states} blank={item.blank} index={idx}", file=out)
    if isinstance(rest, Incomplete):
        needed = "unbounded" if rest.needed is None else rest.needed
        print(f"incomplete needed={needed}", file=out)


def cmd_compare(args, out: TextIO) -> None:
    a = _load_distribution(args.a, args.kind_a)
    b = _load_distribution(args.b, args.kind_b)
    cmp = rank_compare(a, b)
    _header(out, args, a=args.a, b=args.b)
    print(f"spearman_rho={cmp.spearman_rho!r}", file=out)
    print(f"n_common={cmp.n_common}", file=out)
    print(f"{'s':<12} {'K_a':>9} {'K_b':>9}", file=out)
    for s, _, _, ka, kb in cmp.table[: args.top]:
        print(f"{s:<12} {fmt_k(ka):>9} {fmt_k(kb):>9}", file=out)


def cmd_min_k(args, out: TextIO) -> None:
    k = min_k_positive(args.string, args.max_len)
    _header(out, args)
    print(f"string={args.string} min_k={k}", file=out)


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--workers", type=int, default=d(1), help="worker processes for explore")
        p.add_argument("--quiet", action="store_true", default=d(False), help="omit the reproducibility header")
        p.add_argument("--format", choices=["text", "lines"], default=d("text"))

    parser = _Parser(prog="ctm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ctm {__version__} ({BACKEND})")
    parser.add_argument("-v", "--verbose", action="store_true", default=False)
    add_globals(parser, suppress=False)
    common = _Parser(add_help=False)
    add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", parents=[common], help="list machines by index")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("simulate", parents=[common], help="run one machine")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--blank", type=int, choices=[0, 1], default=0)
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("explore", parents=[common], help="simulate machine spaces into a counts file")
    p.add_argument("--max-states", type=int, required=True)
    p.add_argument("--mode", help="full|sample, or per-n like '1=full,5=sample'")
    p.add_argument("--samples", help="samples per sampled n, or per-n like '5=1000000'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", help="per-n step cutoffs like '4=110,5=500'")
    p.add_argument("--no-symmetry", action="store_true", help="simulate blank 1 instead of deriving it")
    p.add_argument("--no-prefilter", action="store_true", help="simulate trivially non-halting machines too")
    p.add_argument("--out")
    p.add_argument("--resume", help="checkpoint file to continue from")
    p.add_argument("--checkpoint", help="where to keep the checkpoint (default OUT.ckpt)")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("measure", parents=[common], help="m_k or D(k) from a counts file")
    p.add_argument("--counts", required=True)
    p.add_argument("--kind", choices=["mk", "dk"], default="mk")
    p.add_argument("--out")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("complexity", parents=[common], help="K(s) = -log2 of a measure")
    p.add_argument("--counts", required=True, help="counts or measure file")
    p.add_argument("--string", required=True)
    p.add_argument("--kind", choices=["mk", "dk"], default="mk")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("bounds", parents=[common], help="closed-form error bounds")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cut", type=int, default=DEFAULT_CUT)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("decode", parents=[common], help="decode a program bit stream")
    p.add_argument("--bits", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("compare", parents=[common], help="rank correlation of two measures")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--kind-a", choices=["mk", "dk"], default="mk")
    p.add_argument("--kind-b", choices=["mk", "dk"], default="dk")
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("min-k", parents=[common], help="fewest states that can print a string")
    p.add_argument("--string", required=True)
    p.add_argument("--max-len", type=int, default=4)
    p.set_defaults(func=cmd_min_k)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.workers < 1:
        print("ctm: error: --workers must be >= 1", file=sys.stderr)
        return 1
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"ctm: error: {exc}", file=sys.stderr)
        return 1
    except (PlanError, CountsFormatError, MeasureError, ValueError, OSError) as exc:
        print(f"ctm: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
