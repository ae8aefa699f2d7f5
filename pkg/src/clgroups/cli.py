"""Command-line entry point: ``clgroups <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 failed verification.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import checks, fieldgen, heuristics as H, symplectic
from .empirics import IngestError, compare, ingest, moments_table, parse_bins, records_to_text, summarize
from .pgroups import TypeParseError
from .sampler import SamplerError, sample_run
from .tables import render, stack

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3

log = logging.getLogger("clgroups")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["markdown", "csv", "json"], default="markdown")
    p.add_argument("--style", choices=["plain", "compact"], default="plain", help="number style in tables")
    p.add_argument("--digits", type=int, default=4, help="significant digits in tables")
    p.add_argument("--tol", type=float, default=1e-10, help="error tolerance for infinite products")
    p.add_argument("--verbose", action="store_true", help="echo the resolved configuration to stderr")
    return p


def _range_arg(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None
    return range(lo, hi + 1)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="clgroups", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    def situation(p):
        p.add_argument("--situation", required=True, help="id 1-9 or label such as C3/Q or D5/Q-real")
        p.add_argument("--predictor", choices=["modified", "cl", "both"], default="modified")

    p = add("predict-ranks", "predicted rank distribution")
    situation(p)
    p.add_argument("--max-rank", type=int, default=3, help="largest O-rank shown")

    p = add("predict-sylow", "predicted Sylow p-subgroup distribution")
    situation(p)
    p.add_argument("--columns", type=int, default=9, help="number of most likely types shown")

    p = add("moments", "predicted higher moments")
    situation(p)
    p.add_argument("--max-n", type=int, default=4)

    p = add("alpha", "fixed-space proportions in Sp_2g(q)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = add("alpha-limit", "large-genus limit of the fixed-space proportions")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-r", type=int, default=4)

    p = add("alpha-verify", "check the formula against an exhaustive census")
    p.add_argument("--pairs", default="1:2,1:3,2:2,2:3", help="comma-separated g:q pairs")

    p = add("census", "exhaustive census of Sp_2g(q) by fixed-space dimension")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--method", choices=["auto", "filter", "closure"], default="auto")

    p = add("roberts", "expected number of totally real cubic fields in [D1, D2]")
    p.add_argument("--d1", type=float)
    p.add_argument("--d2", type=float)

    p = add("counts", "linear field-count asymptotics")
    p.add_argument("--key", choices=sorted(fieldgen.LINEAR_COUNT_CONSTANTS))
    p.add_argument("--x1", type=float, default=0.0)
    p.add_argument("--x2", type=float)

    p = add("d5gen", "enumerate the dihedral quintic family as JSONL")
    p.add_argument("--a", type=_range_arg, required=True, help="MIN:MAX")
    p.add_argument("--b", type=_range_arg, required=True, help="MIN:MAX")
    p.add_argument("--t", type=_range_arg, default=range(0, 1), help="MIN:MAX")
    p.add_argument("--signature", choices=["any", "real", "complex"], default="any")
    p.add_argument("--min-disc", type=int, default=0, help="minimum |disc|")
    p.add_argument("--skip-reducible", action="store_true", help="drop polynomials with a rational root")
    p.add_argument("--output", type=Path)

    p = add("analyze", "compare class-group data with the predictions")
    situation(p)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--input-format", choices=["jsonl", "csv"])
    p.add_argument("--bins", default="0", help="increasing discriminant edges, e.g. 1e16,1e20")
    p.add_argument("--kind", choices=["sylow", "rank", "moments"], default="sylow")
    p.add_argument("--max-moment", type=int, default=3)
    p.add_argument("--lenient", action="store_true", help="skip malformed lines instead of aborting")

    p = add("sample", "synthetic records from the modified law")
    p.add_argument("--situation", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tail-mass", type=float, default=1e-6)
    p.add_argument("--disc-start", type=int, default=1)
    p.add_argument("--record-format", choices=["jsonl", "csv"], default="jsonl")
    p.add_argument("--output", type=Path)

    add("selfcheck", "run the verification suite")
    return parser


def _emit(text: str, output: Optional[Path] = None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _table_out(args, table) -> None:
    _emit(render(table, args.format, args.digits, args.style))


def _cmd_predict(args) -> int:
    sit = H.get_situation(args.situation)
    if args.command == "predict-ranks":
        table = H.predicted_table(sit, "rank", args.max_rank, args.predictor, args.tol)
    elif args.command == "predict-sylow":
        if sit.anomalous:
            print(f"WARNING: {H.ANOMALY_NOTE}", file=sys.stderr)
        table = H.predicted_table(sit, "sylow", args.columns, args.predictor, args.tol)
    else:
        table = H.predicted_table(sit, "moments", args.max_n, args.predictor, args.tol)
    _table_out(args, table)
    return EXIT_OK


def _cmd_alpha(args) -> int:
    for r in range(2 * args.g + 1):
        print(r, _frac(symplectic.alpha(args.g, r, args.q)))
    return EXIT_OK


def _cmd_alpha_limit(args) -> int:
    for r in range(args.max_r + 1):
        v = symplectic.alpha_limit(r, args.q, args.tol)
        print(r, f"{float(v.value):.12g}")
    return EXIT_OK


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(x) for x in item.split(":")) for item in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --pairs value {text!r}") from None


def _cmd_alpha_verify(args) -> int:
    ok = True
    print("g q r census formula uncorrected status")
    for g, q in _parse_pairs(args.pairs):
        counts = symplectic.eigenspace_census(g, q)
        order = symplectic.sp_order(g, q)
        for r in range(2 * g + 1):
            expected = symplectic.alpha(g, r, q) * order
            naive = symplectic.alpha_uncorrected(g, r, q) * order
            good = counts[r] == expected
            ok &= good
            print(g, q, r, counts[r], _frac(expected), _frac(naive), "ok" if good else "MISMATCH")
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_census(args) -> int:
    counts = symplectic.eigenspace_census(args.g, args.q, args.method)
    for r, c in counts.items():
        print(r, c)
    return EXIT_OK


def _cmd_roberts(args) -> int:
    if args.d1 is not None or args.d2 is not None:
        if args.d1 is None or args.d2 is None:
            raise UsageError("--d1 and --d2 go together")
        print(f"{fieldgen.roberts_expected(args.d1, args.d2):.1f}")
        return EXIT_OK
    print("D1 D2 expected")
    for d1, width, _ in checks.ROBERTS_ROWS:
        print(d1, d1 + width, f"{fieldgen.roberts_expected(d1, d1 + width):.1f}")
    return EXIT_OK


def _cmd_counts(args) -> int:
    keys = [args.key] if args.key else sorted(fieldgen.LINEAR_COUNT_CONSTANTS)
    for key in keys:
        const = fieldgen.LINEAR_COUNT_CONSTANTS[key]
        if args.x2 is None:
            print(key, const)
        else:
            print(key, f"{fieldgen.linear_count_expected(key, args.x1, args.x2):.6g}")
    return EXIT_OK


def _cmd_d5gen(args) -> int:
    lines = []
    skipped = 0
    for a, b, t, f in fieldgen.iter_d5_family(args.a, args.b, args.t):
        disc = fieldgen.discriminant(f)
        if disc == 0 or abs(disc) < args.min_disc:
            skipped += 1
            continue
        k = fieldgen.real_root_count(f)
        if (args.signature == "real" and k != 5) or (args.signature == "complex" and k != 1):
            continue
        if args.skip_reducible and fieldgen.rational_roots(f):
            skipped += 1
            continue
        doc = {"a": a, "b": b, "t": t, "poly": list(f.coeffs), "disc": str(disc), "real_roots": k}
        lines.append(json.dumps(doc, separators=(",", ":")) + "\n")
    if skipped:
        log.info("skipped %d polynomials (zero/small discriminant or reducible)", skipped)
    _emit("".join(lines), args.output)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    sit = H.get_situation(args.situation)
    errors: list = []
    records = ingest(args.input, args.input_format, strict=not args.lenient, errors=errors)
    if errors:
        print(f"skipped {len(errors)} malformed lines", file=sys.stderr)
    bins = parse_bins(args.bins)
    summaries = summarize(records, sit, bins, args.max_moment)
    for s in summaries:
        if s.invalid_rank or s.invalid_type:
            print(f"warning: bin {s.bin_label} has {s.invalid_rank} records with p-rank not divisible by "
                  f"{sit.d} and {s.invalid_type} outside the module lattice", file=sys.stderr)
    if args.kind == "moments":
        table = moments_table(summaries, sit, args.max_moment)
    else:
        predictors = ["modified", "cl"] if args.predictor == "both" else [args.predictor]
        tables = [compare(s, sit, args.kind, pr) for pr in predictors for s in summaries if s.count]
        if not tables:
            print("no records fall in the requested bins", file=sys.stderr)
            return EXIT_DATA
        table = stack(tables)
    _table_out(args, table)
    return EXIT_OK


def _cmd_sample(args) -> int:
    run = sample_run(args.situation, args.n, args.seed, args.tail_mass, args.disc_start)
    if run.overflow_count:
        print(f"{run.overflow_count} draws in the tail mapped to {run.table.overflow_type}", file=sys.stderr)
    _emit(records_to_text(run.records, args.record_format), args.output)
    return EXIT_OK


def _cmd_selfcheck(args) -> int:
    results = checks.run_all()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status}  {r.name:<{width}}  {r.seconds:6.2f}s"
        print(line + (f"  {r.detail}" if r.detail else ""))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY


COMMANDS = {
    "predict-ranks": _cmd_predict,
    "predict-sylow": _cmd_predict,
    "moments": _cmd_predict,
    "alpha": _cmd_alpha,
    "alpha-limit": _cmd_alpha_limit,
    "alpha-verify": _cmd_alpha_verify,
    "census": _cmd_census,
    "roberts": _cmd_roberts,
    "counts": _cmd_counts,
    "d5gen": _cmd_d5gen,
    "analyze": _cmd_analyze,
    "sample": _cmd_sample,
    "selfcheck": _cmd_selfcheck,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"clgroups: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.verbose:
        config = {k: (str(v) if isinstance(v, (Path, range)) else v) for k, v in sorted(vars(args).items())}
        print("config: " + json.dumps(config, sort_keys=True), file=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"clgroups: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"clgroups: error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, TypeParseError, SamplerError, FileNotFoundError, ValueError) as exc:
        print(f"clgroups: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
