"""Command line interface.

Every flag can also be set through the environment::

    --seed            WCIHODGE_SEED            (default 1729)
    --prime           WCIHODGE_PRIME           index into the prime list (default 0)
    --trials          WCIHODGE_TRIALS          (default 3)
    --jobs            WCIHODGE_JOBS            (default 1)
    --format          WCIHODGE_FORMAT          json | csv | text
    --checkpoint-dir  WCIHODGE_CHECKPOINT_DIR

Exit codes: 0 success, 2 parse error, 3 validation error, 4 capacity exceeded,
5 mismatch. Streaming commands write one JSON record per line on stdout;
diagnostics go to stderr.
"""
import argparse
import json
import os
import sys

from . import __version__
from .classify import ClassificationError, LabelMismatchError, classify
from .family import ParseError, ValidationError, parse_family, summarize, trichotomy_label
from .jacobian import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    PRIMES,
    BigradedContext,
    CapacityError,
    HodgeDiamond,
    dim_graded_piece,
    middle_row,
)
from .regularity import Verdict, regularity_report
from .search import (
    CURVES,
    CY3_TYPE,
    K3_COUNTS,
    K3_TYPE,
    QUASI_SMOOTH_EXAMPLES,
    SURFACES,
    THREEFOLDS,
    SearchOptions,
    enumerate_quasismooth_k3_hypersurfaces,
    enumerate_smooth_fano,
    make_record,
    records_to_csv,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CAPACITY = 4
EXIT_MISMATCH = 5


class Mismatch(Exception):
    pass


def _env(name, default, cast=str):
    raw = os.environ.get("WCIHODGE_" + name)
    return default if raw in (None, "") else cast(raw)


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
    sys.stdout.flush()


def _diag(msg):
    print(msg, file=sys.stderr)


def _options(args, hodge=True):
    if not 0 <= args.prime < len(PRIMES):
        raise ValidationError("prime-index", f"--prime must be in 0..{len(PRIMES) - 1}")
    return SearchOptions(
        seed=args.seed, prime=PRIMES[args.prime], trials=args.trials, jobs=args.jobs, hodge=hodge,
    )


def _fmt(args, default):
    return args.format or default


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_analyze(args):
    family = parse_family(args.family)
    summary = summarize(family).to_dict()
    report = regularity_report(family).to_dict()
    tri = trichotomy_label(family).value
    if _fmt(args, "text") == "text":
        print(f"family      {family}")
        print("invariants  " + ", ".join(f"{k}={v}" for k, v in summary.items()))
        print(f"trichotomy  {tri}")
        for k, v in report.items():
            print(f"{k:<16}{v}")
    else:
        _emit({"family": str(family), "invariants": summary, "regularity": report, "trichotomy": tri})


def _diamond(args, family):
    opts = _options(args)
    if family.index <= 0:
        raise ValidationError("fano", f"{family} is not Fano; its diamond is not computed")
    report = regularity_report(family)
    if report.quasi_smooth is not Verdict.CERTIFIED:
        _diag(f"warning: quasi-smoothness of {family} is {report.quasi_smooth.value}; "
              "the values are Jacobian ring dimensions only")
    row = middle_row(BigradedContext(family), **opts.jacobian_kwargs())
    return row, HodgeDiamond.from_middle_row(row)


def cmd_hodge(args):
    family = parse_family(args.family)
    row, diamond = _diamond(args, family)
    if _fmt(args, "text") == "text":
        n = diamond.n
        width = max(len(str(v)) for r in diamond.h for v in r)
        # rows of constant p + q, top of the diamond first
        for s in range(2 * n, -1, -1):
            cells = [diamond[p, s - p] for p in range(max(0, s - n), min(n, s) + 1)]
            pad = " " * ((n + 1 - len(cells)) * (width + 1) // 2)
            print(pad + " ".join(str(v).rjust(width) for v in cells))
        print("primitive middle row: " + " ".join(map(str, row.values)))
    else:
        _emit({
            "family": str(family),
            "middle_row": list(row.values),
            "middle_sources": list(row.sources),
            "diamond": diamond.to_rows(),
            "hodge_level": _level(diamond.hodge_level()),
        })


def _level(hl):
    return "-inf" if hl == float("-inf") else int(hl)


def cmd_classify(args):
    family = parse_family(args.family)
    opts = _options(args)
    labels = classify(family, **opts.jacobian_kwargs())
    if _fmt(args, "text") == "text":
        print(f"family       {family}")
        print(f"hodge level  {_level(labels.hodge_level)}")
        print("types        " + (", ".join(labels.names()) or "none"))
    else:
        _emit({"family": str(family), "labels": labels.to_dict()})


def _stream(records, fmt):
    if fmt == "csv":
        sys.stdout.write(records_to_csv(records))
    elif fmt == "text":
        for rec in records:
            row = "" if rec.middle_row is None else " ".join(map(str, rec.middle_row))
            print(f"{rec.family}\t{row}")
    else:
        for rec in records:
            sys.stdout.write(rec.to_json() + "\n")
    sys.stdout.flush()


def cmd_enumerate(args):
    opts = _options(args, hodge=not args.no_hodge)
    result = enumerate_smooth_fano(args.dim, opts)
    _stream(result.records, _fmt(args, "json"))
    _diag(f"dimension {args.dim}: {len(result.records)} families")
    for fam in result.needs_review:
        _diag(f"needs review: {fam}")


def _read_reference(path):
    with open(path) as fh:
        return [parse_family(line.split("\t")[0]) for line in fh if line.strip() and not line.startswith("#")]


def cmd_k3scan(args):
    opts = _options(args, hodge=not args.no_hodge)
    progress = (lambda shard: _diag(f"shard {shard} done")) if args.verbose else None
    result = enumerate_quasismooth_k3_hypersurfaces(
        args.N, args.max_weight, opts, conventional=not args.strict, confirm=args.confirm,
        checkpoint_dir=args.checkpoint_dir, progress=progress,
    )
    records = [make_record(f, opts) for f in result.families]
    _stream(records, _fmt(args, "json"))
    mode = "strict" if args.strict else "conventional"
    _diag(f"N={args.N} bound={args.max_weight} ({mode}): {result.count} families")
    for fam, reason in result.rejected:
        _diag(f"rejected after sieve: {fam}: {reason}")
    for fam, msg in result.errors:
        _diag(f"capacity: {fam}: {msg}")
    mismatch = False
    if args.compare:
        other = enumerate_quasismooth_k3_hypersurfaces(
            args.N, args.max_weight, opts, conventional=args.strict, confirm="series",
        )
        missing, extra = result.symmetric_difference(other.families)
        _diag(f"other convention: {other.count} families; "
              f"{len(extra)} only here, {len(missing)} only there")
        for fam in extra:
            _diag(f"only {mode}: {fam}")
        for fam in missing:
            _diag(f"only {'conventional' if args.strict else 'strict'}: {fam}")
    if args.reference:
        missing, extra = result.symmetric_difference(_read_reference(args.reference))
        for fam in missing:
            _diag(f"missing from scan: {fam}")
        for fam in extra:
            _diag(f"not in reference: {fam}")
        mismatch = bool(missing or extra)
    expected = K3_COUNTS.get((args.N, args.max_weight))
    if expected is not None and not args.strict and expected != result.count:
        _diag(f"expected {expected} families")
        mismatch = True
    if result.errors:
        return EXIT_CAPACITY
    if mismatch:
        raise Mismatch("k3scan result differs from the reference")


def _check(name, ok, detail):
    _emit({"check": name, "ok": bool(ok), "detail": detail})
    return bool(ok)


def cmd_verify_tables(args):
    opts = _options(args)
    kw = opts.jacobian_kwargs()
    ok = True
    for dim, table in ((1, CURVES), (2, SURFACES), (3, THREEFOLDS)):
        records = enumerate_smooth_fano(dim, opts).records
        found = {}
        for rec in records:
            p = 1 if dim > 1 else 0
            found[str(rec.family)] = rec.diamond[p][dim - p]
        ok &= _check(f"dimension-{dim}", found == table, found)
    for text in K3_TYPE:
        labels = classify(parse_family(text), **kw)
        ok &= _check(f"k3-type {text}", labels.cy_type == 2 and labels.hodge_level == 2, labels.to_dict())
    for text in CY3_TYPE:
        fam = parse_family(text)
        row = middle_row(BigradedContext(fam), **kw)
        # zero outside the window |p - q| <= 3, one on its edge
        edge = (fam.dim - 3) // 2
        vals = list(row.values)
        good = vals[edge] == 1 == vals[fam.dim - edge] and not any(vals[:edge] + vals[fam.dim - edge + 1:])
        ok &= _check(f"3-cy-type {text}", good, vals)
    cubic = parse_family("P^5 : 3")
    v = dim_graded_piece(BigradedContext(cubic), 1, **kw)
    ok &= _check("cubic fourfold h^{1,3}", v == 1, v)
    for text, (q, value) in QUASI_SMOOTH_EXAMPLES.items():
        fam = parse_family(text)
        v = dim_graded_piece(BigradedContext(fam), q, **kw)
        ok &= _check(f"quasi-smooth {text}", v == value, {"q": q, "e": -fam.index, "dim": v})
    if not ok:
        raise Mismatch("table verification failed")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_env("SEED", DEFAULT_SEED, int))
    common.add_argument("--prime", type=int, default=_env("PRIME", 0, int),
                        help="index into the prime list " + str(list(PRIMES)))
    common.add_argument("--trials", type=int, default=_env("TRIALS", DEFAULT_TRIALS, int))
    common.add_argument("--jobs", type=int, default=_env("JOBS", 1, int))
    common.add_argument("--format", choices=["json", "csv", "text"], default=_env("FORMAT", None))
    common.add_argument("--checkpoint-dir", default=_env("CHECKPOINT_DIR", None))

    parser = argparse.ArgumentParser(prog="wcihodge", description="Hodge numbers of weighted complete intersections")
    parser.add_argument("--version", action="version", version=f"wcihodge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("analyze", cmd_analyze, "invariants and regularity of a family"),
        ("hodge", cmd_hodge, "Hodge diamond of a Fano family"),
        ("classify", cmd_classify, "Hodge level and types of a smooth Fano family"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("family", help='e.g. "P(1^4,3) : 6"')
        p.set_defaults(func=fn)

    p = sub.add_parser("enumerate", parents=[common], help="all smooth Fano families of a dimension")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--no-hodge", action="store_true", help="skip Hodge numbers")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("k3scan", parents=[common], help="quasi-smooth hypersurfaces of K3 type")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--max-weight", type=int, required=True)
    p.add_argument("--strict", action="store_true", help="literal definition, without the conventional filters")
    p.add_argument("--confirm", choices=["rank", "series", "none"], default=None)
    p.add_argument("--compare", action="store_true", help="also run the other convention and report the difference")
    p.add_argument("--reference", help="file of reference families, one per line")
    p.add_argument("--no-hodge", action="store_true", help="skip Hodge numbers")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_k3scan)

    p = sub.add_parser("verify-tables", parents=[common], help="re-derive the reference tables")
    p.set_defaults(func=cmd_verify_tables)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except ParseError as exc:
        _diag(f"parse error: {exc}")
        return EXIT_PARSE
    except CapacityError as exc:
        _diag(f"capacity exceeded: {exc}")
        return EXIT_CAPACITY
    except (Mismatch, LabelMismatchError) as exc:
        _diag(f"mismatch: {exc}")
        return EXIT_MISMATCH
    except (ValidationError, ClassificationError, ValueError) as exc:
        _diag(f"validation error: {exc}")
        return EXIT_VALIDATION
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
