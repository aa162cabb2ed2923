"""``pcgroup`` command line.

Exit codes: 0 success, 1 domain failure (inconsistent presentation, no
conjugator found, failed attack), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time
from pathlib import Path

from pcgroup import bench, kex, zoo
from pcgroup.collection import CollectionLimitError, check_consistency, collect
from pcgroup.conjugacy import (
    SearchLimitError, SearchTimeout, Solver, conjugacy_search_bounded, conjugacy_search_finite,
)
from pcgroup.presentation import (
    PresentationError, format_normal, format_word, hirsch_length, parse_word,
)

log = logging.getLogger("pcgroup")


class UsageError(Exception):
    pass


def _group(ref):
    try:
        return zoo.resolve_group(ref)
    except (PresentationError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _solver(text, group=None):
    if text is None:
        return Solver("finite") if group is not None and group.is_finite else Solver("bounded", 4)
    try:
        return Solver.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _word(text, g):
    try:
        return parse_word(text, g.n)
    except PresentationError as exc:
        raise UsageError(str(exc)) from None


def _deadline(args):
    return None if args.timeout_ms is None else time.monotonic() + args.timeout_ms / 1000


def cmd_build(args):
    g = _group(args.group)
    text = zoo.format_group_spec(g, with_embedding=not args.no_embedding)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_collect(args):
    g = _group(args.group)
    print(format_normal(collect(g.presentation, _word(args.word, g))))
    return 0


def cmd_consistency(args):
    g = _group(args.group)
    report = check_consistency(g.presentation)
    print(report.describe())
    return 0 if report.consistent else 1


def cmd_hirsch(args):
    print(hirsch_length(_group(args.group).presentation))
    return 0


def cmd_conjugacy(args):
    g = _group(args.group)
    p = g.presentation
    solver = _solver(args.solver, g)
    r = collect(p, _word(args.r, g))
    s = collect(p, _word(args.s, g))
    acting = g.generators()
    if solver.kind == "finite":
        if not g.is_finite:
            raise UsageError("the finite solver needs a finite group")
        wit = conjugacy_search_finite(g, acting, r, s, deadline=_deadline(args))
    else:
        wit = conjugacy_search_bounded(g, acting, r, s, solver.bound, deadline=_deadline(args))
    if wit is None:
        if solver.kind == "finite":
            print("not conjugate", file=sys.stderr)
        else:
            print(f"no conjugator of length <= {solver.bound}", file=sys.stderr)
        return 1
    print(f"conjugator {format_normal(wit.conjugator)}")
    print(f"word {format_word(wit.conjugator_word)}")
    for c in wit.centralizer_gens:
        print(f"centralizer {format_normal(c)}")
    return 0


def cmd_kex(args):
    g = _group(args.group)
    rng = random.Random(args.seed)
    try:
        if args.protocol == "aag":
            params = kex.random_aag_params(g, rng.getrandbits(64))
            sa = kex.random_secret(len(params.s_gens), rng, args.syllables)
            sb = kex.random_secret(len(params.t_gens), rng, args.syllables)
            t = kex.run_aag(params, sa, sb, args.group)
        else:
            params = kex.product_ncdh_params(g, rng.getrandbits(64))
            sa = kex.random_secret(len(params.s_gens), rng, args.syllables)
            sb = kex.random_secret(len(params.t_gens), rng, args.syllables)
            t = kex.run_ncdh(params, sa, sb, args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = kex.format_transcript(t)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_attack(args):
    try:
        t = kex.parse_transcript(Path(args.transcript).read_text(encoding="utf-8"))
    except (PresentationError, OSError) as exc:
        raise UsageError(str(exc)) from None
    g = _group(t.group)
    try:
        params = t.params(g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    solver = _solver(args.solver, g)
    if solver.kind == "finite" and not g.is_finite:
        raise UsageError("the finite solver needs a finite group")
    if t.protocol == "aag":
        key = kex.aag_attack(params, t.commit_a, t.commit_b, solver, _deadline(args))
    else:
        key = kex.ncdh_attack(params, t.commit_a[0], t.commit_b[0], solver, _deadline(args))
    if key is None:
        print("attack failed: no conjugator found", file=sys.stderr)
        return 1
    print(format_normal(key))
    honest = t.key_a if t.key_a is not None else t.key_b
    if honest is not None and honest != key:
        print("recovered key differs from the transcript key", file=sys.stderr)
        return 1
    return 0


def cmd_bench(args):
    if args.group:
        groups = [_group(ref) for ref in args.group.split(";")]
    elif args.suite == "cyclotomic":
        try:
            rs = [int(x) for x in args.rs.split(",")]
        except ValueError:
            raise UsageError(f"bad --rs {args.rs!r}") from None
        groups = [_group(f"cyclotomic:{r}") for r in rs]
    else:
        groups = [_group(ref) for ref in zoo.BUILTINS]
    solver = _solver(args.solver)
    results = []
    for g in groups:
        s = solver
        if s.kind == "finite" and not g.is_finite:
            s = Solver("bounded", 4)
        log.info("benchmarking %s", g.name)
        results.append(bench.bench_group(
            g, args.trials, s, args.timeout_ms or bench.DEFAULT_TIMEOUT_MS, args.seed,
            args.syllables, args.exponent_bound, args.warmup))
    sys.stdout.write(bench.emit_table(results, args.format))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="pcgroup", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    group_help = ("group file, or builtin: d4 | dihedral:<m> | heisenberg | "
                  "cyclotomic:<r> | product:<a>,<b>")
    sp = add("build", cmd_build, "write a group file")
    sp.add_argument("--group", required=True, help=group_help)
    sp.add_argument("--no-embedding", action="store_true")
    sp.add_argument("--out")

    sp = add("collect", cmd_collect, "normal form of a word")
    sp.add_argument("--group", required=True, help=group_help)
    sp.add_argument("--word", required=True, help='e.g. "g2 g1^-3" or "id"')

    sp = add("consistency", cmd_consistency, "check a presentation for consistency")
    sp.add_argument("--group", required=True, help=group_help)

    sp = add("hirsch", cmd_hirsch, "Hirsch length")
    sp.add_argument("--group", required=True, help=group_help)

    sp = add("conjugacy", cmd_conjugacy, "find a with r^a = s")
    sp.add_argument("--group", required=True, help=group_help)
    sp.add_argument("--r", required=True)
    sp.add_argument("--s", required=True)
    sp.add_argument("--solver", help="finite | bounded:<L>")
    sp.add_argument("--timeout-ms", type=int)

    sp = add("kex", cmd_kex, "run a key exchange and print its transcript")
    sp.add_argument("protocol", choices=["aag", "ncdh"])
    sp.add_argument("--group", required=True, help=group_help)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--syllables", type=int, default=4)
    sp.add_argument("--out")

    sp = add("attack", cmd_attack, "recover the key of a transcript")
    sp.add_argument("--transcript", required=True)
    sp.add_argument("--solver", help="finite | bounded:<L>")
    sp.add_argument("--timeout-ms", type=int)

    sp = add("bench", cmd_bench, "collection vs conjugacy timing table")
    sp.add_argument("--suite", choices=["cyclotomic", "zoo"], default="cyclotomic")
    sp.add_argument("--rs", default="3,4,7")
    sp.add_argument("--group", help="';'-separated groups, overrides --suite")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--timeout-ms", type=int, default=bench.DEFAULT_TIMEOUT_MS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--solver", default="bounded:4")
    sp.add_argument("--syllables", type=int, default=10)
    sp.add_argument("--exponent-bound", type=int, default=16)
    sp.add_argument("--warmup", type=int, default=0)
    sp.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    return ap


def run_cli(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"pcgroup: {exc}", file=sys.stderr)
        return 2
    except SearchTimeout as exc:
        print(f"pcgroup: {exc}", file=sys.stderr)
        return 1
    except (SearchLimitError, CollectionLimitError) as exc:
        print(f"pcgroup: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
