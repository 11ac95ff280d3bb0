"""Batch front door: load signature/algebra/word-system files, run one
operation, emit JSON certificates, lattice dumps, or DOT diagrams.

Exit codes: 0 success/true, 1 false/refuted, 2 inconclusive/exhausted,
3 input or resource error.  Output is byte-stable across runs for fixed
inputs and bounds; the engine contains no randomness.
"""

from __future__ import annotations

import argparse
import sys

from .equivalence import auto_equivalent_search, EquivalenceCertificate, geom_equivalent
from .errors import CapExceeded, EngineError
from .files import (
    certificate_json,
    dump_json,
    free_dump_json,
    load_algebra_file,
    load_variety_file,
    load_word_file,
    write_output,
)
from .free import DEFAULT_CAP
from .geometry import closed_lattice, lattice_dot, lattice_json
from .verbal import check_op2, default_n_max
from .verify import Block, builtin_blocks, run_verification

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


def _add_common(p, words=False, bounds=False, rank=False, names=False, algebras=False):
    p.add_argument("--variety", required=True, help="variety file (JSON)")
    if algebras:
        p.add_argument("--algebras", help="algebra file (JSON); defaults to the variety file")
    if words:
        p.add_argument("--words", required=True, help="word-system file (JSON)")
    if bounds:
        p.add_argument("--nmax", type=int, default=None, help="free-algebra rank bound")
        p.add_argument("--depth", type=int, default=2, help="word depth bound")
    if rank:
        p.add_argument("--rank", type=int, required=True, help="free-algebra rank")
    if names:
        p.add_argument(
            "--names",
            help="comma-separated algebra names from the algebra file "
            "(default: file order)",
        )
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="free-algebra size cap")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument(
        "--format", choices=["json", "dot", "text"], default="json", help="output format"
    )


def _pick(algebras, names, count):
    if names:
        wanted = names.split(",")
        by_name = {a.name: a for a in algebras}
        try:
            chosen = [by_name[n] for n in wanted]
        except KeyError as exc:
            raise EngineError(f"no algebra named {exc.args[0]!r} in the file") from None
    else:
        chosen = list(algebras)
    if len(chosen) < count:
        raise EngineError(f"need {count} algebras, found {len(chosen)}")
    return chosen[:count]


def _load_subjects(args, count):
    variety = load_variety_file(args.variety)
    path = getattr(args, "algebras", None) or args.variety
    sig, algebras, _ = load_algebra_file(path)
    if sig != variety.signature:
        raise EngineError("algebra file signature differs from the variety file")
    return variety, _pick(algebras, getattr(args, "names", None), count)


def cmd_free(args) -> int:
    variety = load_variety_file(args.variety)
    free = variety.free(args.rank, args.cap)
    if args.format == "text":
        lines = [f"rank {free.nvars}, size {free.size}"]
        from .terms import format_term

        lines += [f"{i}: {format_term(w)}" for i, w in enumerate(free.witnesses)]
        write_output("\n".join(lines), args.out)
    else:
        write_output(dump_json(free_dump_json(free)), args.out)
    return EXIT_OK


def cmd_lattice(args) -> int:
    variety, (target,) = _load_subjects(args, 1)
    free = variety.free(args.rank, args.cap)
    lat = closed_lattice(free, target, args.cap)
    if args.format == "dot":
        write_output(lattice_dot(lat), args.out)
    elif args.format == "text":
        from .geometry import partition_encoding

        lines = [f"{len(lat)} closed congruences"]
        lines += [partition_encoding(c.partition) for c in lat]
        write_output("\n".join(lines), args.out)
    else:
        write_output(dump_json(lattice_json(lat)), args.out)
    return EXIT_OK


def cmd_check_words(args) -> int:
    variety = load_variety_file(args.variety)
    ws = load_word_file(args.words, variety.signature)
    n_max = args.nmax if args.nmax is not None else default_n_max(variety.signature)
    try:
        res = check_op2(ws, variety, n_max, args.cap)
    except CapExceeded as exc:
        write_output(dump_json({"verdict": "inconclusive", "reason": str(exc)}), args.out)
        return EXIT_INCONCLUSIVE
    doc = {
        "verdict": "pass" if res.ok else "fail",
        "n_max": res.n_max,
        "ranks": list(res.ranks),
    }
    if not res.ok:
        doc["failed_rank"] = res.failed_rank
        doc["stage"] = res.stage
        doc["witness"] = res.witness
    write_output(dump_json(doc), args.out)
    return EXIT_OK if res.ok else EXIT_FALSE


def cmd_geom_eq(args) -> int:
    variety, (h1, h2) = _load_subjects(args, 2)
    geo = geom_equivalent(h1, h2, variety, args.nmax, args.cap)
    cert = EquivalenceCertificate(
        verdict=geo.verdict(),
        bounds={"n_max": geo.n_max},
        evidence={"per_rank": geo.per_rank, "witness": geo.witness},
    )
    write_output(dump_json(certificate_json(cert)), args.out)
    return EXIT_OK if geo.equivalent else EXIT_FALSE


def cmd_auto_eq(args) -> int:
    variety, (h1, h2) = _load_subjects(args, 2)
    cert = auto_equivalent_search(
        h1, h2, variety, args.depth, args.nmax, args.cap
    )
    write_output(dump_json(certificate_json(cert)), args.out)
    if cert.verdict == "automorphic":
        return EXIT_OK
    if cert.verdict == "refuted-at-bounds":
        return EXIT_FALSE
    return EXIT_INCONCLUSIVE


def cmd_verify(args) -> int:
    if args.variety is None:
        blocks = None
    else:
        variety = load_variety_file(args.variety)
        path = args.algebras or args.variety
        sig, algebras, _ = load_algebra_file(path)
        if sig != variety.signature:
            raise EngineError("algebra file signature differs from the variety file")
        if not algebras:
            raise EngineError("empty corpus")
        n_max = args.nmax if args.nmax is not None else default_n_max(sig)
        blocks = [
            Block("custom", variety, algebras, n_max, args.depth, cap=args.cap)
        ]
    report = run_verification(blocks)
    if args.format == "json":
        write_output(dump_json(report.render_json()), args.out)
    else:
        write_output(report.render_text(), args.out)
    return EXIT_OK if report.ok else EXIT_FALSE


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="uageom",
        description="Equation geometry over finite algebras: free algebras, "
        "closed-congruence lattices, star algebras, equivalence certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("free", help="build a free algebra and dump it")
    _add_common(p, rank=True)
    p.set_defaults(fn=cmd_free)

    p = sub.add_parser("lattice", help="closed-congruence lattice dump")
    _add_common(p, rank=True, names=True, algebras=True)
    p.set_defaults(fn=cmd_lattice)

    p = sub.add_parser("check-words", help="verify a word system (bounded)")
    _add_common(p, words=True, bounds=True)
    p.set_defaults(fn=cmd_check_words)

    p = sub.add_parser("geom-eq", help="geometric equivalence of two algebras")
    _add_common(p, bounds=True, names=True, algebras=True)
    p.set_defaults(fn=cmd_geom_eq)

    p = sub.add_parser("auto-eq", help="search for an equivalence certificate")
    _add_common(p, bounds=True, names=True, algebras=True)
    p.set_defaults(fn=cmd_auto_eq)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--variety", help="variety file (default: built-in corpus)")
    p.add_argument("--algebras", help="corpus file (default: the variety file)")
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(fn=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
