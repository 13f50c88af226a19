"""Command-line front end: rank, kakeya, reduce, and bounds subcommands.

Reports are JSON objects with sorted keys on stdout; diagnostics go to
stderr.  Exit codes: 0 success, 1 usage or resource errors, 2 mathematical
verification failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bounds as bounds_mod
from . import cyclo, gf_rank, kakeya
from .incidence import MatrixKind, export_matrix, stream_matrix
from .ring import make_ring

SCHEMA_VERSION = 1
DEFAULT_MAX_COLS = 1 << 21

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


class VerificationFailure(Exception):
    """A mathematical check failed; the report is still emitted."""


def _emit(command: str, parameters: dict, results: dict, started: float) -> None:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "results": results,
        "elapsed_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }
    json.dump(report, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _add_ring_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--p", type=int, required=required, help="prime modulus base")
    parser.add_argument("--k", type=int, required=required, help="prime power exponent")
    parser.add_argument("--n", type=int, required=required, help="ambient dimension")


def _add_guard_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--max-mem",
        type=int,
        default=gf_rank.DEFAULT_MEM_LIMIT,
        help="cap on eliminator basis storage in bytes (default 2 GiB)",
    )
    parser.add_argument(
        "--max-cols",
        type=int,
        default=DEFAULT_MAX_COLS,
        help="cap on matrix column count q^n (default 2^21)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker cap; results are identical for any setting",
    )


def _check_cols(cols: int, max_cols: int) -> None:
    if cols > max_cols:
        raise ValueError(f"column count {cols} exceeds --max-cols {max_cols}")


def _cmd_rank(args: argparse.Namespace, started: float) -> int:
    ring = make_ring(args.p, args.k)
    kind = MatrixKind.parse(args.matrix)
    include_zero_b = not args.no_zero_b
    stream = stream_matrix(kind, ring, args.n, include_zero_b=include_zero_b)
    _check_cols(stream.col_count, args.max_cols)
    if args.export:
        with open(args.export, "w", encoding="utf-8", newline="\n") as fp:
            export_matrix(
                stream_matrix(kind, ring, args.n, include_zero_b=include_zero_b),
                fp,
                args.format,
            )
    report = gf_rank.rank_streaming(stream, ring.p, max_mem_bytes=args.max_mem)
    _emit(
        "rank",
        {
            "matrix": kind.value,
            "p": args.p,
            "k": args.k,
            "n": args.n,
            "include_zero_b": include_zero_b,
            "export": args.export,
            "format": args.format if args.export else None,
        },
        {
            "rows": stream.row_count,
            "cols": stream.col_count,
            "rank": report.rank,
            "rows_consumed": report.rows_consumed,
        },
        started,
    )
    return EXIT_OK


def _witness_summary(witness: kakeya.KakeyaWitness) -> dict:
    return {
        "p": witness.ring.p,
        "k": witness.ring.k,
        "n": witness.n,
        "size": witness.size,
        "directions": len(witness.assignment),
    }


def _cmd_kakeya(args: argparse.Namespace, started: float) -> int:
    if args.mode == "verify":
        if not args.infile:
            raise ValueError("kakeya verify requires --in FILE")
        with open(args.infile, encoding="utf-8") as fp:
            data = json.load(fp)
        witness = kakeya.parse_witness_dict(data)
        if args.p is not None and (witness.ring.p, witness.ring.k, witness.n) != (
            args.p,
            args.k,
            args.n,
        ):
            raise ValueError("witness file parameters disagree with --p/--k/--n")
        outcome = kakeya.verify_kakeya(witness.points, witness.ring, witness.n)
        if isinstance(outcome, kakeya.UncoveredDirection):
            _emit(
                "kakeya",
                {"mode": "verify", "in": args.infile},
                {
                    "ok": False,
                    "uncovered_direction": list(outcome.direction),
                    "size": len(witness.points),
                },
                started,
            )
            raise VerificationFailure(
                f"no line in direction {outcome.direction} is contained in the set"
            )
        _emit(
            "kakeya",
            {"mode": "verify", "in": args.infile},
            {"ok": True, "uncovered_direction": None, **_witness_summary(outcome)},
            started,
        )
        return EXIT_OK

    if args.p is None or args.k is None or args.n is None:
        raise ValueError(f"kakeya {args.mode} requires --p, --k and --n")
    ring = make_ring(args.p, args.k)
    if args.mode == "greedy":
        witness = kakeya.greedy_kakeya(ring, args.n)
        results = {**_witness_summary(witness), "optimal": None}
    else:
        found = kakeya.exact_min_kakeya(ring, args.n, budget=args.budget)
        witness = found.witness
        results = {**_witness_summary(witness), "optimal": found.optimal}
    if args.out:
        kakeya.save_witness(witness, args.out)
        results["out"] = args.out
    _emit(
        "kakeya",
        {"mode": args.mode, "p": args.p, "k": args.k, "n": args.n},
        results,
        started,
    )
    return EXIT_OK


def _cmd_reduce(args: argparse.Namespace, started: float) -> int:
    ring = make_ring(args.p, args.k)
    if args.kakeya:
        witness = kakeya.load_witness(args.kakeya)
        if (witness.ring, witness.n) != (ring, args.n):
            raise ValueError("witness file parameters disagree with --p/--k/--n")
    else:
        witness = kakeya.greedy_kakeya(ring, args.n)
    report = cyclo.verify_rank_chain(witness, skip_cyclo_rank=args.skip_cyclo_rank)
    _emit(
        "reduce",
        {
            "mode": "verify",
            "p": args.p,
            "k": args.k,
            "n": args.n,
            "kakeya": args.kakeya,
            "skip_cyclo_rank": args.skip_cyclo_rank,
        },
        {
            "identity_ok": report.identity_ok,
            "entries_checked": report.entries_checked,
            "specialization_matches": report.specialization_matches,
            "rank_p_a": report.rank_p_a,
            "cyclo_rank": report.cyclo_rank_m,
            "cyclo_skipped": report.cyclo_skipped,
            "size_s": report.size_s,
            "chain_ok": report.chain_ok,
            "ok": report.ok,
        },
        started,
    )
    if not report.ok:
        raise VerificationFailure("rank reduction verification failed")
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"range must look like a..b, got {text!r}")
    start, stop = int(lo), int(hi)
    if stop < start:
        raise ValueError(f"empty range {text!r}")
    return list(range(start, stop + 1))


def _cmd_bounds(args: argparse.Namespace, started: float) -> int:
    ks = _parse_range(args.k)
    ns = _parse_range(args.n)
    measured: dict[tuple[int, int], int] = {}
    if args.with_rank:
        for k in ks:
            ring = make_ring(args.p, k)
            for n in ns:
                stream = stream_matrix(MatrixKind.A, ring, n)
                if stream.col_count > args.max_cols:
                    continue
                measured[(k, n)] = gf_rank.rank_streaming(
                    stream, ring.p, max_mem_bytes=args.max_mem
                ).rank
    rows = bounds_mod.bounds_table(args.p, ks, ns, measured_ranks=measured)
    if args.csv:
        sys.stdout.write(bounds_mod.rows_to_csv(rows))
        return EXIT_OK
    _emit(
        "bounds",
        {
            "p": args.p,
            "k": args.k,
            "n": args.n,
            "with_rank": args.with_rank,
        },
        {
            "rows": [
                {
                    "p": r.p,
                    "k": r.k,
                    "n": r.n,
                    "admissible_s": r.admissible_s,
                    "lt1": r.lt1,
                    "lt2": r.lt2,
                    "lt_min": r.lt_min,
                    "main_bound": bounds_mod.format_cell(r.main_bound) or None,
                    "main_ceiling": r.main_ceiling,
                    "w_lower": r.w_lower,
                    "a_lower": bounds_mod.format_cell(r.a_lower),
                    "a_lower_vacuous": r.a_lower_vacuous,
                    "measured_rank": r.measured_rank,
                }
                for r in rows
            ]
        },
        started,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkrank",
        description="Exact F_p-ranks of point-hyperplane incidences over Z/p^k Z",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="stream a matrix into the rank engine")
    rank.add_argument(
        "--matrix", required=True, choices=[k.value for k in MatrixKind]
    )
    _add_ring_args(rank)
    rank.add_argument(
        "--no-zero-b",
        action="store_true",
        help="exclude the b = 0 row from W",
    )
    rank.add_argument("--export", default=None, help="also export the matrix here")
    rank.add_argument(
        "--format", choices=["coordinate", "dense01"], default="coordinate"
    )
    _add_guard_args(rank)
    rank.set_defaults(func=_cmd_rank)

    kak = sub.add_parser("kakeya", help="construct or verify Kakeya witnesses")
    kak.add_argument("mode", choices=["greedy", "exact", "verify"])
    _add_ring_args(kak, required=False)
    kak.add_argument("--in", dest="infile", default=None, help="witness JSON to verify")
    kak.add_argument("--out", default=None, help="write the witness JSON here")
    kak.add_argument(
        "--budget",
        type=int,
        default=kakeya.DEFAULT_SEARCH_BUDGET,
        help="cap on the exact search assignment space",
    )
    _add_guard_args(kak)
    kak.set_defaults(func=_cmd_kakeya)

    red = sub.add_parser("reduce", help="verify the Kakeya rank reduction pipeline")
    red.add_argument("mode", choices=["verify"])
    _add_ring_args(red)
    red.add_argument("--kakeya", default=None, help="witness JSON (default: greedy)")
    red.add_argument("--skip-cyclo-rank", action="store_true")
    _add_guard_args(red)
    red.set_defaults(func=_cmd_reduce)

    bnd = sub.add_parser("bounds", help="tabulate closed-form bounds")
    bnd.add_argument("mode", choices=["table"])
    bnd.add_argument("--p", type=int, required=True)
    bnd.add_argument("--k", required=True, help="k range, a..b")
    bnd.add_argument("--n", required=True, help="n range, a..b")
    bnd.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    bnd.add_argument(
        "--with-rank",
        action="store_true",
        help="measure rank_p(A) where size guards permit",
    )
    _add_guard_args(bnd)
    bnd.set_defaults(func=_cmd_bounds)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except (VerificationFailure, kakeya.WitnessVerificationError) as exc:
        print(f"pkrank: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (
        ValueError,
        OSError,
        json.JSONDecodeError,
        kakeya.BudgetExceededError,
        gf_rank.MemoryLimitError,
        cyclo.SizeGuardExceeded,
    ) as exc:
        print(f"pkrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
