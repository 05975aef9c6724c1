"""Command-line interface: ``fragrecon <subcommand> ...``.

Exit codes: 0 success, 1 error or failed check, 2 unsolvable input or usage
error, 3 search limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as benchmod
from .assembler import Limits, format_trace, reconstruct, verify_tiling
from .errors import FragreconError, LimitExceeded, Unsolvable
from .fileio import format_fragments, parse_fasta, parse_fragments, read_fragments
from .overlap import exact_superstring_small, greedy_superstring, overlap_graph
from .parallel import ExecutorConfig
from .seqmodel import AlphabetMode, Sequence, guess_mode, make_fragment_set
from .shotgun import Instance, double_cut, random_cut_pair
from .suffixarray import build_index, build_naive, build_parallel

EXIT_OK, EXIT_FAIL, EXIT_UNSOLVABLE, EXIT_LIMIT = 0, 1, 2, 3

CONFIG_KEYS = {"workers", "chunk_size", "digit_bits", "seed"}


class CliError(Exception):
    """Reported on stderr; the process exits with status 1."""


# ---------------------------------------------------------------------------
# input helpers


def _load_sequence(path: str, alphabet: str) -> Sequence:
    raw = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    data = parse_fasta(raw, AlphabetMode.GENERIC)
    if alphabet == "auto":
        mode = guess_mode([data.upper()])
    else:
        mode = AlphabetMode(alphabet)
    if mode is AlphabetMode.DNA:
        data = data.upper()
    if not data:
        raise CliError(f"{path}: no sequence data")
    return Sequence(data, mode)


def _load_fragments(path: str, alphabet: str):
    datas = parse_fragments(sys.stdin.buffer.read()) if path == "-" else read_fragments(path)
    if not datas:
        raise CliError(f"{path}: no fragments")
    mode = guess_mode(datas) if alphabet == "auto" else AlphabetMode(alphabet)
    return make_fragment_set(datas, mode)


def _executor_config(args) -> ExecutorConfig:
    return ExecutorConfig(workers=args.workers, chunk_size=args.chunk_size, digit_bits=args.digit_bits)


def _write(out: str | None, data: bytes) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(out).write_bytes(data)


# ---------------------------------------------------------------------------
# subcommands


def cmd_shotgun(args) -> int:
    seq = _load_sequence(args.input, args.alphabet)
    a, b = random_cut_pair(len(seq), args.m, args.n, args.seed, args.min_gap)
    inst: Instance = double_cut(seq, a, b, shuffle_seed=args.seed + 1)
    _write(args.output, format_fragments(inst.fragments.datas))
    if args.output not in (None, "-"):
        Path(args.output + ".meta").write_bytes(inst.dump())
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    fs = _load_fragments(args.fragments, args.alphabet)
    index = None if args.naive else build_index(fs, _executor_config(args))
    limits = Limits(max_nodes=args.max_nodes)
    try:
        res = reconstruct(fs, limits, index)
    except Unsolvable as e:
        print(f"unsolvable: {e.reason}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    except LimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    st = res.stats
    if args.format == "json":
        doc = {
            "sequence": str(res.sequence),
            "nodes_expanded": st.nodes_expanded,
            "backtracks": st.backtracks,
            "max_depth": st.max_depth,
        }
        if args.emit_trace:
            doc["trace"] = [str(m) for m in res.trace]
        print(json.dumps(doc))
    else:
        print(res.sequence)
        print(f"# nodes_expanded={st.nodes_expanded} backtracks={st.backtracks} max_depth={st.max_depth}")
        if args.emit_trace:
            sys.stdout.write(format_trace(res.trace))
    return EXIT_OK


def cmd_overlap(args) -> int:
    fs = _load_fragments(args.fragments, args.alphabet)
    if args.action == "dump":
        sys.stdout.write(overlap_graph(fs).to_csv())
    elif args.action == "greedy":
        print(greedy_superstring(fs))
    else:
        print(exact_superstring_small(fs))
    return EXIT_OK


def cmd_build_sa(args) -> int:
    if args.fragments:
        text = _load_fragments(args.input, args.alphabet).concat
    else:
        text = _load_sequence(args.input, args.alphabet).data
    sa = build_naive(text) if args.naive else build_parallel(text, _executor_config(args))
    fmt = args.format or "bin"
    if fmt == "bin":
        data = sa.sa.astype("<u4").tobytes()
    elif fmt == "txt":
        data = "".join(f"{i}\n" for i in sa.tolist()).encode()
    else:
        raise CliError(f"build-sa supports --format bin or txt, not {fmt!r}")
    _write(args.output, data)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = args.sizes or list(benchmod.DEFAULT_SIZES)
    if args.strict_sizes:
        bad = [n for n in sizes if not benchmod.is_valid_size(n)]
        if bad:
            args.parser.error(f"sizes must be powers of two in [2^10, 2^20]: {bad}")
    if any(n < 1 for n in sizes):
        args.parser.error("sizes must be positive")
    progress = None
    if args.verbose:
        progress = lambda r: print(  # noqa: E731
            f"{r.op_name} n={r.n} workers={r.workers} rep={r.rep} {r.wall_time_ns / 1e9:.3f}s",
            file=sys.stderr,
        )
    records = benchmod.run_bench(
        sizes=sizes,
        workers=args.workers,
        ops=args.ops,
        reps=args.reps,
        seed=args.seed,
        chunk_size=args.chunk_size,
        digit_bits=args.digit_bits,
        unit=args.unit,
        progress=progress,
    )
    _write(args.output, benchmod.to_csv(records).encode())
    return EXIT_OK


def cmd_verify(args) -> int:
    fs = _load_fragments(args.fragments, args.alphabet)
    cand = _load_sequence(args.candidate, fs.mode.value)
    ok = verify_tiling(cand, fs)
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with workers, chunk_size, digit_bits, seed")
    common.add_argument("--chunk-size", type=_positive, default=None)
    common.add_argument("--digit-bits", type=int, choices=range(1, 9), default=None, metavar="{1..8}")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", default=None, help="output format (command specific)")
    common.add_argument(
        "--alphabet", choices=("auto", "dna", "generic"), default="auto",
        help="byte alphabet of the input (default: guess)",
    )
    one_worker = argparse.ArgumentParser(add_help=False)
    one_worker.add_argument("--workers", type=_positive, default=None)

    p = argparse.ArgumentParser(prog="fragrecon", description="Reassemble a sequence from two shotgun cuttings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("shotgun", parents=[common, one_worker], help="cut a sequence twice and shuffle the pieces")
    s.add_argument("input", help="FASTA or raw sequence file ('-' for stdin)")
    s.add_argument("-m", type=int, required=True, help="cuts in the first cutting")
    s.add_argument("-n", type=int, required=True, help="cuts in the second cutting")
    s.add_argument("--min-gap", type=_positive, default=1, help="minimum distance between breakpoints")
    s.add_argument("-o", "--output", help="fragment file; a .meta dump is written next to it")
    s.set_defaults(func=cmd_shotgun)

    s = sub.add_parser("reconstruct", parents=[common, one_worker], help="rebuild the sequence from fragments")
    s.add_argument("fragments")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--naive", action="store_true", help="scan all fragments for every query")
    mode.add_argument("--indexed", action="store_true", help="query a suffix array index (default)")
    s.add_argument("--emit-trace", action="store_true")
    s.add_argument("--max-nodes", type=_positive, default=Limits().max_nodes)
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("overlap", parents=[common, one_worker], help="superstring baseline")
    s.add_argument("action", choices=("dump", "greedy", "exact"))
    s.add_argument("fragments")
    s.set_defaults(func=cmd_overlap)

    s = sub.add_parser("build-sa", parents=[common, one_worker], help="write a suffix array")
    s.add_argument("input")
    s.add_argument("--fragments", action="store_true", help="input is a fragment file; index the joined text")
    s.add_argument("--naive", action="store_true", help="use the comparison-sort builder")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_build_sa)

    s = sub.add_parser("bench", parents=[common], help="time the parallel paths and write CSV")
    s.add_argument("--sizes", type=_positive, nargs="+")
    s.add_argument("--workers", type=_positive, nargs="+", default=None)
    s.add_argument("--ops", nargs="+", choices=benchmod.OPS, default=list(benchmod.OPS))
    s.add_argument("--reps", type=_positive, default=3)
    s.add_argument("--unit", choices=benchmod.UNITS, default="bases")
    s.add_argument("--strict-sizes", action="store_true", help="only powers of two in [2^10, 2^20]")
    s.add_argument("-o", "--output")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_bench, parser=s)

    s = sub.add_parser("verify", parents=[common, one_worker], help="check a candidate against the fragments")
    s.add_argument("candidate")
    s.add_argument("fragments")
    s.set_defaults(func=cmd_verify)
    return p


def _apply_config(args) -> None:
    """Fill unset options from ``--config``, then from built-in defaults."""
    conf = {}
    if args.config:
        conf = json.loads(Path(args.config).read_text())
        if not isinstance(conf, dict) or set(conf) - CONFIG_KEYS:
            raise CliError(f"config keys must be among {sorted(CONFIG_KEYS)}")
    defaults = {"workers": 1, "chunk_size": 1 << 15, "digit_bits": 4, "seed": 0}
    for key, default in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, conf.get(key, default))
    if args.command == "bench" and not isinstance(args.workers, list):
        args.workers = [args.workers]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if args.command == "reconstruct" and args.format not in (None, "text", "json"):
            raise CliError("reconstruct supports --format text or json")
        return args.func(args)
    except (CliError, FragreconError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
