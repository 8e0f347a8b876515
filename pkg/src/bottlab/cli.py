"""Command-line front end: reproducible reports over the library.

Exit codes: 0 success, 2 symbol identity violation, 3 check failure,
4 spectral gap closed, 64 usage, 65 bad input data. Identical command,
flags and seed produce byte-identical stdout; progress and warnings go to
stderr. BOTTLAB_THREADS caps internal parallelism (default 1).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import approx, asymptotics, pairing
from .errors import (
    GapClosedError,
    ModelInconsistencyError,
    NonIntegerIndexError,
    SampleError,
    StabilityError,
    WindowError,
)
from .loring import GAP_MIN_DEFAULT
from .matrixcore import UnitaryMatrix, random_unitary
from .symbols import constant_triple, default_triple, validate_triple

EXIT_OK = 0
EXIT_SYMBOLS = 2
EXIT_CHECK = 3
EXIT_GAP = 4
EXIT_USAGE = 64
EXIT_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BOTTLAB_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bottlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-symbols", help="check the symbol triple identities on a grid")
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--sym-tol", type=float, default=1e-10)
    p.add_argument("--fconst", type=float, default=None,
                   help="test hook: replace the triple by f = const, g = h = 0")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", help="trace statistics of the clock/shift family over N")
    p.add_argument("--n-list", type=_int_list, default=[8, 16, 32, 64, 128])
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default=None, help="write the report to a file instead of stdout")
    p.add_argument("--plot", default=None, metavar="DIR",
                   help="also render figures into DIR")
    p.add_argument("--gap-min", type=float, default=GAP_MIN_DEFAULT)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("pairing", help="pair a unitary loop (JSON file) with u_t")
    p.add_argument("--loop", required=True, help="path to the loop JSON file")
    p.add_argument("--t", type=float, default=24.0)
    p.add_argument("--gap-min", type=float, default=GAP_MIN_DEFAULT)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("roundtrip", help="pair projection loops and compare with ranks")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--ranks", type=_int_list, default=[0, 1, 2, 3])
    p.add_argument("--t", type=float, default=24.0)
    p.add_argument("--per-rank", type=int, default=10)
    p.add_argument("--gap-min", type=float, default=GAP_MIN_DEFAULT)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("nearest", help="nearest-commuting search vs the certified floor")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=40)
    p.add_argument("--commuting-test", action="store_true",
                   help="run on a seeded exactly-commuting pair instead")
    p.add_argument("--gap-min", type=float, default=GAP_MIN_DEFAULT)
    p.add_argument("--seed", type=int, default=0)

    return parser


def _header(args) -> str:
    return f"# bottlab {args.command} seed={args.seed}"


def cmd_verify_symbols(args) -> int:
    triple = constant_triple(args.fconst) if args.fconst is not None else default_triple()
    report = validate_triple(triple, args.grid, args.sym_tol)
    print(_header(args))
    print(f"grid={report.grid_size} tol={report.tol:g}")
    print(f"sum rule  max |f^2+g^2+h^2-f| : {report.sum_rule_violation:.3e}")
    print(f"product   max |g*h|           : {report.product_rule_violation:.3e}")
    print(f"base point                    : {report.base_point_violation:.3e}")
    print(f"range outside [0,1]           : {report.range_violation:.3e}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_SYMBOLS


def _sweep_records(n_list, triple, gap_min):
    threads = _threads()
    if threads == 1 or len(n_list) <= 1:
        return asymptotics.sweep(n_list, triple, gap_min)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = pool.map(lambda n: asymptotics.sweep([n], triple, gap_min)[0], n_list)
        return list(rows)


def cmd_sweep(args) -> int:
    triple = default_triple()
    records = _sweep_records(args.n_list, triple, args.gap_min)
    if args.format == "csv":
        payload = asymptotics.to_csv(records)
    else:
        payload = json.dumps(asymptotics.to_rows(records), indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    print(_header(args), file=sys.stderr)
    for r in records:
        if r.flagged:
            print(f"# warning: N={r.N} gap closed at gap_min={args.gap_min:g}; index undefined",
                  file=sys.stderr)
        elif r.N < 8 and r.index != 1:
            print(f"# note: N={r.N} below the asymptotic regime (index={r.index})",
                  file=sys.stderr)
    if args.plot:
        from .figures import render_sweep_figures

        for path in render_sweep_figures(records, args.plot):
            print(f"# wrote {path}", file=sys.stderr)
    checks = asymptotics.run_step_checks(records, triple)
    failing = [name for name, ok in checks.items() if not ok]
    if failing:
        print(f"# check failure: {', '.join(failing)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_pairing(args) -> int:
    try:
        with open(args.loop) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"bottlab pairing: cannot read {args.loop}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        loop = pairing.loop_from_json(text)
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        print(f"bottlab pairing: malformed loop JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    triple = default_triple()
    result = pairing.pairing_index(loop, args.t, triple, args.gap_min)
    window = pairing.auto_window(loop, args.t)
    print(_header(args))
    print(f"loop: k={loop.k} degree={loop.degree} t={args.t:g}")
    print(f"window=[{window.m_min},{window.m_max}] (checked again at +8 margin)")
    print(f"index     : {result.index}")
    print(f"gap       : {result.gap:.12g}")
    print(f"defect    : {result.defect:.12g}")
    print(f"raw trace : {result.raw_trace:.12g}")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    triple = default_triple()
    rng = np.random.default_rng(args.seed)
    print(_header(args))
    all_ok = True
    for rank in args.ranks:
        hits = 0
        for _ in range(args.per_rank):
            p = pairing.random_projection(args.k, rank, rng)
            if pairing.roundtrip_check(p, args.t, triple, args.gap_min):
                hits += 1
        ok = hits == args.per_rank
        all_ok = all_ok and ok
        print(f"rank {rank}: {hits}/{args.per_rank} loops paired back to the rank"
              + ("" if ok else "  <-- FAIL"))
    print("PASS" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_CHECK


def _commuting_test_pair(n: int, seed: int):
    rng = np.random.default_rng(seed)
    w = random_unitary(n, rng)
    du = np.exp(2j * np.pi * rng.random(n))
    dv = np.exp(2j * np.pi * rng.random(n))
    u = UnitaryMatrix((w.a * du) @ w.a.conj().T)
    v = UnitaryMatrix((w.a * dv) @ w.a.conj().T)
    return u, v


def cmd_nearest(args) -> int:
    triple = default_triple()
    opts = approx.NearestOptions(max_iters=args.max_iters, restarts=args.restarts,
                                 seed=args.seed)
    print(_header(args))
    if args.commuting_test:
        u, v = _commuting_test_pair(args.n, args.seed)
        pair, dist = approx.nearest_commuting(u, v, opts)
        print(f"commuting test pair n={args.n}")
        print(f"heuristic distance : {dist:.12g}")
        print(f"converged          : {pair.converged}")
        return EXIT_OK if dist < 1e-6 else EXIT_CHECK
    rows = approx.epsilon_sweep([args.n], triple, opts, args.gap_min)
    row = rows[0]
    print(f"clock/shift pair n={row.n}")
    print(f"heuristic distance : {row.heuristic_distance:.12g}")
    print(f"epsilon_lower      : {row.epsilon_lower:.12g}")
    print(f"index              : {row.index}")
    print(f"converged          : {row.converged}")
    print(f"sound              : {row.sound}")
    return EXIT_OK if row.sound else EXIT_CHECK


_HANDLERS = {
    "verify-symbols": cmd_verify_symbols,
    "sweep": cmd_sweep,
    "pairing": cmd_pairing,
    "roundtrip": cmd_roundtrip,
    "nearest": cmd_nearest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except GapClosedError as exc:
        print(f"bottlab {args.command}: {exc}; try a larger t or smaller --gap-min",
              file=sys.stderr)
        return EXIT_GAP
    except SampleError as exc:
        print(f"bottlab {args.command}: bad loop data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except WindowError as exc:
        print(f"bottlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StabilityError, NonIntegerIndexError, ModelInconsistencyError) as exc:
        print(f"bottlab {args.command}: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
