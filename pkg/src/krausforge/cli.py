"""Command-line front end.

Subcommands::

    synth       synthesize a Kraus set for one model and write it as JSON
    sweep-time  error-vs-time sweep for several methods, CSV output
    sweep-n     error-vs-quadrature-size sweep, CSV output
    verify      run the invariant suite on a model
    extract     Choi-diagonalize the exact map into canonical operators

Exit codes: 0 success (and all checks passed, for ``verify``); 1 usage
error; 2 model validation or parse error; 3 invariant failure (``verify``
only). Output files are written atomically: to a temporary file in the
target directory, renamed on success.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import bench, kraus as _kraus
from .linalg import l2_distance
from .liouville import exact_map, first_order_map
from .model import ModelError, QuantumSystem, load_model_file
from .verify import run_invariant_suite

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage problems; this tool reserves 2
    # for model validation errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="krausforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    synth = sub.add_parser("synth", help="synthesize a Kraus set")
    synth.add_argument("--model", required=True, help="path to a model JSON file")
    synth.add_argument("--tau", type=float, required=True, help="evolution time (ns)")
    synth.add_argument("--n", type=int, default=None, help="override quadrature node count")
    synth.add_argument(
        "--quadrature",
        default=_kraus.MIDPOINT,
        choices=[_kraus.MIDPOINT, _kraus.TRAPEZOID_INTERIOR],
        help="quadrature rule (default midpoint)",
    )
    synth.add_argument("--out", required=True, help="output JSON path")

    sweep_time = sub.add_parser("sweep-time", help="error vs evolution time, CSV")
    sweep_time.add_argument("--model", required=True, help="path to a model JSON file")
    sweep_time.add_argument(
        "--methods",
        default="dphi,first_order,kraus:1,kraus:10,kraus:50",
        help="comma-separated method list; kraus:N selects N nodes",
    )
    sweep_time.add_argument("--tau-min", type=float, default=0.01)
    sweep_time.add_argument("--tau-max", type=float, default=4.0)
    sweep_time.add_argument("--points", type=int, default=60)
    sweep_time.add_argument("--out", required=True, help="output CSV path")

    sweep_n = sub.add_parser("sweep-n", help="error vs quadrature size, CSV")
    sweep_n.add_argument("--model", required=True, help="path to a model JSON file")
    sweep_n.add_argument(
        "--taus", default="1,0.1,0.01", help="comma-separated evolution times (ns)"
    )
    sweep_n.add_argument("--n-min", type=int, default=1)
    sweep_n.add_argument("--n-max", type=int, default=50)
    sweep_n.add_argument("--out", required=True, help="output CSV path")

    verify = sub.add_parser("verify", help="run the invariant suite on a model")
    verify.add_argument("--model", required=True, help="path to a model JSON file")
    verify.add_argument("--tau", type=float, default=1.0, help="evolution time (ns)")
    verify.add_argument("--seed", type=int, default=1234, help="seed for random probes")

    extract = sub.add_parser("extract", help="canonical operators of the exact map")
    extract.add_argument("--model", required=True, help="path to a model JSON file")
    extract.add_argument("--tau", type=float, required=True, help="evolution time (ns)")
    extract.add_argument(
        "--cutoff",
        type=float,
        default=_kraus.EXTRACTION_CUTOFF,
        help="drop Choi components below this magnitude",
    )
    extract.add_argument("--out", required=True, help="output JSON path")
    return parser


def _load(path: str) -> QuantumSystem:
    try:
        return load_model_file(path)
    except FileNotFoundError:
        raise ModelError("$", f"model file not found: {path}")


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=directory, suffix=".tmp", delete=False
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        os.unlink(handle.name)
        raise


def _cmd_synth(args) -> int:
    system = _load(args.model)
    ks = _kraus.synthesize(system, args.tau, n=args.n, quadrature=args.quadrature)
    _write_atomic(args.out, _kraus.kraus_set_to_json(ks))
    assembled = _kraus.assemble(ks)
    to_first = l2_distance(assembled.matrix, first_order_map(system, args.tau).matrix)
    to_exact = l2_distance(assembled.matrix, exact_map(system, args.tau).matrix)
    n_ops = 1 + sum(len(ops) for ops in ks.corrections)
    print(f"wrote {n_ops} operators to {args.out}")
    print(f"closure deficit:        {_kraus.closure_deficit(ks)!r}")
    print(f"distance to first_order: {to_first!r}")
    print(f"distance to exact:       {to_exact!r}")
    return 0


def _cmd_sweep_time(args) -> int:
    system = _load(args.model)
    methods = [m for m in args.methods.split(",") if m.strip()]
    grid = bench.default_tau_grid(args.tau_min, args.tau_max, args.points)
    rows = bench.sweep_time(system, grid, methods)
    _write_atomic(args.out, bench.rows_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_sweep_n(args) -> int:
    system = _load(args.model)
    taus = [float(t) for t in args.taus.split(",") if t.strip()]
    if args.n_min < 1 or args.n_max < args.n_min:
        raise ValueError("need 1 <= n-min <= n-max")
    rows = bench.sweep_quadrature(system, taus, range(args.n_min, args.n_max + 1))
    _write_atomic(args.out, bench.rows_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    system = _load(args.model)
    results = run_invariant_suite(system, args.tau, seed=args.seed)
    width = max(len(r.name) for r in results)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{result.name:<{width}}  {status}  {result.detail}")
    if all(r.passed for r in results):
        print("all checks passed")
        return 0
    failed = sum(not r.passed for r in results)
    print(f"{failed} check(s) failed", file=sys.stderr)
    return EXIT_INVARIANT


def _cmd_extract(args) -> int:
    system = _load(args.model)
    exact = exact_map(system, args.tau)
    pairs = _kraus.extract_canonical_kraus(_kraus.choi_reshuffle(exact), cutoff=args.cutoff)
    round_trip = l2_distance(
        _kraus.assemble_weighted(pairs, system.dimension).matrix, exact.matrix
    )
    doc = {
        "dim": system.dimension,
        "tau": args.tau,
        "cutoff": args.cutoff,
        "operators": [
            {
                "weight": weight,
                "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in op],
            }
            for weight, op in pairs
        ],
    }
    _write_atomic(args.out, json.dumps(doc, indent=2))
    print(f"wrote {len(pairs)} canonical operators to {args.out}")
    print(f"reassembly defect: {round_trip!r}")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "sweep-time": _cmd_sweep_time,
    "sweep-n": _cmd_sweep_n,
    "verify": _cmd_verify,
    "extract": _cmd_extract,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ModelError as exc:
        print(f"krausforge: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"krausforge: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"krausforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
