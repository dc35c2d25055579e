"""Command-line driver: check, partition, oracle, xy-bench.

Exit codes: 0 success, 2 validation errors (malformed input, violated
preconditions), 3 sizing/convergence errors.  Primary outputs are
deterministic for identical invocations (timing fields excepted).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import checker, oracle, plotting, xy_benchmark
from .circuit import parse_circuit
from .errors import (ConvergenceError, IdCheckError, IndeterminateError,
                     SizingError, ValidationError)
from .lattice import ArrayShape, reclusive_partition


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_mode(raw: str) -> tuple[str, float]:
    if raw == "dense":
        return "dense", 0.0
    if raw.startswith("power:"):
        try:
            eps = float(raw.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad --mode value {raw!r}")
        if not 0 < eps < 1:
            raise ValidationError("power-method accuracy must be in (0, 1)")
        return "power", eps
    raise ValidationError(f"--mode must be 'dense' or 'power:EPS', got {raw!r}")


def _parse_sizes(raw: str) -> list[int]:
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ValidationError("--n range must be START:STOP:STEP")
        start, stop, step = (int(p) for p in parts)
        if step < 1 or stop < start:
            raise ValidationError("bad --n range")
        return list(range(start, stop + 1, step))
    return [int(p) for p in raw.split(",") if p]


def _polygon_point(spec: str, circuit):
    if spec == "zero":
        return checker.polygon_point_zero(circuit)
    if spec.startswith("product:"):
        path = spec.split(":", 1)[1]
        states = json.loads(_read_input(path))
        return checker.polygon_point_product_1d(circuit, states)
    if spec.startswith("value:"):
        try:
            re, im = (float(x) for x in spec.split(":", 1)[1].split(","))
        except ValueError:
            raise ValidationError("--opnorm value needs RE,IM")
        return checker.PolygonPoint(complex(re, im), "user-supplied")
    raise ValidationError(f"--opnorm must be zero, product:PATH or value:RE,IM,"
                          f" got {spec!r}")


def _cmd_check(args) -> int:
    circuit = parse_circuit(_read_input(args.input))
    mode, eps = _parse_mode(args.mode)
    if args.chunk_depth is not None:
        bound = checker.layered_bound(circuit, args.chunk_depth,
                                      args.cube_size, mode=mode,
                                      power_eps=eps, seed=args.seed,
                                      jobs=args.jobs)
        payload = {"layered_upper": bound, "chunk_depth": args.chunk_depth}
        print(json.dumps(payload, sort_keys=True) if args.format != "summary"
              else f"layered_upper={bound:.12g} (chunks of {args.chunk_depth})")
        return 0
    report = checker.check_circuit(circuit, args.cube_size, mode=mode,
                                   power_eps=eps, seed=args.seed,
                                   jobs=args.jobs,
                                   assume_delta_lt2=(args.regime == "delta-lt-2"))
    payload = report.to_dict()
    payload["estimate"] = (checker.general_estimate(report) if args.general
                           else report.gamma)
    if args.opnorm is not None:
        point = _polygon_point(args.opnorm, circuit)
        payload["opnorm"] = {
            "t": [point.t.real, point.t.imag],
            "provenance": point.provenance,
            "gamma_op": checker.opnorm_estimate(payload["estimate"], point),
        }
    if args.plot:
        plotting.render_report_figure(report, args.plot)
    if args.format == "summary":
        line = report.summary()
        if "opnorm" in payload:
            line += f" gamma_op={payload['opnorm']['gamma_op']:.12g}"
        print(line)
    elif args.format == "csv":
        print("gamma,early_exit,diamond_lower,diamond_upper,general_upper,estimate")
        b = report.bounds
        print(f"{report.gamma!r},{int(report.early_exit)},{b.diamond_lower!r},"
              f"{b.diamond_upper!r},{b.general_upper!r},{payload['estimate']!r}")
    else:
        print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_partition(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(","))
    partition = reclusive_partition(ArrayShape(dims), args.cube_size)
    print(partition.to_json())
    return 0


def _cmd_oracle(args) -> int:
    circuit = parse_circuit(_read_input(args.input))
    delta, opnorm, count = oracle.circuit_distances(circuit)
    print(json.dumps({"delta": delta, "opnorm": opnorm,
                      "phase_count": count}, sort_keys=True))
    return 0


def _cmd_xy_bench(args) -> int:
    mode, eps = _parse_mode(args.mode)
    rows = xy_benchmark.run_experiment(
        _parse_sizes(args.n), args.tau, args.cube_size,
        cross_check=args.cross_check, mode=mode, power_eps=eps,
        seed=args.seed, jobs=args.jobs)
    text = xy_benchmark.rows_to_csv(rows, cross_check=args.cross_check)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot:
        plotting.render_benchmark_figure(rows, args.plot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="idcheck",
        description="Certified identity-check estimators for shallow local "
                    "quantum circuits")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--mode", default="dense",
                        help="dense (certified) or power:EPS (approximate)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=int, default=1,
                        help="worker threads for per-cube computations")

    c = sub.add_parser("check", help="certify a circuit's distance to identity")
    c.add_argument("--input", required=True, help="circuit JSON path or -")
    c.add_argument("--cube-size", type=int, default=None,
                   help="partition cube size (default: worst-case 2*D*depth)")
    c.add_argument("--general", action="store_true",
                   help="report the 1.16-rescaled general-case estimate")
    c.add_argument("--regime", choices=["delta-lt-2"], default=None,
                   help="assert the circuit is known to be at distance < 2")
    c.add_argument("--opnorm", default=None,
                   help="operator-norm point source: zero | product:PATH | "
                        "value:RE,IM")
    c.add_argument("--chunk-depth", type=int, default=None,
                   help="divide-and-conquer chunk depth for deep circuits")
    c.add_argument("--format", choices=["json", "summary", "csv"],
                   default="json")
    c.add_argument("--plot", default=None, help="save per-cube angle figure")
    common(c)
    c.set_defaults(func=_cmd_check)

    q = sub.add_parser("partition", help="emit a reclusive partition as JSON")
    q.add_argument("--dims", required=True, help="comma-separated array dims")
    q.add_argument("--cube-size", type=int, required=True)
    q.set_defaults(func=_cmd_partition)

    o = sub.add_parser("oracle", help="brute-force distances of a small circuit")
    o.add_argument("--input", required=True, help="circuit JSON path or -")
    o.set_defaults(func=_cmd_oracle)

    x = sub.add_parser("xy-bench", help="run the XY Trotter benchmark")
    x.add_argument("--n", required=True,
                   help="chain lengths: START:STOP:STEP or comma list")
    x.add_argument("--tau", type=float, required=True)
    x.add_argument("--cube-size", type=int, default=4)
    x.add_argument("--cross-check", action="store_true",
                   help="add brute-force oracle columns (small n only)")
    x.add_argument("--out", default=None, help="write CSV here instead of stdout")
    x.add_argument("--plot", default=None, help="save comparison figure")
    common(x)
    x.set_defaults(func=_cmd_xy_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SizingError, ConvergenceError, IndeterminateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except IdCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
