"""Command-line entry point: run, recommend, translate and simulate."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .circuit import Circuit
from .errors import QBridgeError, UnboundParameter
from .pipeline import (
    ALGOS,
    PROFILE_ITERS,
    RunConfig,
    dumps_report,
    error_stage,
    load_spec,
    qcf_json,
    run_pipeline,
    translate,
)
from .recommender import RecommenderWeights
from .simulator import run_statevector, sample_counts

EXIT_OK, EXIT_USAGE, EXIT_STAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _weights(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be three numbers, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("weights take exactly three values: error,time,price")
    return parts


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbridge", description="Classical problem specs to recommended, executed quantum circuits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("spec", help="JSON problem specification")
        sp.add_argument("--weights", type=_weights, default=(0.6, 0.3, 0.1),
                        help="lambda weights for error,time,price (default 0.6,0.3,0.1)")
        sp.add_argument("--tau", type=float, default=0.5, help="minimum fidelity (default 0.5)")
        sp.add_argument("--shots", type=_positive, default=1000)
        sp.add_argument("--iters", type=_positive, default=None,
                        help="optimizer iterations (default: 500, or 50 with --profile quick)")
        sp.add_argument("--p", type=_positive, default=3, help="QAOA depth")
        sp.add_argument("--algo", choices=ALGOS, default="auto")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--devices", default=None, help="comma-separated device names (default: all)")
        sp.add_argument("--profile", choices=sorted(PROFILE_ITERS), default="default")
        sp.add_argument("--registry", default=None, help="device registry JSON (default: bundled)")
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
        sp.add_argument("--no-timings", action="store_true", help="omit wall-clock timings")

    common(sub.add_parser("run", help="full pipeline with simulated execution"))
    common(sub.add_parser("recommend", help="stop after ranking circuit-device pairs"))

    tr = sub.add_parser("translate", help="emit the quantum-compatible formats of a spec")
    tr.add_argument("spec")
    tr.add_argument("--out", default=None)

    sim = sub.add_parser("simulate", help="sample a circuit dump on the statevector simulator")
    sim.add_argument("circuit", help="circuit text dump")
    sim.add_argument("--shots", type=_positive, default=1000)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--out", default=None)
    return p


def _config(args) -> RunConfig:
    lam = args.weights
    try:
        weights = RecommenderWeights(lam[0], lam[1], lam[2], tau=args.tau)
    except ValueError as e:
        raise UsageError(str(e)) from None
    devices = tuple(d for d in args.devices.split(",") if d.strip()) if args.devices else None
    return RunConfig(weights=weights, shots=args.shots, iters=args.iters, p=args.p, algo=args.algo,
                     seed=args.seed, devices=devices, profile=args.profile, registry=args.registry)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _require_file(path: str) -> None:
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")


def _run(args, execute: bool) -> str:
    _require_file(args.spec)
    cfg = _config(args)
    try:
        res = run_pipeline(args.spec, cfg, execute_circuit=execute)
    except ValueError as e:  # bad device selection or algorithm flags
        raise UsageError(str(e)) from None
    return dumps_report(res.to_json(with_timings=not args.no_timings))


def _translate(args) -> str:
    _require_file(args.spec)
    doc, inst = load_spec(args.spec)
    return dumps_report({"schema": 1, "input": doc, "tag": inst.tag.display, "qcf": qcf_json(translate(inst))})


def _simulate(args) -> str:
    _require_file(args.circuit)
    try:
        circ = Circuit.loads(Path(args.circuit).read_text(encoding="utf-8"))
    except (ValueError, KeyError) as e:
        raise UsageError(f"cannot read circuit dump: {e}") from None
    if circ.is_parameterized:
        raise UnboundParameter("circuit has unbound parameters: " + ", ".join(sorted(circ.parameters)))
    measured = circ.measured_qubits or None
    counts = sample_counts(run_statevector(circ), measured, args.shots, args.seed)
    return dumps_report({"schema": 1, "qubits": circ.num_qubits, "shots": args.shots, "seed": args.seed,
                         "counts": dict(sorted(counts.counts.items()))})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("run", "recommend"):
            text = _run(args, execute=args.command == "run")
        elif args.command == "translate":
            text = _translate(args)
        else:
            text = _simulate(args)
    except UsageError as e:
        print(f"qbridge: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except QBridgeError as e:
        print(f"qbridge: {error_stage(e)} error: {e}", file=sys.stderr)
        return EXIT_STAGE
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
