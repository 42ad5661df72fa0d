#!/usr/bin/env python3
"""Command-line front end: build, simulate, verify and report line QFT circuits."""

import sys
from pathlib import Path
import argparse
import itertools
import json
import logging

# Add the project root to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np

from src.analysis.bounds import error_budget
from src.analysis.oracles import sample_uniform_state
from src.analysis.reports import resource_table, sweep, write_report
from src.analysis.verification import run_suites, transform_error
from src.builders.catalog import KINDS, build_circuit
from src.builders.qft import DIRECTIONS, MCM_OPTIONS, QftVariant
from src.circuit.ir import Circuit, RegisterMap
from src.circuit.schedule import audit_connectivity, depth_report
from src.circuit.serialization import load_circuit, save_circuit
from src.config.settings import settings
from src.errors import ConfigurationError, QftLineError
from src.simulation.states import embed, fourier_state, prepare_basis, shot_to_dict, state_distance
from src.simulation.statevector import SimMode, SimOptions, StateVector, run

# Set up logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

KIND_ALIASES = {"adder": "add", "qft": "qft-uni", "longrange": "longrange-cx"}


def parse_range(text: str):
    """``"3"`` -> [3]; ``"2..8"`` -> [2, ..., 8]; ``"1,4,9"`` -> [1, 4, 9]."""
    values = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise ConfigurationError(f"empty range {text!r}")
    return values


def _kind(name: str) -> str:
    kind = KIND_ALIASES.get(name, name)
    if kind not in KINDS:
        raise ConfigurationError(f"unknown builder kind {name!r}; expected one of {KINDS}")
    return kind


def _assignment(text: str):
    if "=" not in text:
        raise ConfigurationError(f"expected REG=VALUE, got {text!r}")
    name, value = text.split("=", 1)
    return name.strip(), int(value, 0)


def _write_json(doc, path) -> None:
    if path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info(f"Results written to {path}")
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


def cmd_build(args) -> int:
    kind = _kind(args.kind)
    variant = None
    if kind in ("qft-uni", "qft-general"):
        variant = QftVariant(
            kind="general" if kind == "qft-general" else "uni",
            direction=args.direction,
            mcm_opt=args.mcm_opt,
            epsilon=args.epsilon,
        )
    seed = settings.resolve_seed(args.seed, required=kind == "qft-general")
    circuit = build_circuit(
        kind,
        args.n,
        epsilon=args.epsilon,
        k=args.k,
        k_max=args.k_max,
        exact=args.exact,
        adjoint=args.adjoint,
        constant=args.classical_c,
        seed=seed,
        variant=variant,
        gadgets=not args.no_gadgets,
    )
    summary = {
        "builder": kind,
        "n": args.n,
        "width": circuit.width,
        "clbits": circuit.n_clbits,
        "depth": depth_report(circuit).to_dict(),
        "connectivity_violations": len(audit_connectivity(circuit)),
    }
    if "budget" in circuit.metadata:
        summary["budget"] = circuit.metadata["budget"]
    elif args.epsilon is not None and kind in ("qfs", "fpe"):
        summary["budget"] = error_budget(args.n, args.epsilon).to_dict()
    if args.out:
        save_circuit(circuit, args.out)
        summary["out"] = str(args.out)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _initial_state(args, circuit: Circuit, seed) -> StateVector:
    registers = circuit.registers
    if args.basis:
        values = dict(_assignment(item) for item in args.basis)
        return prepare_basis(registers, width=circuit.width, **values)
    if args.fourier:
        name, j = _assignment(args.fourier)
        return fourier_state(j, name, registers, width=circuit.width, sign=-1 if args.conjugate else 1)
    if args.uniform:
        if seed is None:
            raise ConfigurationError("--uniform needs a seed: pass --seed or set QFTLINE_SEED")
        positions = circuit.metadata.get("input_register", registers.positions("A"))
        return sample_uniform_state(len(positions), RegisterMap({"A": positions}), seed, width=circuit.width)
    if args.state_file:
        vector = np.load(args.state_file)
        positions = registers.positions(args.state_register)
        return embed(vector, positions, circuit.width)
    return StateVector.zero(circuit.width)


def cmd_simulate(args) -> int:
    circuit = load_circuit(args.circuit)
    seeds = parse_range(args.seed) if args.seed else None
    if seeds is None:
        fallback = settings.resolve_seed(None, required=args.mode == "sampled")
        seeds = [fallback]
    initial = _initial_state(args, circuit, seeds[0])
    if initial.width > circuit.width:
        circuit = circuit.widened(initial.width)

    shots, finals = [], []
    for seed in seeds:
        final, record = run(circuit, initial, SimOptions(mode=SimMode(args.mode), seed=seed))
        finals.append(final)
        shots.append(shot_to_dict(record, final, top=args.top))
    result = {"circuit": str(args.circuit), "mode": args.mode, "width": finals[0].width, "shots": shots}

    if args.ref_oracle:
        if "input_register" not in circuit.metadata:
            raise ConfigurationError("--ref-oracle needs a QFT circuit with input/output registers")
        result["oracle_error"] = [transform_error(circuit, initial, seed) for seed in seeds]
    if args.check_outcome_independence:
        distances = [
            state_distance(u, v).phase_aligned for u, v in itertools.combinations(finals, 2)
        ]
        result["max_pairwise_distance"] = max(distances, default=0.0)
        logger.info(f"Max pairwise distance over {len(seeds)} seeds: {result['max_pairwise_distance']:.3e}")
    _write_json(result, args.out)
    return 0


def cmd_verify(args) -> int:
    options = {}
    if args.epsilon is not None:
        options["epsilon"] = args.epsilon
    report = run_suites(args.suite, args.max_n, **options)
    _write_json(report.to_dict(), args.out)
    for failure in report.failures:
        logger.error(f"FAILED {failure.name}: {failure.measured}")
    logger.info(f"{len(report.results)} criteria, {len(report.failures)} failure(s)")
    return 0 if report.passed else 1


def cmd_report(args) -> int:
    n_values = parse_range(args.n)
    seed = settings.resolve_seed(args.seed, required=False) or 0
    if args.kind == "all":
        if args.epsilon is None:
            raise ConfigurationError("--kind all needs an explicit --epsilon")
        table = resource_table(n_values, args.epsilon, quiet=args.quiet, seed=seed)
    else:
        table = sweep(
            _kind(args.kind),
            n_values,
            epsilon=args.epsilon,
            measure=args.measure,
            seed=seed,
            quiet=args.quiet,
            k=args.k,
            k_max=args.k_max,
        )
    out = args.out or settings.reports_dir / f"{args.kind}.csv"
    write_report(table, out)
    if not args.quiet:
        print(table.to_string(index=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Log-depth approximate QFT circuits on a qubit line')
    sub = parser.add_subparsers(dest='command', required=True)

    build = sub.add_parser('build', help='Synthesize a circuit and print its resources')
    build.add_argument('--kind', type=str, required=True, help=f'Builder kind, one of {", ".join(KINDS)}')
    build.add_argument('--n', type=int, required=True, help='Register size (block size for small-qft, distance for longrange-cx)')
    build.add_argument('--epsilon', type=float, help='Error target (required for qft-uni and qft-general)')
    build.add_argument('--k', type=int, help='Override the FPE block size')
    build.add_argument('--k-max', type=int, help='Override the QFS truncation')
    build.add_argument('--exact', action='store_true', help='Build the untruncated QFS')
    build.add_argument('--adjoint', action='store_true', help='Adjoint (QFS, small-qft, add) or conjugate (fpe) variant')
    build.add_argument('--classical-c', type=int, help='Classical operand for add (width <= 3n)')
    build.add_argument('--no-gadgets', action='store_true', help='Adder without long-range gadgets')
    build.add_argument('--direction', choices=DIRECTIONS, default='forward', help='QFT construction direction (default: forward)')
    build.add_argument('--mcm-opt', choices=MCM_OPTIONS, default='none', help='Mid-circuit measurement option (default: none)')
    build.add_argument('--seed', type=int, help='Seed for the general offsets (default: QFTLINE_SEED)')
    build.add_argument('--out', type=str, help='Circuit JSON output path')
    build.set_defaults(func=cmd_build)

    simulate = sub.add_parser('simulate', help='Run a circuit JSON file')
    simulate.add_argument('--circuit', type=str, required=True, help='Circuit JSON file')
    inputs = simulate.add_mutually_exclusive_group()
    inputs.add_argument('--basis', action='append', metavar='REG=VAL', help='Basis value for a register (repeatable)')
    inputs.add_argument('--fourier', metavar='REG=J', help='Fourier state |phi(J)> on a register')
    inputs.add_argument('--uniform', action='store_true', help='Seeded uniform input on the input register')
    inputs.add_argument('--state-file', type=str, help='.npy amplitudes for --state-register')
    simulate.add_argument('--state-register', default='A', help='Register for --state-file (default: A)')
    simulate.add_argument('--conjugate', action='store_true', help='Use |phi(-J)> with --fourier')
    simulate.add_argument('--mode', choices=[m.value for m in SimMode], default='sampled', help='Simulation mode (default: sampled)')
    simulate.add_argument('--seed', type=str, help='Seed or range like 1..50 (default: QFTLINE_SEED)')
    simulate.add_argument('--ref-oracle', action='store_true', help='Report the distance to the exact QFT')
    simulate.add_argument('--check-outcome-independence', action='store_true', help='Max pairwise distance of final states across seeds')
    simulate.add_argument('--top', type=int, default=8, help='Largest amplitudes to export (default: 8)')
    simulate.add_argument('--out', type=str, help='Result JSON path (default: stdout)')
    simulate.set_defaults(func=cmd_simulate)

    verify = sub.add_parser('verify', help='Run acceptance suites')
    verify.add_argument('--suite', nargs='+', default=['all'], help='Suite names or "all" (default: all)')
    verify.add_argument('--max-n', type=int, default=4, help='Largest register size to check (default: 4)')
    verify.add_argument('--epsilon', type=float, help='Error target passed to the suites')
    verify.add_argument('--out', type=str, help='Report JSON path (default: stdout)')
    verify.set_defaults(func=cmd_verify)

    report = sub.add_parser('report', help='Sweep resources into a CSV')
    report.add_argument('--kind', type=str, required=True, help='Builder kind or "all" for the resource table')
    report.add_argument('--n', type=str, required=True, help='Sizes, e.g. 2..8')
    report.add_argument('--epsilon', type=float, help='Error target for the QFT kinds')
    report.add_argument('--k', type=int, help='Override the FPE block size')
    report.add_argument('--k-max', type=int, help='Override the QFS truncation')
    report.add_argument('--measure', action='store_true', help='Simulate small instances against the exact QFT')
    report.add_argument('--seed', type=int, help='Seed for sampled inputs (default: QFTLINE_SEED or 0)')
    report.add_argument('--quiet', action='store_true', help='No progress bar or table echo')
    report.add_argument('--out', type=str, help=f'CSV (or .json) path (default: {settings.reports_dir}/<kind>.csv)')
    report.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    """Main entry point."""
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QftLineError as e:
        logger.error(f"Error in {args.command}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
