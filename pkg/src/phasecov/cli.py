"""Command-line front end: ``phasecov {clone,sweep,optimize,discrepancy}``.

Exit codes: 0 success, 1 self-audit failure, 2 argument or domain error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

from . import sweep
from .errors import AuditError, PhaseCovError

EXIT_OK = 0
EXIT_AUDIT = 1
EXIT_USAGE = 2
EXIT_IO = 3

_PI_RE = re.compile(r"^\s*(?:([-+]?[\d.eE+-]+)\s*\*?\s*)?pi(?:\s*/\s*([\d.eE+-]+))?\s*$")


def parse_real(text: str) -> float:
    """Float, fraction ``p/q`` or multiple of pi (``pi``, ``pi/2``, ``3*pi/4``)."""
    m = _PI_RE.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    if "/" in text:
        p, q = text.split("/", 1)
        return float(p) / float(q)
    return float(text)


def _real(text: str) -> float:
    try:
        return parse_real(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def _range(text: str) -> tuple[float, float]:
    if ":" not in text:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")
    lo, hi = text.split(":", 1)
    return _real(lo), _real(hi)


def read_amplitudes(path: str) -> list[complex]:
    """One amplitude per non-blank line, written as ``re im`` (``im`` optional)."""
    amps = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) not in (1, 2):
            raise ValueError(f"{path}:{lineno}: expected 're im', got {line!r}")
        re_, im = float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0
        amps.append(complex(re_, im))
    if len(amps) < 2:
        raise ValueError(f"{path}: need at least 2 amplitudes, found {len(amps)}")
    return amps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasecov",
        description="Phase-covariant cloning machines for qubits and qudits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_machine(p, default="optimal"):
        p.add_argument("--machine", choices=sweep.MACHINES, default=default)
        p.add_argument("--mu", type=_real, help="machine parameter (implies --machine custom)")

    def add_out(p):
        p.add_argument("--out", help="output file (default: standard output)")

    clone = sub.add_parser("clone", help="evaluate one state on one machine")
    clone_sub = clone.add_subparsers(dest="system", required=True)
    cq = clone_sub.add_parser("qubit", help="qubit given by Bloch angles")
    cq.add_argument("--theta", type=_real, required=True)
    cq.add_argument("--phi", type=_real, default=0.0)
    add_machine(cq)
    add_out(cq)
    cd = clone_sub.add_parser("qudit", help="d-level state read from an amplitude file")
    cd.add_argument("--amplitudes", required=True, help="file with one 're im' pair per line")
    cd.add_argument("--d", type=int, help="expected dimension (checked against the file)")
    add_machine(cd)
    add_out(cd)

    sw = sub.add_parser("sweep", help="regenerate figure data")
    sw.add_argument("--target", choices=sweep.TARGETS, required=True)
    sw.add_argument("--grid", type=int, default=400)
    sw.add_argument("--range", type=_range, help="abscissa range lo:hi (theta, or A for fig5)")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    add_machine(sw)
    add_out(sw)

    opt = sub.add_parser("optimize", help="optimal machine for a theta (qubit) or A (qudit)")
    opt.add_argument("--theta", type=_real)
    opt.add_argument("--d", type=int, default=2)
    opt.add_argument("--a", type=_real)
    add_out(opt)

    disc = sub.add_parser("discrepancy", help="three-way D1 report at theta = pi/2, mu = 1/2")
    add_out(disc)
    return parser


def _machine(args) -> tuple[str, float | None]:
    if args.mu is not None and args.machine == "optimal":
        return "custom", args.mu
    return args.machine, args.mu


def _dispatch(args) -> str:
    if args.command == "clone":
        kind, mu = _machine(args)
        if args.system == "qubit":
            return sweep.to_json(sweep.run_point(args.theta, args.phi, kind, mu))
        amps = read_amplitudes(args.amplitudes)
        if args.d is not None and args.d != len(amps):
            raise PhaseCovError(f"--d {args.d} but {args.amplitudes} holds {len(amps)} amplitudes")
        return sweep.to_json(sweep.run_point_qudit(amps, kind, mu))

    if args.command == "sweep":
        kind, mu = _machine(args)
        kw = {}
        if args.range is not None:
            kw["a_range" if args.target == "fig5" else "theta_range"] = args.range
        spec = sweep.SweepSpec(
            target=args.target,
            grid_points=args.grid,
            machine=kind,
            mu=mu,
            output_format=args.format,
            **kw,
        )
        return sweep.run_sweep(spec).render()

    if args.command == "optimize":
        if args.d == 2 and args.theta is not None:
            return sweep.to_json(sweep.optimize_qubit(args.theta))
        if args.a is None:
            raise PhaseCovError("optimize needs --theta (qubit) or --a (with --d)")
        return sweep.to_json(sweep.optimize_qudit(args.d, args.a))

    return sweep.to_json(sweep.discrepancy_report())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _dispatch(args)
    except AuditError as exc:
        print(f"phasecov: audit failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except OSError as exc:
        print(f"phasecov: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PhaseCovError, ValueError) as exc:
        print(f"phasecov: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"phasecov: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
