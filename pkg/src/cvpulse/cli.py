"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import circuit, weyl
from .crmodel import fidelity_sweep
from .device import load_device_config
from .linalg import parse_matrix, phase_distance
from .pulse import build_two_qubit_schedule, total_time
from .synth import SynthesisProblem, synthesize

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
VERIFY_TOL = 1e-9


class InputError(Exception):
    pass


def _gate_matrix(name: str) -> np.ndarray:
    try:
        return circuit.named_target(name)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise InputError("--step must be positive")
    if lo > hi:
        raise InputError("--min must not exceed --max")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 10) for i in range(n)]


def _fmt_num(x: float) -> str:
    return format(x, ".10g")


def cmd_sweep(args) -> int:
    kind = args.kind.upper()
    if args.nominal is not None:
        nominal = args.nominal
    elif args.config:
        nominal = load_device_config(args.config).nominal(kind)
    else:
        raise InputError("give --config or --nominal for the nominal CR duration")
    if nominal <= 0:
        raise InputError("nominal duration must be positive")
    rows = fidelity_sweep(kind, nominal, _grid(args.min, args.max, args.step), workers=args.workers)
    text = "tau_d_ns,fidelity\n" + "".join(f"{_fmt_num(t)},{f:.6f}\n" for t, f in rows)
    if args.out:
        Path(args.out).write_text(text)
        best = max(rows, key=lambda r: r[1])
        print(f"wrote {len(rows)} rows to {args.out}; peak F = {best[1]:.6f} at {_fmt_num(best[0])} ns")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verdict(ok: bool) -> str:
    return "reachable" if ok else "unreachable"


def cmd_weyl(args) -> int:
    if args.matrix:
        u = parse_matrix(Path(args.matrix).read_text())
        label = args.matrix
    else:
        u = _gate_matrix(args.gate)
        label = args.gate
    p = weyl.canonical_coordinates(u)
    name = weyl.classify_named_point(p)
    print(f"gate: {label}")
    print("coordinates: [" + ", ".join(f"{x:.4f}" for x in p) + "]")
    print("coordinates/pi: [" + ", ".join(f"{x / np.pi:.4f}" for x in p) + "]")
    if name:
        print(f"named point: {name} ({weyl.NAMED_POINTS[name][1]})")
    else:
        print("named point: none")
    print(f"2×CV: {_verdict(weyl.reachable_two(np.pi / 4, p))}")
    print(f"3×CV: {_verdict(weyl.reachable_n(np.pi / 4, 3, p))}")
    print(f"2×CX: {_verdict(weyl.reachable_two(np.pi / 2, p))}")
    return EXIT_OK


def _load_circuit(args):
    if args.named:
        c = circuit.build_named(args.named, as_printed=getattr(args, "as_printed", False))
        return c, args.named
    if args.circuit:
        return circuit.load_circuit(args.circuit), args.circuit
    raise InputError("give --named or --circuit")


def cmd_verify(args) -> int:
    c, label = _load_circuit(args)
    target_name = args.target or circuit.NAMED_CIRCUIT_TARGET.get(args.named or "")
    if not target_name:
        raise InputError("--target is required for circuit files")
    target = _gate_matrix(target_name)
    if target.shape[0] != 2**c.num_qubits:
        raise InputError(f"target {target_name} does not match a {c.num_qubits}-qubit circuit")
    dist = phase_distance(circuit.eval_unitary(c), target)
    counts = c.counts()
    ok = dist <= VERIFY_TOL
    print(f"circuit: {label}")
    print(f"target: {target_name}")
    print(f"#CX: {counts['CX']}")
    print(f"#CV: {counts['CV'] + counts['CVdg']}")
    print(f"phase distance: {dist:.3e}")
    print(f"verdict: {'PASS' if ok else 'FAIL'} (tol {VERIFY_TOL:g})")
    if args.config:
        dev = load_device_config(args.config)
        t = circuit.circuit_gate_time(c, dev.timing, dev.gate_durations_ns, dev.layout(c.num_qubits))
        print(f"gate time: {t:.2f} ns")
    return EXIT_OK if ok else EXIT_VERIFY


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.replace("-", ",").split(","))
    except ValueError:
        raise InputError(f"--pair must look like '1,4', got {text!r}") from None
    return a, b


def cmd_schedule(args) -> int:
    dev = load_device_config(args.config)
    if args.named:
        c = circuit.build_named(args.named)
        sched = circuit.circuit_schedule(c, dev.timing, dev.gate_durations_ns, dev.layout(c.num_qubits))
        label = args.named
    elif args.kind:
        if args.pair:
            pair = _parse_pair(args.pair)
        else:
            pair = tuple(dev.layout(2) or next(iter(dev.timing.edges)))
        kind = {"cx": "CX", "cv": "CV", "cvdg": "CVdg"}[args.kind]
        sched = build_two_qubit_schedule(kind, dev.timing, pair)
        label = f"{kind}{pair}"
    else:
        raise InputError("give a gate kind (cx, cv, cvdg) or --named")
    text = sched.to_json() + "\n" if args.json else sched.to_text()
    if args.out:
        Path(args.out).write_text(text)
    elif not args.quiet:
        sys.stdout.write(text)
    print(f"{label} total: {total_time(sched):.2f} ns")
    return EXIT_OK


def cmd_synth(args) -> int:
    target = _gate_matrix(args.target)
    basis = _gate_matrix(args.basis)
    if target.shape != (4, 4) or basis.shape != (4, 4):
        raise InputError("synthesis needs two-qubit target and basis gates")
    prob = SynthesisProblem(target, basis, args.k, restarts=args.restarts, seed=args.seed)
    res = synthesize(prob, workers=args.workers)
    print(f"target: {args.target}  basis: {args.basis}  k: {args.k}")
    print(f"fidelity: {res.achieved_fidelity:.12f}")
    print(f"converged: {'yes' if res.converged else 'no'} (1-F <= {prob.tol:g})")
    bp = weyl.canonical_coordinates(basis)
    if abs(bp.b) < 1e-9 and abs(bp.c) < 1e-9 and bp.a > 1e-9:
        tp = weyl.canonical_coordinates(target)
        reach = weyl.reachable_two(bp.a, tp) if args.k == 2 else (
            weyl.reachable_n(bp.a, args.k, tp) if args.k >= 3 else None)
        if reach is not None:
            print(f"chamber predicate: {_verdict(reach)}")
    for j, (a0, a1) in enumerate(res.local_layers):
        fmt = lambda a: "(" + ", ".join(f"{x:+.6f}" for x in a) + ")"
        print(f"L{j}: q0 U3{fmt(a0)}  q1 U3{fmt(a1)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cvpulse", description="CV/CX pulse-level gate toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="trial-gate fidelity versus CR duration (CSV)")
    s.add_argument("kind", choices=["cv", "cx"])
    s.add_argument("--config")
    s.add_argument("--nominal", type=float, help="nominal CR duration in ns (overrides config)")
    s.add_argument("--min", type=float, required=True)
    s.add_argument("--max", type=float, required=True)
    s.add_argument("--step", type=float, default=0.5)
    s.add_argument("--out")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    w = sub.add_parser("weyl", help="Weyl-chamber coordinates and reachability")
    g = w.add_mutually_exclusive_group(required=True)
    g.add_argument("--gate")
    g.add_argument("--matrix", help="text file with a 4x4 matrix")
    w.set_defaults(func=cmd_weyl)

    v = sub.add_parser("verify", help="check a circuit against a target gate")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--named", choices=circuit.NAMED_CIRCUITS)
    g.add_argument("--circuit", help="circuit JSON file")
    v.add_argument("--target")
    v.add_argument("--config")
    v.add_argument("--as-printed", action="store_true",
                   help="use the literal diagram transcription where it differs")
    v.set_defaults(func=cmd_verify)

    sc = sub.add_parser("schedule", help="pulse schedule and total gate time")
    sc.add_argument("kind", nargs="?", choices=["cx", "cv", "cvdg"])
    sc.add_argument("--named", choices=circuit.NAMED_CIRCUITS)
    sc.add_argument("--config", required=True)
    sc.add_argument("--pair")
    sc.add_argument("--out")
    sc.add_argument("--json", action="store_true")
    sc.add_argument("--quiet", action="store_true", help="only print the total")
    sc.set_defaults(func=cmd_schedule)

    sy = sub.add_parser("synth", help="numerical synthesis with k basis gates")
    sy.add_argument("--target", required=True)
    sy.add_argument("--basis", default="CV")
    sy.add_argument("--k", type=int, default=2)
    sy.add_argument("--seed", type=int, default=0)
    sy.add_argument("--restarts", type=int, default=16)
    sy.add_argument("--workers", type=int, default=1)
    sy.set_defaults(func=cmd_synth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
