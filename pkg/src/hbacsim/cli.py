"""Command-line front end.

Subcommands:

* ``presets`` -- list the built-in systems or dump one as JSON.
* ``limits``  -- closed-form cooling limits for a system.
* ``run``     -- run a cooling protocol; writes the cycle trace CSV (and
  optionally a per-gate trace), a manifest, and rendered figures.
* ``sweep``   -- reset-delay sweep; writes the (delay, polarization) CSV,
  a manifest, a figure, and prints the optimum.
* ``trace``   -- apply a compression circuit once to the thermal state and
  record per-gate magnetizations.

Every file-producing command writes ``manifest.json`` next to its outputs
with the fully resolved system and parameters, so a run can be reproduced
exactly from its output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .compression import Circuit, apply_circuit_traced, two_sort_circuit3
from .protocol import (
    MAX_CYCLES,
    ConvergenceError,
    CoolingTrace,
    ProtocolConfig,
    ProtocolKind,
    run_protocol,
    sweep_reset_delay,
    thermal_state,
)
from .relaxation import ResetMode, ResetModel
from .reporting import (
    fmt,
    render_cooling_curve,
    render_gate_trace,
    render_sweep,
    write_gate_trace_csv,
    write_manifest,
    write_rows,
    write_sweep_csv,
    write_trace_csv,
)
from .spin_model import (
    ConfigError,
    SpinSystem,
    load_system,
    ppa_limit,
    preset_document,
    preset_names,
    shannon_bound,
    shannon_bound_exact,
    spin_temperature,
)


def _add_system_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset", choices=preset_names(), help="built-in system")
    g.add_argument("--system", metavar="FILE", help="system configuration JSON file")


def _resolve_system(args) -> SpinSystem:
    if args.preset:
        return load_system(preset_document(args.preset))
    doc = json.loads(Path(args.system).read_text(encoding="utf-8"))
    return load_system(doc)


def _add_protocol_args(p: argparse.ArgumentParser):
    p.add_argument("--protocol", choices=[k.value for k in ProtocolKind], default="tsac")
    p.add_argument("--cycles", type=int, default=None, metavar="N")
    p.add_argument("--to-steady-state", action="store_true",
                   help="iterate until the polarizations stop changing")
    p.add_argument("--reset-delay", type=float, default=None, metavar="SECONDS",
                   help="timed reset: wait this long while all spins relax")
    p.add_argument("--reset", choices=["ideal", "t1"], default=None,
                   help="reset mode (inferred from --reset-delay/--bath-eps if omitted)")
    p.add_argument("--bath-eps", type=float, default=1.0,
                   help="bath polarization for the ideal reset")
    p.add_argument("--reset-repeats", type=int, default=1, metavar="N")


def _resolve_reset(args) -> ResetModel:
    mode = args.reset
    if mode is None:
        mode = "t1" if args.reset_delay is not None else "ideal"
    if mode == "t1":
        if args.reset_delay is None:
            raise ConfigError("reset-delay", "timed reset requires --reset-delay")
        return ResetModel(ResetMode.T1_EXPONENTIAL, delay_s=args.reset_delay)
    return ResetModel(ResetMode.IDEAL_REPLACE, bath_eps=args.bath_eps)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest_base(command: str, system: SpinSystem, outputs: list[str]) -> dict:
    return {
        "tool": "hbacsim",
        "version": __version__,
        "command": command,
        "system": system.to_document(),
        "outputs": outputs,
    }


def _print_summary(trace: CoolingTrace, system: SpinSystem):
    final = trace.final_eps()
    temps = trace.temperatures_kelvin()[-1]
    print(f"cycles run: {trace.cycles}"
          + (f" (steady at cycle {trace.steady_state_cycle})" if trace.steady_state_cycle else ""))
    for i, label in enumerate(trace.labels):
        eq = trace.eps_eq[i]
        enh = final[i] / eq if eq else float("inf")
        mark = " <- target" if i == trace.target_index else ""
        print(f"  {label}: eps {fmt(final[i])} (x{enh:.3f} of equilibrium), "
              f"T {fmt(temps[i])} K{mark}")


# ----------------------------------------------------------------- commands

def cmd_presets(args) -> int:
    if args.dump:
        print(json.dumps(preset_document(args.dump), indent=2, sort_keys=True))
    else:
        for name in preset_names():
            doc = preset_document(name)
            spins = ", ".join(s["label"] for s in doc["spins"])
            print(f"{name}: {len(doc['spins'])} spins ({spins})")
    return 0


def cmd_limits(args) -> int:
    system = _resolve_system(args)
    bound = shannon_bound(system)
    exact = shannon_bound_exact(system)
    target = system.spins[system.target_index]
    print(f"system: {system.name or 'custom'} ({system.n} spins, target {target.label})")
    print(f"information content sum: {bound.ic_sum:.4f} (target-spin units)")
    print(f"enhancement bound: x{bound.factor:.4f} -> eps_max {fmt(bound.eps_max)}")
    print(f"entropy-exact bound: x{exact.factor:.4f} -> eps_max {fmt(exact.eps_max)}")
    if system.n >= 2:
        reset_eps = max(system.spins[i].eps_eq for i in system.reset_indices) \
            if system.reset_indices else 1.0
        limit = ppa_limit(system.n, reset_eps)
        print(f"partner-pairing limit ({system.n} spins, bath eps {fmt(reset_eps)}): {fmt(limit)}")
    if bound.eps_max != 0:
        t = spin_temperature(system.bath_temperature, target.eps_eq, min(bound.eps_max, 1.0))
        print(f"projected target temperature at bound: {t.kelvin:.2f} K"
              + (" (inverted)" if t.negative else ""))
    return 0


def cmd_run(args) -> int:
    system = _resolve_system(args)
    reset = _resolve_reset(args)
    cycles = args.cycles if args.cycles is not None else (MAX_CYCLES if args.to_steady_state else 10)
    config = ProtocolConfig(
        kind=ProtocolKind(args.protocol),
        cycles=cycles,
        reset=reset,
        reset_repeats=args.reset_repeats,
        record_gate_trace=args.gate_trace,
    )
    trace = run_protocol(system, config, until_steady=args.to_steady_state)

    out = _outdir(args)
    outputs = ["trace.csv"]
    write_trace_csv(trace, out / "trace.csv")
    if trace.gate_eps is not None:
        write_gate_trace_csv(trace, out / "gate_trace.csv")
        outputs.append("gate_trace.csv")
    if not args.no_plot:
        render_cooling_curve(trace, out / "cooling_curve.png")
        outputs.append("cooling_curve.png")
        if trace.gate_eps is not None:
            render_gate_trace(trace, out / "gate_trace.png")
            outputs.append("gate_trace.png")
    manifest = _manifest_base("run", system, outputs + ["manifest.json"])
    manifest["protocol"] = {
        "kind": config.kind.value,
        "cycles": config.cycles,
        "to_steady_state": bool(args.to_steady_state),
        "reset_mode": reset.mode.value,
        "reset_delay_s": reset.delay_s,
        "bath_eps": reset.bath_eps,
        "reset_repeats": config.reset_repeats,
        "record_gate_trace": config.record_gate_trace,
    }
    write_manifest(out / "manifest.json", manifest)
    _print_summary(trace, system)
    print(f"wrote {', '.join(outputs)} to {out}")
    return 0


def cmd_sweep(args) -> int:
    system = _resolve_system(args)
    t1r = min(system.spins[i].t1 for i in system.reset_indices) if system.reset_indices else None
    lo = args.delay_min if args.delay_min is not None else (0.2 * t1r if t1r else None)
    hi = args.delay_max if args.delay_max is not None else (5.0 * t1r if t1r else None)
    if lo is None or hi is None:
        raise ConfigError("delay range", "give --delay-min/--delay-max (no reset spin to infer from)")
    if not (0 <= lo < hi):
        raise ConfigError("delay range", f"need 0 <= min < max, got {lo}..{hi}")
    if args.steps < 2:
        raise ConfigError("steps", "need at least 2 sweep points")
    import numpy as np

    delays = np.linspace(lo, hi, args.steps)
    sweep = sweep_reset_delay(system, ProtocolKind(args.protocol), delays,
                              reset_repeats=args.reset_repeats)
    out = _outdir(args)
    outputs = ["sweep.csv"]
    write_sweep_csv(sweep, out / "sweep.csv")
    if not args.no_plot:
        render_sweep(sweep, out / "sweep.png")
        outputs.append("sweep.png")
    manifest = _manifest_base("sweep", system, outputs + ["manifest.json"])
    manifest["sweep"] = {
        "protocol": args.protocol,
        "delay_min_s": float(lo),
        "delay_max_s": float(hi),
        "steps": args.steps,
        "reset_repeats": args.reset_repeats,
    }
    write_manifest(out / "manifest.json", manifest)
    print(f"optimum delay: {fmt(sweep.argmax_delay)} s "
          f"(eps_{sweep.target_label} = {fmt(sweep.eps_target[sweep.argmax_index])})")
    print(f"wrote {', '.join(outputs)} to {out}")
    return 0


def cmd_trace(args) -> int:
    system = _resolve_system(args)
    if args.circuit:
        circuit = Circuit.from_text(Path(args.circuit).read_text(encoding="utf-8"), system.n)
    else:
        if system.n != 3:
            raise ConfigError("circuit", "built-in compression circuit is 3-qubit; give --circuit")
        circuit = two_sort_circuit3()
    state = thermal_state(system)
    initial = state.polarizations()
    final, rows = apply_circuit_traced(state, circuit)

    out = _outdir(args)
    header = ["gate_index", "gate_kind"] + [f"eps_{l}" for l in system.labels]
    table = [[0, "-", *initial]]
    for g in range(rows.shape[0]):
        table.append([g + 1, circuit.gates[g].kind.value, *rows[g]])
    write_rows(out / "gate_trace.csv", header, table)
    outputs = ["gate_trace.csv", "circuit.txt"]
    (out / "circuit.txt").write_text(circuit.to_text(), encoding="utf-8")
    manifest = _manifest_base("trace", system, outputs + ["manifest.json"])
    write_manifest(out / "manifest.json", manifest)
    for i, label in enumerate(system.labels):
        print(f"  {label}: eps {fmt(initial[i])} -> {fmt(final.polarization(i))}")
    print(f"wrote {', '.join(outputs)} to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hbacsim",
        description="Heat-bath algorithmic cooling simulator for small spin registers",
    )
    p.add_argument("--version", action="version", version=f"hbacsim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("presets", help="list or dump built-in systems")
    pp.add_argument("--dump", metavar="NAME", help="print one preset as JSON")
    pp.set_defaults(func=cmd_presets)

    pl = sub.add_parser("limits", help="closed-form cooling limits")
    _add_system_args(pl)
    pl.set_defaults(func=cmd_limits)

    pr = sub.add_parser("run", help="run a cooling protocol")
    _add_system_args(pr)
    _add_protocol_args(pr)
    pr.add_argument("--gate-trace", action="store_true",
                    help="record per-gate magnetizations each cycle")
    pr.add_argument("--out", default="out", metavar="DIR")
    pr.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    pr.set_defaults(func=cmd_run)

    ps = sub.add_parser("sweep", help="sweep the reset delay")
    _add_system_args(ps)
    ps.add_argument("--protocol", choices=[k.value for k in ProtocolKind], default="tsac")
    ps.add_argument("--delay-min", type=float, default=None, metavar="SECONDS",
                    help="default 0.2 x reset-spin T1")
    ps.add_argument("--delay-max", type=float, default=None, metavar="SECONDS",
                    help="default 5 x reset-spin T1")
    ps.add_argument("--steps", type=int, default=50)
    ps.add_argument("--reset-repeats", type=int, default=1, metavar="N")
    ps.add_argument("--out", default="out", metavar="DIR")
    ps.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    ps.set_defaults(func=cmd_sweep)

    pt = sub.add_parser("trace", help="trace a compression circuit gate by gate")
    _add_system_args(pt)
    pt.add_argument("--circuit", metavar="FILE",
                    help="one-gate-per-line circuit file (default: built-in 3-qubit circuit)")
    pt.add_argument("--out", default="out", metavar="DIR")
    pt.set_defaults(func=cmd_trace)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
