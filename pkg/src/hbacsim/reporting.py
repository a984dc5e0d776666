"""Delimited output, run manifests, and figure rendering.

CSV files use '.' decimals and 12 significant digits so that identical
runs produce byte-identical output.  Each run directory also gets a
manifest documenting the resolved system, the protocol parameters, and the
produced files; manifests carry no timestamps, again for reproducibility.

Figures are rendered headlessly next to the delimited output: the cooling
curve for a trace, per-spin magnetization vs gate number for gate traces,
and polarization vs delay for sweeps.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .protocol import CoolingTrace, SweepResult

__all__ = [
    "fmt",
    "write_rows",
    "write_trace_csv",
    "write_gate_trace_csv",
    "write_sweep_csv",
    "write_manifest",
    "render_cooling_curve",
    "render_gate_trace",
    "render_sweep",
]


def fmt(x) -> str:
    """Format a number with 12 significant digits, locale-independent."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def write_rows(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_trace_csv(trace: CoolingTrace, path):
    header = (
        ["cycle"]
        + [f"eps_{l}" for l in trace.labels]
        + [f"temp_K_{l}" for l in trace.labels]
        + ["entropy_bits"]
    )
    temps = trace.temperatures_kelvin()
    rows = []
    for k in range(trace.eps.shape[0]):
        rows.append([k, *trace.eps[k], *temps[k], trace.entropy_bits[k]])
    write_rows(path, header, rows)


def write_gate_trace_csv(trace: CoolingTrace, path):
    if trace.gate_eps is None:
        raise ValueError("trace carries no gate-level record")
    header = ["cycle", "gate_index", "gate_kind"] + [f"eps_{l}" for l in trace.labels]
    rows = []
    for c in range(trace.gate_eps.shape[0]):
        for g in range(trace.gate_eps.shape[1]):
            rows.append([c + 1, g + 1, trace.gate_kinds[g], *trace.gate_eps[c, g]])
    write_rows(path, header, rows)


def write_sweep_csv(sweep: SweepResult, path):
    write_rows(path, ["delay_s", "eps_target"], zip(sweep.delays, sweep.eps_target))


def write_manifest(path, manifest: dict):
    Path(path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def render_cooling_curve(trace: CoolingTrace, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    cycles = np.arange(trace.eps.shape[0])
    for i, label in enumerate(trace.labels):
        style = "o-" if i == trace.target_index else ".--"
        ax.plot(cycles, trace.eps[:, i], style, label=label)
    ax.set_xlabel("cycle")
    ax.set_ylabel("polarization")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gate_trace(trace: CoolingTrace, path, cycle: int = 1):
    if trace.gate_eps is None:
        raise ValueError("trace carries no gate-level record")
    rows = trace.gate_eps[cycle - 1]
    gates = np.arange(1, rows.shape[0] + 1)
    fig, ax = plt.subplots(figsize=(6, 4))
    for i, label in enumerate(trace.labels):
        ax.plot(gates, rows[:, i], "s-", label=label)
    ax.set_xticks(gates)
    ax.set_xlabel("gate number")
    ax.set_ylabel("polarization")
    ax.set_title(f"cycle {cycle}: " + ", ".join(trace.gate_kinds))
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep(sweep: SweepResult, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sweep.delays, sweep.eps_target, "o-")
    ax.axvline(sweep.argmax_delay, color="tab:red", ls="--",
               label=f"optimum {sweep.argmax_delay:.3g} s")
    ax.set_xlabel("reset delay (s)")
    ax.set_ylabel(f"eps_{sweep.target_label}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
