"""Forward and mirror trajectories written as CSV."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterator

import numpy as np

from .config import SuiteConfig
from .expr import ExpressionHamiltonian, is_time_dependent, parse
from .grid1d import (
    HamiltonianSpec,
    Wavefunction,
    apply_K,
    build_momentum,
    gaussian_packet,
    hamiltonian_action,
    iter_evolve,
    position_mean,
)

TRAJECTORY_COLUMNS = ("step", "t", "re_norm", "x_mean", "p_mean", "energy")
DELTA_COLUMNS = ("step", "t", "x_mean_abs_diff", "p_mean_abs_sum")


def _trajectory(config: SuiteConfig, spec: HamiltonianSpec, psi0: Wavefunction, p_ref: np.ndarray) -> Iterator[dict]:
    grid = psi0.grid
    params = config.evolution.params()
    text = config.hamiltonian.expression
    if text is None:
        hamiltonian = None
        time_dependent = spec.time_dependent
        energy_of = lambda t, v: hamiltonian_action(grid, spec, t, v)  # noqa: E731
    else:
        ast = parse(text)
        hamiltonian = ExpressionHamiltonian(ast, grid, spec)
        time_dependent = is_time_dependent(ast, spec)
        measure = ExpressionHamiltonian(ast, grid, spec)
        energy_of = lambda t, v: measure.at(t).apply(v)  # noqa: E731

    for step, t, psi in iter_evolve(psi0, spec, params, hamiltonian, time_dependent):
        v = psi.samples
        norm2 = float(np.vdot(v, v).real)
        yield {
            "step": step,
            "t": t,
            "re_norm": psi.norm(),
            "x_mean": position_mean(psi),
            # momentum is always measured with the forward-world operator
            "p_mean": float(np.vdot(v, p_ref @ v).real / norm2),
            "energy": float(np.vdot(v, energy_of(t, v)).real / norm2),
        }


def run_evolve(config: SuiteConfig, out_dir: str | Path) -> dict[str, Path]:
    """Write forward.csv (+hbar, H), mirror.csv (-hbar, H_K, K psi0) and
    deltas.csv into ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = config.grid.grid()
    spec = config.hamiltonian.spec()
    pk = config.packet
    psi0 = gaussian_packet(grid, pk.x0, pk.p0, pk.sigma, spec.hbar_signed)
    p_ref = build_momentum(grid, spec.hbar_signed).matrix

    paths = {name: out / f"{name}.csv" for name in ("forward", "mirror", "deltas")}
    with paths["forward"].open("w", newline="") as f_fwd, paths["mirror"].open("w", newline="") as f_mir, \
            paths["deltas"].open("w", newline="") as f_del:
        w_fwd = csv.DictWriter(f_fwd, TRAJECTORY_COLUMNS)
        w_mir = csv.DictWriter(f_mir, TRAJECTORY_COLUMNS)
        w_del = csv.DictWriter(f_del, DELTA_COLUMNS)
        for w in (w_fwd, w_mir, w_del):
            w.writeheader()
        rows = zip(
            _trajectory(config, spec, psi0, p_ref),
            _trajectory(config, spec.flipped(), apply_K(psi0), p_ref),
        )
        for fwd, mir in rows:
            w_fwd.writerow(_fmt(fwd))
            w_mir.writerow(_fmt(mir))
            w_del.writerow(_fmt({
                "step": fwd["step"],
                "t": fwd["t"],
                "x_mean_abs_diff": abs(fwd["x_mean"] - mir["x_mean"]),
                "p_mean_abs_sum": abs(fwd["p_mean"] + mir["p_mean"]),
            }))
    return paths


def _fmt(row: dict) -> dict:
    return {k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in row.items()}


def read_csv(path: str | Path) -> list[dict[str, float]]:
    with Path(path).open() as f:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(f)]

