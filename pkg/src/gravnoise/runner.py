"""Experiment orchestration and result emission.

Data files (CSV and result JSON) are a pure function of (config, seed,
package version): floats are written with 17 significant digits and all
Monte Carlo accumulation is order-independent, so reruns are byte
identical.  The run manifest additionally carries wall-clock timestamps,
which is why it is written last and excluded from the byte-identity claim;
its checksum table is the tool for verifying the data files.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import metadata

import numpy as np

from .background import evaluate_packed, generate_background, harmonic_gauge_residual
from .config import CONVENTION_TOKENS, ExperimentConfig, serialize_config
from .deviation import DeviationState, curvature_at, integrate_deviation
from .doubleslit import SlitExperiment, monte_carlo_pattern
from .madelung import derivation_gap_report, madelung_decompose
from .schrodinger import gaussian_packet, grid_coordinates, harmonic_potential
from .seeding import substream_seed, substream_seeds
from .tensors import PACKED_PAIRS, PACK_WEIGHTS, SpacetimePoint

try:
    VERSION = metadata.version("gravnoise")
except metadata.PackageNotFoundError:  # running from a source tree
    VERSION = "0.1.0"

_FLOAT_FMT = "{:.16e}"


def format_float(value: float) -> str:
    """Fixed 17-significant-digit decimal form; round-trips float64."""
    return _FLOAT_FMT.format(float(value))


def write_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for r in range(rows):
            fh.write(",".join(format_float(col[r]) for col in columns) + "\n")


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Record of one run: config echo, seeds, checksums, timing."""

    kind: str
    version: str
    config_text: str
    master_seed: int
    substream_seeds: tuple[int, ...]
    started_utc: str
    finished_utc: str
    outputs: dict[str, str]
    output_dir: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "version": self.version,
            "config": self.config_text,
            "master_seed": self.master_seed,
            "substream_seeds": list(self.substream_seeds),
            "started_utc": self.started_utc,
            "finished_utc": self.finished_utc,
            "outputs": self.outputs,
        }


def _prepare_output_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)
    probe = os.path.join(path, ".write_probe")
    with open(probe, "w", encoding="utf-8") as fh:
        fh.write("ok")
    os.remove(probe)


def _atomic_write_json(path, payload: dict) -> None:
    tmp = path + ".tmp"
    write_json(tmp, payload)
    os.replace(tmp, path)


def _run_background_statistics(config, outdir) -> tuple[list[str], list[int]]:
    spec = config.background
    ens = generate_background(spec, config.seed)
    sample_seed = substream_seed(config.seed, 0)
    rng = np.random.default_rng(sample_seed)
    sampling = config.sampling
    extent = sampling.extent
    if extent == 0.0:
        extent = 5.0 * spec.light_speed / spec.f_min
    n = sampling.n_points
    times = rng.uniform(0.0, extent / spec.light_speed, n)
    xyz = rng.uniform(-0.5 * extent, 0.5 * extent, (n, 3))
    x4 = np.column_stack([spec.light_speed * times, xyz])
    h = evaluate_packed(ens, x4)

    header = ["t", "x", "y", "z"] + [f"h{i}{j}" for i, j in PACKED_PAIRS]
    columns = [times, xyz[:, 0], xyz[:, 1], xyz[:, 2]] + [h[:, s] for s in range(10)]
    write_csv(os.path.join(outdir, "samples.csv"), header, columns)

    gauge = 0.0
    null_rel = 0.0
    for mode in ens.modes:
        scale = mode.max_polarization()
        if scale > 0.0:
            res = float(np.abs(harmonic_gauge_residual(mode)).max())
            kmag = float(np.linalg.norm(mode.wavevector))
            gauge = max(gauge, res / (scale * kmag))
        k2 = float(np.dot(mode.wavevector, mode.wavevector))
        null_rel = max(null_rel, abs(mode.null_residual()) / k2)
    summary = {
        "mode_count": spec.mode_count,
        "target_strain_rms": spec.strain_rms,
        "measured_frobenius_rms": float(np.sqrt((h**2 * PACK_WEIGHTS).sum(axis=1).mean())),
        "component_rms": {
            f"h{i}{j}": float(np.sqrt((h[:, s] ** 2).mean()))
            for s, (i, j) in enumerate(PACKED_PAIRS)
        },
        "max_gauge_residual_rel": gauge,
        "max_null_residual_rel": null_rel,
        "sample_points": n,
        "sample_extent": extent,
    }
    write_json(os.path.join(outdir, "summary.json"), summary)
    return ["samples.csv", "summary.json"], [sample_seed]


def _run_deviation_trajectory(config, outdir) -> tuple[list[str], list[int]]:
    dev = config.deviation
    ens = generate_background(config.background, config.seed)

    def source(t: float):
        return curvature_at(ens, SpacetimePoint(t, dev.pos_x, dev.pos_y, dev.pos_z))

    initial = DeviationState(
        [dev.ell0_x, dev.ell0_y, dev.ell0_z],
        [dev.ell_dot0_x, dev.ell_dot0_y, dev.ell_dot0_z],
        dev.t0,
    )
    states = integrate_deviation(
        initial, source, dev.dt, dev.steps, config.background.light_speed
    )
    tau = np.array([s.tau for s in states])
    ell = np.stack([s.ell for s in states])
    vel = np.stack([s.ell_dot for s in states])
    write_csv(
        os.path.join(outdir, "trajectory.csv"),
        ["tau", "ell_x", "ell_y", "ell_z", "ell_dot_x", "ell_dot_y", "ell_dot_z"],
        [tau, ell[:, 0], ell[:, 1], ell[:, 2], vel[:, 0], vel[:, 1], vel[:, 2]],
    )
    summary = {
        "steps": dev.steps,
        "dt": dev.dt,
        "final_tau": float(tau[-1]),
        "final_ell": [float(v) for v in ell[-1]],
        "final_ell_dot": [float(v) for v in vel[-1]],
        "max_ell_norm": float(np.linalg.norm(ell, axis=1).max()),
    }
    write_json(os.path.join(outdir, "summary.json"), summary)
    return ["trajectory.csv", "summary.json"], []


def _snapshot_csv(path, w) -> None:
    pair = madelung_decompose(w)
    action = np.where(pair.mask, pair.action, np.nan)
    (x,) = w.coordinates()
    write_csv(
        path,
        ["x", "re_psi", "im_psi", "a", "S"],
        [x, w.psi.real, w.psi.imag, pair.amplitude, action],
    )


def _run_derivation_gap(config, outdir) -> tuple[list[str], list[int]]:
    grid = config.grid
    evo = config.evolution
    s0 = grid.s0 if grid.s0 > 0.0 else config.probability.s0
    dx = grid.extent / grid.cells
    potential = None
    if grid.potential == "harmonic":
        x = grid_coordinates(grid.cells, dx)
        potential = harmonic_potential(x, grid.mass, grid.omega)
    w0 = gaussian_packet(
        grid.cells,
        dx,
        grid.sigma0,
        k0=grid.momentum,
        x0=grid.center,
        potential=potential,
        mass=grid.mass,
        s0=s0,
        boundary=grid.boundary,
        phase_convention=CONVENTION_TOKENS[grid.convention],
    )
    sample_every = evo.sample_every or max(1, evo.steps // 10)
    report = derivation_gap_report(
        w0, evo.steps, evo.dt, sample_every=sample_every, amp_floor=evo.amp_floor
    )
    _snapshot_csv(os.path.join(outdir, "snapshot_initial.csv"), w0)
    _snapshot_csv(os.path.join(outdir, "snapshot_final.csv"), report.final)
    write_json(os.path.join(outdir, "residuals.json"), report.to_dict())
    return ["snapshot_initial.csv", "snapshot_final.csv", "residuals.json"], []


def _run_double_slit(config, outdir) -> tuple[list[str], list[int]]:
    slit = config.slit
    experiment = SlitExperiment(
        geometry=config.geometry,
        wavelength=slit.wavelength,
        background=config.background,
        realizations=config.realizations,
        seed=config.seed,
        speed=slit.speed,
        emit_time=slit.emit_time,
        quadrature_points=slit.quadrature_points,
        coupling=slit.coupling,
    )
    result = monte_carlo_pattern(experiment)
    write_csv(
        os.path.join(outdir, "pattern.csv"),
        ["x", "mean_I", "stderr_I"],
        [result.positions, result.mean_intensity, result.stderr],
    )
    payload = {
        "config": serialize_config(config),
        "seed": config.seed,
        "realizations": result.realizations,
        "visibility": result.visibility,
        "coupling": result.coupling,
        "wavelength": result.wavelength,
    }
    write_json(os.path.join(outdir, "result.json"), payload)
    seeds = substream_seeds(config.seed, config.realizations)
    return ["pattern.csv", "result.json"], seeds


_RUNNERS = {
    "background-statistics": _run_background_statistics,
    "deviation-trajectory": _run_deviation_trajectory,
    "derivation-gap": _run_derivation_gap,
    "double-slit": _run_double_slit,
}


def run_experiment(config: ExperimentConfig, output_dir: str | None = None) -> RunManifest:
    """Dispatch a validated configuration, write outputs and the manifest.

    ``output_dir`` overrides the configured one.  The output directory is
    prepared and probed for writability before any computation starts.
    """
    outdir = output_dir if output_dir is not None else config.output_dir
    _prepare_output_dir(outdir)
    started = datetime.now(timezone.utc).isoformat()
    files, seeds = _RUNNERS[config.kind](config, outdir)
    finished = datetime.now(timezone.utc).isoformat()
    manifest = RunManifest(
        kind=config.kind,
        version=VERSION,
        config_text=serialize_config(config),
        master_seed=config.seed,
        substream_seeds=tuple(seeds),
        started_utc=started,
        finished_utc=finished,
        outputs={name: _sha256(os.path.join(outdir, name)) for name in files},
        output_dir=outdir,
    )
    _atomic_write_json(os.path.join(outdir, "manifest.json"), manifest.to_dict())
    return manifest
