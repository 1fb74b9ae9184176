"""Configuration-driven command line for reproducible memory experiments.

Subcommands::

    kernel    frequency response and flatness of the memory kernel
    metrics   per-supermode retrieval table (squeezing, purity, fidelity)
    channel   stored/retrieved covariance matrices through the pump cascade
    dynamics  space-time integrators validated against the closed forms
    sweep     efficiency / fidelity / purity curves over optical depth

Every run writes a ``manifest.json`` naming the outputs, the tool version,
the seed, and a hash of the configuration text; identical config + seed give
byte-identical CSV files.  Exit codes: 0 success, 2 configuration error,
3 physics/precondition error, 4 resolution or tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .channel import apply_cascade, efficiency, frequency_response, kernel, pulse_capacity
from .config import ExperimentConfig, load_config
from .dynamics import (
    energy_budget,
    expected_gain,
    pde_write,
    transfer_function_estimate,
    write_analytic,
)
from .errors import CombMemoryError, ConfigError, PhysicsError, ResolutionError
from .gaussian import (
    CovarianceMatrix,
    SqueezingSpectrum,
    squeezed_vacuum,
    supermode_extraction,
)
from .metrics import overall_fidelity, report_from_block, retrieval_table, zeta_to_db
from .modes import ModeBasis, ModeVector, unitary_mix
from .presets import get_preset

OUTDIR_ENV = "COMBMEMORY_OUTDIR"

L2_TOL = 1e-3          # pde vs analytic stored profile, relative L2
ETA_TOL = 5e-3         # measured |gain(0)|^2 vs (1 - e^{-d})^2, relative
GAIN0_TOL = 5e-3       # measured |gain(0)| vs |K_0|, relative
RATIO_TOL = 1e-3       # measured |gain(w)/gain(0)| vs kernel ratio, relative
BUDGET_TOL = 1e-4      # write-stage energy bookkeeping residual


# ----------------------------------------------------------------------------
# output helpers

def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.15g}"
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _matrix_rows(C: CovarianceMatrix):
    return [list(row) for row in C.entries]


def _resolve_outdir(cfg: ExperimentConfig, args) -> str:
    outdir = args.out or cfg.outdir or os.environ.get(OUTDIR_ENV) or "combmemory-out"
    os.makedirs(outdir, exist_ok=True)
    return outdir


def _write_manifest(outdir, command, cfg, seed, files, derived):
    digest = hashlib.sha256(
        cfg.raw_text.encode() + f"\nseed={seed}".encode()
    ).hexdigest()
    payload = {
        "command": command,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "seed": seed,
        "config_sha256": digest,
        "config": cfg.raw_text,
        "derived": derived,
        "files": sorted(os.path.basename(f) for f in files),
    }
    path = os.path.join(outdir, "manifest.json")
    _write_json(path, payload)
    return path


def _derived_base(cfg: ExperimentConfig) -> dict:
    p = cfg.memory
    out = {"eta": efficiency(p.d), "alpha": p.alpha, "flatness": None}
    if p.rep_rate is not None:
        out["pulse_capacity"] = pulse_capacity(p.T, p.rep_rate)
    return out


# ----------------------------------------------------------------------------
# state and basis assembly

def _input_state(cfg: ExperimentConfig) -> CovarianceMatrix:
    if cfg.state_source == "spectrum":
        zetas = tuple(10.0 ** (db / 10.0) for db in cfg.spectrum_db)
        return squeezed_vacuum(SqueezingSpectrum(zetas), angles=cfg.angles)
    if cfg.state_source == "file":
        with open(cfg.state_file) as fh:
            return CovarianceMatrix.from_json(json.load(fh))
    return get_preset(cfg.preset)


def _state_zetas_db(cfg: ExperimentConfig):
    """Per-supermode input squeezing in dB, extracting when not given directly."""
    if cfg.state_source == "spectrum":
        return list(cfg.spectrum_db)
    C = _input_state(cfg)
    _, spectrum, _ = supermode_extraction(C)
    return [zeta_to_db(z) for z in spectrum.values]


def _canonical_basis(M: int, teeth: int) -> ModeBasis:
    if teeth < M:
        raise ConfigError(f"state has {M} modes but only {teeth} teeth configured")
    eye = np.eye(teeth, dtype=complex)
    return ModeBasis(tuple(ModeVector(eye[m]) for m in range(M)))


def _random_unitary(M: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.normal(size=(M, M)) + 1j * rng.normal(size=(M, M))
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R).copy()
    ph /= np.abs(ph)
    return Q * ph[None, :]


# ----------------------------------------------------------------------------
# subcommands

def cmd_kernel(cfg: ExperimentConfig, args, outdir: str, seed: int) -> int:
    resp = frequency_response(cfg.memory, cfg.omega_max, cfg.n_points)
    files = []
    if "csv" in args.formats:
        path = os.path.join(outdir, "kernel_response.csv")
        resp.to_csv(path)
        files.append(path)
    summary = {
        "d": cfg.memory.d,
        "gamma_s": cfg.memory.gamma_s,
        "omega_max": cfg.omega_max,
        "n_points": cfg.n_points,
        "efficiency": efficiency(cfg.memory.d),
        "flatness": resp.flatness,
        "narrowband": resp.narrowband,
    }
    if "json" in args.formats:
        path = os.path.join(outdir, "kernel_summary.json")
        body = dict(summary)
        body["response"] = [
            {"omega": float(w), "re": float(v.real), "im": float(v.imag)}
            for w, v in zip(resp.frequencies, resp.values)
        ]
        _write_json(path, body)
        files.append(path)
    derived = _derived_base(cfg)
    derived["flatness"] = resp.flatness
    files.append(_write_manifest(outdir, "kernel", cfg, seed, files, derived))
    print(f"kernel: flatness {resp.flatness:.6g} over |omega| <= {cfg.omega_max:.6g} rad/s")
    return 0


def _table_rows(reports):
    return [
        [r.index, r.zeta_in_db, r.zeta_out_db, r.purity_out, r.fidelity]
        for r in reports
    ]


def cmd_metrics(cfg: ExperimentConfig, args, outdir: str, seed: int) -> int:
    zetas_db = _state_zetas_db(cfg)
    reports = retrieval_table(zetas_db, cfg.memory.d)
    F, vec = overall_fidelity(reports)
    files = []
    header = ["mode_index", "zeta_in_dB", "zeta_out_dB", "purity", "fidelity"]
    if "csv" in args.formats:
        path = os.path.join(outdir, "metrics_table.csv")
        _write_csv(path, header, _table_rows(reports))
        files.append(path)
    if "json" in args.formats:
        path = os.path.join(outdir, "metrics_table.json")
        _write_json(path, {
            "rows": [dict(zip(header, row)) for row in _table_rows(reports)],
            "overall_fidelity": F,
            "fidelity_vector": list(vec),
        })
        files.append(path)
    derived = _derived_base(cfg)
    derived["overall_fidelity"] = F
    files.append(_write_manifest(outdir, "metrics", cfg, seed, files, derived))
    print(f"metrics: {len(reports)} supermodes at d = {cfg.memory.d:g}, overall fidelity {F:.6f}")
    return 0


def cmd_channel(cfg: ExperimentConfig, args, outdir: str, seed: int) -> int:
    C_in = _input_state(cfg)
    M = C_in.mode_count
    k2 = efficiency(cfg.memory.d)
    supermodes = _canonical_basis(M, cfg.teeth)
    basis_check = None
    if cfg.pump_basis == "random-unitary":
        rng = np.random.default_rng(seed)
        pumps = unitary_mix(supermodes, _random_unitary(M, rng))
        C_out = apply_cascade(C_in, supermodes, pumps, k2)
        C_ref = apply_cascade(C_in, supermodes, supermodes, k2)
        basis_check = float(np.abs(C_out.entries - C_ref.entries).max())
    else:
        C_out = apply_cascade(C_in, supermodes, supermodes, k2)

    lam_in = np.linalg.eigvalsh(C_in.entries)[:M]
    lam_out = 1.0 - k2 * (1.0 - lam_in)  # channel maps quadrature spectra affinely
    files = []
    if "csv" in args.formats:
        p_in = os.path.join(outdir, "channel_c_in.csv")
        p_out = os.path.join(outdir, "channel_c_out.csv")
        p_sp = os.path.join(outdir, "channel_spectra.csv")
        _write_csv(p_in, [f"c{k}" for k in range(2 * M)], _matrix_rows(C_in))
        _write_csv(p_out, [f"c{k}" for k in range(2 * M)], _matrix_rows(C_out))
        _write_csv(
            p_sp,
            ["index", "zeta_in", "zeta_out"],
            [[m, lam_in[m], lam_out[m]] for m in range(M)],
        )
        files += [p_in, p_out, p_sp]
    summary = {
        "modes": M,
        "k2": k2,
        "pump_basis": cfg.pump_basis,
        "basis_independence_max_abs": basis_check,
        "c_in": C_in.to_json(),
        "c_out": C_out.to_json(),
        "zeta_in": list(map(float, lam_in)),
        "zeta_out": list(map(float, lam_out)),
    }
    if "json" in args.formats:
        path = os.path.join(outdir, "channel_summary.json")
        _write_json(path, summary)
        files.append(path)
    derived = _derived_base(cfg)
    derived["basis_independence_max_abs"] = basis_check
    files.append(_write_manifest(outdir, "channel", cfg, seed, files, derived))
    msg = f"channel: {M} modes through k2 = {k2:.6f}"
    if basis_check is not None:
        msg += f", basis-independence deviation {basis_check:.3e}"
    print(msg)
    return 0


def cmd_dynamics(cfg: ExperimentConfig, args, outdir: str, seed: int) -> int:
    p = cfg.memory
    checks = []

    def record(name, value, tol, ok):
        checks.append({"check": name, "value": value, "tolerance": tol,
                       "status": "pass" if ok else "FAIL"})
        return ok

    # stored profile: marching integrator against the closed-form kernel
    a_in = np.ones(cfg.n_t, dtype=complex)
    profile = write_analytic(a_in, p, cfg.n_z)
    grid = pde_write(a_in, p, cfg.n_z, cfg.n_t)
    ref = np.linalg.norm(profile.b_T)
    diff = float(np.linalg.norm(grid.b[:, -1] - profile.b_T))
    l2 = diff / ref if ref > 0 else diff
    all_ok = record("pde_vs_analytic_l2", l2, L2_TOL, l2 <= L2_TOL)

    budget = energy_budget(grid, p)
    all_ok &= record("energy_budget_residual", budget["residual"], BUDGET_TOL,
                     budget["residual"] <= BUDGET_TOL)

    # end-to-end gains against the kernel prediction
    omegas = [0.0] + [w for w in cfg.probe_omegas if w != 0.0]
    gains = transfer_function_estimate(
        p, omegas, cfg.t_read, path=cfg.dynamics_path
    )
    eta = efficiency(p.d)
    eta_meas = float(np.abs(gains[0]) ** 2)
    err = abs(eta_meas - eta) / max(eta, 1e-12)
    all_ok &= record("efficiency_measured", err, ETA_TOL,
                     err <= ETA_TOL if p.d > 0 else eta_meas == 0.0)

    K0 = abs(kernel(p, 0.0))
    if p.d > 0:
        g0_err = abs(abs(gains[0]) - K0) / K0
        all_ok &= record("gain_zero_magnitude", g0_err, GAIN0_TOL, g0_err <= GAIN0_TOL)
        for w, g in zip(omegas[1:], gains[1:]):
            ratio_meas = abs(g / gains[0])
            ratio_ref = abs(kernel(p, w)) / K0
            r_err = abs(ratio_meas - ratio_ref) / ratio_ref
            all_ok &= record(f"gain_ratio_at_{w:.6g}", r_err, RATIO_TOL,
                             r_err <= RATIO_TOL)

    gain_rows = [
        {
            "omega": float(w),
            "measured": [float(g.real), float(g.imag)],
            "expected": [float(expected_gain(p, w).real), float(expected_gain(p, w).imag)],
        }
        for w, g in zip(omegas, gains)
    ]

    files = []
    if "csv" in args.formats:
        path = os.path.join(outdir, "dynamics_report.csv")
        _write_csv(path, ["check", "value", "tolerance", "status"],
                   [[c["check"], c["value"], c["tolerance"], c["status"]] for c in checks])
        files.append(path)
    if "json" in args.formats:
        path = os.path.join(outdir, "dynamics_report.json")
        _write_json(path, {
            "checks": checks,
            "gains": gain_rows,
            "energy_budget": budget,
            "eta_measured": eta_meas,
            "eta_formula": eta,
            "all_pass": bool(all_ok),
        })
        files.append(path)
    derived = _derived_base(cfg)
    derived["eta_measured"] = eta_meas
    files.append(_write_manifest(outdir, "dynamics", cfg, seed, files, derived))
    for c in checks:
        print(f"dynamics: {c['check']} = {c['value']:.3e} (tol {c['tolerance']:g}) {c['status']}")
    if not all_ok:
        print("dynamics: tolerance failure", file=sys.stderr)
        return 4
    return 0


def cmd_sweep(cfg: ExperimentConfig, args, outdir: str, seed: int) -> int:
    zetas_db = _state_zetas_db(cfg)
    blocks = [
        CovarianceMatrix(np.diag([10.0 ** (-db / 10.0), 10.0 ** (db / 10.0)]))
        for db in zetas_db
    ]

    def rows_for(d):
        eta = efficiency(d)
        reports = [report_from_block(b, eta, index=m) for m, b in enumerate(blocks)]
        F, _ = overall_fidelity(reports)
        return d, eta, reports, F

    workers = max(args.workers or cfg.workers, 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(rows_for, cfg.sweep_d))
    else:
        results = [rows_for(d) for d in cfg.sweep_d]

    curve_rows, overall_rows = [], []
    for d, eta, reports, F in results:
        overall_rows.append([d, eta, F])
        for r in reports:
            curve_rows.append([d, eta, r.index, r.zeta_in_db, r.zeta_out_db,
                               r.purity_out, r.fidelity])

    files = []
    if "csv" in args.formats:
        p_c = os.path.join(outdir, "sweep_curves.csv")
        p_o = os.path.join(outdir, "sweep_overall.csv")
        _write_csv(p_c, ["d", "eta", "mode_index", "zeta_in_dB", "zeta_out_dB",
                         "purity", "fidelity"], curve_rows)
        _write_csv(p_o, ["d", "eta", "overall_fidelity"], overall_rows)
        files += [p_c, p_o]
    if "json" in args.formats:
        path = os.path.join(outdir, "sweep_curves.json")
        _write_json(path, {
            "curves": [
                dict(zip(["d", "eta", "mode_index", "zeta_in_dB", "zeta_out_dB",
                          "purity", "fidelity"], row))
                for row in curve_rows
            ],
            "overall": [
                dict(zip(["d", "eta", "overall_fidelity"], row))
                for row in overall_rows
            ],
        })
        files.append(path)
    derived = _derived_base(cfg)
    derived["sweep_points"] = len(cfg.sweep_d)
    files.append(_write_manifest(outdir, "sweep", cfg, seed, files, derived))
    print(f"sweep: {len(cfg.sweep_d)} depths x {len(zetas_db)} modes")
    return 0


_COMMANDS = {
    "kernel": cmd_kernel,
    "metrics": cmd_metrics,
    "channel": cmd_channel,
    "dynamics": cmd_dynamics,
    "sweep": cmd_sweep,
}


# ----------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combmemory",
        description="Raman comb-memory simulation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__doc__)
        sp.add_argument("--config", required=True, help="experiment config file")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="override config seed")
        sp.add_argument("--workers", type=int, default=None, help="sweep worker count")
        sp.add_argument("--format", choices=["csv", "json", "both"], default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.format is None:
            args.formats = cfg.formats
        else:
            args.formats = ("csv", "json") if args.format == "both" else (args.format,)
        seed = cfg.seed if args.seed is None else args.seed
        outdir = _resolve_outdir(cfg, args)
        return _COMMANDS[args.command](cfg, args, outdir, seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResolutionError as exc:
        print(f"resolution error: {exc}", file=sys.stderr)
        return 4
    except PhysicsError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return 3
    except CombMemoryError as exc:  # anything else from this package
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
