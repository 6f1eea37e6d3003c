"""Command-line front end: sweeps, theory curves, calibration, CSV emission.

Every run writes its outputs plus a manifest.json recording the command, the
fully resolved inputs and the SHA-256 of each output file; re-running from
the manifest (replay_manifest) reproduces the CSVs byte for byte, including
noisy instrument traces, because every random stream is derived from the
recorded seed.

Exit codes: 0 success, 2 config/usage error, 3 numerical error (singular
post-selection, no signal, degenerate fit), 4 detection-limited.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .config import LoadedScenario, load_scenario, parse_scenario
from .errors import (
    ConfigError,
    DegenerateFitError,
    DetectionLimitedError,
    NoSignalError,
    SingularPostSelectionError,
    SpectrumFormatError,
    WvaSenseError,
)
from .fbg import centroid_shift_model, fit_sensitivity
from .osa import snr_estimate
from .scenario import (
    apply_scenario_filter,
    scenario_raw_spectrum,
    scenario_trace,
    sweep_beta,
    sweep_temperature,
)
from .spectral import total_power, write_spectrum_csv
from .wva import amplification_factor


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write_rows(path: Path, header: list[str], rows: list[list[float]],
                footer: Optional[list[str]] = None) -> None:
    # Plain comma/newline writing keeps the bytes identical across platforms.
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    if footer:
        lines += footer
    path.write_text("\n".join(lines) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _parse_float_list(text: str, name: str) -> list[float]:
    """Accept 'a,b,c' or 'start:stop:step' (inclusive of stop within 1e-9)."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("range spec needs start:stop:step")
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError("range spec needs step > 0 and stop >= start")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + k * step for k in range(n)]
        return [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--{name}: {exc}") from None


def _beta_grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ConfigError("--step: must be > 0")
    if hi <= lo:
        raise ConfigError("--beta-max must exceed --beta-min")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(n)]


def _apply_seed(config_doc: dict, seed: Optional[int]) -> dict:
    if seed is None:
        return config_doc
    doc = json.loads(json.dumps(config_doc))
    if "osa" in doc and isinstance(doc["osa"], dict):
        doc["osa"]["seed"] = seed
    return doc


def _load_doc(path: str) -> dict:
    loaded = load_scenario(path)  # validate early, with field paths
    del loaded
    with open(path) as f:
        return json.load(f)


# ---------------------------------------------------------------------------
# Command implementations. Each takes the fully resolved input dict and the
# output directory, writes its files and returns {filename: sha256}.
# ---------------------------------------------------------------------------


def run_sweep_beta(resolved: dict, out_dir: Path) -> dict[str, str]:
    loaded: LoadedScenario = parse_scenario(resolved["config"])
    sc = loaded.scenario
    if resolved.get("dt_c") is not None:
        sc = replace(sc, t1_c=sc.t2_c + resolved["dt_c"])
    betas_deg = _beta_grid(
        resolved["beta_min_deg"], resolved["beta_max_deg"], resolved["step_deg"]
    )
    results = sweep_beta(sc, [math.radians(b) for b in betas_deg])

    power_0 = total_power(scenario_raw_spectrum(sc, beta_rad=0.0))
    rows = []
    for beta_deg, (beta_rad, result) in zip(betas_deg, results):
        if result is None:
            print(f"skipping beta={beta_deg:.4g} deg: no signal at this angle",
                  file=sys.stderr)
            continue
        power_rel = total_power(scenario_raw_spectrum(sc, beta_rad=beta_rad)) / power_0
        snr_db = math.inf
        if sc.osa is not None:
            snr_db = snr_estimate(result.raw, sc.osa).snr_db
        rows.append([beta_deg, result.centroid_nm_shift, result.a_effective,
                     power_rel, snr_db])

    footer = None
    if resolved["snr_min_db"] is not None:
        best = None
        for row in rows:
            if row[4] < resolved["snr_min_db"]:
                continue
            if best is None or abs(row[2]) > abs(best[2]) or (
                abs(row[2]) == abs(best[2]) and row[2] > best[2]
            ):
                best = row
        if best is None:
            raise DetectionLimitedError(
                f"no swept angle reaches {resolved['snr_min_db']} dB SNR"
            )
        footer = [
            f"# max_usable: beta_deg={_fmt(best[0])} a={_fmt(best[2])} "
            f"snr_db={_fmt(best[4])}"
        ]

    outputs: dict[str, str] = {}
    csv_path = out_dir / "sweep_beta.csv"
    _write_rows(
        csv_path,
        ["beta_deg", "centroid_shift_nm", "a_effective", "total_power_rel", "snr_db"],
        rows,
        footer,
    )
    outputs[csv_path.name] = _sha256(csv_path)

    for j, beta_deg in enumerate(resolved["dump_spectra_deg"]):
        trace = scenario_trace(sc, beta_rad=math.radians(beta_deg),
                               stream=len(betas_deg) + 1 + j)
        filtered = apply_scenario_filter(sc, trace)
        name = f"spectrum_beta_{beta_deg:+.2f}.csv"
        write_spectrum_csv(filtered, out_dir / name)
        outputs[name] = _sha256(out_dir / name)

    print(f"sweep-beta: {len(rows)} points -> {csv_path}")
    return outputs


def run_sweep_temp(resolved: dict, out_dir: Path) -> dict[str, str]:
    loaded: LoadedScenario = parse_scenario(resolved["config"])
    sc = loaded.scenario
    if resolved["beta_deg"] is not None:
        sc = replace(sc, beta_rad=math.radians(resolved["beta_deg"]))
    dt_list = resolved["dt_list_c"]
    if len(dt_list) < 2 or len(set(dt_list)) < 2:
        raise DegenerateFitError("temperature sweep needs >= 2 distinct dt values")

    results = sweep_temperature(sc, dt_list)
    rows = [[dt, r.centroid_nm_shift] for dt, r in results]

    # Fit on the values as written so the footer matches a later `calibrate`
    # run on this file exactly.
    written = [(float(_fmt(dt)), float(_fmt(shift))) for dt, shift in rows]
    fit = fit_sensitivity(written)
    footer = [
        f"# fit_slope_nm_per_c={_fmt(fit.slope_nm_per_c)}",
        f"# fit_intercept_nm={_fmt(fit.intercept_nm)}",
        f"# fit_residual_rms_nm={_fmt(fit.residual_rms_nm)}",
        f"# fit_n_points={fit.n_points}",
    ]
    csv_path = out_dir / "sweep_temp.csv"
    _write_rows(csv_path, ["dt_c", "centroid_shift_nm"], rows, footer)
    print(f"sweep-temp: {len(rows)} points, slope "
          f"{fit.slope_nm_per_c:.6g} nm/degC -> {csv_path}")
    return {csv_path.name: _sha256(csv_path)}


def run_amax_curve(resolved: dict, out_dir: Path) -> dict[str, str]:
    g_list = resolved["g_list"]
    for g in g_list:
        if abs(g) >= 1.0:
            raise ConfigError(f"--g: |g| must be < 1, got {g}")
    betas_deg = _beta_grid(
        resolved["beta_min_deg"], resolved["beta_max_deg"], resolved["step_deg"]
    )
    rows = []
    peaks = []
    for g in g_list:
        best_a, best_beta = -math.inf, None
        for beta_deg in betas_deg:
            # gamma=1, delta=arccos(g) realizes gamma*cos(delta)=g exactly.
            a = amplification_factor(math.radians(beta_deg), 1.0, math.acos(g))
            rows.append([beta_deg, g, a])
            if a > best_a:
                best_a, best_beta = a, beta_deg
        peaks.append(f"# peak g={_fmt(g)}: a={_fmt(best_a)} at beta_deg={_fmt(best_beta)}")
    csv_path = out_dir / "amax_curve.csv"
    _write_rows(csv_path, ["beta_deg", "g", "a"], rows, peaks)
    print(f"amax-curve: {len(g_list)} curves x {len(betas_deg)} angles -> {csv_path}")
    return {csv_path.name: _sha256(csv_path)}


def run_theory_lines(resolved: dict, out_dir: Path) -> dict[str, str]:
    kappa = resolved["kappa_nm_per_c"]
    rows = [
        [dt, a, centroid_shift_model(dt, kappa, a)]
        for a in resolved["a_list"]
        for dt in resolved["dt_list_c"]
    ]
    csv_path = out_dir / "theory_lines.csv"
    _write_rows(csv_path, ["dt_c", "a", "shift_nm"], rows)
    print(f"theory-lines: {len(rows)} rows -> {csv_path}")
    return {csv_path.name: _sha256(csv_path)}


def parse_calibration_csv(path) -> list[tuple[float, float]]:
    """Read (dt_c, shift_nm) rows; '#' lines are comments. Errors carry line numbers."""
    points: list[tuple[float, float]] = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if lineno == 1 or (not points and line.replace(",", "").replace("_", "").isalpha()):
                # header row
                cols = [c.strip() for c in line.split(",")]
                if cols != ["dt_c", "centroid_shift_nm"]:
                    raise SpectrumFormatError(
                        f"{path}: line {lineno}: expected header "
                        f"'dt_c,centroid_shift_nm'"
                    )
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise SpectrumFormatError(
                    f"{path}: line {lineno}: expected 2 columns, got {len(parts)}"
                )
            try:
                points.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise SpectrumFormatError(
                    f"{path}: line {lineno}: non-numeric value"
                ) from None
    if not points:
        raise SpectrumFormatError(f"{path}: no data rows")
    return points


def run_calibrate(resolved: dict, out_dir: Path) -> dict[str, str]:
    points = [(float(dt), float(s)) for dt, s in resolved["points"]]
    fit = fit_sensitivity(points)
    doc = {
        "slope_nm_per_c": fit.slope_nm_per_c,
        "intercept_nm": fit.intercept_nm,
        "residual_rms_nm": fit.residual_rms_nm,
        "n_points": fit.n_points,
    }
    json_path = out_dir / "calibration.json"
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(
        f"calibrate: slope {fit.slope_nm_per_c:.6g} nm/degC, "
        f"intercept {fit.intercept_nm:.6g} nm, "
        f"residual rms {fit.residual_rms_nm:.3g} nm over {fit.n_points} points"
    )
    return {json_path.name: _sha256(json_path)}


def run_dump_spectrum(resolved: dict, out_dir: Path) -> dict[str, str]:
    loaded: LoadedScenario = parse_scenario(resolved["config"])
    sc = loaded.scenario
    if resolved["beta_deg"] is not None:
        sc = replace(sc, beta_rad=math.radians(resolved["beta_deg"]))
    if resolved["dt_c"] is not None:
        sc = replace(sc, t1_c=sc.t2_c + resolved["dt_c"])
    stage = resolved["stage"]
    if stage == "raw":
        spectrum = scenario_raw_spectrum(sc)
    else:
        spectrum = scenario_trace(sc, stream=1)
        if stage == "filtered":
            spectrum = apply_scenario_filter(sc, spectrum)
    csv_path = out_dir / "spectrum.csv"
    write_spectrum_csv(spectrum, csv_path)
    print(f"dump-spectrum: {stage} spectrum -> {csv_path}")
    return {csv_path.name: _sha256(csv_path)}


_RUNNERS: dict[str, Callable[[dict, Path], dict[str, str]]] = {
    "sweep-beta": run_sweep_beta,
    "sweep-temp": run_sweep_temp,
    "amax-curve": run_amax_curve,
    "theory-lines": run_theory_lines,
    "calibrate": run_calibrate,
    "dump-spectrum": run_dump_spectrum,
}


def _execute(command: str, resolved: dict, out_dir: Path, seed: Optional[int]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = _RUNNERS[command](resolved, out_dir)
    manifest = {
        "tool": "wva-sense",
        "version": __version__,
        "command": command,
        "created_utc": datetime.datetime.now(datetime.timezone.utc)
        .replace(microsecond=0)
        .isoformat(),
        "seed": seed,
        "resolved": resolved,
        "outputs": outputs,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )


def replay_manifest(manifest_path, out_dir) -> dict:
    """Re-run a recorded command; outputs are byte-identical to the original."""
    with open(manifest_path) as f:
        manifest = json.load(f)
    command = manifest["command"]
    if command not in _RUNNERS:
        raise ConfigError(f"{manifest_path}: unknown command {command!r}")
    _execute(command, manifest["resolved"], Path(out_dir), manifest.get("seed"))
    return manifest


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wva-sense",
        description="Weak-value-amplified FBG temperature sensing: simulation, "
        "sweeps and calibration. Emits CSV data plus a replayable manifest.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        if config_required:
            sp.add_argument("--config", required=True, help="scenario JSON file")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the OSA noise seed")

    sp = sub.add_parser("sweep-beta", help="centroid shift vs post-selection angle")
    common(sp)
    sp.add_argument("--beta-min", type=float, default=None, help="degrees")
    sp.add_argument("--beta-max", type=float, default=None, help="degrees")
    sp.add_argument("--step", type=float, default=None, help="degrees")
    sp.add_argument("--dt", type=float, default=None,
                    help="t1 - t2 override for the whole sweep (degC)")
    sp.add_argument("--dump-spectra", default="",
                    help="comma list of angles (deg) whose filtered spectra to write "
                    "(use --dump-spectra=-40,-25 for negative angles)")
    sp.add_argument("--snr-min", type=float, default=None,
                    help="annotate the largest |A| point with SNR above this floor "
                    "(dB); exits 4 when no angle qualifies")

    sp = sub.add_parser("sweep-temp", help="centroid shift vs temperature difference")
    common(sp)
    sp.add_argument("--dt", default=None,
                    help="dt values, 'a,b,c' or 'start:stop:step' (degC); "
                    "defaults to the config temperature plan")
    sp.add_argument("--beta", type=float, default=None,
                    help="post-selection angle override (deg)")

    sp = sub.add_parser("amax-curve", help="amplification factor vs angle for each g")
    common(sp, config_required=False)
    sp.add_argument("--g", required=True, help="comma list of gamma*cos(delta) values")
    sp.add_argument("--beta-min", type=float, default=-90.0, help="degrees")
    sp.add_argument("--beta-max", type=float, default=0.0, help="degrees")
    sp.add_argument("--step", type=float, default=0.01, help="degrees")

    sp = sub.add_parser("theory-lines", help="first-order shift lines for fixed A")
    common(sp, config_required=False)
    sp.add_argument("--a", required=True, help="comma list of amplification factors")
    sp.add_argument("--dt", default="0:12:1", help="'a,b,c' or 'start:stop:step' (degC)")
    sp.add_argument("--kappa", type=float, required=True, help="nm per degC")

    sp = sub.add_parser("calibrate", help="least-squares fit of a measured CSV")
    common(sp, config_required=False)
    sp.add_argument("--input", required=True, help="CSV of dt_c,centroid_shift_nm rows")

    sp = sub.add_parser("dump-spectrum", help="write one simulated spectrum")
    common(sp)
    sp.add_argument("--beta", type=float, default=None, help="angle override (deg)")
    sp.add_argument("--dt", type=float, default=None, help="t1 - t2 override (degC)")
    sp.add_argument("--stage", choices=["raw", "osa", "filtered"], default="filtered")

    return parser


def _resolve(args: argparse.Namespace) -> dict:
    if args.command == "sweep-beta":
        doc = _apply_seed(_load_doc(args.config), args.seed)
        loaded = parse_scenario(doc)
        spec = loaded.beta
        lo = args.beta_min if args.beta_min is not None else spec.sweep_min_deg
        hi = args.beta_max if args.beta_max is not None else spec.sweep_max_deg
        step = args.step if args.step is not None else spec.sweep_step_deg
        if lo is None or hi is None or step is None:
            raise ConfigError(
                "sweep-beta needs --beta-min/--beta-max/--step or a config sweep spec"
            )
        dump = _parse_float_list(args.dump_spectra, "dump-spectra") if args.dump_spectra else []
        return {
            "config": doc,
            "beta_min_deg": lo,
            "beta_max_deg": hi,
            "step_deg": step,
            "dt_c": args.dt,
            "dump_spectra_deg": dump,
            "snr_min_db": args.snr_min,
        }
    if args.command == "sweep-temp":
        doc = _apply_seed(_load_doc(args.config), args.seed)
        loaded = parse_scenario(doc)
        dt_list = (
            _parse_float_list(args.dt, "dt") if args.dt is not None else loaded.dt_list_c
        )
        return {"config": doc, "dt_list_c": dt_list, "beta_deg": args.beta}
    if args.command == "amax-curve":
        return {
            "g_list": _parse_float_list(args.g, "g"),
            "beta_min_deg": args.beta_min,
            "beta_max_deg": args.beta_max,
            "step_deg": args.step,
        }
    if args.command == "theory-lines":
        return {
            "a_list": _parse_float_list(args.a, "a"),
            "dt_list_c": _parse_float_list(args.dt, "dt"),
            "kappa_nm_per_c": args.kappa,
        }
    if args.command == "calibrate":
        return {"input": args.input, "points": parse_calibration_csv(args.input)}
    if args.command == "dump-spectrum":
        doc = _apply_seed(_load_doc(args.config), args.seed)
        parse_scenario(doc)
        return {
            "config": doc,
            "beta_deg": args.beta,
            "dt_c": args.dt,
            "stage": args.stage,
        }
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        resolved = _resolve(args)
        _execute(args.command, resolved, Path(args.out), args.seed)
        return 0
    except (ConfigError, SpectrumFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoSignalError, SingularPostSelectionError, DegenerateFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DetectionLimitedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except WvaSenseError as exc:  # any remaining domain error counts as numerical
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
