"""Command-line front end: simulate, visibility, invert, eqwavelength, oracle.

Every command reads one flat key-value config file (``--config``) and
derives its output paths from one base path (``--out``). Exit codes:
0 success, 1 usage or validation error, 2 numerical tolerance failure,
3 I/O error. Data files are byte-deterministic; the JSON manifest
written next to them carries the only timestamp.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .analytics import (
    NoHalfPoint,
    central_visibility,
    radial_profile,
    render_pattern,
    visibility_closed_form,
    visibility_hwhm,
)
from .config import CorrelationModel, ExperimentConfig
from .fileio import (
    ParseError,
    RunManifest,
    config_to_dict,
    parse_config,
    write_manifest,
    write_pgm,
    write_profile_csv,
)
from .inverse import (
    FringeObservation,
    estimate_equivalent_wavelength,
    estimate_sigma_theta,
    estimate_sigma_theta_bisect,
    infer_lambda_a,
)
from .oracle import counting_rate_reduced, visibility_scan
from .special import ToleranceNotReached
from .state import assemble_state

TOOL_VERSION = "0.1.0"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2
EXIT_IO = 3

# Oracle-check tolerances per model: (max |V_grid - V_closed|, max
# peak-relative rate discrepancy). The partial-model 0.01 bound is the
# 512-mode Riemann-sum convergence level established by grid refinement.
_ORACLE_TOLS = {
    CorrelationModel.MAXIMAL: (1e-9, 1e-9),
    CorrelationModel.UNCORRELATED: (1e-9, 1e-10),
    CorrelationModel.GAUSSIAN_PARTIAL: (0.01, 0.01),
}


class UsageError(ValueError):
    """Bad command line (unknown flag, missing argument, bad value)."""


class ToleranceExceeded(RuntimeError):
    """Oracle check found grid/closed-form discrepancies above tolerance."""


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _finish(command: str, cfg: ExperimentConfig, outputs, started_at: str, t0: float,
            manifest_path=None) -> RunManifest:
    """Assemble the manifest and optionally write it to disk."""
    manifest = RunManifest(
        command=command,
        config=config_to_dict(cfg),
        outputs=tuple(str(p) for p in outputs),
        version=TOOL_VERSION,
        duration_s=time.perf_counter() - t0,
        started_at=started_at,
    )
    if manifest_path is not None:
        write_manifest(manifest, manifest_path)
    return manifest


def run_simulate(
    cfg: ExperimentConfig,
    screen_mm: float,
    resolution: int,
    phi_0: float,
    out_image,
    out_profile,
    manifest_path=None,
) -> RunManifest:
    """Render the fringe image and its radial profile CSV.

    Parameters
    ----------
    cfg : ExperimentConfig
        Validated experimental configuration.
    screen_mm : float
        Physical edge length of the square screen, in millimeters.
    resolution : int
        Image width and height in pixels (>= 64).
    phi_0 : float
        Scan phase in radians, measured from the on-axis bright fringe.
    out_image, out_profile : path-like
        Destination PGM and CSV paths.

    Returns
    -------
    RunManifest
        Record of the run; both output files exist on return.
    """
    started, t0 = _utc_now(), time.perf_counter()
    screen = screen_mm * 1e-3
    image = render_pattern(cfg, screen, resolution, phi_0)
    profile = radial_profile(cfg, 0.5 * screen, resolution, phi_0)
    write_pgm(image, out_image)
    write_profile_csv(profile, out_profile)
    return _finish("simulate", cfg, (out_image, out_profile), started, t0, manifest_path)


def run_visibility_scan(
    cfg: ExperimentConfig,
    out_csv,
    sigma_list=None,
    rho_list=None,
    manifest_path=None,
) -> RunManifest:
    """Scan visibility against correlation width or camera radius.

    Exactly one of ``sigma_list`` (dimensionless widths; emits
    ``sigma_theta,v0,hwhm_m`` rows, the HWHM column blank where the
    visibility never falls to half) and ``rho_list`` (camera radii in
    meters; emits ``rho_m,visibility`` rows) must be a non-empty
    sequence. Nothing is written before the arguments validate.
    """
    if bool(sigma_list) == bool(rho_list):
        raise UsageError("provide exactly one non-empty scan list (sigma or rho)")
    started, t0 = _utc_now(), time.perf_counter()
    lines = []
    if sigma_list:
        lines.append("sigma_theta,v0,hwhm_m")
        for sigma in sigma_list:
            scan_cfg = dataclasses.replace(cfg, sigma_theta=float(sigma))
            v0 = central_visibility(scan_cfg)
            try:
                hwhm = f"{visibility_hwhm(scan_cfg):.11e}"
            except NoHalfPoint:
                hwhm = ""
            lines.append(f"{sigma:.11e},{v0:.11e},{hwhm}")
    else:
        lines.append("rho_m,visibility")
        for rho in rho_list:
            lines.append(f"{rho:.11e},{visibility_closed_form(float(rho), cfg):.11e}")
    Path(out_csv).write_text("\n".join(lines) + "\n", encoding="ascii")
    return _finish("visibility", cfg, (out_csv,), started, t0, manifest_path)


def run_invert(
    cfg: ExperimentConfig,
    v0: float,
    out=None,
    rho1: float | None = None,
    manifest_path=None,
) -> RunManifest:
    """Report the correlation width implied by a measured central visibility.

    Runs both the closed-form inverse and the independent bisection
    inverse and reports their relative difference as a cross-check.
    With a first-ring radius supplied, also reports the single-point
    equivalent wavelength and the inferred undetected wavelength.
    Writes to ``out`` if given, else stdout.
    """
    started, t0 = _utc_now(), time.perf_counter()
    sigma = estimate_sigma_theta(v0, cfg)
    lines = [f"v0 = {v0:.12g}", f"sigma_theta_rad = {sigma:.12e}"]
    if sigma == 0.0:
        lines.append("note = maximal correlation; conditional collapses to the momentum shell")
    else:
        sigma_scan = estimate_sigma_theta_bisect(v0, cfg)
        lines.append(f"conditional_gaussian_std_rad = {0.5 * sigma:.12e}")
        lines.append(f"cross_check_rel = {abs(sigma_scan - sigma) / sigma:.3e}")
    if rho1 is not None:
        if rho1 <= 0.0:
            raise UsageError("first-ring radius must be positive")
        lambda_eq = rho1 * rho1 * cfg.n_a * cfg.d_a / (2.0 * cfg.f0 * cfg.f0)
        lines.append(f"lambda_eq_nm = {lambda_eq * 1e9:.6f}")
        lines.append(f"lambda_a_nm = {infer_lambda_a(lambda_eq, cfg.lambda_b) * 1e9:.6f}")
    report = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(report)
        outputs = ()
    else:
        Path(out).write_text(report, encoding="ascii")
        outputs = (out,)
    return _finish("invert", cfg, outputs, started, t0, manifest_path)


def run_eqwavelength(cfg: ExperimentConfig, data_path, out=None, manifest_path=None) -> RunManifest:
    """Regress first-ring radii over source separations to lambda_eq.

    ``data_path`` is a CSV with header ``d_a_mm,rho1_mm`` and one row
    per separation. Writes the fitted equivalent wavelength, its
    standard error, and the inferred undetected wavelength.
    """
    started, t0 = _utc_now(), time.perf_counter()
    lines = Path(data_path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0].strip() != "d_a_mm,rho1_mm":
        raise ParseError(f"{data_path}: expected header 'd_a_mm,rho1_mm'")
    observations = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            d_mm, rho_mm = (float(tok) for tok in line.split(","))
        except ValueError:
            raise ParseError(f"{data_path}:{lineno}: expected two numbers, got {line!r}") from None
        observations.append(
            FringeObservation(d_a=d_mm * 1e-3, ring_radii=((1, rho_mm * 1e-3),), v0=1.0)
        )
    estimate = estimate_equivalent_wavelength(observations, cfg)
    report = (
        f"n_separations = {len(observations)}\n"
        f"lambda_eq_nm = {estimate.lambda_eq * 1e9:.6f}\n"
        f"lambda_eq_stderr_nm = {estimate.stderr * 1e9:.6f}\n"
        f"lambda_a_nm = {infer_lambda_a(estimate.lambda_eq, cfg.lambda_b) * 1e9:.6f}\n"
    )
    if out is None:
        sys.stdout.write(report)
        outputs = ()
    else:
        Path(out).write_text(report, encoding="ascii")
        outputs = (out,)
    return _finish("eqwavelength", cfg, outputs, started, t0, manifest_path)


def _oracle_curves(cfg: ExperimentConfig, grid_points: int):
    """Grid-oracle and closed-form visibility/rate curves at sampled radii."""
    closed = radial_profile(cfg, 0.5 * cfg.f0 * cfg.sigma_b, 16, 0.0)
    state = assemble_state(cfg, closed.rho, n_modes=grid_points)
    # 1024 phases push the parabolic-refinement bias (~n^-4) below the
    # 1e-9 maximal-model tolerance; 64 would leave it at ~2e-6.
    vis_grid = np.array([visibility_scan(state, float(r), 1024) for r in closed.rho])
    rate_grid = np.array(
        [counting_rate_reduced(state, j, 0.0) for j in range(state.base.grid_b.n_modes)]
    )
    return closed.rho, vis_grid, closed.visibility, rate_grid, closed.rate


def run_oracle_check(cfg: ExperimentConfig, grid_points: int, out, manifest_path=None) -> RunManifest:
    """Compare the brute-force mode-sum against the closed forms.

    Sweeps 16 radii across the envelope, computes the visibility by
    phase scanning the grid rate and the rate curve at phi_0 = 0, and
    checks both against the analytic results for the configured model.
    The JSON report is written even on failure; ToleranceExceeded is
    raised afterwards so the discrepancies stay inspectable.
    """
    if grid_points < 128:
        raise UsageError("grid_points must be at least 128")
    started, t0 = _utc_now(), time.perf_counter()
    radii, vis_grid, vis_closed, rate_grid, rate_closed = _oracle_curves(cfg, grid_points)

    vis_tol, rate_tol = _ORACLE_TOLS[cfg.correlation_model]
    vis_err = float(np.max(np.abs(vis_grid - vis_closed)))
    # Rates are compared peak-normalized; a pointwise relative error is
    # undefined at the dark-fringe zeros of the maximal model.
    rate_err = float(
        np.max(np.abs(rate_grid / rate_grid.max() - rate_closed / rate_closed.max()))
    )
    passed = vis_err <= vis_tol and rate_err <= rate_tol
    report = {
        "model": cfg.correlation_model.value,
        "grid_points": int(grid_points),
        "radii_m": [float(r) for r in radii],
        "max_abs_visibility_discrepancy": vis_err,
        "visibility_tolerance": vis_tol,
        "max_peak_relative_rate_discrepancy": rate_err,
        "rate_tolerance": rate_tol,
        "passed": passed,
    }
    Path(out).write_text(json.dumps(report, indent=2) + "\n", encoding="ascii")
    if not passed:
        raise ToleranceExceeded(
            f"visibility discrepancy {vis_err:.3e} (tol {vis_tol:.1e}), "
            f"rate discrepancy {rate_err:.3e} (tol {rate_tol:.1e}); report at {out}"
        )
    return _finish("oracle", cfg, (out,), started, t0, manifest_path)


class _Parser(argparse.ArgumentParser):
    """argparse that signals usage problems via UsageError (exit 1, not 2)."""

    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twinfringes", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="key=value config file")
    common.add_argument("--out", help="base path for output files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="render fringe image + profile")
    p.add_argument("--screen-mm", type=float, default=3.0, help="screen edge length (mm)")
    p.add_argument("--resolution", type=int, default=600, help="image size in pixels")
    p.add_argument("--phi0", type=float, default=0.0, help="scan phase (rad)")

    p = sub.add_parser("visibility", parents=[common], help="scan V over sigma or radius")
    p.add_argument("--sigma-list", type=_float_list, help="comma-separated sigma_theta values")
    p.add_argument("--rho-mm-list", type=_float_list, help="comma-separated radii (mm)")

    p = sub.add_parser("invert", parents=[common], help="correlation width from visibility")
    p.add_argument("--v0", type=float, required=True, help="measured central visibility")
    p.add_argument("--rho1-mm", type=float, help="first bright-ring radius (mm)")

    p = sub.add_parser("eqwavelength", parents=[common], help="lambda_eq from ring-radius data")
    p.add_argument("--data", required=True, help="CSV of d_a_mm,rho1_mm rows")

    p = sub.add_parser("oracle", parents=[common], help="grid vs closed-form consistency check")
    p.add_argument("--grid-points", type=int, default=512, help="a-side modes (>= 128)")
    return parser


def _require_out(args) -> Path:
    if args.out is None:
        raise UsageError(f"{args.command} requires --out")
    return Path(args.out)


def _dispatch(args) -> None:
    cfg = parse_config(args.config)
    if args.command == "simulate":
        base = _require_out(args)
        run_simulate(
            cfg,
            args.screen_mm,
            args.resolution,
            args.phi0,
            base.with_suffix(".pgm"),
            base.with_suffix(".csv"),
            base.with_suffix(".manifest.json"),
        )
    elif args.command == "visibility":
        base = _require_out(args)
        rho_list = [r * 1e-3 for r in args.rho_mm_list] if args.rho_mm_list else None
        run_visibility_scan(
            cfg,
            base.with_suffix(".csv"),
            sigma_list=args.sigma_list,
            rho_list=rho_list,
            manifest_path=base.with_suffix(".manifest.json"),
        )
    elif args.command == "invert":
        out = Path(args.out).with_suffix(".txt") if args.out else None
        manifest = Path(args.out).with_suffix(".manifest.json") if args.out else None
        rho1 = args.rho1_mm * 1e-3 if args.rho1_mm is not None else None
        run_invert(cfg, args.v0, out, rho1, manifest)
    elif args.command == "eqwavelength":
        out = Path(args.out).with_suffix(".txt") if args.out else None
        manifest = Path(args.out).with_suffix(".manifest.json") if args.out else None
        run_eqwavelength(cfg, args.data, out, manifest)
    else:
        base = _require_out(args)
        run_oracle_check(
            cfg, args.grid_points, base.with_suffix(".json"), base.with_suffix(".manifest.json")
        )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _dispatch(args)
    except (ToleranceNotReached, ToleranceExceeded) as exc:
        print(f"twinfringes: tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as exc:  # UsageError, ParseError, ConfigError, estimator errors
        print(f"twinfringes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"twinfringes: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
