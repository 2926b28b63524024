"""Recovery of correlation parameters from fringe observables.

The central visibility fixes the momentum-correlation width through an
explicit inverse; ring radii measured at several source separations fix
the equivalent wavelength, and with it the undetected photon's
wavelength. Everything operates on single-beam observables only; no
coincidence data enters anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analytics import central_visibility
from .config import CorrelationModel, ExperimentConfig
from .state import ModeGrid, TwoPhotonState, build_amplitudes


class DegenerateVisibility(ValueError):
    """Visibility outside (0, 1]; the width inverse is undefined there."""


class InsufficientData(ValueError):
    """Too few observations for the requested fit."""


class NegativeSlope(ValueError):
    """Ring-radius fit produced a nonpositive slope; data are inconsistent."""


@dataclass(frozen=True)
class FringeObservation:
    """Fringe observables measured at one source separation.

    ring_radii holds (N, rho_N) pairs for the bright rings that were
    identified; v0 is the central visibility; hwhm is optional.
    """

    d_a: float
    ring_radii: tuple[tuple[int, float], ...]
    v0: float
    hwhm: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "ring_radii", tuple((int(n), float(r)) for n, r in self.ring_radii))
        if not 0.0 < self.v0 <= 1.0:
            raise ValueError(f"v0 = {self.v0!r} outside (0, 1]")
        ordered = sorted(self.ring_radii)
        radii = [r for _, r in ordered]
        if any(r <= 0.0 for r in radii):
            raise ValueError("ring radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("ring radii must increase with N")


@dataclass(frozen=True)
class WavelengthEstimate:
    """Equivalent wavelength with the standard error of the fitted slope."""

    lambda_eq: float
    stderr: float


def estimate_sigma_theta(v0: float, cfg: ExperimentConfig) -> float:
    """Correlation width from the central visibility.

    Inverts the closed-form central visibility:
    sigma_theta^2 = (8 pi / (n_a k0'^2 lambda_a d_a)) sqrt(1 / v0^2 - 1).
    v0 = 1 returns exactly 0 (perfect correlation); anything outside
    (0, 1] raises DegenerateVisibility.
    """
    if not 0.0 < v0 <= 1.0:
        raise DegenerateVisibility(f"v0 = {v0!r} outside (0, 1]")
    if v0 == 1.0:
        return 0.0
    if cfg.lambda_p is None:
        raise ValueError("estimate_sigma_theta requires lambda_p for the pump wavenumber")
    if cfg.d_a <= 0.0:
        raise ValueError("estimate_sigma_theta requires d_a > 0")
    k0p = 2.0 * math.pi / cfg.lambda_p
    sigma_sq = (
        8.0
        * math.pi
        / (cfg.n_a * k0p * k0p * cfg.lambda_a * cfg.d_a)
        * math.sqrt(1.0 / (v0 * v0) - 1.0)
    )
    return math.sqrt(sigma_sq)


def estimate_sigma_theta_bisect(
    v0: float, cfg: ExperimentConfig, hi: float = 5e-2
) -> float:
    """Scan-based width inverse: bisection on the forward visibility.

    Shares no algebra with estimate_sigma_theta; the two must agree,
    which guards the constant derivations on both sides. The forward
    model central_visibility is strictly decreasing in sigma_theta, so
    plain bisection on [0, hi] converges unconditionally.
    """
    if not 0.0 < v0 <= 1.0:
        raise DegenerateVisibility(f"v0 = {v0!r} outside (0, 1]")
    if v0 == 1.0:
        return 0.0

    def forward(sigma: float) -> float:
        return central_visibility(replace(cfg, sigma_theta=sigma))

    if forward(hi) > v0:
        raise ValueError(f"v0 = {v0!r} not reachable within sigma_theta <= {hi}")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if forward(mid) > v0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def estimate_equivalent_wavelength(
    observations: list[FringeObservation], cfg: ExperimentConfig
) -> WavelengthEstimate:
    """Equivalent wavelength from first-ring radii at several separations.

    Fits rho_1^2 = slope / d_a through the origin by least squares; the
    ring law gives slope = 2 lambda_eq f0^2 / n_a. The reported stderr
    is the ordinary no-intercept slope standard error propagated through
    that relation (the error model is plain homoscedastic OLS).
    Needs at least three observations with distinct d_a, each carrying
    the N = 1 ring.
    """
    first_radii: list[tuple[float, float]] = []
    for obs in observations:
        ring = dict(obs.ring_radii).get(1)
        if ring is None:
            raise InsufficientData("every observation must include the N = 1 ring radius")
        if obs.d_a <= 0.0:
            raise InsufficientData("observations require d_a > 0")
        first_radii.append((obs.d_a, ring))
    if len({d for d, _ in first_radii}) < 3:
        raise InsufficientData("need at least 3 observations with distinct d_a")

    x = np.array([1.0 / d for d, _ in first_radii])
    y = np.array([r * r for _, r in first_radii])
    sxx = float(x @ x)
    slope = float(x @ y) / sxx
    if slope <= 0.0:
        raise NegativeSlope(f"fitted slope {slope!r} is not positive")
    residual = y - slope * x
    dof = x.size - 1
    slope_var = float(residual @ residual) / dof / sxx
    factor = cfg.n_a / (2.0 * cfg.f0 * cfg.f0)
    return WavelengthEstimate(
        lambda_eq=slope * factor, stderr=math.sqrt(slope_var) * factor
    )


def infer_lambda_a(lambda_eq: float, lambda_b: float) -> float:
    """Wavelength of the undetected photon: lambda_a = lambda_b^2 / lambda_eq."""
    if lambda_eq <= 0.0 or lambda_b <= 0.0:
        raise ValueError("wavelengths must be positive")
    return lambda_b * lambda_b / lambda_eq


def reconstruct_joint_probability(
    sigma_theta: float,
    envelope_sigma_b: float,
    grids: tuple[ModeGrid, ModeGrid],
    *,
    k0_prime: float | None = None,
) -> TwoPhotonState:
    """Joint momentum distribution implied by the estimated parameters.

    Rebuilds the Gaussian-shell amplitude table on the given
    (grid_a, grid_b) pair. The shell wavenumber defaults to the sum of
    the two grid wavenumbers (energy conservation); pass ``k0_prime`` to
    override. sigma_theta = 0 returns the perfectly correlated table.
    """
    grid_a, grid_b = grids
    if sigma_theta < 0.0 or envelope_sigma_b <= 0.0:
        raise ValueError("widths must be nonnegative (sigma_b strictly positive)")
    shell_k = k0_prime if k0_prime is not None else grid_a.k_magnitude + grid_b.k_magnitude
    cfg = ExperimentConfig(
        lambda_a=2.0 * math.pi / grid_a.k_magnitude,
        lambda_b=2.0 * math.pi / grid_b.k_magnitude,
        d_a=0.0,
        f0=1.0,
        sigma_b=envelope_sigma_b,
        correlation_model=(
            CorrelationModel.MAXIMAL if sigma_theta == 0.0 else CorrelationModel.GAUSSIAN_PARTIAL
        ),
        lambda_p=2.0 * math.pi / shell_k,
        sigma_theta=sigma_theta if sigma_theta > 0.0 else None,
    )
    return build_amplitudes(cfg.correlation_model, grid_a, grid_b, cfg)


def pump_waist_to_sigma(w_p: float, lambda_p: float) -> float:
    """Correlation width of a Gaussian pump: sigma_theta = lambda_p / (pi w_p)."""
    if w_p <= 0.0 or lambda_p <= 0.0:
        raise ValueError("waist and wavelength must be positive")
    return lambda_p / (math.pi * w_p)
