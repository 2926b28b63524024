"""Physical parameters and derived fringe constants.

All lengths are SI meters internally; the config-file surface
(:mod:`twinfringes.fileio`) accepts nm/mm keys and converts on parse.
Configs are immutable after validation and safe to share between workers.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

_SQRT_HALF = math.sqrt(0.5)

# Normalization slack for |alpha1|^2 + |alpha2|^2.
AMPLITUDE_NORM_TOL = 1e-12

# sigma_b at or above this is still accepted but flagged as straining the
# small-angle treatment.
PARAXIAL_LIMIT = 0.1


class CorrelationModel(enum.Enum):
    """Transverse-momentum correlation regime of the photon-pair sources."""

    MAXIMAL = "maximal"
    UNCORRELATED = "uncorrelated"
    GAUSSIAN_PARTIAL = "gaussian_partial"


class ParaxialWarning(UserWarning):
    """Angular widths approaching the small-angle limit of the model."""


class Violation(NamedTuple):
    """One validation failure: a machine-readable kind plus a message."""

    kind: str
    message: str


class ConfigError(ValueError):
    """Invalid configuration; carries the complete list of violations."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        joined = "; ".join(f"{v.kind}: {v.message}" for v in self.violations)
        super().__init__(f"invalid configuration: {joined}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Every physical parameter of the two-source interference setup.

    Parameters
    ----------
    lambda_a : float
        Mean wavelength of the undetected photon a [m].
    lambda_b : float
        Mean wavelength of the detected photon b [m].
    d_a : float
        Effective propagation distance between the two sources along the
        a beam [m]. Zero is allowed (balanced imaging case).
    f0 : float
        Focal length of the camera lens [m].
    sigma_b : float
        Angular 1/e^2 width of the b-photon marginal
        ``P(k_b) = exp(-2 theta_b^2 / sigma_b^2)`` [rad].
    correlation_model : CorrelationModel
        Joint-momentum model of the source.
    lambda_p : float, optional
        Mean pump wavelength [m]. Required by the partially correlated
        model (it fixes the wavenumber of the correlation shell) and by
        any derived constant involving the pump.
    sigma_theta : float, optional
        Angular width of the conditional momentum distribution [rad].
        Required when ``correlation_model`` is ``GAUSSIAN_PARTIAL``.
    n_a : float
        Refractive index seen by photon a between the sources.
    alpha1_mag, alpha2_mag : float
        Source emission amplitude magnitudes; their squares must sum to 1.
    phi1, phi2 : float
        Source phases [rad].
    phi_b : float
        Fixed b-path phase difference between the two arms [rad].
    """

    lambda_a: float
    lambda_b: float
    d_a: float
    f0: float
    sigma_b: float
    correlation_model: CorrelationModel
    lambda_p: float | None = None
    sigma_theta: float | None = None
    n_a: float = 1.0
    alpha1_mag: float = _SQRT_HALF
    alpha2_mag: float = _SQRT_HALF
    phi1: float = 0.0
    phi2: float = 0.0
    phi_b: float = 0.0


@dataclass(frozen=True)
class FringeConstants:
    """Derived quantities of the closed-form visibility model.

    ``A`` is the quadratic fringe-phase coefficient per unit refractive
    index; rates use ``n_a * A``. ``gamma``, ``chi`` and ``g`` already
    include ``n_a`` so that the whole family stays mutually consistent
    (for ``n_a = 1`` they reduce to the plain formulas).
    """

    A: float  # pi * d_a * lambda_a / (f0 * lambda_b)**2  [1/m^2]
    B: float  # f0 * lambda_b / lambda_p                  [m]
    gamma: float  # sqrt(4 + sigma_theta^4 (n_a A)^2 B^4)
    chi: float  # gamma / (n_a A B)                       [m]
    g: complex  # i sqrt(2) n_a A B sigma_theta / sqrt(2 - i sigma_theta^2 n_a A B^2)
    lambda_eq: float  # lambda_b**2 / lambda_a            [m]
    k0_prime: float  # 2 pi / lambda_p                    [1/m]


def effective_curvature(cfg: ExperimentConfig) -> float:
    """Coefficient of rho^2 in the fringe phase: n_a * pi * d_a * lambda_a / (f0 * lambda_b)**2."""
    return cfg.n_a * math.pi * cfg.d_a * cfg.lambda_a / (cfg.f0 * cfg.lambda_b) ** 2


def validate_config(raw: ExperimentConfig) -> ExperimentConfig:
    """Check every invariant and return the config unchanged if all hold.

    Raises
    ------
    ConfigError
        With the complete list of violations, not just the first one.

    Warns
    -----
    ParaxialWarning
        When ``sigma_b`` is large enough to strain the small-angle model.
        This is advisory only and never rejects the config.
    """
    bad: list[Violation] = []

    def positive(name: str, value: float | None, strict: bool = True) -> None:
        if value is None:
            return
        if (value <= 0.0) if strict else (value < 0.0):
            bound = "> 0" if strict else ">= 0"
            bad.append(Violation("NonPositiveParameter", f"{name} must be {bound}, got {value!r}"))

    positive("lambda_a", raw.lambda_a)
    positive("lambda_b", raw.lambda_b)
    positive("lambda_p", raw.lambda_p)
    positive("f0", raw.f0)
    positive("sigma_b", raw.sigma_b)
    positive("d_a", raw.d_a, strict=False)  # d_a = 0 is the balanced case
    if raw.n_a < 1.0:
        bad.append(Violation("NonPositiveParameter", f"n_a must be >= 1, got {raw.n_a!r}"))

    norm = raw.alpha1_mag**2 + raw.alpha2_mag**2
    if abs(norm - 1.0) > AMPLITUDE_NORM_TOL:
        bad.append(
            Violation(
                "AmplitudeNotNormalized",
                f"alpha1_mag^2 + alpha2_mag^2 = {norm!r}, expected 1 within {AMPLITUDE_NORM_TOL}",
            )
        )

    if raw.correlation_model is CorrelationModel.GAUSSIAN_PARTIAL:
        if raw.sigma_theta is None:
            bad.append(
                Violation("MissingSigmaTheta", "gaussian_partial model requires sigma_theta")
            )
        elif raw.sigma_theta <= 0.0:
            bad.append(
                Violation(
                    "NonPositiveParameter", f"sigma_theta must be > 0, got {raw.sigma_theta!r}"
                )
            )
        if raw.lambda_p is None:
            bad.append(
                Violation(
                    "MissingPumpWavelength",
                    "gaussian_partial model requires lambda_p (correlation-shell wavenumber)",
                )
            )

    if bad:
        raise ConfigError(bad)

    if raw.sigma_b >= PARAXIAL_LIMIT:
        warnings.warn(
            f"sigma_b = {raw.sigma_b} is outside the comfortable paraxial regime "
            f"(< {PARAXIAL_LIMIT} rad)",
            ParaxialWarning,
            stacklevel=2,
        )
    return raw


def derive_constants(cfg: ExperimentConfig) -> FringeConstants:
    """Compute all closed-form constants from a validated config.

    Pure function: identical inputs give bit-identical outputs. Needs
    ``lambda_p``; a missing ``sigma_theta`` is treated as 0 (perfect
    correlation), which gives ``gamma = 2`` exactly and ``g = 0``.
    """
    if cfg.lambda_p is None:
        raise ConfigError(
            [Violation("MissingPumpWavelength", "lambda_p is required to derive constants")]
        )
    a_coeff = math.pi * cfg.d_a * cfg.lambda_a / (cfg.f0 * cfg.lambda_b) ** 2
    b_coeff = cfg.f0 * cfg.lambda_b / cfg.lambda_p
    sigma = cfg.sigma_theta if cfg.sigma_theta is not None else 0.0
    a_eff = cfg.n_a * a_coeff
    # sigma^2 * n_a A B^2 shows up squared in gamma and inside g's root.
    curvature = sigma * sigma * a_eff * b_coeff * b_coeff
    gamma = math.sqrt(4.0 + curvature * curvature)
    ab = a_eff * b_coeff
    chi = gamma / ab if ab != 0.0 else math.inf
    g = 1j * math.sqrt(2.0) * ab * sigma / cmath.sqrt(complex(2.0, -curvature))
    return FringeConstants(
        A=a_coeff,
        B=b_coeff,
        gamma=gamma,
        chi=chi,
        g=g,
        lambda_eq=cfg.lambda_b**2 / cfg.lambda_a,
        k0_prime=2.0 * math.pi / cfg.lambda_p,
    )
