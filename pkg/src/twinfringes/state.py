"""Discretized two-photon states over polar transverse-mode grids.

A mode grid enumerates paraxial plane-wave modes as the cross product of
polar angles and azimuths, flattened theta-major. The joint state stores
the complex amplitude table C over a pair of grids; all probability
queries are pure functions of that table. This module is the ground
truth the closed-form analytics are tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import AMPLITUDE_NORM_TOL, CorrelationModel, ExperimentConfig

# Sum |C|^2 must match 1 this closely after every constructor.
STATE_NORM_TOL = 1e-10

# Polar angles at or above this break the small-angle expansions.
_THETA_MAX = 0.1


class GridMismatch(ValueError):
    """Maximal-correlation table requested on non-conjugate grids."""


class ZeroMarginal(ValueError):
    """Conditional probability conditioned on a zero-probability mode."""


@dataclass(frozen=True, eq=False)
class ModeGrid:
    """Transverse modes of one photon: polar angles x azimuths.

    Parameters
    ----------
    theta_samples : array
        Strictly increasing polar angles in [0, 0.1) rad.
    azimuth_samples : array
        Strictly increasing azimuths in [0, 2 pi) rad; a single entry
        gives a radially resolved (1D) grid.
    k_magnitude : float
        Wavenumber of the photon species this grid represents [1/m].
    """

    theta_samples: np.ndarray
    azimuth_samples: np.ndarray
    k_magnitude: float

    def __post_init__(self):
        theta = np.asarray(self.theta_samples, dtype=float)
        azimuth = np.asarray(self.azimuth_samples, dtype=float)
        object.__setattr__(self, "theta_samples", theta)
        object.__setattr__(self, "azimuth_samples", azimuth)
        if theta.ndim != 1 or theta.size == 0:
            raise ValueError("theta_samples must be a non-empty 1D array")
        if azimuth.ndim != 1 or azimuth.size == 0:
            raise ValueError("azimuth_samples must be a non-empty 1D array")
        if np.any(np.diff(theta) <= 0.0):
            raise ValueError("theta_samples must be strictly increasing")
        if theta[0] < 0.0 or theta[-1] >= _THETA_MAX:
            raise ValueError(f"theta_samples must lie in [0, {_THETA_MAX})")
        if np.any(np.diff(azimuth) <= 0.0):
            raise ValueError("azimuth_samples must be strictly increasing")
        if azimuth[0] < 0.0 or azimuth[-1] >= 2.0 * math.pi:
            raise ValueError("azimuth_samples must lie in [0, 2 pi)")
        if not self.k_magnitude > 0.0:
            raise ValueError("k_magnitude must be positive")

    @property
    def n_modes(self) -> int:
        return self.theta_samples.size * self.azimuth_samples.size

    def mode_thetas(self) -> np.ndarray:
        """Polar angle of every flattened mode (theta-major order)."""
        return np.repeat(self.theta_samples, self.azimuth_samples.size)

    def mode_azimuths(self) -> np.ndarray:
        """Azimuth of every flattened mode (theta-major order)."""
        return np.tile(self.azimuth_samples, self.theta_samples.size)

    def transverse_x(self) -> np.ndarray:
        """Signed x transverse wavevector k sin(theta) cos(az), paraxially k theta cos(az)."""
        return self.k_magnitude * self.mode_thetas() * np.cos(self.mode_azimuths())


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """Amplitude table C[k_a, k_b] over a pair of mode grids."""

    grid_a: ModeGrid
    grid_b: ModeGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        expected = (self.grid_a.n_modes, self.grid_b.n_modes)
        if amp.shape != expected:
            raise ValueError(f"amplitude table shape {amp.shape}, expected {expected}")
        total = float(np.sum(np.abs(amp) ** 2))
        if abs(total - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state not normalized: sum |C|^2 = {total!r}")


@dataclass(frozen=True, eq=False)
class SuperposedState:
    """Coherent superposition of the same biphoton state from two sources.

    ``phase_a`` is the raw a-path phase accumulated between the sources
    for every mode of ``grid_a``. ``phase_offset`` is the static,
    mode-independent part (on-axis a phase plus the source and b-path
    phases); counting rates subtract it so that the externally scanned
    phase phi_0 = 0 corresponds to the on-axis bright-fringe condition.
    The originating config is kept for downstream geometry queries.
    """

    base: TwoPhotonState
    alpha1: complex
    alpha2: complex
    phase_a: np.ndarray
    phase_offset: float
    config: ExperimentConfig

    def __post_init__(self):
        table = np.asarray(self.phase_a, dtype=float)
        object.__setattr__(self, "phase_a", table)
        if table.shape != (self.base.grid_a.n_modes,):
            raise ValueError("phase_a table does not match grid_a mode count")
        norm = abs(self.alpha1) ** 2 + abs(self.alpha2) ** 2
        if abs(norm - 1.0) > AMPLITUDE_NORM_TOL:
            raise ValueError(f"|alpha1|^2 + |alpha2|^2 = {norm!r}, expected 1")


# ---------------------------------------------------------------------------
# grid factories
# ---------------------------------------------------------------------------

def camera_grid(rho_values, cfg: ExperimentConfig, azimuths=(0.0,)) -> ModeGrid:
    """Grid of b modes that land on the given camera radii (theta_b = rho / f0)."""
    rho = np.asarray(rho_values, dtype=float)
    return ModeGrid(rho / cfg.f0, np.asarray(azimuths, dtype=float), 2.0 * math.pi / cfg.lambda_b)


def conjugate_grid(grid_b: ModeGrid, cfg: ExperimentConfig) -> ModeGrid:
    """The a-side image of a b grid under the anti-correlated momentum map.

    Transverse momenta cancel pairwise: k_a theta_a = k_b theta_b with
    the azimuth flipped by pi. Feeding this grid to the maximal model
    guarantees every b column finds its partner.
    """
    theta_a = (cfg.lambda_a / cfg.lambda_b) * grid_b.theta_samples
    azimuth = np.sort(np.mod(grid_b.azimuth_samples + math.pi, 2.0 * math.pi))
    return ModeGrid(theta_a, azimuth, 2.0 * math.pi / cfg.lambda_a)


def line_grid(cfg: ExperimentConfig, t_max: float, n_modes: int = 512) -> ModeGrid:
    """Signed transverse line for photon a: azimuths {0, pi}, midpoint thetas.

    The 2 m modes sit at +-(i + 1/2) t_max / m, i < m = n_modes / 2,
    which is the midpoint discretization of the signed interval
    [-t_max, t_max] used by the brute-force rate sums.
    """
    if n_modes < 4 or n_modes % 2:
        raise ValueError("n_modes must be an even number >= 4")
    half = n_modes // 2
    theta = (np.arange(half) + 0.5) * (t_max / half)
    return ModeGrid(theta, np.array([0.0, math.pi]), 2.0 * math.pi / cfg.lambda_a)


def shell_line_grid(
    cfg: ExperimentConfig, rho_max: float, n_modes: int = 512, span: float = 6.0
) -> ModeGrid:
    """Line grid wide enough to hold the correlation shell for every camera
    radius up to ``rho_max``.

    The shell conditioned on a b mode at theta_b is centered at
    -(k_b / k_a) theta_b with angular half-width span * sigma_theta * k0' / k_a,
    so the symmetric extent below covers all columns at once.
    """
    if cfg.sigma_theta is None or cfg.lambda_p is None:
        raise ValueError("shell_line_grid needs sigma_theta and lambda_p")
    k_a = 2.0 * math.pi / cfg.lambda_a
    k_b = 2.0 * math.pi / cfg.lambda_b
    k0p = 2.0 * math.pi / cfg.lambda_p
    t_max = (span * cfg.sigma_theta * k0p + k_b * rho_max / cfg.f0) / k_a
    return line_grid(cfg, t_max, n_modes)


def dephasing_grid(cfg: ExperimentConfig, n_modes: int = 512) -> ModeGrid:
    """Uncorrelated-model a grid whose quadratic phases cancel exactly.

    The polar angles are chosen so the accumulated phases
    (pi n_a d_a / lambda_a) theta^2 land on 2 pi (i + 1/2) / N, the N-th
    roots of unity rotated by pi / N; with uniform weights their sum is
    exactly zero, making the phase-averaged rate flat to rounding level
    rather than to the O(1/N) of a generic grid.
    """
    c2 = math.pi * cfg.n_a * cfg.d_a / cfg.lambda_a
    if c2 <= 0.0:
        raise ValueError("dephasing_grid needs d_a > 0")
    theta = np.sqrt(2.0 * math.pi * (np.arange(n_modes) + 0.5) / (n_modes * c2))
    return ModeGrid(theta, np.array([0.0]), 2.0 * math.pi / cfg.lambda_a)


# ---------------------------------------------------------------------------
# state constructors and probability queries
# ---------------------------------------------------------------------------

def _envelope_b(grid_b: ModeGrid, cfg: ExperimentConfig) -> np.ndarray:
    theta = grid_b.mode_thetas()
    return np.exp(-2.0 * theta**2 / cfg.sigma_b**2)


def _unit_phasor(phi: float) -> complex:
    return complex(math.cos(phi), math.sin(phi))


def build_amplitudes(
    model: CorrelationModel,
    grid_a: ModeGrid,
    grid_b: ModeGrid,
    cfg: ExperimentConfig,
) -> TwoPhotonState:
    """Construct the normalized amplitude table for one correlation model.

    Maximal: one nonzero entry per b column, at the a mode whose
    transverse momentum cancels it (GridMismatch if a column has no
    partner). Uncorrelated: product of a uniform a marginal and the
    Gaussian b envelope. Gaussian partial: the pump-shell conditional,
    with the radial delta resolved analytically; each node carries the
    ring measure |theta'| times the Gaussian in the shell angle
    theta' = |k_a + k_b| transverse / k0'.
    """
    x_a = grid_a.transverse_x()
    x_b = grid_b.transverse_x()
    p_b = _envelope_b(grid_b, cfg)

    if model is CorrelationModel.MAXIMAL:
        target = -x_b
        distance = np.abs(x_a[:, None] - target[None, :])
        nearest = distance.argmin(axis=0)
        scale = max(float(np.max(np.abs(x_a))), grid_a.k_magnitude * 1e-12)
        if np.any(distance[nearest, np.arange(grid_b.n_modes)] > 1e-9 * scale):
            raise GridMismatch(
                "grid_a is not the anti-correlated image of grid_b; "
                "build it with conjugate_grid()"
            )
        weights = np.zeros((grid_a.n_modes, grid_b.n_modes))
        weights[nearest, np.arange(grid_b.n_modes)] = p_b
    elif model is CorrelationModel.UNCORRELATED:
        u_a = np.full(grid_a.n_modes, 1.0 / grid_a.n_modes)
        weights = np.outer(u_a, p_b)
    elif model is CorrelationModel.GAUSSIAN_PARTIAL:
        if cfg.sigma_theta is None or cfg.lambda_p is None:
            raise ValueError("gaussian_partial model requires sigma_theta and lambda_p")
        k0p = 2.0 * math.pi / cfg.lambda_p
        theta_prime = (x_a[:, None] + x_b[None, :]) / k0p
        weights = (
            p_b[None, :]
            * np.abs(theta_prime)
            * np.exp(-2.0 * theta_prime**2 / cfg.sigma_theta**2)
        )
    else:
        raise ValueError(f"unknown correlation model {model!r}")

    total = weights.sum()
    if not total > 0.0:
        raise ValueError("amplitude table underflowed to zero; grids miss the support")
    return TwoPhotonState(grid_a, grid_b, np.sqrt(weights / total).astype(complex))


def joint_probability(state: TwoPhotonState, k_a: int, k_b: int) -> float:
    """|C[k_a, k_b]|^2 for a pair of flattened mode indices."""
    n_a, n_b = state.amplitudes.shape
    if not (0 <= k_a < n_a and 0 <= k_b < n_b):
        raise IndexError(f"mode pair ({k_a}, {k_b}) outside table {state.amplitudes.shape}")
    return float(abs(state.amplitudes[k_a, k_b]) ** 2)


def marginal_b(state: TwoPhotonState) -> np.ndarray:
    """Probability of each b mode, summed over all a modes."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=0)


def conditional_probability(state: TwoPhotonState, k_a: int, given_k_b: int) -> float:
    """P(k_a | k_b) = |C[k_a, k_b]|^2 / sum_a |C[., k_b]|^2."""
    joint = joint_probability(state, k_a, given_k_b)
    marg = float(np.sum(np.abs(state.amplitudes[:, given_k_b]) ** 2))
    if marg == 0.0:
        raise ZeroMarginal(f"b mode {given_k_b} has zero marginal probability")
    return joint / marg


def superpose_sources(state: TwoPhotonState, cfg: ExperimentConfig) -> SuperposedState:
    """Attach the source amplitudes and the a-path phase table.

    The static phase reference (on-axis a phase plus phi_b and the
    source phase difference) is folded into ``phase_offset`` so that the
    scan phase phi_0 is measured from the on-axis bright fringe.
    """
    from .oracle import phase_a  # deferred: oracle consumes this module's types

    table = phase_a(state.grid_a.mode_thetas(), cfg)
    offset = phase_a(0.0, cfg) + cfg.phi_b + cfg.phi2 - cfg.phi1
    return SuperposedState(
        base=state,
        alpha1=cfg.alpha1_mag * _unit_phasor(cfg.phi1),
        alpha2=cfg.alpha2_mag * _unit_phasor(cfg.phi2),
        phase_a=np.asarray(table, dtype=float),
        phase_offset=float(offset),
        config=cfg,
    )


def mutual_information_bits(state: TwoPhotonState) -> float:
    """Mutual information of the discretized joint |C|^2, in bits."""
    joint = np.abs(state.amplitudes) ** 2
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    product = np.outer(pa, pb)
    mask = joint > 0.0
    return float(np.sum(joint[mask] * np.log2(joint[mask] / product[mask])))


def assemble_state(cfg: ExperimentConfig, rho_values, n_modes: int = 512) -> SuperposedState:
    """Build the two-source state sampled at the given camera radii.

    Convenience wrapper that picks the a-side grid suited to the
    configured correlation model: the anti-correlated image of the
    camera grid (maximal), the exact-cancellation grid (uncorrelated),
    or a signed line wide enough for the pump shell (gaussian partial).
    """
    grid_b = camera_grid(rho_values, cfg)
    model = cfg.correlation_model
    if model is CorrelationModel.MAXIMAL:
        grid_a = conjugate_grid(grid_b, cfg)
    elif model is CorrelationModel.UNCORRELATED:
        grid_a = dephasing_grid(cfg, n_modes)
    else:
        rho_max = float(np.max(np.abs(np.asarray(rho_values, dtype=float))))
        grid_a = shell_line_grid(cfg, rho_max, n_modes)
    return superpose_sources(build_amplitudes(model, grid_a, grid_b, cfg), cfg)
