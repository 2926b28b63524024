"""Config-file parsing and serialization of images, profiles, manifests.

The config surface is a flat key-value text file; images go out as
16-bit binary PGM and profiles as plain CSV, both with deterministic
bytes for identical inputs (the run manifest carries the only
timestamp).
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .analytics import FringeImage, RadialProfile
from .config import CorrelationModel, ExperimentConfig, validate_config

PGM_MAXVAL = 65535

PROFILE_HEADER = "rho_m,rate_norm,visibility"

# Config file keys: name -> (config field, scale to SI units).
_SCALAR_KEYS = {
    "lambda_a_nm": ("lambda_a", 1e-9),
    "lambda_b_nm": ("lambda_b", 1e-9),
    "lambda_p_nm": ("lambda_p", 1e-9),
    "d_a_mm": ("d_a", 1e-3),
    "f0_mm": ("f0", 1e-3),
    "n_a": ("n_a", 1.0),
    "sigma_b": ("sigma_b", 1.0),
    "sigma_theta": ("sigma_theta", 1.0),
    "alpha1_mag": ("alpha1_mag", 1.0),
    "alpha2_mag": ("alpha2_mag", 1.0),
    "phi1_rad": ("phi1", 1.0),
    "phi2_rad": ("phi2", 1.0),
    "phi_b_rad": ("phi_b", 1.0),
}

_REQUIRED_KEYS = ("lambda_a_nm", "lambda_b_nm", "d_a_mm", "f0_mm", "sigma_b", "model")


class ParseError(ValueError):
    """Malformed config file; the message names the offending line."""


class UnknownKey(ParseError):
    """Config file contains a key outside the documented surface."""


def parse_config(path) -> ExperimentConfig:
    """Read and validate a flat key-value config file.

    Lines hold ``key = value`` (the ``=`` is optional); ``#`` starts a
    comment. Unknown and duplicate keys are hard errors, as is a missing
    required key. Values are range-checked through validate_config.
    """
    text = Path(path).read_text(encoding="utf-8")
    seen: dict[str, int] = {}
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            key, _, value = line.partition(" ")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        if key in seen:
            raise ParseError(f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        if key != "model" and key not in _SCALAR_KEYS:
            raise UnknownKey(f"line {lineno}: unknown key {key!r}")
        seen[key] = lineno
        values[key] = value

    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ParseError(f"missing required keys: {', '.join(missing)}")

    fields: dict[str, object] = {}
    for key, value in values.items():
        if key == "model":
            try:
                fields["correlation_model"] = CorrelationModel(value)
            except ValueError:
                tokens = ", ".join(m.value for m in CorrelationModel)
                raise ParseError(
                    f"line {seen[key]}: model must be one of {{{tokens}}}, got {value!r}"
                ) from None
            continue
        name, scale = _SCALAR_KEYS[key]
        try:
            fields[name] = float(value) * scale
        except ValueError:
            raise ParseError(f"line {seen[key]}: {key} must be a number, got {value!r}") from None

    return validate_config(ExperimentConfig(**fields))


def write_pgm(image: FringeImage, path) -> None:
    """Write a 16-bit big-endian binary PGM (P5), frame maximum at full scale.

    The physical rate corresponding to the full-scale sample is recorded
    in a comment line so the image is invertible to absolute units.
    """
    scale = PGM_MAXVAL / image.normalization if image.normalization > 0.0 else 0.0
    samples = np.rint(image.values * scale).clip(0, PGM_MAXVAL).astype(">u2")
    header = (
        f"P5\n# rate_max {image.normalization:.12e}\n{image.width} {image.height}\n{PGM_MAXVAL}\n"
    )
    Path(path).write_bytes(header.encode("ascii") + samples.tobytes())


def read_pgm(path) -> tuple[np.ndarray, float]:
    """Read back a PGM written by write_pgm: (uint16 samples, rate_max)."""
    blob = Path(path).read_bytes()
    parts = blob.split(b"\n", 4)
    if parts[0] != b"P5" or not parts[1].startswith(b"# rate_max "):
        raise ParseError(f"{path}: not a twinfringes PGM")
    rate_max = float(parts[1].split(b" ", 2)[2])
    width, height = (int(tok) for tok in parts[2].split())
    if int(parts[3]) != PGM_MAXVAL:
        raise ParseError(f"{path}: expected maxval {PGM_MAXVAL}")
    samples = np.frombuffer(parts[4], dtype=">u2", count=width * height)
    return samples.reshape(height, width), rate_max


def write_profile_csv(profile: RadialProfile, path) -> None:
    """Write (rho, normalized rate, visibility) rows at 12 significant digits."""
    peak = float(profile.rate.max())
    scale = 1.0 / peak if peak > 0.0 else 0.0
    lines = [PROFILE_HEADER]
    for rho, rate, vis in zip(profile.rho, profile.rate, profile.visibility):
        lines.append(f"{rho:.11e},{rate * scale:.11e},{vis:.11e}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_profile_csv(path) -> RadialProfile:
    """Read back a profile written by write_profile_csv."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0] != PROFILE_HEADER:
        raise ParseError(f"{path}: missing profile header {PROFILE_HEADER!r}")
    data = np.array([[float(tok) for tok in line.split(",")] for line in lines[1:]])
    return RadialProfile(data[:, 0], data[:, 1], data[:, 2])


@dataclasses.dataclass(frozen=True)
class RunManifest:
    """Record of one CLI run: inputs, outputs, version, timing."""

    command: str
    config: dict
    outputs: tuple[str, ...]
    version: str
    duration_s: float
    started_at: str

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(str(p) for p in self.outputs))
        missing = [p for p in self.outputs if not Path(p).exists()]
        if missing:
            raise ValueError(f"manifest lists outputs that do not exist: {missing}")


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """JSON-ready view of a config (SI units, enum collapsed to its token)."""
    out = dataclasses.asdict(cfg)
    out["correlation_model"] = cfg.correlation_model.value
    return out


def write_manifest(manifest: RunManifest, path) -> None:
    payload = dataclasses.asdict(manifest)
    payload["outputs"] = list(manifest.outputs)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
