"""First-order radio energy model: per-bit transmit/receive energies and the
ancillary power constants used by every category model.

Transmission uses the standard two-regime amplifier: free-space d^2 below the
crossover distance d0 = sqrt(amp_fs/amp_mp), multi-path d^4 above it.  The
model is configurable; the shipped defaults are repo calibration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class RadioProfile:
    """Radio energy constants.

    e_elec   electronics energy per bit [J/bit], both transmit baseline and
             receive cost
    amp_fs   free-space amplifier coefficient [J/bit/m^2]
    amp_mp   multi-path amplifier coefficient [J/bit/m^4]
    p_idle   idle listening power [W]
    e_on     energy per wake transition [J]
    e_off    energy per sleep transition [J]
    """

    e_elec: float = 50e-9
    amp_fs: float = 10e-12
    amp_mp: float = 1.3e-15
    p_idle: float = 0.05
    e_on: float = 1e-6
    e_off: float = 1e-6

    @property
    def crossover(self) -> float:
        """Crossover distance d0 = sqrt(amp_fs/amp_mp); inf when amp_mp = 0."""
        if self.amp_mp > 0:
            return math.sqrt(self.amp_fs / self.amp_mp)
        return math.inf


def tx_energy_per_bit(d: float, prof: RadioProfile) -> float:
    """Energy to transmit one bit over range ``d`` meters [J/bit].

    e_elec + amp_fs*d^2 when d < d0, else e_elec + amp_mp*d^4.  Continuous at
    the crossover by construction.  With amp_mp = 0 the free-space branch is
    used for all distances (degenerate single-regime profile).
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    if prof.amp_mp <= 0 or d < prof.crossover:
        return prof.e_elec + prof.amp_fs * d * d
    return prof.e_elec + prof.amp_mp * d ** 4


def rx_energy_per_bit(prof: RadioProfile) -> float:
    """Energy to receive one bit [J/bit]; the electronics cost."""
    return prof.e_elec


def validate_profile(prof: RadioProfile) -> list[str]:
    """Invariant violations for a radio profile (all fields nonnegative)."""
    v = []
    for f in fields(RadioProfile):
        if getattr(prof, f.name) < 0:
            v.append(f"profile.{f.name}: must be >= 0")
    return v


def profile_from_dict(doc: dict) -> RadioProfile:
    """Build and validate a profile from a dict (bare or ``{"profile": ...}``)."""
    if not isinstance(doc, dict):
        raise ConfigError(["profile: document must be a JSON object"])
    if "profile" in doc and all(k in ("context", "profile", "sim") for k in doc):
        doc = doc["profile"]
    known = {f.name for f in fields(RadioProfile)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError([f"profile.{k}: unknown field" for k in sorted(unknown)])
    prof = RadioProfile(**doc)
    violations = validate_profile(prof)
    if violations:
        raise ConfigError(violations)
    return prof


def profile_to_dict(prof: RadioProfile) -> dict:
    return {f.name: getattr(prof, f.name) for f in fields(RadioProfile)}


def load_profile(path: str | Path) -> RadioProfile:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: invalid JSON ({exc})"]) from exc
    return profile_from_dict(doc)
