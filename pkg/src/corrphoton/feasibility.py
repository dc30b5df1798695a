"""Photon-budget arithmetic for planning correlated-absorption experiments.

The budget compares the instantaneous photon number in the target volume,
V I / (c hbar omega), against the electron count n_e. The literal form
V I / (c hbar omega^2) is carried along for reporting; it has dimensions of
time and is never used for the verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import constants as K
from .field import harmonic_order_cap

DEFAULT_MARGIN = 10.0
DEFAULT_STRICTNESS = 0.1


@dataclass(frozen=True)
class TargetSpec:
    """Spherical target. Give ``radius`` (m) or ``volume`` (m^3)."""

    electron_count: float
    radius: float | None = None
    volume: float | None = None
    label: str = ""

    def __post_init__(self):
        if self.volume is None:
            if self.radius is None:
                raise ValueError("TargetSpec needs radius or volume")
            object.__setattr__(self, "volume", 4.0 * math.pi * self.radius ** 3 / 3.0)
        elif self.radius is None:
            object.__setattr__(self, "radius", (3.0 * self.volume / (4.0 * math.pi)) ** (1 / 3))
        if not self.volume > 0:
            raise ValueError(f"volume must be positive, got {self.volume}")
        if not self.electron_count >= 1:
            raise ValueError(f"electron_count must be >= 1, got {self.electron_count}")


@dataclass(frozen=True)
class LaserSpec:
    intensity: float
    omega: float
    pulse_duration: float = 0.0
    wavelength: float | None = None

    def __post_init__(self):
        if self.intensity < 0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.pulse_duration < 0:
            raise ValueError(f"pulse_duration must be >= 0, got {self.pulse_duration}")
        if self.wavelength is not None:
            mismatch = abs(K.wavelength_to_omega(self.wavelength) - self.omega) / self.omega
            if mismatch > 1e-9:
                raise ValueError(
                    f"wavelength {self.wavelength} m and omega {self.omega} rad/s disagree "
                    f"(relative mismatch {mismatch:.3g})"
                )

    @classmethod
    def from_photon_energy(cls, intensity, energy_ev, pulse_duration=0.0):
        return cls(intensity, K.ev_to_omega(energy_ev), pulse_duration)

    @classmethod
    def from_wavelength(cls, intensity, wavelength, pulse_duration=0.0):
        return cls(intensity, K.wavelength_to_omega(wavelength), pulse_duration, wavelength)

    @property
    def photon_energy_ev(self) -> float:
        return K.omega_to_ev(self.omega)


@dataclass(frozen=True)
class BudgetResult:
    passed: bool
    ratio: float            # photon_count / n_e
    photon_count: float
    eq1_literal: float      # V I / (c hbar omega^2), seconds
    margin: float


@dataclass(frozen=True)
class WindowResult:
    passed: bool
    ratio: float            # pulse_duration * omega
    strictness: float


def photons_in_volume(t: TargetSpec, l: LaserSpec) -> float:
    return t.volume * l.intensity / (K.C * K.HBAR * l.omega)


def budget_condition(t: TargetSpec, l: LaserSpec, margin: float = DEFAULT_MARGIN) -> BudgetResult:
    if margin < 1:
        raise ValueError(f"margin must be >= 1, got {margin}")
    count = photons_in_volume(t, l)
    literal = t.volume * l.intensity / (K.C * K.HBAR * l.omega ** 2)
    ratio = count / t.electron_count
    return BudgetResult(ratio >= margin, ratio, count, literal, margin)


def cutoff_intensity(t: TargetSpec, omega: float, margin: float = DEFAULT_MARGIN) -> float:
    """Intensity at which the budget ratio equals ``margin``."""
    return margin * t.electron_count * K.C * K.HBAR * omega / t.volume


def window_check(l: LaserSpec, strictness: float = DEFAULT_STRICTNESS) -> WindowResult:
    if not 0 < strictness <= 1:
        raise ValueError(f"strictness must be in (0, 1], got {strictness}")
    ratio = l.pulse_duration * l.omega
    return WindowResult(ratio <= strictness, ratio, strictness)


class OrderCapError(ValueError):
    pass


def emitted_photon_energy(N: int, omega: float) -> float:
    """Energy in eV of the single photon emitted after an N-photon correlated absorption."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    cap = harmonic_order_cap(omega)
    if N > cap:
        raise OrderCapError(f"order {N} exceeds harmonic cap n_max = {cap}")
    return N * K.omega_to_ev(omega)
