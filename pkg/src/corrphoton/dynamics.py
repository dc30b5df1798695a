"""Few-level atom driven by a correlated N-photon mode group.

Rotating-frame amplitude equations with constant Hamiltonian

    H_kk = E_k - E_0 - k N hbar omega,    H_kl = g_kl

where the coupling energy g_kl = e a0 d_kl E_0(I) uses the peak field
E_0 = (sqrt(2 pi I)/c) sqrt(c / (pi eps0)) built from the matrix-element
prefactor, so g scales as sqrt(I) for every order N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from . import constants as K
from .fock import ModeGroup
from .transition import intensity_prefactor

STEPS_PER_PERIOD = 50
PERTURBATIVE_LIMIT = 0.05

# lifetime anchor: a 12 eV photon with a 1 a.u. transition moment lives 100 ns
REFERENCE_PHOTON_EV = 12.0
REFERENCE_DIPOLE_AU = 1.0
REFERENCE_LIFETIME_S = 100e-9


class ResolutionError(ValueError):
    pass


class SaturationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FewLevelSystem:
    level_energies: np.ndarray      # eV, strictly increasing
    dipole_moments: np.ndarray      # atomic units, Hermitian, zero diagonal
    field: ModeGroup
    intensity: float                # W/m^2

    def __post_init__(self):
        e = np.asarray(self.level_energies, dtype=float)
        d = np.asarray(self.dipole_moments, dtype=complex)
        if e.ndim != 1 or e.size < 2:
            raise ValueError("need at least two levels")
        if np.any(np.diff(e) <= 0):
            raise ValueError("level_energies must be strictly increasing")
        if d.shape != (e.size, e.size):
            raise ValueError(f"dipole matrix shape {d.shape} does not match {e.size} levels")
        if not np.array_equal(d, d.conj().T):
            raise ValueError("dipole matrix must be Hermitian")
        if np.any(np.diag(d) != 0):
            raise ValueError("dipole matrix diagonal must be zero")
        if self.intensity < 0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity}")
        object.__setattr__(self, "level_energies", e)
        object.__setattr__(self, "dipole_moments", d)

    @property
    def coupling_order(self) -> int:
        return self.field.correlation_order

    @classmethod
    def two_level(cls, field: ModeGroup, dipole: float, intensity: float,
                  detuning_ev: float = 0.0, ground_ev: float = 0.0):
        """Two levels spaced by N hbar omega + detuning."""
        gap = field.correlation_order * K.omega_to_ev(field.omega) + detuning_ev
        return cls(np.array([ground_ev, ground_ev + gap]),
                   np.array([[0.0, dipole], [dipole, 0.0]]), field, intensity)

    def with_intensity(self, intensity: float) -> "FewLevelSystem":
        return replace(self, intensity=intensity)

    def scaled_dipoles(self, factor: float) -> "FewLevelSystem":
        return replace(self, dipole_moments=self.dipole_moments * factor)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    populations: np.ndarray         # shape (len(times), levels)

    @property
    def excited(self) -> np.ndarray:
        return self.populations[:, 1:].sum(axis=1)


def peak_field(intensity: float) -> float:
    """Peak electric field (V/m) of a plane wave of the given intensity."""
    return intensity_prefactor(intensity) * K.FIELD_FROM_PREFACTOR


def coupling_energy(dipole_au, intensity: float):
    """g = e a0 d E_0(I) in J."""
    return K.E_CHARGE * K.A0 * np.asarray(dipole_au) * peak_field(intensity)


def hamiltonian(sys: FewLevelSystem) -> np.ndarray:
    """Rotating-frame Hamiltonian in J."""
    N = sys.coupling_order
    k = np.arange(sys.level_energies.size)
    photon = K.HBAR * sys.field.omega
    diag = (sys.level_energies - sys.level_energies[0]) * K.EV - k * N * photon
    H = coupling_energy(sys.dipole_moments, sys.intensity).astype(complex)
    H[np.diag_indices_from(H)] = diag
    return H


def evolve(sys: FewLevelSystem, t_final: float, dt: float) -> Trajectory:
    """Propagate from the ground state with the exact one-step propagator.

    Raises ResolutionError when dt gives fewer than 50 steps per period of
    the fastest frequency in the rotating-frame spectrum.
    """
    if dt <= 0 or t_final < 0:
        raise ValueError("need dt > 0 and t_final >= 0")
    H = hamiltonian(sys)
    evals = np.linalg.eigvalsh(H)
    spread = evals[-1] - evals[0]
    if spread > 0:
        period = 2 * math.pi * K.HBAR / spread
        if dt > period / STEPS_PER_PERIOD:
            raise ResolutionError(
                f"dt = {dt:.3g} s under-resolves period {period:.3g} s "
                f"(need <= {period / STEPS_PER_PERIOD:.3g} s)"
            )
    steps = int(round(t_final / dt))
    U = expm(-1j * H * dt / K.HBAR)
    psi = np.zeros(H.shape[0], dtype=complex)
    psi[0] = 1.0
    pops = np.empty((steps + 1, psi.size))
    pops[0] = np.abs(psi) ** 2
    for s in range(1, steps + 1):
        psi = U @ psi
        pops[s] = psi.real ** 2 + psi.imag ** 2
    return Trajectory(dt * np.arange(steps + 1), pops)


@dataclass(frozen=True, eq=False)
class ScalingResult:
    slope: float
    intercept: float
    intensities: np.ndarray
    probabilities: np.ndarray
    mode: str
    order: int
    t_probe: float


def conventional_probability(sys: FewLevelSystem, t: float) -> float:
    """Lowest-order N-photon estimate (g_N t / hbar)^2, g_N = g (I/I_au)^((N-1)/2)."""
    g = abs(coupling_energy(sys.dipole_moments[0, 1], sys.intensity))
    return (g * t / K.HBAR) ** 2 * (sys.intensity / K.ATOMIC_UNIT_INTENSITY) ** (sys.coupling_order - 1)


def fit_loglog(x, y) -> tuple[float, float]:
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


def scaling_experiment(sys_template: FewLevelSystem, intensities, t_probe: float,
                       mode: str = "nonlocal", steps: int = 400) -> ScalingResult:
    """Fit the exponent of P_excited(t_probe) against intensity.

    ``mode="nonlocal"`` evolves the correlated coupling at each intensity;
    ``mode="conventional"`` uses the lowest-order I^N perturbative comparator.
    """
    I = np.asarray(intensities, dtype=float)
    if I.size < 8 or np.any(I <= 0) or math.log10(I.max() / I.min()) < 3 - 1e-12:
        raise ValueError("need >= 8 positive intensities spanning >= 3 decades")
    if mode not in ("nonlocal", "conventional"):
        raise ValueError(f"unknown mode {mode!r}")
    probs = np.empty(I.size)
    for k, intensity in enumerate(I):
        sys = sys_template.with_intensity(float(intensity))
        if mode == "nonlocal":
            probs[k] = evolve(sys, t_probe, t_probe / steps).excited[-1]
        else:
            probs[k] = conventional_probability(sys, t_probe)
    if probs.max() > PERTURBATIVE_LIMIT:
        raise SaturationError(
            f"excited population {probs.max():.3g} > {PERTURBATIVE_LIMIT} at t_probe; shorten the probe"
        )
    if np.any(probs <= 0):
        raise ValueError("zero excited population; check coupling and detuning")
    slope, intercept = fit_loglog(I, probs)
    return ScalingResult(slope, intercept, I, probs, mode, sys_template.coupling_order, t_probe)


def rate_constant() -> float:
    """K in rate = K omega^3 d^2 (omega in rad/s, d in a.u.)."""
    w = K.ev_to_omega(REFERENCE_PHOTON_EV)
    return 1.0 / (REFERENCE_LIFETIME_S * w ** 3 * REFERENCE_DIPOLE_AU ** 2)


def spontaneous_rate(photon_energy_ev: float, dipole_au: float) -> float:
    """Dipole spontaneous-emission rate in 1/s, calibrated to the 12 eV / 100 ns anchor."""
    if photon_energy_ev <= 0 or dipole_au <= 0:
        raise ValueError("photon energy and dipole must be positive")
    return rate_constant() * K.ev_to_omega(photon_energy_ev) ** 3 * dipole_au ** 2


def lifetime(photon_energy_ev: float, dipole_au: float) -> float:
    return 1.0 / spontaneous_rate(photon_energy_ev, dipole_au)
