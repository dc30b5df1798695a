"""Classical mode amplitudes, canonical quadratures and field energy.

For a correlated group of order N the quadratures are

    Y = -i s N omega (C - C*),    Z = s (C + C*),    s = sqrt(Omega/pi) / (2c)

and the field energy W_N = (Y^2 + (N omega)^2 Z^2) / 2 is an oscillator of
frequency N omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR, M_E
from .fock import ModeGroup


@dataclass(frozen=True)
class ModeAmplitude:
    group: ModeGroup
    c_value: complex
    quantization_volume: float

    def __post_init__(self):
        if not self.quantization_volume > 0:
            raise ValueError(f"quantization_volume must be positive, got {self.quantization_volume}")


@dataclass(frozen=True)
class Quadratures:
    y: float
    z: float
    group_frequency: float

    def __post_init__(self):
        if not (math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError("quadratures must be finite reals")


def _scale(volume: float) -> float:
    return math.sqrt(volume / math.pi) / (2.0 * C)


def quadratures_from_amplitude(amp: ModeAmplitude, N: int) -> Quadratures:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    s = _scale(amp.quantization_volume)
    c = complex(amp.c_value)
    omega_n = N * amp.group.omega
    y = (-1j * s * omega_n * (c - c.conjugate())).real
    z = (s * (c + c.conjugate())).real
    return Quadratures(y=y, z=z, group_frequency=omega_n)


def field_energy_classical(quads: Quadratures, N: int, omega: float | None = None) -> float:
    """W_N = (Y^2 + (N omega)^2 Z^2) / 2.

    If ``omega`` is given it must agree with ``quads.group_frequency / N``.
    """
    if omega is not None and not math.isclose(N * omega, quads.group_frequency, rel_tol=1e-12):
        raise ValueError(
            f"group_frequency {quads.group_frequency} inconsistent with N*omega = {N * omega}"
        )
    return 0.5 * (quads.y ** 2 + quads.group_frequency ** 2 * quads.z ** 2)


def energy_from_amplitude(amp: ModeAmplitude, N: int) -> float:
    """Field energy written directly as a quadratic form in |C|."""
    s = _scale(amp.quantization_volume)
    return 2.0 * s ** 2 * (N * amp.group.omega) ** 2 * abs(amp.c_value) ** 2


def amplitude_for_energy(group: ModeGroup, energy: float, volume: float, phase: float = 0.0) -> ModeAmplitude:
    """Real-phase amplitude whose classical field energy equals ``energy``."""
    N = group.correlation_order
    s = _scale(volume)
    mag = math.sqrt(energy / 2.0) / (s * N * group.omega)
    return ModeAmplitude(group, mag * complex(math.cos(phase), math.sin(phase)), volume)


def amplitude_for_occupation(group: ModeGroup, n: int, volume: float) -> ModeAmplitude:
    """Classical amplitude matched to n photons, i.e. energy n hbar omega."""
    return amplitude_for_energy(group, n * HBAR * group.omega, volume)


@dataclass(frozen=True)
class OscillationFit:
    frequency: float
    max_energy_drift: float
    steps: int
    times: np.ndarray
    z: np.ndarray
    y: np.ndarray


def _rk4(y0, z0, w2, dt, steps):
    # dZ/dt = Y, dY/dt = -w2 Z
    ys = np.empty(steps + 1)
    zs = np.empty(steps + 1)
    ys[0], zs[0] = y0, z0
    y, z = y0, z0
    for k in range(steps):
        k1z, k1y = y, -w2 * z
        k2z, k2y = y + 0.5 * dt * k1y, -w2 * (z + 0.5 * dt * k1z)
        k3z, k3y = y + 0.5 * dt * k2y, -w2 * (z + 0.5 * dt * k2z)
        k4z, k4y = y + dt * k3y, -w2 * (z + dt * k3z)
        z = z + dt / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z)
        y = y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        ys[k + 1], zs[k + 1] = y, z
    return ys, zs


def _zero_crossing_frequency(t: np.ndarray, x: np.ndarray) -> float:
    s = np.signbit(x)
    idx = np.flatnonzero(s[:-1] != s[1:])
    if idx.size < 3:
        raise ValueError("trajectory too short to fit a frequency (need >= 3 zero crossings)")
    # linear interpolation of each crossing time
    t0 = t[idx] - x[idx] * (t[idx + 1] - t[idx]) / (x[idx + 1] - x[idx])
    half_period = (t0[-1] - t0[0]) / (t0.size - 1)
    return math.pi / half_period


def verify_hamilton_oscillation(quads0: Quadratures, N: int, omega: float,
                                t_final: float, dt: float) -> OscillationFit:
    """Integrate Hamilton's equations for W_N and fit the frequency of Z(t).

    Fixed-step RK4. Raises ValueError if dt * N omega > 0.1 or if fewer than
    1000 steps are requested.
    """
    w = N * omega
    if dt * w > 0.1:
        raise ValueError(f"step too coarse: dt*N*omega = {dt * w:.3g} > 0.1")
    steps = int(round(t_final / dt))
    if steps < 1000:
        raise ValueError(f"need at least 1000 steps, got {steps}")
    ys, zs = _rk4(quads0.y, quads0.z, w * w, dt, steps)
    t = dt * np.arange(steps + 1)
    energy = 0.5 * (ys ** 2 + w * w * zs ** 2)
    if energy[0] == 0:
        raise ValueError("zero-energy initial condition has no oscillation to fit")
    drift = float(np.max(np.abs(energy - energy[0])) / energy[0])
    freq = _zero_crossing_frequency(t, zs if np.any(zs) else ys)
    return OscillationFit(freq, drift, steps, t, zs, ys)


def harmonic_order_cap(omega: float) -> int:
    """Largest n with n hbar omega <= m_e c^2."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    ratio = M_E * C ** 2 / (HBAR * omega)
    nearest = round(ratio)
    # ratios within rounding of an integer count as that integer
    if abs(ratio - nearest) <= 1e-12 * max(ratio, 1.0):
        return int(nearest)
    return math.floor(ratio)
