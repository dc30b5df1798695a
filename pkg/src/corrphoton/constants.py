"""Physical constants used throughout the package.

CODATA 2018 recommended values, SI units. Keep every constant here so the
table version printed into reports describes all numbers actually used.
"""

import math

TABLE_VERSION = "CODATA-2018"

C = 299_792_458.0                      # speed of light, m/s (exact)
HBAR = 1.054_571_817e-34               # reduced Planck constant, J s (exact)
E_CHARGE = 1.602_176_634e-19           # elementary charge, C (exact)
M_E = 9.109_383_7015e-31               # electron mass, kg
EPS0 = 8.854_187_8128e-12              # vacuum permittivity, F/m
A0 = 5.291_772_109_03e-11              # Bohr radius, m
M_E_C2_EV = 0.510_998_950_00e6         # electron rest energy, eV

EV = E_CHARGE                          # 1 eV in J
ATOMIC_UNIT_INTENSITY = 3.509_338_4e20  # W/m^2, intensity of the atomic unit field

# peak field of a plane wave of intensity I is sqrt(2 I / (eps0 c))
FIELD_FROM_PREFACTOR = math.sqrt(C / (math.pi * EPS0))


def ev_to_omega(energy_ev: float) -> float:
    """Angular frequency (rad/s) of a photon with the given energy in eV."""
    return energy_ev * EV / HBAR


def omega_to_ev(omega: float) -> float:
    return HBAR * omega / EV


def wavelength_to_omega(wavelength: float) -> float:
    return 2.0 * math.pi * C / wavelength


def as_table() -> dict:
    """Name -> value mapping, used for report metadata."""
    return {
        "c": C,
        "hbar": HBAR,
        "e": E_CHARGE,
        "m_e": M_E,
        "eps0": EPS0,
        "a0": A0,
        "m_e_c2_eV": M_E_C2_EV,
    }
