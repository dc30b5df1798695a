"""Dipole matrix elements for correlated N-photon absorption.

The per-electron angular factor couples the bra at r-hat with the ket at the
primed direction r'-hat through the polarization expansion

    eps(r, r') = sum_j a_j (r + r') P_j(r . r')

and has two channels:

* exchange channel: the full bilocal integral of
  Y*_f(r) [r . eps(r, r')] Y_i(r') over both spheres. The kernel depends on
  r . r' only, so it is diagonal in (l, m).
* stretched channel: the coincident limit r' -> r of the expansion
  (r . eps -> 2 sum_j a_j) times the maximal-rank component of the
  N-photon multipole P_N(cos theta), which couples l to l + N only.

Together these give the allowed set l_f in {l_i, l_i + N}. ``include_lowering``
also admits the reverse stretched coupling l_f = l_i - N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.polynomial import legendre as L
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline
from scipy.special import eval_legendre, genlaguerre, sph_harm_y
from sympy.physics.wigner import gaunt

from .constants import C

NORM_TOL = 1e-8
QUAD_TOL = 1e-8
DEFAULT_J_MAX = 8


class QuadratureError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# orbitals


@dataclass(frozen=True, eq=False)
class OrbitalState:
    """Hydrogenic-type orbital with a radial function sampled on a grid.

    ``r`` is in Bohr radii, ``radial`` holds R(r) with int R^2 r^2 dr = 1.
    """

    principal_n: int
    l: int
    m: int
    r: np.ndarray
    radial: np.ndarray
    effective_charge: float = 1.0

    def __post_init__(self):
        if self.principal_n < 1 or self.l < 0 or self.l >= self.principal_n:
            raise ValueError(f"invalid (n, l) = ({self.principal_n}, {self.l})")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| = {abs(self.m)} exceeds l = {self.l}")
        if self.r.shape != self.radial.shape or self.r.ndim != 1:
            raise ValueError("r and radial must be 1-d arrays of equal length")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("radial grid must be strictly increasing")

    @classmethod
    def hydrogenic(cls, n: int, l: int, m: int = 0, z_eff: float = 1.0,
                   points: int = 2048, r_max: float | None = None) -> "OrbitalState":
        if r_max is None:
            # 50 bohr holds 1e-8 normalization only up to n = 2
            r_max = max(50.0, 10.0 * n * n / z_eff)
        r = np.geomspace(1e-6, r_max, points)
        return cls(n, l, m, r, hydrogenic_radial(n, l, z_eff, r), z_eff)

    @property
    def norm(self) -> float:
        return radial_integral(self.r, self.radial ** 2 * self.r ** 2)

    def check_normalized(self):
        if abs(self.norm - 1.0) > NORM_TOL:
            raise ValueError(
                f"orbital (n={self.principal_n}, l={self.l}) not normalized: "
                f"int R^2 r^2 dr = {self.norm:.12f}"
            )

    def sample(self, r: np.ndarray) -> np.ndarray:
        """Radial function evaluated on another grid, zero outside this one."""
        if np.array_equal(r, self.r):
            return self.radial
        spline = CubicSpline(np.log(self.r), self.radial)
        out = spline(np.log(np.clip(r, self.r[0], self.r[-1])))
        return np.where(r > self.r[-1], 0.0, out)


def hydrogenic_radial(n: int, l: int, z: float, r: np.ndarray) -> np.ndarray:
    rho = 2.0 * z * r / n
    norm = math.sqrt((2.0 * z / n) ** 3 * math.factorial(n - l - 1) / (2 * n * math.factorial(n + l)))
    return norm * np.exp(-rho / 2) * rho ** l * genlaguerre(n - l - 1, 2 * l + 1)(rho)


def radial_integral(r: np.ndarray, f: np.ndarray) -> float:
    """int f dr, done as Simpson in log r (the natural variable of the grid)."""
    return float(simpson(f * r, x=np.log(r)))


# --------------------------------------------------------------------------
# angular part


@dataclass(frozen=True)
class PolarizationExpansion:
    """Legendre coefficients a_0..a_jmax of the polarization expansion."""

    coefficients: tuple = field(default_factory=lambda: (1.0,) + (0.0,) * DEFAULT_J_MAX)

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        if not coeffs:
            raise ValueError("expansion needs at least a_0")
        if not all(math.isfinite(a) for a in coeffs):
            raise ValueError("expansion coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def j_max(self) -> int:
        return len(self.coefficients) - 1

    @property
    def coincident_value(self) -> float:
        """sum_j a_j P_j(1)."""
        return math.fsum(self.coefficients)

    def kernel_legendre(self) -> np.ndarray:
        """Legendre coefficients of (1 + x) sum_j a_j P_j(x)."""
        a = np.array(self.coefficients)
        return L.legadd(a, L.legmulx(a))


def allowed_final_l(l_i: int, N: int, include_lowering: bool = False) -> set[int]:
    if l_i < 0 or N < 1:
        raise ValueError(f"need l_i >= 0 and N >= 1, got ({l_i}, {N})")
    allowed = {l_i, l_i + N}
    if include_lowering and l_i - N >= 0:
        allowed.add(l_i - N)
    return allowed


def _check_lm(l, m, name):
    if l < 0 or abs(m) > l:
        raise ValueError(f"invalid {name} quantum numbers (l={l}, m={m})")


@lru_cache(maxsize=None)
def _stretched_gaunt(l_hi: int, N: int, l_lo: int, m: int) -> float:
    # <l_hi m| P_N(cos theta) |l_lo m>
    g = gaunt(l_hi, N, l_lo, -m, 0, m)
    return (-1) ** m * math.sqrt(4 * math.pi / (2 * N + 1)) * float(g)


def _stretched_partner(l_i, l_f, N, include_lowering):
    return l_f == l_i + N or (include_lowering and l_f == l_i - N)


def angular_integral(l_i: int, m_i: int, l_f: int, m_f: int, N: int,
                     exp: PolarizationExpansion | None = None,
                     method: str = "gaunt", include_lowering: bool = False) -> float:
    """Angular factor of the single-electron matrix element.

    ``method="gaunt"`` uses the closed-form reduction (Funk-Hecke for the
    exchange channel, Gaunt coefficients for the stretched channel);
    ``method="quadrature"`` integrates both channels numerically on product
    Gauss-Legendre x trapezoid grids, refining until two levels agree to 1e-8.
    """
    _check_lm(l_i, m_i, "initial")
    _check_lm(l_f, m_f, "final")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    exp = exp or PolarizationExpansion()
    if method == "gaunt":
        return _angular_gaunt(l_i, m_i, l_f, m_f, N, exp, include_lowering)
    if method == "quadrature":
        return _angular_quadrature(l_i, m_i, l_f, m_f, N, exp, include_lowering)
    raise ValueError(f"unknown method {method!r}")


def _angular_gaunt(l_i, m_i, l_f, m_f, N, exp, include_lowering):
    if m_i != m_f:
        return 0.0
    total = 0.0
    if l_f == l_i:
        c = exp.kernel_legendre()
        if l_i < c.size:
            total += 4 * math.pi / (2 * l_i + 1) * c[l_i]
    if _stretched_partner(l_i, l_f, N, include_lowering):
        hi, lo = max(l_i, l_f), min(l_i, l_f)
        total += 2.0 * exp.coincident_value * _stretched_gaunt(hi, N, lo, m_i)
    return total


def sphere_grid(n_theta: int, n_phi: int):
    """Nodes (theta, phi) and weights integrating exactly on S^2."""
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(x)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.outer(wx, np.full(n_phi, 2 * np.pi / n_phi))
    return T.ravel(), P.ravel(), W.ravel()


def _unit_vectors(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _quad_once(l_i, m_i, l_f, m_f, N, exp, include_lowering, n_theta, n_phi):
    th, ph, w = sphere_grid(n_theta, n_phi)
    yf = np.conj(sph_harm_y(l_f, m_f, th, ph)) * w
    yi = sph_harm_y(l_i, m_i, th, ph) * w
    u = _unit_vectors(th, ph)
    x = np.clip(u @ u.T, -1.0, 1.0)
    kernel = np.zeros_like(x)
    for j, a in enumerate(exp.coefficients):
        if a:
            kernel += a * eval_legendre(j, x)
    kernel *= 1.0 + x
    total = yf @ kernel @ yi
    if _stretched_partner(l_i, l_f, N, include_lowering):
        total += 2.0 * exp.coincident_value * np.sum(yf * eval_legendre(N, np.cos(th)) * yi / w)
    return total


def _angular_quadrature(l_i, m_i, l_f, m_f, N, exp, include_lowering):
    degree = l_i + l_f + max(exp.j_max + 1, N)
    n_theta, n_phi = degree // 2 + 2, degree + 2
    coarse = _quad_once(l_i, m_i, l_f, m_f, N, exp, include_lowering, n_theta, n_phi)
    fine = _quad_once(l_i, m_i, l_f, m_f, N, exp, include_lowering, 2 * n_theta, 2 * n_phi)
    if abs(fine - coarse) > QUAD_TOL:
        raise QuadratureError(f"angular quadrature not converged: residual {abs(fine - coarse):.3g}")
    if abs(fine.imag) > QUAD_TOL:
        raise QuadratureError(f"angular integral has imaginary part {fine.imag:.3g}")
    return float(fine.real)


# --------------------------------------------------------------------------
# matrix element


@dataclass(frozen=True)
class TransitionAmplitude:
    value: complex
    intensity: float
    order_N: int


def intensity_prefactor(intensity: float) -> float:
    """sqrt(2 pi I) / c, I in W/m^2."""
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    return math.sqrt(2 * math.pi * intensity) / C


def radial_dipole(orb_f: OrbitalState, orb_i: OrbitalState) -> float:
    """int R_f(r) r R_i(r) r^2 dr in Bohr radii, on the wider of the two grids."""
    base = orb_i if orb_i.r[-1] >= orb_f.r[-1] else orb_f
    r = base.r
    return radial_integral(r, orb_f.sample(r) * orb_i.sample(r) * r ** 3)


def matrix_element(psi_i: Sequence[OrbitalState], psi_f: Sequence[OrbitalState],
                   exp: PolarizationExpansion | None, intensity: float, N: int,
                   method: str = "gaunt", include_lowering: bool = False) -> TransitionAmplitude:
    """Correlated N-photon matrix element for product states of 1 or 2 electrons.

    value = sqrt(2 pi I)/c * sum over electrons of radial * angular.
    """
    psi_i, psi_f = list(psi_i), list(psi_f)
    if len(psi_i) != len(psi_f):
        raise ValueError(f"electron count mismatch: {len(psi_i)} initial vs {len(psi_f)} final")
    if not 1 <= len(psi_i) <= 2:
        raise ValueError(f"only 1 or 2 electrons supported, got {len(psi_i)}")
    for orb in psi_i + psi_f:
        orb.check_normalized()
    pref = intensity_prefactor(intensity)
    total = 0.0
    for oi, of in zip(psi_i, psi_f):
        ang = angular_integral(oi.l, oi.m, of.l, of.m, N, exp, method, include_lowering)
        if ang != 0.0:
            total += radial_dipole(of, oi) * ang
    return TransitionAmplitude(complex(pref * total), intensity, N)


def absorption_probability(amp: TransitionAmplitude) -> float:
    """|X|^2, proportional to I for fixed geometry at every order N."""
    return abs(amp.value) ** 2
