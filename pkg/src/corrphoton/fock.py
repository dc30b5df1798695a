"""Truncated Fock space for phase-correlated mode groups.

A mode group bundles N photon modes that are created and destroyed together
by a single ladder pair (b_N, b_N^dagger):

    b_N |n>      = sqrt(n)     |n - N>     (n >= N, zero otherwise)
    b_N^dag |n>  = sqrt(n + N) |n + N>

so that [b_N, b_N^dag] = N on occupations that are multiples of N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import HBAR

ALGEBRA_TOL = 1e-12

_group_ids = itertools.count()


class TruncationError(ValueError):
    """Raised when a creation operator would push amplitude above n_trunc."""

    def __init__(self, occupation: int, order: int, truncation: int):
        self.occupation = occupation
        super().__init__(
            f"b_{order}^dag acting on occupation {occupation} reaches "
            f"{occupation + order} > truncation {truncation}"
        )


class LadderKind(Enum):
    ANNIHILATE = "annihilate"
    CREATE = "create"


@dataclass(frozen=True)
class ModeGroup:
    """N phase-correlated modes sharing one ladder pair.

    ``omega`` is the per-photon angular frequency in rad/s.
    """

    correlation_order: int
    omega: float = 1.0
    polarization_label: str = "x"
    group_id: int = field(default_factory=lambda: next(_group_ids))

    def __post_init__(self):
        if int(self.correlation_order) != self.correlation_order or self.correlation_order < 1:
            raise ValueError(f"correlation_order must be a positive integer, got {self.correlation_order}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class LadderN:
    group: ModeGroup
    kind: LadderKind = LadderKind.ANNIHILATE

    @property
    def order(self) -> int:
        return self.group.correlation_order

    def adjoint(self) -> "LadderN":
        other = LadderKind.CREATE if self.kind is LadderKind.ANNIHILATE else LadderKind.ANNIHILATE
        return LadderN(self.group, other)


class FockVector:
    """Immutable amplitude vector over occupations 0..truncation of one group."""

    __slots__ = ("group", "truncation", "amplitudes", "physical_sector_only")

    def __init__(self, group: ModeGroup, amplitudes, physical_sector_only: bool = True):
        amps = np.array(amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a non-empty 1-d sequence")
        if physical_sector_only:
            off = np.arange(amps.size) % group.correlation_order != 0
            bad = np.flatnonzero(off & (amps != 0))
            if bad.size:
                raise ValueError(
                    f"occupation {int(bad[0])} is outside the physical sector "
                    f"(multiples of {group.correlation_order})"
                )
        amps.setflags(write=False)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "truncation", amps.size - 1)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "physical_sector_only", physical_sector_only)

    def __setattr__(self, name, value):
        raise AttributeError("FockVector is immutable")

    @classmethod
    def basis(cls, group: ModeGroup, n: int, truncation: int, physical_sector_only: bool = True):
        if not 0 <= n <= truncation:
            raise ValueError(f"occupation {n} outside 0..{truncation}")
        amps = np.zeros(truncation + 1, dtype=complex)
        amps[n] = 1.0
        return cls(group, amps, physical_sector_only)

    @classmethod
    def superposition(cls, group: ModeGroup, weights: dict, truncation: int,
                      physical_sector_only: bool = True):
        """Normalized superposition from an {occupation: weight} mapping."""
        amps = np.zeros(truncation + 1, dtype=complex)
        for n, w in weights.items():
            if not 0 <= n <= truncation:
                raise ValueError(f"occupation {n} outside 0..{truncation}")
            amps[n] = w
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize an all-zero superposition")
        return cls(group, amps / norm, physical_sector_only)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.amplitudes)

    def __repr__(self):
        nz = {int(n): complex(a) for n, a in enumerate(self.amplitudes) if a != 0}
        return f"FockVector(N={self.group.correlation_order}, trunc={self.truncation}, {nz})"


def apply_annihilate_n(state: FockVector) -> FockVector:
    """b_N |n> = sqrt(n) |n-N>; occupations below N are sent to zero."""
    N = state.group.correlation_order
    a = state.amplitudes
    out = np.zeros_like(a)
    n = np.arange(N, a.size)
    out[n - N] = np.sqrt(n) * a[n]
    return FockVector(state.group, out, state.physical_sector_only)


def apply_create_n(state: FockVector) -> FockVector:
    N = state.group.correlation_order
    a = state.amplitudes
    top = state.truncation
    occupied = np.flatnonzero(a)
    over = occupied[occupied + N > top]
    if over.size:
        raise TruncationError(int(over[0]), N, top)
    out = np.zeros_like(a)
    n = np.arange(0, a.size - N)
    out[n + N] = np.sqrt(n + N) * a[n]
    return FockVector(state.group, out, state.physical_sector_only)


def dense_matrix(op: LadderN, truncation: int) -> np.ndarray:
    """(truncation+1)^2 matrix of the ladder operator.

    Creation matrix elements that would land above the truncation are
    dropped, so dense_matrix(create) is exactly the adjoint of
    dense_matrix(annihilate).
    """
    N = op.order
    if truncation < N:
        raise ValueError(f"truncation {truncation} must be >= N={N}")
    M = np.zeros((truncation + 1, truncation + 1), dtype=complex)
    n = np.arange(N, truncation + 1)
    if op.kind is LadderKind.ANNIHILATE:
        M[n - N, n] = np.sqrt(n)
    else:
        M[n, n - N] = np.sqrt(n)
    return M


def commutator_defect(N: int, truncation: int) -> np.ndarray:
    """[b_N, b_N^dag] - N*1 over the full truncated basis."""
    if truncation < 2 * N:
        raise ValueError(f"truncation {truncation} must be >= 2N={2 * N}")
    group = ModeGroup(N)
    b = dense_matrix(LadderN(group, LadderKind.ANNIHILATE), truncation)
    bd = dense_matrix(LadderN(group, LadderKind.CREATE), truncation)
    return b @ bd - bd @ b - N * np.eye(truncation + 1)


def interior_occupations(N: int, truncation: int, physical_sector_only: bool = True) -> np.ndarray:
    """Occupations n <= truncation - N, away from the truncation boundary.

    With ``physical_sector_only`` only multiples of N are kept; on the
    general basis the occupations 0 < n < N carry a defect of n because b_N
    annihilates them.
    """
    n = np.arange(truncation - N + 1)
    if physical_sector_only:
        n = n[n % N == 0]
    return n


def interior_block(defect: np.ndarray, N: int, physical_sector_only: bool = True) -> np.ndarray:
    idx = interior_occupations(N, defect.shape[0] - 1, physical_sector_only)
    return defect[np.ix_(idx, idx)]


def number_and_energy(state: FockVector) -> tuple[float, float]:
    """Expected occupation and expected field energy in J.

    Energy is (1/2) hbar omega <b b^dag + b^dag b>; the vacuum carries N/2
    quanta of hbar omega.
    """
    if abs(state.norm_squared - 1.0) > 1e-9:
        raise ValueError(f"state must be normalized, |psi|^2 = {state.norm_squared}")
    N = state.group.correlation_order
    p = np.abs(state.amplitudes) ** 2
    n = np.arange(p.size)
    occupation = float(p @ n)
    bdb = np.where(n >= N, n, 0)           # b^dag b
    bbd = n + N                             # b b^dag (defined one step past the truncation)
    energy = 0.5 * HBAR * state.group.omega * float(p @ (bdb + bbd))
    return occupation, energy
