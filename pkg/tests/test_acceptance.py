"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
import scipy.constants as sc

from corrphoton import constants as K
from corrphoton.dynamics import FewLevelSystem, lifetime, scaling_experiment, spontaneous_rate
from corrphoton.feasibility import LaserSpec, TargetSpec, budget_condition, cutoff_intensity
from corrphoton.field import Quadratures, harmonic_order_cap, verify_hamilton_oscillation
from corrphoton.fock import LadderKind, LadderN, ModeGroup, commutator_defect, dense_matrix, interior_block
from corrphoton.transition import allowed_final_l, angular_integral

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "scripts"))
from run_samples import run_all  # noqa: E402


@pytest.fixture
def verdict(capsys):
    """Reporter that prints 'criterion N: PASS|FAIL detail' past pytest capture."""

    def report(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return report


def test_criterion_1_ladder_algebra(verdict):
    t0 = time.perf_counter()
    worst, adjoint_exact = 0.0, True
    for N in (1, 2, 3, 5, 8):
        worst = max(worst, float(np.max(np.abs(interior_block(commutator_defect(N, 64), N)))))
        g = ModeGroup(N)
        b = dense_matrix(LadderN(g, LadderKind.ANNIHILATE), 64)
        bd = dense_matrix(LadderN(g, LadderKind.CREATE), 64)
        adjoint_exact &= bool(np.array_equal(bd, b.conj().T))
    dt = time.perf_counter() - t0
    verdict(1, worst <= 1e-12 and adjoint_exact and dt < 1.0,
            f"max interior defect {worst:.2e}, adjoint exact {adjoint_exact}, {dt:.3f} s")


def test_criterion_2_linearity(verdict):
    t0 = time.perf_counter()
    omega = K.ev_to_omega(1.55)
    I = np.geomspace(1e14, 1e17, 10)
    slopes = {}
    for N in (2, 10, 100):
        sys_ = FewLevelSystem.two_level(ModeGroup(N, omega), 1.0, 0.0)
        slopes[("nonlocal", N)] = scaling_experiment(sys_, I, 2e-17).slope
    for N in (2, 3):
        sys_ = FewLevelSystem.two_level(ModeGroup(N, omega), 1.0, 0.0)
        slopes[("conventional", N)] = scaling_experiment(sys_, I, 2e-17, mode="conventional").slope
    dt = time.perf_counter() - t0
    ok = all(abs(s - (1 if m == "nonlocal" else N)) <= 0.01 for (m, N), s in slopes.items())
    detail = ", ".join(f"{m[:4]} N={N}: {s:.5f}" for (m, N), s in slopes.items())
    verdict(2, ok and dt < 10, f"{detail}; {dt:.2f} s")


def test_criterion_3_selection_rule(verdict):
    t0 = time.perf_counter()
    worst_forbidden, weakest_allowed = 0.0, math.inf
    for l_i in range(4):
        for N in range(1, 7):
            best = 0.0
            for l_f in range(0, l_i + N + 4):
                v = abs(angular_integral(l_i, 0, l_f, 0, N, method="quadrature"))
                if l_f in allowed_final_l(l_i, N):
                    best = max(best, v)
                else:
                    worst_forbidden = max(worst_forbidden, v)
            weakest_allowed = min(weakest_allowed, best)
    dt = time.perf_counter() - t0
    verdict(3, worst_forbidden <= 1e-10 and weakest_allowed >= 1e-6 and dt < 30,
            f"max forbidden {worst_forbidden:.2e}, weakest best-allowed {weakest_allowed:.3e}, {dt:.2f} s")


def test_criterion_4_oscillator_frequency(verdict):
    omega = 1.0
    errs, drifts = {}, []
    for N in (1, 2, 10):
        w = N * omega
        period = 2 * math.pi / w
        fit = verify_hamilton_oscillation(Quadratures(0.4, 1.0, w), N, omega, 10 * period, period / 400)
        errs[N] = abs(fit.frequency / w - 1)
        drifts.append(fit.max_energy_drift)
    ok = max(errs.values()) <= 1e-3 and max(drifts) <= 1e-6
    verdict(4, ok, f"rel freq error {', '.join(f'N={k}: {v:.1e}' for k, v in errs.items())}; "
                   f"N=2 gives 2 omega; max drift {max(drifts):.1e}")


def test_criterion_5_lifetime(verdict):
    anchor = lifetime(12.0, 1.0)
    tau = lifetime(1200.0, 0.01)
    ratio = spontaneous_rate(1200.0, 0.01) / spontaneous_rate(12.0, 1.0)
    ok = abs(anchor / 100e-9 - 1) <= 1e-12 and abs(tau / 1e-9 - 1) <= 1e-9 and abs(ratio / 100 - 1) <= 1e-12
    verdict(5, ok, f"anchor {anchor:.12e} s, tau {tau:.12e} s, rate ratio {ratio:.12g}")


def test_criterion_6_cluster_scaling(verdict):
    laser = LaserSpec.from_wavelength(1e20, 800e-9)
    base = cutoff_intensity(TargetSpec(1e3, radius=1e-9), laser.omega, 1)
    big = cutoff_intensity(TargetSpec(1e3, radius=1e-8), laser.omega, 1)
    res = budget_condition(TargetSpec(1e3, radius=1e-9), laser, margin=1)
    # oracle on scipy's constants, independent of the package table
    omega = 2 * math.pi * sc.c / 800e-9
    oracle = (4 / 3 * math.pi * 1e-27) * 1e20 / (sc.c * sc.hbar * omega) / 1e3
    ok = abs(big / base - 1e-3) <= 1e-15 and res.passed and abs(res.ratio / oracle - 1) <= 0.01
    verdict(6, ok, f"cutoff ratio {big / base:.15g}, budget ratio {res.ratio:.6f} vs oracle {oracle:.6f}")


def test_criterion_7_harmonic_cap(verdict):
    omega = K.ev_to_omega(1.55)
    independent = math.floor(sc.m_e * sc.c ** 2 / (1.55 * sc.e))
    from_table = math.floor(K.M_E * K.C ** 2 / (K.HBAR * omega))
    cap = harmonic_order_cap(omega)
    doubled = harmonic_order_cap(2 * omega)
    ok = cap == from_table and doubled <= cap and abs(cap - independent) <= 1
    verdict(7, ok, f"cap {cap} (table {from_table}, scipy {independent}), doubled omega {doubled}")


def test_criterion_8_determinism(verdict, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = run_all(a) + run_all(b)
    files = sorted(p.relative_to(a) for p in a.rglob("*.csv"))
    same = files == sorted(p.relative_to(b) for p in b.rglob("*.csv")) and all(
        (a / f).read_bytes() == (b / f).read_bytes() for f in files)
    verdict(8, max(codes) == 0 and same and files, f"{len(files)} CSV files byte-identical: {same}")
