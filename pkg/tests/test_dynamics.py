import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corrphoton import constants as K
from corrphoton.dynamics import (
    FewLevelSystem,
    ResolutionError,
    SaturationError,
    coupling_energy,
    evolve,
    fit_loglog,
    lifetime,
    rate_constant,
    scaling_experiment,
    spontaneous_rate,
)
from corrphoton.fock import ModeGroup

OMEGA = K.ev_to_omega(1.55)
INTENSITIES = np.geomspace(1e14, 1e17, 8)


def two_level(N=2, d=1.0, I=1e16, detuning=0.0):
    return FewLevelSystem.two_level(ModeGroup(N, OMEGA), d, I, detuning)


def rabi_scale(sys):
    g = abs(coupling_energy(sys.dipole_moments[0, 1], sys.intensity))
    return g, math.pi * K.HBAR / g


def test_zero_coupling_stays_in_ground():
    traj = evolve(two_level(d=0.0), 1e-14, 1e-17)
    assert np.all(traj.populations[:, 0] == 1.0)


def test_rabi_period_closed_form():
    sys = two_level()
    g, period = rabi_scale(sys)
    traj = evolve(sys, 2 * period, period / 400)
    exact = np.sin(g * traj.times / K.HBAR) ** 2
    np.testing.assert_allclose(traj.populations[:, 1], exact, atol=1e-9)
    # full inversion at half period, back to ground at one period
    assert traj.populations[200, 1] == pytest.approx(1.0, abs=1e-9)
    assert traj.populations[400, 0] == pytest.approx(1.0, abs=1e-9)


def test_short_time_perturbative():
    sys = two_level()
    g, period = rabi_scale(sys)
    t_end = 0.05 * K.HBAR / g
    traj = evolve(sys, t_end, t_end / 100)
    mask = traj.times > 0
    approx = (g * traj.times[mask] / K.HBAR) ** 2
    assert np.max(np.abs(traj.populations[mask, 1] / approx - 1)) <= 5e-3


def test_norm_conservation_long_run():
    sys = FewLevelSystem(np.array([0.0, 3.1, 6.0]),
                         np.array([[0, 1.0, 0.2], [1.0, 0, 0.7], [0.2, 0.7, 0]]),
                         ModeGroup(2, OMEGA), 1e16)
    _, period = rabi_scale(two_level())
    traj = evolve(sys, 1e5 * period / 400, period / 400)
    assert traj.populations.shape[0] == 100_001
    assert np.max(np.abs(traj.populations.sum(axis=1) - 1)) <= 1e-8
    assert np.all(traj.populations >= 0) and np.all(traj.populations <= 1 + 1e-12)


def test_quadratic_onset_exponent():
    for d in (0.1, 1.0, 3.0):
        sys = two_level(d=d)
        g, _ = rabi_scale(sys)
        t_end = 0.02 * K.HBAR / g
        traj = evolve(sys, t_end, t_end / 200)
        slope, _ = fit_loglog(traj.times[1:], traj.populations[1:, 1])
        assert slope == pytest.approx(2.0, abs=0.02)


def test_under_resolved_step():
    sys = two_level()
    _, period = rabi_scale(sys)
    with pytest.raises(ResolutionError):
        evolve(sys, period, period / 10)


def test_detuned_system_suppressed():
    sys = two_level(detuning=1.0)
    _, period = rabi_scale(sys)
    traj = evolve(sys, period, period / 4000)
    assert traj.populations[:, 1].max() < 0.2


@pytest.mark.parametrize("N", [2, 10, 100])
def test_nonlocal_slope_one(N):
    res = scaling_experiment(two_level(N=N), INTENSITIES, 2e-17)
    assert res.slope == pytest.approx(1.0, abs=0.01)
    assert res.mode == "nonlocal" and res.order == N


@pytest.mark.parametrize("N", [2, 3])
def test_conventional_slope_n(N):
    res = scaling_experiment(two_level(N=N), INTENSITIES, 2e-17, mode="conventional")
    assert res.slope == pytest.approx(N, abs=0.01)


@pytest.mark.parametrize("factor", [0.1, 3.0])
def test_slope_invariant_under_dipole_scaling(factor):
    base = scaling_experiment(two_level(), INTENSITIES, 2e-17)
    scaled = scaling_experiment(two_level().scaled_dipoles(factor), INTENSITIES, 2e-17)
    assert scaled.slope == pytest.approx(base.slope, abs=0.01)
    assert scaled.intercept != pytest.approx(base.intercept)


def test_saturation_detected():
    with pytest.raises(SaturationError):
        scaling_experiment(two_level(), INTENSITIES * 1e3, 2e-16)


def test_scaling_needs_three_decades():
    with pytest.raises(ValueError, match="3 decades"):
        scaling_experiment(two_level(), np.geomspace(1e14, 1e16, 8), 2e-17)


def test_lifetime_anchor():
    assert lifetime(12.0, 1.0) == pytest.approx(100e-9, rel=1e-12)


def test_lifetime_xray_case():
    assert lifetime(1200.0, 0.01) == pytest.approx(1e-9, rel=1e-9)


def test_rate_d_squared():
    assert spontaneous_rate(50.0, 2.0) == pytest.approx(4 * spontaneous_rate(50.0, 1.0), rel=1e-14)


@given(e=st.floats(0.1, 1e4), d=st.floats(1e-3, 10), a=st.floats(0.01, 100), b=st.floats(0.01, 100))
def test_rate_ratio_identity(e, d, a, b):
    assert spontaneous_rate(a * e, b * d) / spontaneous_rate(e, d) == pytest.approx(a ** 3 * b ** 2, rel=1e-12)


def test_rate_constant_reproducible():
    assert rate_constant() == rate_constant()
    assert rate_constant() * K.ev_to_omega(12.0) ** 3 == pytest.approx(1e7, rel=1e-14)


def test_system_invariants():
    g = ModeGroup(2, OMEGA)
    with pytest.raises(ValueError, match="increasing"):
        FewLevelSystem(np.array([1.0, 0.0]), np.zeros((2, 2)), g, 1e16)
    with pytest.raises(ValueError, match="Hermitian"):
        FewLevelSystem(np.array([0.0, 1.0]), np.array([[0, 1.0], [2.0, 0]]), g, 1e16)
    with pytest.raises(ValueError, match="diagonal"):
        FewLevelSystem(np.array([0.0, 1.0]), np.array([[1.0, 1.0], [1.0, 0]]), g, 1e16)
