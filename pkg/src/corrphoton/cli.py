"""Command-line front end.

    corrphoton <command> [--config PATH] [--out DIR] [--format csv,svg]
               [--set section.key=value ...] [--validate]

Exit codes: 0 success, 2 config error, 3 computation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import constants as K
from . import dynamics, feasibility, field, fock, report, transition
from .config import COMMANDS, ConfigError, RunConfig, apply_override, load

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_IO = 0, 2, 3, 4

DEFAULTS = {
    "laser": {"photon_energy_ev": 1.55, "intensity_w_cm2": 1e16, "pulse_duration_s": 0.0},
    "target": {"radius_m": 1e-9, "electron_count": 1e3, "label": "cluster"},
    "feasibility": {"margin": feasibility.DEFAULT_MARGIN, "strictness": feasibility.DEFAULT_STRICTNESS},
    "fock": {"order": 2, "truncation": 16, "physical_sector_only": False},
    "field": {"order": 2, "omega_rad_s": 1.0, "c_real": 1.0, "c_imag": 0.0,
              "volume_m3": math.pi, "periods": 10.0, "steps_per_period": 400},
    "transition": {"l_i": 0, "m_i": 0, "order": 2, "coefficients": [1.0] + [0.0] * transition.DEFAULT_J_MAX,
                   "include_lowering": False, "initial": [(1, 0, 0)], "final": [(2, 0, 0)], "z_eff": 1.0},
    "dynamics": {"mode": "trajectory", "order": 2, "dipole_au": 1.0, "detuning_ev": 0.0,
                 "intensities_w_m2": list(np.geomspace(1e14, 1e17, 10)), "t_probe_s": 2e-17,
                 "photon_energies_ev": [12.0, 1200.0], "dipoles_au": [1.0, 0.01]},
    "sweep": {"radii_m": [1e-10, 1e-9], "intensities_w_m2": [1e19, 1e20, 1e21],
              "electron_counts": [1e3], "margin": feasibility.DEFAULT_MARGIN},
}

DYNAMICS_MODES = ("trajectory", "scaling", "lifetime")


def param(cfg: RunConfig, section: str, key: str):
    value = cfg.get(section, key)
    return DEFAULTS[section].get(key) if value is None else value


def laser_spec(cfg: RunConfig) -> feasibility.LaserSpec:
    sec = cfg.section("laser")
    if "intensity_w_m2" in sec:
        intensity = sec["intensity_w_m2"]
    else:
        intensity = param(cfg, "laser", "intensity_w_cm2") * 1e4
    pulse = param(cfg, "laser", "pulse_duration_s")
    wavelength = sec.get("wavelength_m")
    if "omega_rad_s" in sec:
        omega = sec["omega_rad_s"]
    elif wavelength is not None:
        omega = K.wavelength_to_omega(wavelength)
    else:
        omega = K.ev_to_omega(param(cfg, "laser", "photon_energy_ev"))
    return feasibility.LaserSpec(intensity, omega, pulse, wavelength)


def target_spec(cfg: RunConfig) -> feasibility.TargetSpec:
    sec = cfg.section("target")
    n_e = param(cfg, "target", "electron_count")
    label = param(cfg, "target", "label")
    if "volume_m3" in sec:
        return feasibility.TargetSpec(n_e, volume=sec["volume_m3"], label=label)
    return feasibility.TargetSpec(n_e, radius=param(cfg, "target", "radius_m"), label=label)


# --------------------------------------------------------------------------
# validation


def validate(cfg: RunConfig) -> list[str]:
    """All constraint violations in ``cfg``, without running anything."""
    out = []
    lsec = cfg.section("laser")
    if "intensity_w_m2" in lsec and "intensity_w_cm2" in lsec:
        out.append("laser: give intensity_w_m2 or intensity_w_cm2, not both")
    if "photon_energy_ev" in lsec and ("omega_rad_s" in lsec or "wavelength_m" in lsec):
        out.append("laser: photon_energy_ev conflicts with omega_rad_s/wavelength_m")
    for key in ("intensity_w_m2", "intensity_w_cm2", "pulse_duration_s"):
        if lsec.get(key, 0.0) < 0:
            out.append(f"laser: {key} must be >= 0")
    for key in ("photon_energy_ev", "omega_rad_s", "wavelength_m"):
        if key in lsec and not lsec[key] > 0:
            out.append(f"laser: {key} must be positive")
    try:
        laser = laser_spec(cfg)
    except ValueError as exc:
        out.append(f"laser: {exc}")
        laser = None

    strictness = param(cfg, "feasibility", "strictness")
    if not 0 < strictness <= 1:
        out.append(f"feasibility: strictness {strictness} outside (0, 1]")
    elif laser is not None:
        win = feasibility.window_check(laser, strictness)
        if not win.passed:
            out.append(f"laser: absorption window violated, delta_t*omega = {win.ratio:.6g} > {strictness:g}")
    if param(cfg, "feasibility", "margin") < 1:
        out.append("feasibility: margin must be >= 1")

    tsec = cfg.section("target")
    if "radius_m" in tsec and not tsec["radius_m"] > 0:
        out.append("target: radius_m must be positive")
    if "volume_m3" in tsec and not tsec["volume_m3"] > 0:
        out.append("target: volume_m3 must be positive")
    if "electron_count" in tsec and not tsec["electron_count"] >= 1:
        out.append("target: electron_count must be >= 1")

    if laser is not None:
        n_max = field.harmonic_order_cap(laser.omega)
        for section in ("fock", "transition", "dynamics", "feasibility"):
            order = cfg.get(section, "order")
            if order is not None and order > n_max:
                out.append(f"{section}: order {order} exceeds n_max = {n_max} at {laser.photon_energy_ev:.6g} eV")
    for section in ("fock", "field", "transition", "dynamics", "feasibility"):
        order = cfg.get(section, "order")
        if order is not None and order < 1:
            out.append(f"{section}: order must be >= 1")
    fsec = cfg.section("field")
    if "omega_rad_s" in fsec and fsec["omega_rad_s"] > 0 and "order" in fsec:
        n_max = field.harmonic_order_cap(fsec["omega_rad_s"])
        if fsec["order"] > n_max:
            out.append(f"field: order {fsec['order']} exceeds n_max = {n_max}")

    if param(cfg, "fock", "truncation") < 2 * param(cfg, "fock", "order"):
        out.append("fock: truncation must be >= 2*order")

    l_i, m_i = param(cfg, "transition", "l_i"), param(cfg, "transition", "m_i")
    if l_i < 0 or abs(m_i) > l_i:
        out.append(f"transition: invalid (l_i, m_i) = ({l_i}, {m_i})")
    for key in ("initial", "final"):
        for n, l, m in param(cfg, "transition", key):
            if n < 1 or not 0 <= l < n or abs(m) > l:
                out.append(f"transition: invalid {key} orbital (n={n}, l={l}, m={m})")
    if len(param(cfg, "transition", "initial")) != len(param(cfg, "transition", "final")):
        out.append("transition: initial and final electron counts differ")

    mode = param(cfg, "dynamics", "mode")
    if mode not in DYNAMICS_MODES:
        out.append(f"dynamics: mode {mode!r} not one of {', '.join(DYNAMICS_MODES)}")
    if len(param(cfg, "dynamics", "photon_energies_ev")) != len(param(cfg, "dynamics", "dipoles_au")):
        out.append("dynamics: photon_energies_ev and dipoles_au lengths differ")

    radii = param(cfg, "sweep", "radii_m")
    counts = param(cfg, "sweep", "electron_counts")
    if any(r <= 0 for r in radii):
        out.append("sweep: radii_m must be positive")
    if any(i < 0 for i in param(cfg, "sweep", "intensities_w_m2")):
        out.append("sweep: intensities_w_m2 must be >= 0")
    if len(counts) not in (1, len(radii)) and radii:
        out.append("sweep: electron_counts must have one entry or one per radius")
    if any(c < 1 for c in counts):
        out.append("sweep: electron_counts must be >= 1")
    return out


# --------------------------------------------------------------------------
# commands; each returns {filename_stem: (Table, svg-or-None)}


def cmd_fock(cfg):
    N, T = param(cfg, "fock", "order"), param(cfg, "fock", "truncation")
    phys = param(cfg, "fock", "physical_sector_only")
    group = fock.ModeGroup(N)
    defect = fock.commutator_defect(N, T)
    tab = report.Table(["n", "physical", "annihilate_norm2", "create_norm2",
                        "energy_over_hbar_omega", "commutator_defect"], "fock")
    ns, energies = [], []
    for n in range(T + 1):
        physical = n % N == 0
        if phys and not physical:
            continue
        ket = fock.FockVector.basis(group, n, T, physical_sector_only=False)
        down = fock.apply_annihilate_n(ket).norm_squared
        up = fock.apply_create_n(ket).norm_squared if n + N <= T else float("nan")
        _, e = fock.number_and_energy(ket)
        e_q = e / (K.HBAR * group.omega)
        tab.add(n, int(physical), down, up, e_q, float(defect[n, n].real))
        ns.append(n)
        energies.append(e_q)
    interior = fock.interior_block(defect, N, physical_sector_only=True)
    tab.footer += [("order", N), ("truncation", T),
                   ("interior_physical_max_defect", float(np.max(np.abs(interior))))]
    svg = report.line_chart(ns, energies, f"b_{N} ladder: field energy", "occupation n", "E / hbar omega")
    return {"fock": (tab, svg)}


def cmd_field(cfg):
    N = param(cfg, "field", "order")
    omega = param(cfg, "field", "omega_rad_s")
    group = fock.ModeGroup(N, omega)
    amp = field.ModeAmplitude(group, complex(param(cfg, "field", "c_real"), param(cfg, "field", "c_imag")),
                              param(cfg, "field", "volume_m3"))
    q = field.quadratures_from_amplitude(amp, N)
    period = 2 * math.pi / (N * omega)
    dt = period / param(cfg, "field", "steps_per_period")
    fit = field.verify_hamilton_oscillation(q, N, omega, param(cfg, "field", "periods") * period, dt)
    energy = field.field_energy_classical(q, N, omega)
    tab = report.Table(["N", "omega", "y", "z", "energy", "fitted_frequency", "expected_frequency",
                        "relative_error", "energy_drift", "n_max"], "field")
    tab.add(N, omega, q.y, q.z, energy, fit.frequency, N * omega,
            abs(fit.frequency - N * omega) / (N * omega), fit.max_energy_drift, field.harmonic_order_cap(omega))
    stride = max(1, fit.steps // 800)
    svg = report.line_chart(fit.times[::stride], fit.z[::stride], f"Z(t), N={N}", "t (s)", "Z")
    return {"field": (tab, svg)}


def cmd_transition(cfg):
    l_i, m_i, N = (param(cfg, "transition", k) for k in ("l_i", "m_i", "order"))
    lower = param(cfg, "transition", "include_lowering")
    exp = transition.PolarizationExpansion(tuple(param(cfg, "transition", "coefficients")))
    allowed = transition.allowed_final_l(l_i, N, lower)
    tab = report.Table(["l_i", "m", "l_f", "N", "allowed", "angular_integral"], "transition")
    lfs, vals = [], []
    for l_f in range(0, l_i + N + 3):
        if abs(m_i) > l_f:
            continue
        v = transition.angular_integral(l_i, m_i, l_f, m_i, N, exp, include_lowering=lower)
        tab.add(l_i, m_i, l_f, N, int(l_f in allowed), v)
        lfs.append(l_f)
        vals.append(abs(v))
    z = param(cfg, "transition", "z_eff")
    orb = lambda nlm: transition.OrbitalState.hydrogenic(*nlm, z_eff=z)
    psi_i = [orb(x) for x in param(cfg, "transition", "initial")]
    psi_f = [orb(x) for x in param(cfg, "transition", "final")]
    laser = laser_spec(cfg)
    amp = transition.matrix_element(psi_i, psi_f, exp, laser.intensity, N, include_lowering=lower)
    tab.footer += [("intensity_w_m2", laser.intensity), ("matrix_element", amp.value.real),
                   ("absorption_probability", transition.absorption_probability(amp))]
    svg = report.line_chart(lfs, vals, f"angular integral, l_i={l_i}, N={N}", "l_f", "|A|")
    return {"transition": (tab, svg)}


FEAS_COLUMNS = ["r", "V", "n_e", "I", "omega", "photon_count", "eq1_literal", "verdict", "I_cut", "n_max"]
FEAS_UNITS = ("units", "r=m V=m^3 I=W/m^2 omega=rad/s eq1_literal=s I_cut=W/m^2")


def _feas_row(tab, target, laser, margin):
    b = feasibility.budget_condition(target, laser, margin)
    tab.add(target.radius, target.volume, target.electron_count, laser.intensity, laser.omega,
            b.photon_count, b.eq1_literal, b.passed, feasibility.cutoff_intensity(target, laser.omega, margin),
            field.harmonic_order_cap(laser.omega))
    return b


def cmd_feasibility(cfg):
    laser, target = laser_spec(cfg), target_spec(cfg)
    margin = param(cfg, "feasibility", "margin")
    tab = report.Table(FEAS_COLUMNS, "feasibility")
    tab.meta.append(FEAS_UNITS)
    b = _feas_row(tab, target, laser, margin)
    win = feasibility.window_check(laser, param(cfg, "feasibility", "strictness"))
    tab.footer += [("label", target.label), ("margin", margin), ("budget_ratio", b.ratio),
                   ("window_ratio", win.ratio), ("window_verdict", win.passed)]
    order = cfg.get("feasibility", "order")
    if order is not None:
        tab.footer.append(("emitted_photon_ev", feasibility.emitted_photon_energy(order, laser.omega)))
    return {"feasibility": (tab, None)}


def cmd_sweep(cfg):
    radii = param(cfg, "sweep", "radii_m")
    intensities = param(cfg, "sweep", "intensities_w_m2")
    counts = param(cfg, "sweep", "electron_counts")
    margin = param(cfg, "sweep", "margin")
    base = laser_spec(cfg)
    tab = report.Table(FEAS_COLUMNS, "sweep")
    tab.meta.append(FEAS_UNITS)
    cut_r, cut_i = [], []
    for k, r in enumerate(radii):
        target = feasibility.TargetSpec(counts[k] if len(counts) > 1 else counts[0], radius=r)
        for intensity in intensities:
            laser = feasibility.LaserSpec(intensity, base.omega, base.pulse_duration)
            _feas_row(tab, target, laser, margin)
        cut_r.append(r)
        cut_i.append(feasibility.cutoff_intensity(target, base.omega, margin))
    tab.footer.append(("margin", margin))
    svg = report.line_chart(cut_r, cut_i, "cutoff intensity vs target radius", "radius (m)",
                            "I_cut (W/m^2)", logx=True, logy=True)
    return {"sweep": (tab, svg)}


def _two_level(cfg, intensity):
    laser = laser_spec(cfg)
    group = fock.ModeGroup(param(cfg, "dynamics", "order"), laser.omega)
    return dynamics.FewLevelSystem.two_level(group, param(cfg, "dynamics", "dipole_au"), intensity,
                                             param(cfg, "dynamics", "detuning_ev"))


def cmd_dynamics(cfg):
    mode = param(cfg, "dynamics", "mode")
    if mode not in DYNAMICS_MODES:
        raise ConfigError(f"dynamics mode {mode!r} not one of {', '.join(DYNAMICS_MODES)}",
                          cfg.source_lines.get(("dynamics", "mode")), "mode")
    k_rate = dynamics.rate_constant()
    if mode == "trajectory":
        sys_ = _two_level(cfg, laser_spec(cfg).intensity)
        g = abs(dynamics.coupling_energy(sys_.dipole_moments[0, 1], sys_.intensity))
        rabi = math.pi * K.HBAR / g if g > 0 else 1e-15
        dt = cfg.get("dynamics", "dt_s") or rabi / 200
        t_final = cfg.get("dynamics", "t_final_s") or 2 * rabi
        traj = dynamics.evolve(sys_, t_final, dt)
        tab = report.Table(["t", "P_ground", "P_excited"], "dynamics")
        for t, p in zip(traj.times, traj.populations):
            tab.add(float(t), float(p[0]), float(p[1]))
        tab.footer += [("mode", mode), ("order", sys_.coupling_order), ("coupling_J", float(g)),
                       ("rabi_period_s", rabi), ("rate_constant_K", k_rate)]
        stride = max(1, traj.times.size // 800)
        svg = report.line_chart(traj.times[::stride], traj.excited[::stride], "excited population",
                                "t (s)", "P_excited")
        return {"dynamics_trajectory": (tab, svg)}
    if mode == "scaling":
        template = _two_level(cfg, 0.0)
        intensities = param(cfg, "dynamics", "intensities_w_m2")
        t_probe = param(cfg, "dynamics", "t_probe_s")
        res = dynamics.scaling_experiment(template, intensities, t_probe, "nonlocal")
        conv = dynamics.scaling_experiment(template, intensities, t_probe, "conventional")
        tab = report.Table(["I", "P", "P_conventional"], "dynamics")
        for i, p, pc in zip(res.intensities, res.probabilities, conv.probabilities):
            tab.add(float(i), float(p), float(pc))
        tab.footer += [("mode", mode), ("order", res.order), ("t_probe_s", t_probe),
                       ("fit_slope", res.slope), ("fit_intercept", res.intercept),
                       ("conventional_slope", conv.slope), ("rate_constant_K", k_rate)]
        svg = report.line_chart(res.intensities, res.probabilities, f"P_excited vs I, N={res.order}",
                                "I (W/m^2)", "P_excited", logx=True, logy=True)
        return {"dynamics_scaling": (tab, svg)}
    energies = param(cfg, "dynamics", "photon_energies_ev")
    dipoles = param(cfg, "dynamics", "dipoles_au")
    tab = report.Table(["photon_energy_ev", "dipole_au", "rate", "lifetime"], "dynamics")
    for e, d in zip(energies, dipoles):
        tab.add(e, d, dynamics.spontaneous_rate(e, d), dynamics.lifetime(e, d))
    tab.footer += [("mode", mode), ("rate_constant_K", k_rate),
                   ("reference", f"{dynamics.REFERENCE_PHOTON_EV:g} eV, {dynamics.REFERENCE_DIPOLE_AU:g} au, "
                                 f"{dynamics.REFERENCE_LIFETIME_S:g} s")]
    svg = report.line_chart(energies, [dynamics.lifetime(e, d) for e, d in zip(energies, dipoles)],
                            "spontaneous-emission lifetime", "photon energy (eV)", "lifetime (s)",
                            logx=True, logy=True)
    return {"dynamics_lifetime": (tab, svg)}


HANDLERS = {"fock": cmd_fock, "field": cmd_field, "transition": cmd_transition,
            "feasibility": cmd_feasibility, "dynamics": cmd_dynamics, "sweep": cmd_sweep}


def run(cfg: RunConfig) -> list[Path]:
    """Execute ``cfg.command`` and write its outputs; returns the files written."""
    outputs = HANDLERS[cfg.command](cfg)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, (tab, svg) in outputs.items():
        if "csv" in cfg.formats:
            path = cfg.output_dir / f"{stem}.csv"
            tab.write(path)
            written.append(path)
        if "svg" in cfg.formats and svg is not None:
            path = cfg.output_dir / f"{stem}.svg"
            report.write_svg(path, svg)
            written.append(path)
    return written


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corrphoton", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="key = value config file with [section] headers")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--format", default="csv", help="comma-separated subset of csv,svg")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    p.add_argument("--mode", help="shorthand for --set dynamics.mode=...")
    p.add_argument("--order", help="shorthand for --set <command>.order=...")
    p.add_argument("--validate", action="store_true", help="print diagnostics and exit")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
    try:
        if args.config is not None:
            cfg = load(args.config, args.command, output_dir=args.out, formats=formats)
        else:
            cfg = RunConfig(args.command, output_dir=args.out, formats=formats)
        overrides = list(args.set)
        if args.mode is not None:
            overrides.append(f"dynamics.mode={args.mode}")
        if args.order is not None:
            section = args.command if args.command in ("fock", "field", "transition", "dynamics") else "feasibility"
            overrides.append(f"{section}.order={args.order}")
        for o in overrides:
            apply_override(cfg, o)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    diagnostics = validate(cfg)
    if args.validate:
        for d in diagnostics:
            print(d)
        return EXIT_CONFIG if diagnostics else EXIT_OK
    for d in diagnostics:
        print(f"warning: {d}", file=sys.stderr)

    try:
        written = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
