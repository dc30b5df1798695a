"""Plain-text run configuration: ``[section]`` headers and ``key = value`` lines.

Lists are comma separated. ``#`` and ``;`` start comment lines. Every key is
known in advance; anything else is rejected with its line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

COMMANDS = ("fock", "field", "transition", "feasibility", "dynamics", "sweep")
FORMATS = ("csv", "svg")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _int(s: str) -> int:
    f = float(s)
    if f != int(f):
        raise ValueError(f"expected an integer, got {s!r}")
    return int(f)


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _ints(s: str) -> list[int]:
    return [_int(x) for x in s.split(",") if x.strip()]


def _str(s: str) -> str:
    return s.strip()


def _orbitals(s: str) -> list[tuple[int, int, int]]:
    """'n,l,m; n,l,m' -> list of quantum-number triples, one per electron."""
    out = []
    for part in s.split(";"):
        if part.strip():
            nums = _ints(part)
            if len(nums) != 3:
                raise ValueError(f"orbital needs 'n,l,m', got {part.strip()!r}")
            out.append(tuple(nums))
    return out


SCHEMA: dict[str, dict] = {
    "laser": {
        "intensity_w_m2": float,
        "intensity_w_cm2": float,
        "photon_energy_ev": float,
        "omega_rad_s": float,
        "wavelength_m": float,
        "pulse_duration_s": float,
    },
    "target": {
        "radius_m": float,
        "volume_m3": float,
        "electron_count": float,
        "label": _str,
    },
    "feasibility": {
        "margin": float,
        "strictness": float,
        "order": _int,
    },
    "fock": {
        "order": _int,
        "truncation": _int,
        "physical_sector_only": _bool,
    },
    "field": {
        "order": _int,
        "omega_rad_s": float,
        "c_real": float,
        "c_imag": float,
        "volume_m3": float,
        "periods": float,
        "steps_per_period": _int,
    },
    "transition": {
        "l_i": _int,
        "m_i": _int,
        "order": _int,
        "coefficients": _floats,
        "include_lowering": _bool,
        "initial": _orbitals,
        "final": _orbitals,
        "z_eff": float,
    },
    "dynamics": {
        "mode": _str,
        "order": _int,
        "dipole_au": float,
        "detuning_ev": float,
        "t_final_s": float,
        "dt_s": float,
        "intensities_w_m2": _floats,
        "t_probe_s": float,
        "photon_energies_ev": _floats,
        "dipoles_au": _floats,
    },
    "sweep": {
        "radii_m": _floats,
        "intensities_w_m2": _floats,
        "electron_counts": _floats,
        "margin": float,
    },
}


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)    # section -> key -> value
    output_dir: Path = Path(".")
    formats: tuple = ("csv",)
    source_lines: dict = field(default_factory=dict)  # (section, key) -> line

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown format {bad[0]!r}; expected a subset of csv,svg")

    def get(self, section: str, key: str, default=None):
        return self.parameters.get(section, {}).get(key, default)

    def section(self, name: str) -> dict:
        return self.parameters.get(name, {})

    def set(self, section: str, key: str, raw: str, line: int | None = None):
        """Parse ``raw`` with the schema type and store it."""
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]", line)
        conv = SCHEMA[section].get(key)
        if conv is None:
            raise ConfigError(f"unknown key in section [{section}]", line, key)
        try:
            value = conv(raw)
        except ValueError as exc:
            raise ConfigError(str(exc), line, key) from None
        self.parameters.setdefault(section, {})[key] = value
        self.source_lines[(section, key)] = line


def parse_text(text: str, command: str, **kwargs) -> RunConfig:
    cfg = RunConfig(command, **kwargs)
    section = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", lineno)
            section = line[1:-1].strip().lower()
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if section is None:
            raise ConfigError("key outside any [section]", lineno, key)
        if (section, key) in seen:
            raise ConfigError("duplicate key", lineno, key)
        seen.add((section, key))
        cfg.set(section, key, value, lineno)
    return cfg


def load(path: str | Path, command: str, **kwargs) -> RunConfig:
    return parse_text(Path(path).read_text(encoding="utf-8"), command, **kwargs)


def apply_override(cfg: RunConfig, assignment: str):
    """Apply a ``section.key=value`` override from the command line."""
    if "=" not in assignment or "." not in assignment.split("=", 1)[0]:
        raise ConfigError(f"override must look like section.key=value, got {assignment!r}")
    lhs, value = assignment.split("=", 1)
    section, key = lhs.strip().split(".", 1)
    cfg.set(section.strip().lower(), key.strip(), value.strip())
