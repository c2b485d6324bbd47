"""Run configuration for the CLI: defaults, flat key-value files, validation.

The default configuration is the reference scenario (all frequencies 1,
λ = 0, g = 0.01, three photons injected as (|102⟩+|120⟩)/√2), so the data
behind the standard coefficient plot regenerates with no arguments at all.

Config files are flat `key = value` text; `#` starts a comment.  Command-line
flags override file values.  Ket labels are space-free digit strings ("102"),
valid for occupations up to 9, which covers every validated scenario.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .evolution import REFERENCE_PARAMS
from .fock import StateVector, enumerate_basis
from .hamiltonian import WaveguideParams

MODE_COUNT = 3  # the simulator models three waveguides throughout

OUTPUT_FORMATS = ("csv", "json", "svg")

DEFAULT_INITIAL = (("102", complex(1 / math.sqrt(2))),
                   ("120", complex(1 / math.sqrt(2))))


class ConfigError(ValueError):
    """Invalid configuration file or option values (CLI exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    params: WaveguideParams = REFERENCE_PARAMS
    total_quanta: int = 3
    initial_state: tuple[tuple[str, complex], ...] = DEFAULT_INITIAL
    t_min: float = 0.0
    t_max: float = 200.0
    t_step: float = 0.5
    conditioning: tuple[int, int] | None = None
    output_format: str = ""  # empty: the command picks its native format
    output_path: str = ""
    tol: float = 1e-8
    method: str = "analytic"

    def validated(self) -> "RunConfig":
        if self.output_format and self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"format must be one of {OUTPUT_FORMATS}, "
                              f"got {self.output_format!r}")
        if self.method not in ("analytic", "oracle"):
            raise ConfigError(f"method must be 'analytic' or 'oracle', got {self.method!r}")
        if self.t_step <= 0:
            raise ConfigError(f"t_step must be positive, got {self.t_step}")
        if self.t_max < self.t_min:
            raise ConfigError(f"t_max ({self.t_max}) must be >= t_min ({self.t_min})")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.total_quanta < 0:
            raise ConfigError(f"total_quanta must be non-negative, got {self.total_quanta}")
        if self.conditioning is not None:
            mode, count = self.conditioning
            if not 0 <= mode < MODE_COUNT:
                raise ConfigError(f"conditioning mode {mode} out of range 0..{MODE_COUNT - 1}")
            if not 0 <= count <= self.total_quanta:
                raise ConfigError(f"conditioning count {count} out of range "
                                  f"0..{self.total_quanta}")
        self.build_initial_state()  # label and normalization checks
        return self

    def build_initial_state(self) -> StateVector:
        basis = enumerate_basis(MODE_COUNT, self.total_quanta)
        amps = {}
        for label, amplitude in self.initial_state:
            occ = parse_ket_label(label, self.total_quanta)
            amps[occ] = amps.get(occ, 0j) + amplitude
        norm_sq = sum(abs(a) ** 2 for a in amps.values())
        if abs(norm_sq - 1.0) > 1e-9:
            raise ConfigError(
                f"initial state is not normalized (sum |amplitude|^2 = {norm_sq!r})")
        vec = StateVector(basis, [amps.get(s.occupations, 0j) for s in basis.states])
        return vec

    def time_grid(self) -> list[float]:
        n = int(math.floor((self.t_max - self.t_min) / self.t_step + 1e-9))
        return [self.t_min + i * self.t_step for i in range(n + 1)]

    def to_text(self) -> str:
        lines = [
            f"omega0 = {self.params.omega0!r}",
            f"omega = {self.params.omega!r}",
            f"lambda = {self.params.lam!r}",
            f"g = {self.params.g!r}",
            f"total_quanta = {self.total_quanta}",
            "initial_state = " + "; ".join(
                f"{label}:{_format_complex(a)}" for label, a in self.initial_state),
            f"t_min = {self.t_min!r}",
            f"t_max = {self.t_max!r}",
            f"t_step = {self.t_step!r}",
            "conditioning = " + (f"{self.conditioning[0]},{self.conditioning[1]}"
                                 if self.conditioning else "none"),
            f"format = {self.output_format}",
            f"output = {self.output_path}",
            f"tol = {self.tol!r}",
            f"method = {self.method}",
        ]
        return "\n".join(lines) + "\n"


def parse_ket_label(label: str, total_quanta: int) -> tuple[int, ...]:
    """'102' -> (1, 0, 2); digit count and photon total must both match."""
    text = label.strip()
    if not text.isdigit() or len(text) != MODE_COUNT:
        raise ConfigError(
            f"ket label {label!r} must be {MODE_COUNT} digits (occupations <= 9)")
    occ = tuple(int(c) for c in text)
    if sum(occ) != total_quanta:
        raise ConfigError(
            f"ket label {label!r} has {sum(occ)} photons, expected {total_quanta}")
    return occ


def _format_complex(z: complex) -> str:
    if z.imag == 0.0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"({z.real!r}{sign}{abs(z.imag)!r}j)"


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", ""))
    except ValueError:
        raise ConfigError(f"cannot parse amplitude {text!r} as a complex number") from None


def parse_initial_state(text: str) -> tuple[tuple[str, complex], ...]:
    """'102:0.707; 120:0.707' -> ((label, amplitude), ...).  ';' or ',' separate terms."""
    sep = ";" if ";" in text else ","
    terms = []
    for chunk in text.split(sep):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ConfigError(f"initial-state term {chunk!r} must look like 'label:amplitude'")
        label, amp = chunk.split(":", 1)
        terms.append((label.strip(), _parse_complex(amp)))
    if not terms:
        raise ConfigError("initial_state must contain at least one term")
    return tuple(terms)


def parse_conditioning(text: str) -> tuple[int, int] | None:
    text = text.strip().lower()
    if text in ("", "none"):
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"conditioning must be 'mode,count' or 'none', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"conditioning must hold two integers, got {text!r}") from None


_FLOAT_KEYS = {"omega0", "omega", "lambda", "g", "t_min", "t_max", "t_step", "tol"}


def parse_config_text(text: str, base: RunConfig = RunConfig()) -> RunConfig:
    """Apply `key = value` lines on top of a base configuration."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs a number, got {value!r}") from None
        elif key == "total_quanta":
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: total_quanta needs an integer, "
                                  f"got {value!r}") from None
        elif key == "initial_state":
            values[key] = parse_initial_state(value)
        elif key == "conditioning":
            values[key] = parse_conditioning(value)
        elif key == "format":
            values[key] = value
        elif key == "output":
            values[key] = value
        elif key == "method":
            values[key] = value
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return apply_overrides(base, values)


def apply_overrides(base: RunConfig, values: dict) -> RunConfig:
    """Merge a flat override dict (config-file or CLI flags) into a RunConfig."""
    params = base.params
    param_updates = {}
    for key, attr in (("omega0", "omega0"), ("omega", "omega"),
                      ("lambda", "lam"), ("g", "g")):
        if key in values and values[key] is not None:
            param_updates[attr] = float(values[key])
    if param_updates:
        params = replace(params, **param_updates)

    updates = {"params": params}
    simple = {"total_quanta": "total_quanta", "initial_state": "initial_state",
              "t_min": "t_min", "t_max": "t_max", "t_step": "t_step",
              "format": "output_format", "output": "output_path",
              "tol": "tol", "method": "method"}
    for key, attr in simple.items():
        if key in values and values[key] is not None:
            updates[attr] = values[key]
    if "conditioning" in values:
        updates["conditioning"] = values["conditioning"]
    return replace(base, **updates)


def load_config_file(path: str, base: RunConfig = RunConfig()) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, base)
