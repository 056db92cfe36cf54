"""Run configuration files.

A configuration is an INI-style key-value file.  ``initial_state`` sits
at the top, before any section; everything else lives in the sections
``[params]``, ``[grid]``, ``[noise]``, ``[sweep]`` and ``[outputs]``::

    initial_state = ground

    [params]
    g = 1.8e-3
    gamma_l = 1e-3
    gamma_r = 9e-3
    t_l = 2.0
    t_r = 0.1

    [grid]
    t_max_in_inverse_gamma = 20
    n_points = 201

    [sweep]
    variable = t_l
    values = 0.15, 0.6, 2

Missing keys fall back to the reference parameter set.  Unknown keys are
rejected.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigInvalid, InvalidParameter
from .model import EngineParams, InitialKind

_TOP = "__top__"

PARAM_KEYS = ("eps_s", "g", "gamma_l", "gamma_r", "t_l", "t_r", "mu_l", "mu_r")
SCHEMA = {
    _TOP: ("initial_state",),
    "params": PARAM_KEYS,
    "grid": ("t_max_in_inverse_gamma", "n_points"),
    "noise": ("step_in_inverse_gamma",),
    "sweep": ("variable", "values"),
    "outputs": ("directory", "format"),
}
SWEEP_VARIABLES = ("t_l", "mu_l")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class GridSpec:
    t_max_in_inverse_gamma: float = 20.0
    n_points: int = 201

    @property
    def spacing(self) -> float:
        return self.t_max_in_inverse_gamma / (self.n_points - 1)


@dataclass(frozen=True)
class NoiseSpec:
    step_in_inverse_gamma: float = 0.01


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    params: EngineParams = field(default_factory=EngineParams)
    initial_state: InitialKind = InitialKind.GROUND
    grid: GridSpec = field(default_factory=GridSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    sweep: SweepSpec | None = None
    outputs: OutputSpec = field(default_factory=OutputSpec)

    @property
    def stride(self) -> int:
        """Number of noise-quadrature steps between consecutive output rows."""
        return int(round(self.grid.spacing / self.noise.step_in_inverse_gamma))

    def sweep_params(self) -> list[tuple[float | None, EngineParams]]:
        if self.sweep is None:
            return [(None, self.params)]
        return [(v, self.params.replace(**{self.sweep.variable: v})) for v in self.sweep.values]

    def echo(self) -> dict:
        """Plain-dict view used in dataset metadata."""
        out = dataclasses.asdict(self)
        out["initial_state"] = self.initial_state.value
        if self.sweep is not None:
            out["sweep"]["values"] = list(self.sweep.values)
        return out


def _float(section, key, raw) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigInvalid(f"{section}.{key}: expected a number, got {raw!r}") from None


def _int(section, key, raw) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigInvalid(f"{section}.{key}: expected an integer, got {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(f"[{_TOP}]\n" + text)
    except configparser.Error as exc:
        raise ConfigInvalid(f"malformed configuration: {exc}") from None

    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigInvalid(f"{section}: unknown section")
        for key in cp[section]:
            if key not in SCHEMA[section]:
                where = key if section == _TOP else f"{section}.{key}"
                raise ConfigInvalid(f"{where}: unknown key")

    def get(section):
        return cp[section] if cp.has_section(section) else {}

    values = {k: _float("params", k, v) for k, v in get("params").items()}
    try:
        params = EngineParams(**values)
    except InvalidParameter as exc:
        raise ConfigInvalid(f"params.{exc.field}: {str(exc).split(': ', 1)[1]}") from None

    raw_kind = get(_TOP).get("initial_state", InitialKind.GROUND.value)
    try:
        kind = InitialKind(raw_kind.strip())
    except ValueError:
        options = ", ".join(k.value for k in InitialKind)
        raise ConfigInvalid(f"initial_state: expected one of {options}, got {raw_kind!r}") from None

    g = get("grid")
    grid = GridSpec(
        _float("grid", "t_max_in_inverse_gamma", g.get("t_max_in_inverse_gamma", GridSpec.t_max_in_inverse_gamma)),
        _int("grid", "n_points", g.get("n_points", GridSpec.n_points)),
    )
    if grid.n_points < 2:
        raise ConfigInvalid("grid.n_points: must be >= 2")
    if grid.t_max_in_inverse_gamma <= 0:
        raise ConfigInvalid("grid.t_max_in_inverse_gamma: must be > 0")

    step = _float("noise", "step_in_inverse_gamma",
                  get("noise").get("step_in_inverse_gamma", NoiseSpec.step_in_inverse_gamma))
    if step <= 0:
        raise ConfigInvalid("noise.step_in_inverse_gamma: must be > 0")
    ratio = grid.spacing / step
    if round(ratio) < 1 or abs(ratio - round(ratio)) > 1e-9 * ratio:
        raise ConfigInvalid(
            f"noise.step_in_inverse_gamma: {step} does not divide the grid spacing {grid.spacing}")
    noise = NoiseSpec(step)

    sweep = None
    if cp.has_section("sweep"):
        s = cp["sweep"]
        variable = s.get("variable", "").strip()
        if variable not in SWEEP_VARIABLES:
            raise ConfigInvalid(f"sweep.variable: expected one of {', '.join(SWEEP_VARIABLES)}")
        items = [x for x in s.get("values", "").replace("\n", ",").split(",") if x.strip()]
        if not items:
            raise ConfigInvalid("sweep.values: at least one value is required")
        vals = tuple(_float("sweep", "values", x) for x in items)
        if variable == "t_l" and any(v <= 0 for v in vals):
            raise ConfigInvalid("sweep.values: temperatures must be > 0")
        sweep = SweepSpec(variable, vals)

    o = get("outputs")
    fmt = o.get("format", OutputSpec.format).strip()
    if fmt not in FORMATS:
        raise ConfigInvalid(f"outputs.format: expected csv or json, got {fmt!r}")
    outputs = OutputSpec(o.get("directory", OutputSpec.directory).strip(), fmt)

    return RunConfig(params, kind, grid, noise, sweep, outputs)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigInvalid(f"cannot read {path}: {exc}") from None
    return parse_config(text)
