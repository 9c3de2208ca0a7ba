"""Scenario files: flat key-value text with one section per concern.

Example (full coupled short/long-wave run)::

    [scenario]
    name = hw_coupled
    model = coupled_swlw

    [grid]
    x_min = -8.0
    x_max = 8.0
    n = 512
    boundary = periodic

    [time]
    t_final = 1.0

    [physics]
    lambda = 1.0
    alpha = 0.5
    c0 = 1.0
    eps = 2e-3
    flux = relativistic_burgers
    delta = 0.1
    gate_m = 0.9
    gate_amplitude = 1.0

    [initial.u1]
    profile = gaussian
    center = 0.0
    width = 1.0
    height = 1.0

    [initial.u2]
    profile = constant
    value = 0.0

    [initial.v]
    profile = gaussian
    center = 0.0
    width = 1.0
    height = 0.8

    [output]
    snapshots = 0.0, 0.5, 1.0
    fields = v, w_plus

Models: dirac1d, claw, coupled_swlw, abi, dirac3d.  Validation happens at
load time and names the violated hypothesis or the missing field.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .grids import Grid1D, Grid3D

MODELS = ("dirac1d", "claw", "coupled_swlw", "abi", "dirac3d")


# ---------------------------------------------------------------------------
# initial-data profiles
# ---------------------------------------------------------------------------

def make_profile(spec: dict, grid_length: float):
    """Named profile -> callable(x) (real arrays; plane_wave is complex)."""
    kind = spec.get("profile")
    if kind is None:
        raise ConfigurationError("initial-data section is missing 'profile'")
    if kind == "gaussian":
        center = float(spec.get("center", 0.0))
        width = float(spec.get("width", 1.0))
        height = float(spec.get("height", 1.0))
        if width <= 0:
            raise ConfigurationError("gaussian profile: width must be positive")
        return lambda x: height * np.exp(-(np.asarray(x) - center) ** 2
                                         / (2.0 * width ** 2))
    if kind == "constant":
        value = float(spec.get("value", 0.0))
        return lambda x: np.full_like(np.asarray(x, dtype=float), value)
    if kind == "step":
        left = float(spec.get("left", -1.0))
        right = float(spec.get("right", 1.0))
        height = float(spec.get("height", 1.0))
        if right <= left:
            raise ConfigurationError("step profile: right must exceed left")
        return lambda x: height * (((np.asarray(x) >= left)
                                    & (np.asarray(x) < right)).astype(float))
    if kind == "plane_wave":
        mode = int(float(spec.get("k", 1)))
        amplitude = complex(spec.get("amplitude", 1.0))
        kval = 2.0 * np.pi * mode / grid_length
        return lambda x: amplitude * np.exp(1j * kval * np.asarray(x))
    raise ConfigurationError(f"unknown profile {kind!r}")


# ---------------------------------------------------------------------------
# scenario container
# ---------------------------------------------------------------------------

@dataclass
class Scenario:
    name: str
    model: str
    grid: dict
    time: dict
    physics: dict
    initial: dict                  # section suffix -> spec dict
    output: dict
    path: str | None = None

    def grid1d(self) -> Grid1D:
        return Grid1D(float(self.grid["x_min"]), float(self.grid["x_max"]),
                      int(self.grid["n"]), self.grid.get("boundary", "periodic"))

    def grid3d(self) -> Grid3D:
        return Grid3D(float(self.grid.get("x_min", 0.0)),
                      float(self.grid.get("x_max", 2.0 * np.pi)),
                      int(self.grid["n"]))

    def t_final(self) -> float:
        return float(self.time["t_final"])

    def profile(self, name: str):
        if name not in self.initial:
            raise ConfigurationError(f"missing initial-data section "
                                     f"[initial.{name}]")
        g = self.grid1d() if self.model != "dirac3d" else None
        length = g.length if g is not None else 2.0 * np.pi
        return make_profile(self.initial[name], length)

    def snapshot_times(self):
        raw = self.output.get("snapshots", "")
        if not raw:
            return [self.t_final()]
        return [float(tok) for tok in str(raw).replace(",", " ").split()]

    def phys(self, key: str, default=None, required: bool = False):
        if key in self.physics:
            return self.physics[key]
        if required:
            raise ConfigurationError(f"scenario is missing required physics "
                                     f"parameter '{key}'")
        return default

    def phys_float(self, key: str, default=None, required: bool = False):
        val = self.phys(key, default, required)
        return None if val is None else float(val)


def _sections(cp: configparser.ConfigParser):
    data = {}
    for section in cp.sections():
        data[section] = dict(cp.items(section))
    return data


def load_scenario(path: str) -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigurationError(f"cannot read scenario file {path!r}")
    return parse_scenario(_sections(cp), path=path)


def parse_scenario_string(text: str) -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    return parse_scenario(_sections(cp))


def parse_scenario(data: dict, path: str | None = None) -> Scenario:
    if "scenario" not in data:
        raise ConfigurationError("scenario file needs a [scenario] section")
    head = data["scenario"]
    if "model" not in head:
        raise ConfigurationError("[scenario] section is missing 'model'")
    model = head["model"]
    if model not in MODELS:
        raise ConfigurationError(f"unknown model {model!r}; choose from {MODELS}")
    initial = {}
    for key, section in data.items():
        if key.startswith("initial."):
            initial[key.split(".", 1)[1]] = section
    sc = Scenario(name=head.get("name", "unnamed"), model=model,
                  grid=data.get("grid", {}), time=data.get("time", {}),
                  physics=data.get("physics", {}), initial=initial,
                  output=data.get("output", {}), path=path)
    validate_scenario(sc)
    return sc


# ---------------------------------------------------------------------------
# validation: every hypothesis named, checked at load time
# ---------------------------------------------------------------------------

def _require(section: dict, keys, where: str):
    for key in keys:
        if key not in section:
            raise ConfigurationError(f"missing field '{key}' in [{where}]")


def validate_scenario(sc: Scenario) -> None:
    _require(sc.time, ("t_final",), "time")
    if float(sc.time["t_final"]) <= 0:
        raise ConfigurationError("t_final must be positive")

    if sc.model == "dirac3d":
        _require(sc.grid, ("n",), "grid")
        sc.grid3d()
        return

    _require(sc.grid, ("x_min", "x_max", "n"), "grid")
    grid = sc.grid1d()

    if sc.model in ("claw", "coupled_swlw"):
        c0 = sc.phys_float("c0", required=True)
        eps = sc.phys_float("eps", required=True)
        if eps <= 0:
            raise ConfigurationError("viscosity eps must be positive")
        gate_m = sc.phys_float("gate_m", default=0.9 * c0)
        if not (0.0 < gate_m < c0):
            raise ConfigurationError(
                "gate support hypothesis violated: need 0 < M < c0")
        flux_kind = sc.phys("flux", default="relativistic_burgers")
        if flux_kind not in ("relativistic_burgers", "linear"):
            raise ConfigurationError(f"unknown flux model {flux_kind!r}")
        if flux_kind == "relativistic_burgers":
            if sc.phys_float("delta", default=0.1) <= 0:
                raise ConfigurationError("relativistic Burgers flux needs "
                                         "delta > 0")
        profile = sc.profile("v")
        v0 = np.asarray(profile(grid.nodes()), dtype=float)
        if np.max(np.abs(v0)) >= c0:
            raise ConfigurationError(
                "initial-data hypothesis violated: ||v0||_inf < c0 must be "
                "strict")

    if sc.model in ("dirac1d", "coupled_swlw"):
        for comp in ("u1", "u2"):
            if comp not in sc.initial:
                raise ConfigurationError(f"missing initial-data section "
                                         f"[initial.{comp}]")

    if sc.model == "abi":
        b1 = sc.phys_float("b1", default=0.6)
        d1 = sc.phys_float("d1", default=0.8)
        z = float(np.sqrt(1.0 + b1 * b1 + d1 * d1))
        eps = sc.phys_float("eps", required=True)
        if eps <= 0:
            raise ConfigurationError("viscosity eps must be positive")
        for key in ("g1_lo", "g1_hi", "g2_lo", "g2_hi"):
            sc.phys_float(key, required=True)
        a, b = sc.phys_float("g1_lo"), sc.phys_float("g1_hi")
        c, d = sc.phys_float("g2_lo"), sc.phys_float("g2_hi")
        if not (a <= b <= c + 2.0 * z <= d + 2.0 * z):
            raise ConfigurationError(
                "gate support ordering violated: need a <= b <= c+2Z <= d+2Z")
        for name in ("theta", "zeta"):
            if name not in sc.initial:
                raise ConfigurationError(f"missing initial-data section "
                                         f"[initial.{name}]")
        nodes = grid.nodes()
        theta0 = np.asarray(sc.profile("theta")(nodes), dtype=float)
        zeta0 = np.asarray(sc.profile("zeta")(nodes), dtype=float)
        if not (np.min(theta0) > a and np.max(theta0) < b):
            raise ConfigurationError("initial theta must lie strictly inside "
                                     "(g1_lo, g1_hi)")
        if not (np.min(zeta0) > c and np.max(zeta0) < d):
            raise ConfigurationError("initial zeta must lie strictly inside "
                                     "(g2_lo, g2_hi)")
        if np.max(theta0 - zeta0) > 2.0 * z:
            raise ConfigurationError("initial data leave the physical region: "
                                     "theta0 - zeta0 must not exceed 2Z")
        if np.min(theta0 - zeta0) <= 0:
            raise ConfigurationError("initial data need theta0 - zeta0 > 0 "
                                     "(h finite and positive)")
