"""Run configuration: a declarative key=value file plus flag overrides,
validated as a whole so an invalid config reports every violation at once."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .grid import Grid

SUITES = (
    "energy",
    "sobolev",
    "pointwise",
    "localized",
    "lowfreq",
    "highfreq",
    "interpolation",
    "lp",
    "partition",
)

SLICE_SUITES = ("energy", "sobolev", "pointwise")
TIME_SUITES = ("localized", "lowfreq", "highfreq", "interpolation")


def parse_times(spec: str) -> tuple:
    """Either a comma list of floats or 'lo:hi:n' for n log-spaced points."""
    spec = spec.strip()
    if ":" in spec:
        lo, hi, n = spec.split(":")
        return tuple(np.geomspace(float(lo), float(hi), int(n)))
    return tuple(float(s) for s in spec.split(","))


@dataclass(frozen=True)
class RunConfig:
    dim: int = 1
    grid_n: int = 4096
    box_length: float = 256.0
    mass: float = 1.0
    max_mass: float = 1.0
    bands: tuple = (0, 1, 2, 3, 4)
    taus: tuple = (2.0, 4.0, 8.0, 16.0)
    times: tuple = tuple(np.geomspace(8.0, 64.0, 15))
    support_radius: float = 1.0
    seed: int = 7
    suite: str = "all"
    out_dir: str = "out"
    extras: dict = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return Grid(self.dim, self.grid_n, self.box_length)

    @property
    def selected_suites(self) -> tuple:
        return SUITES if self.suite == "all" else (self.suite,)

    def validate(self) -> None:
        """Raise ConfigurationError listing every violated constraint."""
        problems = []
        if self.dim < 1:
            problems.append(f"dim must be >= 1 (got {self.dim})")
        n = self.grid_n
        if n < 2 or (n & (n - 1)) != 0:
            problems.append(f"grid_n must be a power of two (got {n})")
        if self.box_length <= 0:
            problems.append(f"box_length must be positive (got {self.box_length})")
        if not 0.0 <= self.mass <= self.max_mass:
            problems.append(
                f"mass must lie in [0, max_mass={self.max_mass}] (got {self.mass})"
            )
        if self.suite != "all" and self.suite not in SUITES:
            problems.append(f"unknown suite {self.suite!r}; choose from {SUITES} or 'all'")
        if any(t <= 0 for t in self.times) or np.any(np.diff(self.times) <= 0):
            problems.append("times must be positive and strictly increasing")
        if any(tau <= 0 for tau in self.taus):
            problems.append("taus must be positive")

        active = self.selected_suites
        half = self.box_length / 2.0
        if self.dim >= 1 and n >= 2 and self.box_length > 0:
            nyquist = np.pi * n / self.box_length
            for k in self.bands:
                if k < 0:
                    problems.append(f"band {k} must be >= 0")
                elif 2.0 ** (k + 1) > nyquist and any(
                    s in active for s in ("highfreq", "interpolation")
                ):
                    problems.append(
                        f"band {k} extends to |xi| = {2.0 ** (k + 1):.1f}, above "
                        f"the grid Nyquist frequency {nyquist:.1f}"
                    )
        if any(s in active for s in TIME_SUITES) and self.times:
            needed = 2.0 * (self.support_radius + max(self.times) + 2.0)
            if self.box_length < needed:
                problems.append(
                    f"box_length {self.box_length} below the anti-wraparound bound "
                    f"2*(support_radius + max(times) + 2) = {needed}"
                )
        if any(s in active for s in SLICE_SUITES) and self.taus:
            # slice suites need the support cone on the largest slice inside the box
            a = 2.0 - self.support_radius
            if a <= 0:
                problems.append(
                    f"support_radius must stay below the prescription time 2 "
                    f"(got {self.support_radius})"
                )
            else:
                edge = (max(self.taus) ** 2 - a**2) / (2.0 * a)
                if edge > half:
                    problems.append(
                        f"largest tau {max(self.taus)} puts the solution support "
                        f"edge at |x| = {edge:.1f}, beyond the half-box {half}"
                    )
        if problems:
            raise ConfigurationError(
                "invalid configuration:\n  - " + "\n  - ".join(problems)
            )

    def summary_dict(self) -> dict:
        return {
            "dim": self.dim,
            "grid_n": self.grid_n,
            "box_length": self.box_length,
            "mass": self.mass,
            "max_mass": self.max_mass,
            "bands": list(self.bands),
            "taus": list(self.taus),
            "times": [float(t) for t in self.times],
            "support_radius": self.support_radius,
            "seed": self.seed,
            "suite": self.suite,
        }


_INT_KEYS = {"dim", "grid_n", "seed"}
_FLOAT_KEYS = {"box_length", "mass", "max_mass", "support_radius"}


def _assign(cfg: RunConfig, key: str, raw: str) -> RunConfig:
    key = key.replace("-", "_")
    if key in _INT_KEYS:
        return replace(cfg, **{key: int(raw)})
    if key in _FLOAT_KEYS:
        return replace(cfg, **{key: float(raw)})
    if key == "bands":
        return replace(cfg, bands=tuple(int(s) for s in raw.split(",")))
    if key == "taus":
        return replace(cfg, taus=tuple(float(s) for s in raw.split(",")))
    if key == "times":
        return replace(cfg, times=parse_times(raw))
    if key in ("suite", "out_dir"):
        return replace(cfg, **{key: raw.strip()})
    raise ConfigurationError(f"unknown configuration key {key!r}")


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional INI-style file plus overrides."""
    cfg = RunConfig()
    if path is not None:
        parser = configparser.ConfigParser()
        text = Path(path).read_text()
        parser.read_string(text)
        for section in parser.sections():
            for key, raw in parser.items(section):
                cfg = _assign(cfg, key, raw)
    for key, raw in (overrides or {}).items():
        if raw is not None:
            cfg = _assign(cfg, key, raw)
    return cfg
