"""Scenario configuration, derived electromagnetic constants, and antenna layouts.

A scenario is a user on the ground plane at ``[x_u, 0, 0]`` served by pinching
antennas activated along a dielectric waveguide that runs parallel to the
x-axis at height ``d``.  The signal enters the waveguide at the feed point
``x_0`` and accumulates in-waveguide phase at the guided wavenumber.

All lengths are in metres, frequencies in Hz, loss in dB/m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

# Exact SI value, fixed for reproducibility.
SPEED_OF_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class SystemConfig:
    """Physical scenario for a single-waveguide pinching-antenna link.

    ``x_0_m is None`` means "auto": the feed point coincides with the leftmost
    antenna of whatever layout is being evaluated.  ``alpha_wg_db_per_m`` is the
    waveguide propagation loss (0 for the lossless configuration).
    ``delta_p`` is the minimum inter-antenna spacing in carrier wavelengths.
    """

    f_c_hz: float = 28e9
    d_m: float = 3.0
    n_eff: float = 1.44
    x_u_m: float = 0.0
    x_0_m: float | None = None
    alpha_wg_db_per_m: float = 0.08
    delta_p: float = 0.5

    def __post_init__(self):
        if not self.f_c_hz > 0:
            raise ConfigError(f"invalid-config: f_c_hz must be > 0, got {self.f_c_hz}")
        if not self.d_m > 0:
            raise ConfigError(f"invalid-config: d_m must be > 0, got {self.d_m}")
        if not self.n_eff >= 1:
            raise ConfigError(f"invalid-config: n_eff must be >= 1, got {self.n_eff}")
        if not self.alpha_wg_db_per_m >= 0:
            raise ConfigError(
                f"invalid-config: alpha_wg_db_per_m must be >= 0, got {self.alpha_wg_db_per_m}"
            )
        if not self.delta_p > 0:
            raise ConfigError(f"invalid-config: delta_p must be > 0, got {self.delta_p}")


@dataclass(frozen=True)
class DerivedConstants:
    """Constants computed once from a :class:`SystemConfig`.

    wavelength : free-space wavelength c/f_c, m
    k0         : free-space wavenumber 2*pi/wavelength, rad/m
    lambda_g   : guided wavelength wavelength/n_eff, m
    eta        : path-loss constant (wavelength/4pi)^2, m^2
    """

    wavelength: float
    k0: float
    lambda_g: float
    eta: float


def derive_constants(cfg: SystemConfig) -> DerivedConstants:
    """Derive wavelength, wavenumber, guided wavelength and path-loss constant."""
    lam = SPEED_OF_LIGHT / cfg.f_c_hz
    return DerivedConstants(
        wavelength=lam,
        k0=2.0 * math.pi / lam,
        lambda_g=lam / cfg.n_eff,
        eta=(lam / (4.0 * math.pi)) ** 2,
    )


@dataclass(frozen=True)
class AntennaLayout:
    """Ordered pinching-antenna x-coordinates with spacing metadata.

    Positions must be strictly increasing, the count even, and every
    consecutive gap at least ``min_spacing`` (up to 1e-12 m slack).
    """

    positions: tuple[float, ...]
    center: float
    min_spacing: float

    def __post_init__(self):
        n = len(self.positions)
        if n < 2 or n % 2 != 0:
            raise ConfigError(f"layout needs an even antenna count >= 2, got {n}")
        for a, b in zip(self.positions, self.positions[1:]):
            if not b > a:
                raise ConfigError("layout positions must be strictly increasing")
            if b - a < self.min_spacing - 1e-12:
                raise ConfigError(
                    f"layout gap {b - a:.3e} m below minimum spacing {self.min_spacing:.3e} m"
                )

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def leftmost(self) -> float:
        return self.positions[0]

    def deltas(self) -> tuple[float, ...]:
        """Signed offsets of each antenna from the layout center."""
        return tuple(x - self.center for x in self.positions)


def symmetric_uniform_layout(cfg: SystemConfig, n: int, spacing: float) -> AntennaLayout:
    """Equally spaced layout mirror-symmetric about the user.

    Antenna k = 1..n/2 sits at ``x_u +/- (k - 1/2) * spacing``; the model only
    covers even antenna counts, so odd ``n`` is rejected.
    """
    if n < 2 or n % 2 != 0:
        raise ConfigError(f"antenna count must be even and >= 2, got {n}")
    if not spacing > 0:
        raise ConfigError(f"spacing must be > 0, got {spacing}")
    half = [(k - 0.5) * spacing for k in range(1, n // 2 + 1)]
    positions = [cfg.x_u_m - h for h in reversed(half)] + [cfg.x_u_m + h for h in half]
    return AntennaLayout(positions=tuple(positions), center=cfg.x_u_m, min_spacing=spacing)


def resolve_feed(cfg: SystemConfig, layout: AntennaLayout) -> float:
    """Feed-point x-coordinate for a layout; "auto" puts it at the leftmost antenna.

    The feed must not sit to the right of any antenna, since in-waveguide
    distance is measured rightward from it.
    """
    if cfg.x_0_m is None:
        return layout.leftmost
    if cfg.x_0_m > layout.leftmost + 1e-12:
        raise ConfigError(
            f"feed point x_0={cfg.x_0_m} m lies right of the leftmost antenna "
            f"at {layout.leftmost} m"
        )
    return cfg.x_0_m


_SCENARIO_KEYS = (
    "f_c_hz",
    "d_m",
    "n_eff",
    "x_u_m",
    "x_0_m",
    "alpha_wg_db_per_m",
    "delta_p",
)


def load_scenario(path: str | Path) -> SystemConfig:
    """Read a scenario from a flat key-value file.

    Format: one ``key = value`` pair per line; blank lines and ``#`` comments
    are ignored.  Allowed keys are exactly the :class:`SystemConfig` fields;
    unknown or duplicate keys are an error.  ``x_0_m`` accepts the literal
    value ``auto``.  Missing keys keep their defaults.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc

    values: dict[str, float | None] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key = key.strip()
        value = value.strip()
        if key not in _SCENARIO_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if key == "x_0_m" and value.lower() == "auto":
            values[key] = None
            continue
        try:
            values[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad number for {key!r}: {value!r}") from exc
    return SystemConfig(**values)
