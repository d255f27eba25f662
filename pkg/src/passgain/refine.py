"""Sequential antenna-position refinement that phase-aligns every antenna.

An antenna at signed offset ``delta`` from the user accumulates the combined
propagation path ``sqrt(d^2 + delta^2) + n_eff * delta`` (in-waveguide part
signed, measured relative to the user's projection on the waveguide; the
constant feed-to-user stretch is common to all antennas and drops out of the
gain).  The received contributions add fully coherently exactly when every
antenna's combined path is an integer number of wavelengths.

Right of the user the combined path grows with the offset, so each antenna is
nudged outward by ``v in [0, wavelength)`` until the path reaches the next
multiple ``wavelength * ceil(path / wavelength)``.  Left of the user the
combined path ``sqrt(d^2 + delta^2) - n_eff * delta`` is strictly decreasing
(n_eff >= 1), so the antenna is nudged outward until the path drops to
``wavelength * floor(path / wavelength)``; those shifts can reach
``wavelength / (n_eff - 1)``.  Each side is built sequentially from the inside
out, restoring the nominal ``delta_p * wavelength`` gap before every step, so
refinement only ever widens gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericsError
from .geometry import AntennaLayout, DerivedConstants, SystemConfig

# Paths already on a multiple to within this snap do not trigger a shift.
_PATH_SNAP_M = 1e-9


def combined_path(delta: float, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Free-space plus signed in-waveguide path of an antenna at offset ``delta``."""
    return math.hypot(cfg.d_m, delta) + cfg.n_eff * delta


def target_path(delta_n: float, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Next wavelength multiple at or above the combined path (right side)."""
    if delta_n < 0:
        raise ConfigError("right-side offsets must be >= 0")
    lam = consts.wavelength
    p = combined_path(delta_n, cfg, consts)
    return lam * math.ceil((p - _PATH_SNAP_M) / lam)


def target_path_left(delta_n: float, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Next wavelength multiple at or below the combined path (left side)."""
    if delta_n < 0:
        raise ConfigError("left-side offsets must be >= 0")
    lam = consts.wavelength
    p = combined_path(-delta_n, cfg, consts)
    return lam * math.floor((p + _PATH_SNAP_M) / lam)


def _check_residual(path: float, target: float, where: str) -> None:
    if abs(path - target) > _PATH_SNAP_M:
        raise NumericsError(f"{where}: refined path misses target by {path - target:.3e} m")


def refine_shift(delta_n: float, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Outward shift aligning a right-side antenna: closed-form solution of
    sqrt(d^2 + (delta+v)^2) + n_eff (delta+v) = target."""
    d_n = target_path(delta_n, cfg, consts)
    ne, d = cfg.n_eff, cfg.d_m
    if abs(ne - 1.0) <= 1e-9:
        u = (d_n * d_n - d * d) / (2.0 * d_n)
    else:
        u = (d_n * ne - math.sqrt(d_n * d_n + d * d * (ne * ne - 1.0))) / (ne * ne - 1.0)
    v = max(0.0, u - delta_n)
    _check_residual(combined_path(delta_n + v, cfg, consts), d_n, "refine_shift")
    return v


def refine_shift_left(delta_n: float, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Outward (leftward) shift aligning a left-side antenna: solves
    sqrt(d^2 + (delta+w)^2) - n_eff (delta+w) = target."""
    t = target_path_left(delta_n, cfg, consts)
    ne, d = cfg.n_eff, cfg.d_m
    if abs(ne - 1.0) <= 1e-9:
        if t <= 0:
            raise NumericsError("left-side targets are exhausted (path below one wavelength)")
        u = (d * d - t * t) / (2.0 * t)
    else:
        u = (math.sqrt(t * t + d * d * (ne * ne - 1.0)) - t * ne) / (ne * ne - 1.0)
    w = max(0.0, u - delta_n)
    _check_residual(combined_path(-(delta_n + w), cfg, consts), t, "refine_shift_left")
    return w


def refined_half_deltas(
    n_half: int,
    cfg: SystemConfig,
    consts: DerivedConstants,
    side: str = "right",
):
    """Sequentially refined offsets for one side of the array.

    Starting from ``delta_1 = delta_p * wavelength / 2``, each antenna is
    shifted outward onto its wavelength multiple and the next one is seeded a
    nominal gap further out.  Returns (deltas, shifts, targets) as arrays of
    length ``n_half``.
    """
    if n_half < 1:
        raise ConfigError("need at least one antenna per side")
    if side == "right":
        shift_fn, sign = refine_shift, 1.0
    elif side == "left":
        shift_fn, sign = refine_shift_left, -1.0
    else:
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")

    step = cfg.delta_p * consts.wavelength
    deltas = np.empty(n_half)
    shifts = np.empty(n_half)
    targets = np.empty(n_half)
    delta = step / 2.0
    for i in range(n_half):
        v = shift_fn(delta, cfg, consts)
        delta += v
        deltas[i] = delta
        shifts[i] = v
        # The refined path sits on a wavelength multiple; record that multiple.
        p = combined_path(sign * delta, cfg, consts)
        targets[i] = consts.wavelength * round(p / consts.wavelength)
        delta += step
    return deltas, shifts, targets


@dataclass(frozen=True)
class RefinedLayout:
    """Phase-aligned layout plus the shifts and per-antenna path targets.

    ``shifts`` are the right-side (positive-index) nudges, each within one
    wavelength; ``shifts_left`` are the left-side ones, bounded by
    wavelength / (n_eff - 1).  ``targets`` holds every antenna's combined-path
    wavelength multiple, ordered like ``layout.positions``.
    """

    layout: AntennaLayout
    shifts: tuple[float, ...]
    shifts_left: tuple[float, ...]
    targets: tuple[float, ...]


def build_refined_layout(n: int, cfg: SystemConfig, consts: DerivedConstants) -> RefinedLayout:
    """Refined symmetric-count layout with N/2 antennas per side."""
    if n < 2 or n % 2 != 0:
        raise ConfigError(f"antenna count must be even and >= 2, got {n}")
    n_half = n // 2
    d_right, v_right, t_right = refined_half_deltas(n_half, cfg, consts, side="right")
    d_left, v_left, t_left = refined_half_deltas(n_half, cfg, consts, side="left")

    positions = np.concatenate([cfg.x_u_m - d_left[::-1], cfg.x_u_m + d_right])
    layout = AntennaLayout(
        positions=tuple(positions),
        center=cfg.x_u_m,
        min_spacing=cfg.delta_p * consts.wavelength,
    )
    targets = np.concatenate([t_left[::-1], t_right])
    return RefinedLayout(
        layout=layout,
        shifts=tuple(v_right),
        shifts_left=tuple(v_left),
        targets=tuple(targets),
    )
