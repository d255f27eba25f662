import cmath
import math

import numpy as np
import pytest

from passgain.channel import (
    array_gain_exact,
    channel_state,
    inwaveguide_phase,
    los_coefficient,
    waveguide_attenuation,
)
from passgain.errors import ConfigError
from passgain.gain import gain_symmetric
from passgain.geometry import AntennaLayout, SystemConfig, symmetric_uniform_layout


def test_overhead_antenna_power(cfg, consts):
    # |h|^2 = eta / d^2 for the antenna directly above the user
    h = los_coefficient(cfg.x_u_m, cfg, consts)
    assert abs(h) ** 2 == pytest.approx(8.07e-8, rel=1e-3)
    assert abs(h) ** 2 == pytest.approx(consts.eta / cfg.d_m**2, rel=1e-12)


def test_overhead_antenna_phase(cfg, consts):
    h = los_coefficient(cfg.x_u_m, cfg, consts)
    expected = cmath.phase(cmath.exp(-1j * consts.k0 * cfg.d_m))
    assert cmath.phase(h) == pytest.approx(expected, abs=1e-12)


def test_magnitude_even_in_offset(cfg, consts):
    for off in (0.001, 0.5, 2.7):
        left = abs(los_coefficient(cfg.x_u_m - off, cfg, consts))
        right = abs(los_coefficient(cfg.x_u_m + off, cfg, consts))
        assert left == pytest.approx(right, rel=1e-15)


def test_inwaveguide_phase_values(cfg, consts):
    assert inwaveguide_phase(0.0, 0.0, consts) == 0.0
    assert inwaveguide_phase(consts.lambda_g, 0.0, consts) == pytest.approx(
        2 * math.pi, rel=1e-12
    )
    # one free-space wavelength of waveguide covers n_eff guided wavelengths
    assert inwaveguide_phase(consts.wavelength, 0.0, consts) == pytest.approx(
        2 * math.pi * 1.44, rel=1e-12
    )


def test_feed_right_of_antenna_rejected(consts):
    with pytest.raises(ConfigError):
        inwaveguide_phase(-1.0, 0.0, consts)
    with pytest.raises(ConfigError):
        waveguide_attenuation(-1.0, 0.0, 0.08)


def test_attenuation_values():
    assert waveguide_attenuation(5.0, 0.0, 0.0) == 1.0
    assert waveguide_attenuation(30.0, 0.0, 0.08) == pytest.approx(0.7586, rel=1e-4)
    xs = np.linspace(0.0, 50.0, 40)
    att = [waveguide_attenuation(float(x), 0.0, 0.08) for x in xs]
    assert all(b <= a for a, b in zip(att, att[1:]))


def test_exact_gain_matches_symmetric_form(cfg, consts):
    # same value through the per-antenna route and the mirrored-pair route
    rng = np.random.default_rng(5)
    for _ in range(25):
        half = np.sort(rng.uniform(1e-4, 3.0, size=int(rng.integers(1, 30))))
        while np.any(np.diff(half) <= 0):
            half = np.sort(rng.uniform(1e-4, 3.0, size=half.size))
        positions = tuple(np.concatenate([cfg.x_u_m - half[::-1], cfg.x_u_m + half]))
        lay = AntennaLayout(positions=positions, center=cfg.x_u_m, min_spacing=0.0)
        a_exact = array_gain_exact(lay, cfg, consts, alpha_wg=0.0)
        a_sym = gain_symmetric(half, cfg, consts)
        assert a_exact == pytest.approx(a_sym, rel=1e-12)


def test_feed_invariance_without_loss(cfg, consts):
    lay = symmetric_uniform_layout(cfg, 6, 0.01)
    base = array_gain_exact(lay, cfg, consts, alpha_wg=0.0)
    for x0 in (-0.1, -3.0, -123.456):
        shifted = SystemConfig(x_0_m=x0, alpha_wg_db_per_m=0.0)
        lay0 = symmetric_uniform_layout(shifted, 6, 0.01)
        assert array_gain_exact(lay0, shifted, consts, alpha_wg=0.0) == pytest.approx(
            base, rel=1e-12
        )


def test_two_antennas_half_wavelength(cfg, consts):
    # evaluate the mirrored pair at spacing wavelength/2 by hand
    lam = consts.wavelength
    lay = symmetric_uniform_layout(cfg, 2, lam / 2)
    got = array_gain_exact(lay, cfg, consts, alpha_wg=0.0)
    expected = (
        2
        * consts.eta
        * math.cos(math.pi * cfg.n_eff / 2) ** 2
        / (cfg.d_m**2 + lam**2 / 16)
    )
    assert got == pytest.approx(expected, rel=1e-12)


def test_triangle_inequality_bound(cfg, consts):
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = 2 * int(rng.integers(1, 25))
        spacing = float(rng.uniform(0.3, 3.0)) * consts.wavelength
        lay = symmetric_uniform_layout(cfg, n, spacing)
        state = channel_state(lay, cfg, consts, alpha_wg=0.0)
        bound = consts.eta / n * np.sum(1.0 / np.hypot(np.array(lay.deltas()), cfg.d_m)) ** 2
        assert array_gain_exact(lay, cfg, consts, alpha_wg=0.0) <= bound * (1 + 1e-9)
        assert np.all(state.att == 1.0)


def test_loss_never_raises_gain(cfg, consts):
    lay = symmetric_uniform_layout(cfg, 8, 0.02)
    alphas = [0.0, 0.02, 0.08, 0.3, 1.0]
    gains = [array_gain_exact(lay, cfg, consts, alpha_wg=a) for a in alphas]
    assert all(b <= a for a, b in zip(gains, gains[1:]))
