import math
import warnings

import numpy as np
import pytest

from passgain.channel import array_gain_exact
from passgain.coupling import (
    CouplingMatrix,
    coupling_matrix,
    f_mc,
    gain_mc,
    gain_mc_two_approx,
    gain_mc_two_closed,
    gain_two_uncoupled,
    inv_sqrt,
    jacobi_eigh,
    sinc_j0,
)
from passgain.errors import ConfigError
from passgain.geometry import symmetric_uniform_layout


def test_sinc_values():
    assert sinc_j0(0.0) == 1.0
    assert sinc_j0(math.pi) == pytest.approx(0.0, abs=1e-15)
    assert sinc_j0(math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-12)
    # series branch agrees with the direct ratio just above the crossover
    for x in (1e-5, 9e-5, 1.1e-4, 1e-3):
        assert sinc_j0(x) == pytest.approx(math.sin(x) / x, rel=1e-12)


def test_half_wavelength_matrix_is_identity(consts):
    lam = consts.wavelength
    for n in (2, 4, 8):
        c = coupling_matrix(n, lam / 2, consts)
        assert np.max(np.abs(c.matrix - np.eye(n))) < 1e-12


def test_two_antenna_matrix_structure(consts):
    lam = consts.wavelength
    c = coupling_matrix(2, lam / 4, consts)
    j2 = sinc_j0(consts.k0 * lam / 4)
    assert j2 == pytest.approx(2 / math.pi, rel=1e-12)
    assert c.matrix[0, 0] == 1.0 and c.matrix[1, 1] == 1.0
    assert c.matrix[0, 1] == c.matrix[1, 0] == j2


def test_matrix_validation(consts):
    with pytest.raises(ConfigError):
        coupling_matrix(3, 0.001, consts)
    with pytest.raises(ConfigError):
        coupling_matrix(2, 0.0, consts)


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(2, 9))
        a = rng.normal(size=(n, n))
        a = (a + a.T) / 2
        w, v = jacobi_eigh(a)
        assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-10)
        assert np.allclose(v @ np.diag(w) @ v.T, a, atol=1e-10)
        assert np.allclose(v.T @ v, np.eye(n), atol=1e-10)


def test_jacobi_input_validation():
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.5, 1.0]]))


def test_inv_sqrt_identity(consts):
    lam = consts.wavelength
    c = coupling_matrix(4, lam / 2, consts)
    root = inv_sqrt(c)
    assert root.floored == 0
    assert np.max(np.abs(root.matrix - np.eye(4))) < 1e-12


def test_inv_sqrt_two_antenna_spectral_form(consts):
    # spectral route through eigenvalues 1 +/- J(2)
    lam = consts.wavelength
    c = coupling_matrix(2, 0.25 * lam, consts)
    j2 = sinc_j0(consts.k0 * 0.25 * lam)
    w, _ = c.eigendecomposition()
    assert np.allclose(np.sort(w), [1 - j2, 1 + j2], atol=1e-12)
    sp, sm = 1 / math.sqrt(1 + j2), 1 / math.sqrt(1 - j2)
    expected = np.array([[sp + sm, sp - sm], [sp - sm, sp + sm]]) / 2
    assert np.max(np.abs(inv_sqrt(c).matrix - expected)) < 1e-12


def test_inv_sqrt_defining_property(consts):
    lam = consts.wavelength
    rng = np.random.default_rng(13)
    checked = 0
    while checked < 50:
        spacing = float(rng.uniform(0.05, 1.0)) * lam
        c = coupling_matrix(6, spacing, consts)
        if c.eigendecomposition()[0].min() <= 1e-6:
            continue
        checked += 1
        m = inv_sqrt(c).matrix
        assert np.linalg.norm(m @ m @ c.matrix - np.eye(6)) < 1e-8


def test_eigenvalues_sum_to_count(consts):
    lam = consts.wavelength
    rng = np.random.default_rng(19)
    for _ in range(20):
        n = 2 * int(rng.integers(1, 5))
        c = coupling_matrix(n, float(rng.uniform(0.02, 1.5)) * lam, consts)
        assert c.eigendecomposition()[0].sum() == pytest.approx(n, rel=1e-12)


def test_matrix_path_matches_closed_form(cfg, consts):
    lam = consts.wavelength
    for x in np.linspace(0.05, 1.0, 50):
        a_matrix = gain_mc(2, float(x) * lam, cfg, consts)
        a_closed = gain_mc_two_closed(float(x) * lam, cfg, consts)
        assert abs(a_matrix - a_closed) / a_closed < 1e-9


def test_half_wavelength_equals_uncoupled_gain(cfg, consts):
    lam = consts.wavelength
    a_mc = gain_mc(2, lam / 2, cfg, consts)
    lay = symmetric_uniform_layout(cfg, 2, lam / 2)
    a_free = array_gain_exact(lay, cfg, consts, alpha_wg=0.0)
    assert abs(a_mc - a_free) / a_free < 1e-9


def test_vanishing_spacing_limit(cfg, consts):
    lam = consts.wavelength
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        a0 = gain_mc(2, 1e-6 * lam, cfg, consts)
    assert any("floored" in str(w.message) for w in caught)
    assert a0 == pytest.approx(consts.eta / cfg.d_m**2, rel=1e-3)


def test_closed_form_values(cfg, consts):
    lam = consts.wavelength
    # coupling halves the collapsed-pair gain
    assert gain_mc_two_closed(0.0, cfg, consts) == pytest.approx(
        consts.eta / cfg.d_m**2, rel=1e-12
    )
    assert gain_two_uncoupled(0.0, cfg, consts) == 2 * consts.eta / cfg.d_m**2
    # half-wavelength spacing: j0(pi) = 0, cos^2(0.72 pi) = 0.4063
    expected = 2 * consts.eta * 0.4063 / (cfg.d_m**2 + lam**2 / 16)
    assert gain_mc_two_closed(lam / 2, cfg, consts) == pytest.approx(expected, rel=1e-3)


def test_approximation_drops_spacing_term(cfg, consts):
    lam = consts.wavelength
    for x in (0.1, 0.5, 0.9):
        exact = gain_mc_two_closed(x * lam, cfg, consts)
        approx = gain_mc_two_approx(x * lam, cfg, consts)
        # spacing is centimetres against a 3 m height
        assert approx == pytest.approx(exact, rel=1e-5)
        assert approx == pytest.approx(
            2 * consts.eta / cfg.d_m**2 * f_mc(x, cfg.n_eff), rel=1e-12
        )


def test_fmc_values():
    assert f_mc(0.0, 1.44) == 0.5
    xs = np.arange(1, 10001) * 1e-4
    vals = f_mc(xs, 1.44)
    i = int(np.argmax(vals))
    assert xs[i] == pytest.approx(0.70, abs=0.02)
    assert vals[i] == pytest.approx(1.27, abs=0.02)
    assert vals[i] > 1.0


def test_spacing_gain_not_monotone(cfg, consts):
    # interior optimum of the coupling-aware pair beats both landmarks
    lam = consts.wavelength
    xs = np.linspace(0.01, 1.0, 400)
    vals = np.array([gain_mc_two_closed(float(x) * lam, cfg, consts) for x in xs])
    i = int(np.argmax(vals))
    assert 0 < i < len(xs) - 1
    a_half = gain_mc_two_closed(lam / 2, cfg, consts)
    assert vals[i] > max(a_half, consts.eta / cfg.d_m**2)
    # rises after an earlier fall somewhere on the interval
    assert np.any(np.diff(vals) < 0) and np.any(np.diff(vals) > 0)


def test_gain_mc_rejects_bad_input(cfg, consts):
    with pytest.raises(ConfigError):
        gain_mc(5, 0.001, cfg, consts)
    with pytest.raises(ConfigError):
        gain_mc_two_closed(-0.1, cfg, consts)


def test_coupling_matrix_cache(consts):
    c = coupling_matrix(4, 0.003, consts)
    w1, v1 = c.eigendecomposition()
    w2, v2 = c.eigendecomposition()
    assert w1 is w2 and v1 is v2
    assert isinstance(c, CouplingMatrix)
