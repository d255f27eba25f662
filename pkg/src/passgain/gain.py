"""Closed-form array gains, upper bounds, and the optimal antenna count.

For a layout mirror-symmetric about the user, the exact gain collapses to a
sum over the positive-side offsets ``delta_n``:

    a = (eta / N) | sum_n 2 exp(-j k0 r_n) cos(k0 n_eff delta_n) / r_n |^2,
    r_n = sqrt(d^2 + delta_n^2).

Dropping all phases gives the triangle-inequality upper bound
``(eta / N) (sum_n 2 / r_n)^2``; for uniform spacing this bound has the closed
form ``2 eta f_ub(L) / (delta_p d^2 eps)`` with ``eps = wavelength / d``,
``L = N delta_p eps / 2`` and ``f_ub(x) = asinh(x)^2 / x``.  The bound is
maximized at ``x* ~ 3.32`` where ``f_ub(x*) ~ 1.105``, which pins down the
optimal antenna count and the overall gain ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError, NumericsError
from .geometry import DerivedConstants, SystemConfig


def _check_half_deltas(deltas: np.ndarray) -> None:
    if deltas.ndim != 1 or deltas.size == 0:
        raise ConfigError("expected a non-empty 1-D list of positive-side offsets")
    if deltas[0] < 0:
        raise ConfigError("offsets must be non-negative")
    if np.any(np.diff(deltas) <= 0):
        raise ConfigError("offsets must be strictly increasing")


def gain_symmetric(deltas, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Exact gain of a mirror-symmetric, lossless layout from its positive-side
    offsets (strictly increasing, n = 1..N/2)."""
    d = np.asarray(deltas, dtype=float)
    _check_half_deltas(d)
    r = np.hypot(cfg.d_m, d)
    terms = 2.0 * np.exp(-1j * consts.k0 * r) * np.cos(consts.k0 * cfg.n_eff * d) / r
    n = 2 * d.size
    return float(consts.eta / n * abs(terms.sum()) ** 2)


def uniform_deltas(n: int, cfg: SystemConfig, consts: DerivedConstants) -> np.ndarray:
    """Positive-side offsets (k - 1/2) * delta_p * wavelength for k = 1..n/2."""
    if n < 2 or n % 2 != 0:
        raise ConfigError(f"antenna count must be even and >= 2, got {n}")
    k = np.arange(1, n // 2 + 1, dtype=float)
    return (k - 0.5) * cfg.delta_p * consts.wavelength


def gain_uniform(n: int, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Exact gain of the equally spaced symmetric layout with N antennas."""
    return gain_symmetric(uniform_deltas(n, cfg, consts), cfg, consts)


def uniform_integrand(x, cfg: SystemConfig, consts: DerivedConstants):
    """Complex integrand of the continuum form of the uniform-spacing gain.

    In the scaled coordinate x (antenna offset in units of delta_p * d):
    ``2 exp(-j k0 d sqrt(1 + delta_p^2 x^2)) cos(k0 d delta_p n_eff x)
    / sqrt(1 + delta_p^2 x^2)``.
    """
    root = np.sqrt(1.0 + (cfg.delta_p * x) ** 2)
    k0d = consts.k0 * cfg.d_m
    return 2.0 * np.exp(-1j * k0d * root) * np.cos(k0d * cfg.delta_p * cfg.n_eff * x) / root


def gain_uniform_integral(
    n: int,
    cfg: SystemConfig,
    consts: DerivedConstants,
    abs_tol: float = 1e-10,
    max_evals: int = 10**6,
) -> float:
    """Continuum approximation of :func:`gain_uniform`.

    ``eta |I|^2 / (N d^2 eps^2)`` with ``I`` the integral of
    :func:`uniform_integrand` over [0, N eps / 2], evaluated by adaptive
    Gauss-Kronrod quadrature on the real and imaginary parts separately.  The
    subdivision budget is sized from the integrand's fastest phase (the guided
    term at ``k0 d delta_p (n_eff + 1)`` per unit x).
    """
    if n < 2 or n % 2 != 0:
        raise ConfigError(f"antenna count must be even and >= 2, got {n}")
    eps = consts.wavelength / cfg.d_m
    upper = n * eps / 2.0
    cycles = consts.k0 * cfg.d_m * cfg.delta_p * (cfg.n_eff + 1.0) * upper / (2.0 * math.pi)
    limit = int(min(max_evals // 21, max(200, 10.0 * cycles)))

    def part(selector):
        out = quad(
            lambda x: selector(uniform_integrand(x, cfg, consts)),
            0.0,
            upper,
            epsabs=abs_tol,
            epsrel=1e-12,
            limit=limit,
            full_output=1,
        )
        if len(out) > 3:
            raise NumericsError(f"quadrature did not converge for N={n}: {out[3]}")
        return out[0]

    integral = complex(part(np.real), part(np.imag))
    return float(consts.eta * abs(integral) ** 2 / (n * cfg.d_m**2 * eps**2))


def upper_bound_sum(deltas, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Phase-free upper bound (eta / N) (sum_n 2 / r_n)^2 on the symmetric gain."""
    d = np.asarray(deltas, dtype=float)
    _check_half_deltas(d)
    r = np.hypot(cfg.d_m, d)
    n = 2 * d.size
    return float(consts.eta / n * np.sum(2.0 / r) ** 2)


def upper_bound_sum_uniform(n: int, cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Phase-free upper bound evaluated on the equally spaced layout."""
    return upper_bound_sum(uniform_deltas(n, cfg, consts), cfg, consts)


def f_ub(x):
    """Bound shape function asinh(x)^2 / x (= ln(sqrt(1+x^2)+x)^2 / x), x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("f_ub is defined for x > 0")
    out = np.arcsinh(x) ** 2 / x
    return float(out) if out.ndim == 0 else out


def fub_derivative(x: float) -> float:
    """Analytic derivative of :func:`f_ub`."""
    s = math.asinh(x)
    return s * (2.0 * x / math.sqrt(1.0 + x * x) - s) / (x * x)


@lru_cache(maxsize=None)
def find_xstar(lo: float = 1.0, hi: float = 10.0, tol: float = 1e-8) -> tuple[float, float]:
    """Locate the maximizer of f_ub by bisecting its analytic derivative.

    Returns (x*, f_ub(x*)).  The derivative changes sign exactly once on
    [1, 10]; a lost bracket is reported rather than silently ignored.
    """
    flo, fhi = fub_derivative(lo), fub_derivative(hi)
    if not (flo > 0 > fhi):
        raise NumericsError(f"no sign change of d f_ub/dx on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fub_derivative(mid) > 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return x, float(f_ub(x))


def closed_bound_value(n, cfg: SystemConfig, consts: DerivedConstants):
    """Closed-form upper bound 2 eta f_ub(L) / (delta_p d^2 eps); vectorized in n."""
    n = np.asarray(n, dtype=float)
    eps = consts.wavelength / cfg.d_m
    L = n * cfg.delta_p * eps / 2.0
    if np.any(L <= 0):
        raise ConfigError("antenna count must be positive")
    out = 2.0 * consts.eta * (np.arcsinh(L) ** 2 / L) / (cfg.delta_p * cfg.d_m**2 * eps)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BoundReport:
    """Uniform-spacing gain and its discrete and closed-form upper bounds.

    ``eps`` is wavelength/d and ``l_eps`` the dimensionless half-aperture
    N * delta_p * eps / 2 at which the closed bound was evaluated.
    """

    a_uni: float
    a_hat_sum: float
    a_hat_closed: float
    l_eps: float
    eps: float

    def __post_init__(self):
        if self.a_uni > self.a_hat_sum * (1.0 + 1e-9):
            raise NumericsError(
                f"uniform gain {self.a_uni} exceeds its phase-free bound {self.a_hat_sum}"
            )


def upper_bound_closed(n: int, cfg: SystemConfig, consts: DerivedConstants) -> BoundReport:
    """Exact uniform gain alongside its discrete and closed bounds at count N."""
    eps = consts.wavelength / cfg.d_m
    return BoundReport(
        a_uni=gain_uniform(n, cfg, consts),
        a_hat_sum=upper_bound_sum_uniform(n, cfg, consts),
        a_hat_closed=float(closed_bound_value(n, cfg, consts)),
        l_eps=n * cfg.delta_p * eps / 2.0,
        eps=eps,
    )


def optimal_antenna_number(cfg: SystemConfig, consts: DerivedConstants) -> int:
    """Even antenna count maximizing the closed bound: 2 x* d / (delta_p wavelength),
    rounded to the nearest even integer (ties round up)."""
    xstar, _ = find_xstar()
    n_real = 2.0 * xstar * cfg.d_m / (cfg.delta_p * consts.wavelength)
    lo = 2.0 * math.floor(n_real / 2.0)
    hi = lo + 2.0
    n = hi if (n_real - lo) >= (hi - n_real) else lo
    return max(2, int(n))


def max_gain_estimate(cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Peak of the closed bound over N: 2 eta f_ub(x*) / (d delta_p wavelength)."""
    _, fstar = find_xstar()
    return 2.0 * consts.eta * fstar / (cfg.d_m * cfg.delta_p * consts.wavelength)


def gain_limit(cfg: SystemConfig, consts: DerivedConstants) -> float:
    """Overall gain ceiling at the smallest coupling-free spacing (delta_p = 1/2):
    2 eta f_ub(x*) / (d wavelength / 2), about 4.42 eta / (d wavelength)."""
    _, fstar = find_xstar()
    return 2.0 * consts.eta * fstar / (cfg.d_m * consts.wavelength / 2.0)
