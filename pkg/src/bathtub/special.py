"""Log-Gamma, digamma, the ratio F(z) and the continuous angle function.

The angle function theta(z) is the continuously unwrapped polar angle of the
curve

    z  ->  ( z^(1/2) / Gamma(3/4 - z),  -1 / Gamma(1/4 - z) ),

normalized to theta(0) = -pi/2.  It is strictly increasing, crosses the
values pi*(z - 1/4) exactly at z in 1/4 + N/2, and its remainder
r(z) = theta(z) - pi*(z - 1/4) stays inside (-pi/2, pi/2).

Two evaluation branches are used:

* z < Z_SWITCH: direct two-argument arctangent of the defining vector
  (written against positive-argument log-Gamma via the reflection formula),
  with the winding tracked by a cached walk from z = 0 in steps of 0.01.
* z >= Z_SWITCH: theta = pi*(z - 1/4) + r with

      r = atan2( -g*cos(2*pi*z),  1 + g*(1 - sin(2*pi*z)) ),
      g = (F(z) - 1) / 2,   F(z) = Gamma(z + 3/4) / (Gamma(z + 1/4) sqrt(z)),

  whose denominator is bounded away from 0 once |F - 1| < 1.

log F is *not* formed as a difference of log-Gamma values for z >= 2: that
difference loses ~eps*z*log(z) absolutely, which would swamp r's high-order
structure.  Instead log F is summed as a Hurwitz-zeta series

    log F(z) = sum_{k>=3} e_k zeta(k, z),
    e_k = (-1)^(k+1) ((1/4)^k - (3/4)^k + 1/2) / k,

obtained by integrating the convergent partial-fraction series of F'/F
term by term; every summand is O(z^(1-k)) and carries full relative
precision.  (e_1 = e_2 = 0, so the series starts at k = 3 and reproduces
log F = 1/(64 z^2) - 5/(2048 z^4) + ... .)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, psi, zeta

from .errors import DomainError

Z_SWITCH = 2.0

_WALK_STEP = 0.01
_WALK_TOP = Z_SWITCH + 0.5

# Hurwitz-zeta series for log F; k up to 60 reaches the double-precision
# tail even at z = 2 (terms decay like 2^(1-k)/k^2 there).
_ZETA_K = np.arange(3, 61)
_ZETA_E = (-1.0) ** (_ZETA_K + 1) * (0.25**_ZETA_K - 0.75**_ZETA_K + 0.5) / _ZETA_K


def log_gamma(x):
    """ln Gamma(x) for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("log_gamma requires x > 0")
    out = gammaln(x)
    return float(out) if out.ndim == 0 else out


def digamma(x):
    """psi(x) = Gamma'(x)/Gamma(x) for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("digamma requires x > 0")
    out = psi(x)
    return float(out) if out.ndim == 0 else out


def _log_cap_f(z):
    """log F(z) for z > 0, vectorized; zeta series above Z_SWITCH."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    lo = z < Z_SWITCH
    if lo.any():
        zl = z[lo]
        out[lo] = gammaln(zl + 0.75) - gammaln(zl + 0.25) - 0.5 * np.log(zl)
    if (~lo).any():
        zh = z[~lo]
        out[~lo] = _ZETA_E @ zeta(_ZETA_K[:, None], zh[None, :])
    return out


def cap_F(z):
    """F(z) = Gamma(z + 3/4) / (Gamma(z + 1/4) z^(1/2)), positive for z > 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("cap_F requires z > 0")
    out = np.exp(_log_cap_f(z))
    return float(out[0]) if z.ndim == 0 else out


def cap_F_asymptotic(z, order=4):
    """Large-z expansion 1 + 1/(64 z^2) - 19/(8192 z^4); order in {2, 4}."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 5):
        raise DomainError("cap_F_asymptotic requires z >= 5")
    if order not in (2, 4):
        raise DomainError("order must be 2 or 4")
    out = 1.0 + 1.0 / (64.0 * z**2)
    if order == 4:
        out = out - 19.0 / (8192.0 * z**4)
    return float(out) if out.ndim == 0 else out


def cap_F_log_derivative(z, tail_bound=1e-14):
    """F'(z)/F(z) via its convergent series; negative and increasing.

    The series is
        -(3/32) * sum_n 1 / ((n+z)(n+z+1/4)(n+z+3/4)(n+z+1)),
    truncated once the integral tail bound (3/32)/(3 W^3), W = n + z,
    drops below ``tail_bound``.
    """
    z = float(z)
    if z <= 0:
        raise DomainError("cap_F_log_derivative requires z > 0")
    w_stop = (1.0 / (32.0 * tail_bound)) ** (1.0 / 3.0)
    n_terms = max(8, int(math.ceil(w_stop - z)) + 1)
    n = np.arange(n_terms, dtype=float)
    w = n + z
    return float(-(3.0 / 32.0) * np.sum(1.0 / (w * (w + 0.25) * (w + 0.75) * (w + 1.0))))


@dataclass(frozen=True)
class AngleValue:
    """Angle sample: z, unwrapped theta(z), and remainder r = theta - pi*(z-1/4)."""

    z: float
    theta: float
    r: float


def _raw_angle(z):
    """Principal polar angle of the defining vector, for 0 <= z < ~3.

    Both components are rewritten with the reflection formula so only
    positive Gamma arguments occur:
        z^(1/2)/Gamma(3/4 - z) = z^(1/2) Gamma(z + 1/4) sin(pi (z + 1/4)) / pi
        -1/Gamma(1/4 - z)      = -Gamma(z + 3/4) sin(pi (z + 3/4)) / pi
    The common positive factor Gamma(z+1/4)/pi is dropped inside atan2.
    """
    cx = math.sqrt(z) * math.sin(math.pi * (z + 0.25))
    cy = -math.exp(gammaln(z + 0.75) - gammaln(z + 0.25)) * math.sin(math.pi * (z + 0.75))
    return math.atan2(cy, cx)


_walk_cache = None


def _walk():
    """Unwrapped theta on the grid {0, 0.01, ..., _WALK_TOP}.

    Consecutive true values differ by far less than pi/2 at this step, so
    each raw angle is lifted by the multiple of pi closest to the
    prediction from the previous point.
    """
    global _walk_cache
    if _walk_cache is None:
        n = int(round(_WALK_TOP / _WALK_STEP)) + 1
        grid = _WALK_STEP * np.arange(n)
        theta = np.empty(n)
        theta[0] = -0.5 * math.pi
        for i in range(1, n):
            raw = _raw_angle(grid[i])
            predicted = theta[i - 1] + math.pi * _WALK_STEP
            lifted = raw + math.pi * round((predicted - raw) / math.pi)
            if abs(lifted - theta[i - 1]) >= 0.5 * math.pi:
                raise DomainError("angle walk lost continuity at z=%g" % grid[i])
            theta[i] = lifted
        _walk_cache = (grid, theta)
    return _walk_cache


def _theta_small(z):
    """theta(z) for 0 <= z < Z_SWITCH via the walk-pinned winding."""
    if z == 0.0:
        return -0.5 * math.pi
    grid, theta = _walk()
    i = min(int(z / _WALK_STEP), len(grid) - 1)
    predicted = theta[i] + math.pi * (z - grid[i])
    raw = _raw_angle(z)
    lifted = raw + math.pi * round((predicted - raw) / math.pi)
    return lifted


def _r_large(z):
    """Remainder r(z) for z >= Z_SWITCH (array in, array out)."""
    g = 0.5 * np.expm1(_log_cap_f(z))
    two_pi_z = 2.0 * math.pi * z
    return np.arctan2(-g * np.cos(two_pi_z), 1.0 + g * (1.0 - np.sin(two_pi_z)))


def theta_many(z):
    """Vectorized unwrapped theta(z) for z >= 0."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0):
        raise DomainError("theta requires z >= 0")
    out = np.empty_like(z)
    hi = z >= Z_SWITCH
    if hi.any():
        zh = z[hi]
        out[hi] = math.pi * (zh - 0.25) + _r_large(zh)
    if (~hi).any():
        out[~hi] = [_theta_small(v) for v in z[~hi]]
    return out


def r_many(z):
    """Vectorized remainder r(z) = theta(z) - pi*(z - 1/4) for z >= 0."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0):
        raise DomainError("r requires z >= 0")
    out = np.empty_like(z)
    hi = z >= Z_SWITCH
    if hi.any():
        out[hi] = _r_large(z[hi])
    if (~hi).any():
        out[~hi] = [
            (-0.25 * math.pi if v == 0.0 else _theta_small(v) - math.pi * (v - 0.25))
            for v in z[~hi]
        ]
    return out


def theta_value(z) -> float:
    """Scalar unwrapped theta(z)."""
    z = float(z)
    if z < 0:
        raise DomainError("theta requires z >= 0")
    if z >= Z_SWITCH:
        return math.pi * (z - 0.25) + float(_r_large(np.array([z]))[0])
    return _theta_small(z)


def r_value(z) -> float:
    """Scalar remainder r(z); r(0) = -pi/4."""
    z = float(z)
    if z < 0:
        raise DomainError("r requires z >= 0")
    if z == 0.0:
        return -0.25 * math.pi
    if z >= Z_SWITCH:
        return float(_r_large(np.array([z]))[0])
    return _theta_small(z) - math.pi * (z - 0.25)


def theta_tilde(z) -> AngleValue:
    """Angle sample at z >= 0 (theta plus its remainder)."""
    z = float(z)
    theta = theta_value(z)
    r = -0.25 * math.pi if z == 0.0 else (r_value(z) if z >= Z_SWITCH else theta - math.pi * (z - 0.25))
    return AngleValue(z=z, theta=theta, r=r)


def r_series(z, order=4):
    """Truncated large-z series of the remainder; order in {2, 4}.

    order=2 keeps -cos(2 pi z)/(128 z^2); order=4 adds
    5 cos(2 pi z)/(4096 z^4) - sin(4 pi z)/(32768 z^4).  The order-4
    truncation error is O(z^-6).
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 2):
        raise DomainError("r_series requires z >= 2")
    if order not in (2, 4):
        raise DomainError("order must be 2 or 4")
    two_pi_z = 2.0 * math.pi * z
    out = -np.cos(two_pi_z) / (128.0 * z**2)
    if order == 4:
        out = out + 5.0 * np.cos(two_pi_z) / (4096.0 * z**4) - np.sin(2.0 * two_pi_z) / (32768.0 * z**4)
    return float(out) if out.ndim == 0 else out
