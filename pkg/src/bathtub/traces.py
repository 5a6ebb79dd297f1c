"""Smoothed eigenvalue counting sums and their orbit-sum predictions.

The central object is

    N(E; hbar) = sum_n chi(E_n) rho((E - E_n)/hbar),

with chi a smooth bump in energy (supported in E > 0) and rho the inverse
Fourier transform of a smooth bump rho_hat in time.  Placing supp rho_hat
relative to the set of classical periods

    T_{k,alpha,beta}(E) = k T(E) + alpha tau_- + beta tau_+

controls which orbits contribute:

* supp rho_hat meeting only the transmitted period kT(E) leaves the O(1)
  amplitude (-1)^k e^{i k S(E)/hbar} chi(E) T(E) rho_hat(kT)/(2 pi);
* supp rho_hat isolating a one-reflection period T* gives the O(hbar^2)
  amplitude hbar^2 i^{-(2k+1)} e^{i S*/hbar} omega^2 chi(E) T* rho_hat(T*)
  / (64 pi E^2), with omega the frequency of the reflecting end;
* supp rho_hat avoiding all of T_1(E) suppresses the sum to O(hbar^4).

Everything here is deterministic: quadrature tables are fixed at pair
construction and sums are reduced pairwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import CoverageError, DomainError, IsolationError
from .model import ModelParams, action_S, orbit_catalog, period_T
from .quantization import eigenvalue_exact
from .util import pairwise_sum

DEFAULT_CHI_RELATIVE_WIDTH = 0.3
ISOLATION_WIDTH_FACTOR = 0.4
NOISE_FLOOR = 1e-14


@dataclass(frozen=True)
class BumpSpec:
    """Smooth compactly supported bump: normalization * exp(-1/(1-u^2))
    on |u| < 1 with u = (x - center)/half_width, zero outside."""

    center: float
    half_width: float
    normalization: float = 1.0

    def __post_init__(self):
        if not (self.half_width > 0):
            raise DomainError("bump half_width must be positive")

    @property
    def support(self):
        return (self.center - self.half_width, self.center + self.half_width)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.half_width
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = self.normalization * np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return float(out) if out.ndim == 0 else out


class TestPair:
    """An energy window chi and a time window rho_hat with a frozen
    quadrature table for evaluating rho.

    rho(x) = (1/2pi) integral e^{i x t} rho_hat(t) dt over supp rho_hat,
    computed with a uniform midpoint rule.  All derivatives of the bump
    vanish at the support ends, so the midpoint rule converges faster than
    any power of the node count; the table is doubled until two probe
    values of rho stabilize to 1e-13 and then frozen.
    """

    def __init__(self, chi: BumpSpec, rho_hat: BumpSpec, min_nodes=2048, max_nodes=131072):
        if chi.support[0] <= 0:
            raise DomainError("chi must be supported in strictly positive energies")
        self.chi = chi
        self.rho_hat = rho_hat
        self._build_quadrature(min_nodes, max_nodes)

    def _build_quadrature(self, min_nodes, max_nodes):
        probe = np.array([0.0, 3.0 / self.rho_hat.half_width])
        previous = None
        n = min_nodes
        while True:
            self._set_nodes(n)
            values = self.rho(probe)
            if previous is not None and np.max(np.abs(values - previous)) < 1e-13:
                break
            if n >= max_nodes:
                break
            previous = values
            n *= 2

    def _set_nodes(self, n):
        lo, hi = self.rho_hat.support
        step = (hi - lo) / n
        self.nodes = lo + step * (np.arange(n) + 0.5)
        self.weights = step * self.rho_hat(self.nodes)

    def rho(self, x):
        """Vectorized rho(x); complex valued."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        phases = np.exp(1j * np.outer(x, self.nodes))
        return phases @ self.weights / (2.0 * math.pi)

    def rho_at(self, x) -> complex:
        return complex(self.rho(np.array([float(x)]))[0])


def default_chi(E) -> BumpSpec:
    return BumpSpec(center=float(E), half_width=DEFAULT_CHI_RELATIVE_WIDTH * float(E))


def periods_T1(E, p: ModelParams, k_max=6):
    """Sorted distinct one-reflection periods T_{k,alpha,beta}(E), |k| <= k_max."""
    values = sorted({o.period for o in orbit_catalog(E, 1, k_max, p, include_degenerate=True)})
    out = [values[0]]
    for v in values[1:]:
        if v - out[-1] > 1e-12:
            out.append(v)
    return out


def isolation_half_width(t_star, E, p: ModelParams, factor=ISOLATION_WIDTH_FACTOR, k_max=6) -> float:
    """``factor`` times the distance from t_star to the nearest other
    one-reflection period; a bump this wide centered at t_star meets T_1
    only at t_star."""
    gaps = [abs(t_star - t) for t in periods_T1(E, p, k_max) if abs(t_star - t) > 1e-9]
    if not gaps:
        raise IsolationError("no neighboring periods found; enlarge k_max")
    return factor * min(gaps)


@dataclass(frozen=True)
class CountingResult:
    value: complex
    hbar: float
    E_center: float
    prediction: Optional[complex] = None
    order_estimate: Optional[float] = None

    @property
    def ratio(self) -> Optional[complex]:
        if self.prediction is None or self.prediction == 0:
            return None
        return self.value / self.prediction


def _eigenvalue_window(E_lo, E_hi, p: ModelParams, pad=2):
    """Exact eigenvalues covering [E_lo, E_hi], with coverage verified."""
    n_lo = max(0, int(math.floor(action_S(E_lo, p) / (2.0 * math.pi * p.hbar) - 0.5)) - pad)
    n_hi = int(math.ceil(action_S(E_hi, p) / (2.0 * math.pi * p.hbar) - 0.5)) + pad
    values = np.array([eigenvalue_exact(n, p) for n in range(n_lo, n_hi + 1)])
    if (n_lo > 0 and values[0] >= E_lo) or values[-1] <= E_hi:
        raise CoverageError(
            "eigenvalue window [%d, %d] does not cover energies [%g, %g]"
            % (n_lo, n_hi, E_lo, E_hi)
        )
    return values


def counting_sum(E, p: ModelParams, pair: TestPair, eigs=None) -> CountingResult:
    """The smoothed counting sum at energy E.

    ``eigs`` may supply precomputed eigenvalues covering supp chi (e.g. a
    cheaper asymptotic source); by default the exact solver is queried for
    an index window padded beyond the support.
    """
    lo, hi = pair.chi.support
    if eigs is None:
        eigs = _eigenvalue_window(lo, hi, p)
    else:
        eigs = np.asarray(eigs, dtype=float)
        if eigs[0] >= lo and action_S(lo, p) / (2.0 * math.pi * p.hbar) > 0.5:
            raise CoverageError("supplied eigenvalues start above supp chi")
        if eigs[-1] <= hi:
            raise CoverageError("supplied eigenvalues end below supp chi")
    weights = pair.chi(eigs)
    mask = weights > 0.0
    if not mask.any():
        return CountingResult(value=0j, hbar=p.hbar, E_center=float(E))
    rho_vals = pair.rho((float(E) - eigs[mask]) / p.hbar)
    value = complex(pairwise_sum(weights[mask] * rho_vals))
    return CountingResult(value=value, hbar=p.hbar, E_center=float(E))


def _check_isolation(targets, E, p: ModelParams, pair: TestPair, k_max=6):
    lo, hi = pair.rho_hat.support
    inside = [t for t in periods_T1(E, p, k_max) if lo < t < hi]
    expected = sorted(targets)
    if len(inside) != len(expected) or any(
        abs(a - b) > 1e-9 for a, b in zip(sorted(inside), expected)
    ):
        raise IsolationError(
            "supp rho_hat (%g, %g) meets periods %s, expected exactly %s"
            % (lo, hi, inside, expected)
        )


def prediction_transmitted(E, k, p: ModelParams, pair: TestPair) -> complex:
    """Leading amplitude of the k-th transmitted orbit.

    Requires supp rho_hat to meet T_1(E) exactly at kT(E).
    """
    E = float(E)
    t_star = k * period_T(E, p)
    _check_isolation([t_star], E, p, pair)
    phase = (-1.0) ** k * np.exp(1j * k * action_S(E, p) / p.hbar)
    return complex(
        phase / (2.0 * math.pi) * pair.chi(E) * period_T(E, p) * pair.rho_hat(t_star)
    )


def prediction_reflected(E, k, alpha, beta, p: ModelParams, pair: TestPair) -> complex:
    """Leading amplitude of a one-reflection orbit (|alpha| + |beta| = 1).

    The reflecting end selects the frequency: omega_- if |alpha| = 1,
    omega_+ if |beta| = 1.  Requires supp rho_hat to isolate the orbit's
    period within T_1(E).
    """
    E = float(E)
    if abs(alpha) + abs(beta) != 1:
        raise DomainError("reflected orbits need |alpha| + |beta| = 1")
    t_star = k * period_T(E, p) + alpha * p.tau_minus + beta * p.tau_plus
    _check_isolation([t_star], E, p, pair)
    omega_sq = p.omega_minus**2 if abs(alpha) == 1 else p.omega_plus**2
    action = k * action_S(E, p) + (alpha * p.tau_minus + beta * p.tau_plus) * E
    amplitude = (
        p.hbar**2
        * (1j) ** (-(2 * k + 1))
        * np.exp(1j * action / p.hbar)
        / (64.0 * math.pi * E**2)
    )
    return complex(amplitude * omega_sq * pair.chi(E) * t_star * pair.rho_hat(t_star))


@dataclass(frozen=True)
class ScalingFit:
    exponent: Optional[float]
    n_used: int
    below_noise: bool


def scaling_exponent(values, floor=NOISE_FLOOR) -> ScalingFit:
    """Least-squares slope of log|sum| against log hbar.

    ``values`` is a sequence of (hbar, magnitude) pairs; at least four
    samples spanning a factor >= 8 in hbar are required.  Magnitudes at or
    below ``floor`` are excluded; if none survive the data is reported as
    below noise (consistent with unbounded suppression).
    """
    pairs = [(float(h), float(v)) for h, v in values]
    if len(pairs) < 4:
        raise DomainError("need at least 4 (hbar, value) samples")
    hs = [h for h, _ in pairs]
    if max(hs) / min(hs) < 8.0:
        raise DomainError("hbar samples must span at least a factor of 8")
    kept = [(h, v) for h, v in pairs if v > floor]
    if len(kept) < 2:
        return ScalingFit(exponent=None, n_used=len(kept), below_noise=True)
    log_h = np.log([h for h, _ in kept])
    log_v = np.log([v for _, v in kept])
    slope = float(np.polyfit(log_h, log_v, 1)[0])
    return ScalingFit(exponent=slope, n_used=len(kept), below_noise=False)


def with_prediction(result: CountingResult, prediction: complex) -> CountingResult:
    return replace(result, prediction=prediction)
