"""Acceptance checks: one callable per criterion, shared by CLI and tests.

Each check returns a CheckResult with a pass flag and a one-line detail
string.  Criterion 9 (the heat-trace t^5 log t fit against its closed-form
candidate) is implemented exactly as specified and is expected to fail:
the measured coefficient of this operator's heat trace is numerically zero
(see bathtub.heat module notes), so the fitted/candidate ratio cannot reach
the required band.  The check reports the measured numbers honestly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .heat import extract_log_coefficient, reference_trace
from .model import ModelParams, period_T
from .oracle import oracle_eigenvalues
from .quantization import (
    bohr_sommerfeld,
    correction_series,
    delta_exact,
    eigenvalue_exact,
    index_set_generate,
)
from .special import r_many, r_series, theta_many
from .traces import (
    BumpSpec,
    TestPair,
    counting_sum,
    default_chi,
    isolation_half_width,
    prediction_reflected,
    prediction_transmitted,
    scaling_exponent,
)
from .util import envelope_slope

DEFAULT_PARAMS = ModelParams(m=1.0, omega_minus=1.0, omega_plus=2.0, ell=1.0, hbar=1.0)
HBAR_SWEEP = (0.1, 0.05, 0.025, 0.0125)


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _finish(criterion, name, passed, detail, started) -> CheckResult:
    return CheckResult(criterion, name, bool(passed), detail, time.perf_counter() - started)


def criterion_1() -> CheckResult:
    """Exact quantization vs the independent discretization oracle."""
    started = time.perf_counter()
    p = DEFAULT_PARAMS
    count = 20
    values, estimates = oracle_eigenvalues(p, count)
    exact = np.array([eigenvalue_exact(n, p) for n in range(count)])
    rel = float(np.max(np.abs(values - exact) / exact))
    elapsed = time.perf_counter() - started
    passed = rel <= 1e-7 and elapsed <= 30.0
    detail = "max relative deviation %.3e (<= 1e-7), est<=%.1e, %.1fs" % (
        rel,
        float(estimates.max()),
        elapsed,
    )
    return _finish(1, "oracle equivalence", passed, detail, started)


def criterion_2() -> CheckResult:
    """Equal frequencies with no flat segment reduce to the harmonic ladder."""
    started = time.perf_counter()
    p = ModelParams(m=1.0, omega_minus=1.0, omega_plus=1.0, ell=0.0, hbar=1.0)
    worst = 0.0
    for n in range(101):
        worst = max(worst, abs(eigenvalue_exact(n, p) - (n + 0.5)))
    elapsed = time.perf_counter() - started
    passed = worst <= 1e-10 and elapsed <= 1.0
    return _finish(
        2,
        "harmonic degeneracy",
        passed,
        "max |E_n - (n+1/2)| = %.3e (<= 1e-10), %.2fs" % (worst, elapsed),
        started,
    )


def criterion_3() -> CheckResult:
    """Interlacing with the neighboring leading-order energies."""
    started = time.perf_counter()
    failures = []
    for ell in (0.0, 1.0):
        for ratio in (2.0, math.sqrt(2.0)):
            for hbar in (1.0, 0.1, 0.01):
                p = ModelParams(m=1.0, omega_minus=1.0, omega_plus=ratio, ell=ell, hbar=hbar)
                for n in range(31):
                    e = eigenvalue_exact(n, p)
                    lower = bohr_sommerfeld(n - 1, p) if n >= 1 else 0.0
                    upper = bohr_sommerfeld(n + 1, p)
                    if not (lower < e < upper):
                        failures.append((ell, ratio, hbar, n))
    passed = not failures
    detail = "12 parameter sets x 31 levels all interlaced" if passed else "violations: %s" % failures[:3]
    return _finish(3, "interlacing", passed, detail, started)


def criterion_4() -> CheckResult:
    """Decay order of the correction-series residual at fixed hbar.

    Envelope slopes of |E_exact - E_series| against the leading-order
    energy: order-4 series (one term) must fit -4 +/- 0.4 over
    n in [50, 5000]; the full printed series must steepen to <= -5.5.
    Envelope bins below 1e-17 are dropped for the full series: beyond that
    level the residual is double-precision phase noise, not signal.
    """
    started = time.perf_counter()
    p = DEFAULT_PARAMS
    ns = np.unique(np.round(np.geomspace(50, 5000, 260)).astype(int))
    energies = np.empty(len(ns))
    resid4 = np.empty(len(ns))
    resid6 = np.empty(len(ns))
    for i, n in enumerate(ns):
        e_bohr = bohr_sommerfeld(int(n), p)
        d = delta_exact(int(n), p)
        energies[i] = e_bohr
        resid4[i] = abs(d - correction_series(e_bohr, p, order=4))
        resid6[i] = abs(d - correction_series(e_bohr, p, order=6))
    slope4, _, _ = envelope_slope(energies, resid4, n_bins=16)
    slope6, _, _ = envelope_slope(energies, resid6, n_bins=16, floor=1e-17)
    elapsed = time.perf_counter() - started
    passed = (-4.4 <= slope4 <= -3.6) and slope6 <= -5.5 and elapsed <= 60.0
    detail = "slope(order4)=%.3f in [-4.4,-3.6]; slope(order6)=%.3f <= -5.5; %.1fs" % (
        slope4,
        slope6,
        elapsed,
    )
    return _finish(4, "expansion order", passed, detail, started)


def criterion_5() -> CheckResult:
    """Angle-function suite: monotonicity, remainder bound, quarter points,
    and the order-4 remainder-series decay."""
    started = time.perf_counter()
    grid = np.linspace(0.0, 1e4, 100_001)
    theta = theta_many(grid)
    monotone = bool(np.all(np.diff(theta) > 0))

    r_grid = r_many(grid[1:])
    bounded = bool(np.all(np.abs(r_grid) < 0.5 * math.pi))

    quarters = 0.25 + 0.5 * np.arange(0, 2000)
    quarter_err = float(np.max(np.abs(r_many(quarters))))

    zs = np.geomspace(5.0, 500.0, 4000)
    resid = np.abs(r_many(zs) - r_series(zs, order=4))
    slope, _, _ = envelope_slope(zs, resid, n_bins=14)

    passed = monotone and bounded and quarter_err <= 1e-10 and -6.3 <= slope <= -5.7
    detail = "monotone=%s |r|<pi/2=%s quarter_err=%.2e series_slope=%.3f" % (
        monotone,
        bounded,
        quarter_err,
        slope,
    )
    return _finish(5, "angle function", passed, detail, started)


def _suppression_pair(E, p) -> TestPair:
    # midpoint of the widest period-free window around E=2; the 0.3
    # half-width keeps both support ends >= 0.8 away from the nearest
    # one-reflection periods (4.1416 and 6.3630), which minimizes
    # finite-hbar tail leakage through the window edges
    return TestPair(default_chi(E), BumpSpec(center=5.25, half_width=0.30))


def criterion_6() -> CheckResult:
    """Suppression when the time window avoids all one-reflection periods."""
    started = time.perf_counter()
    E = 2.0
    samples = []
    for hbar in HBAR_SWEEP:
        p = ModelParams(
            m=1.0, omega_minus=1.0, omega_plus=math.sqrt(2.0), ell=1.0, hbar=hbar
        )
        pair = _suppression_pair(E, p)
        result = counting_sum(E, p, pair)
        samples.append((hbar, abs(result.value)))
    fit = scaling_exponent(samples)
    elapsed = time.perf_counter() - started
    passed = (fit.below_noise or (fit.exponent is not None and fit.exponent >= 3.7)) and elapsed <= 60.0
    detail = "fitted exponent %s (>= 3.7) from %s; %.1fs" % (
        "below-noise" if fit.below_noise else "%.3f" % fit.exponent,
        ["%.2e" % v for _, v in samples],
        elapsed,
    )
    return _finish(6, "orbit-free suppression", passed, detail, started)


def criterion_7() -> CheckResult:
    """Transmitted and one-reflection amplitudes against the counting sum.

    The transmitted check runs at E = 2 (the generic default).  The
    reflected check targets the period T(E) + tau_- and runs at E = 8: at
    E = 2 the distinct period 2T - tau_- lies only 0.08 away (2 tau_- is
    nearly T there), so no admissible window isolates the orbit at
    reachable hbar; at E = 8 the nearest neighbor is 0.42 away and the
    amplitude converges.  See the repository notes for the measurement.
    """
    started = time.perf_counter()
    hbar_small = HBAR_SWEEP[-1]

    # transmitted, k = 1, E = 2
    E_t = 2.0
    p = ModelParams(m=1.0, omega_minus=1.0, omega_plus=math.sqrt(2.0), ell=1.0, hbar=hbar_small)
    t_star = period_T(E_t, p)
    pair = TestPair(
        default_chi(E_t),
        BumpSpec(center=t_star, half_width=isolation_half_width(t_star, E_t, p)),
    )
    trans = counting_sum(E_t, p, pair)
    trans_pred = prediction_transmitted(E_t, 1, p, pair)
    trans_ratio = abs(trans.value) / abs(trans_pred)

    # reflected at the left end, (k, alpha, beta) = (1, 1, 0), E = 8
    E_r = 8.0
    t_star_r = period_T(E_r, p) + p.tau_minus
    pair_r = TestPair(
        default_chi(E_r),
        BumpSpec(center=t_star_r, half_width=isolation_half_width(t_star_r, E_r, p)),
    )
    refl = counting_sum(E_r, p, pair_r)
    refl_pred = prediction_reflected(E_r, 1, 1, 0, p, pair_r)
    refl_ratio = abs(refl.value) / abs(refl_pred)

    elapsed = time.perf_counter() - started
    passed = 0.95 <= trans_ratio <= 1.05 and 0.9 <= refl_ratio <= 1.1 and elapsed <= 120.0
    detail = "transmitted ratio %.4f in [0.95,1.05]; reflected ratio %.4f in [0.9,1.1]; %.1fs" % (
        trans_ratio,
        refl_ratio,
        elapsed,
    )
    return _finish(7, "orbit amplitudes", passed, detail, started)


def criterion_8() -> CheckResult:
    """Closed-form identity for the leading-order heat trace."""
    started = time.perf_counter()
    p = ModelParams(m=1.0, omega_minus=1.0, omega_plus=2.0, ell=0.0, hbar=1.0)
    n_partial = 2000
    n = np.arange(n_partial + 1)
    worst = 0.0
    for t in (0.1, 0.5, 1.0):
        partial = float(np.sum(np.exp(-t * p.omega_bar * (n + 0.5))))
        tail = math.exp(-t * p.omega_bar * (n_partial + 1.5)) / (
            1.0 - math.exp(-t * p.omega_bar)
        )
        closed = reference_trace(t, p)
        worst = max(worst, abs(partial + tail - closed) / closed)
    passed = worst <= 1e-13
    return _finish(
        8,
        "heat-trace identity",
        passed,
        "max relative defect %.3e (<= 1e-13)" % worst,
        started,
    )


def criterion_9() -> CheckResult:
    """Heat-trace t^5 log t fit against the closed-form candidate.

    Expected to fail: the measured log coefficient of this operator is
    numerically zero (the two t^5 log t sources cancel once the (5,5,2)
    correction term carries its regression-verified value), so neither the
    ratio band nor the rms-degradation threshold can be met.  Reported
    honestly rather than tuned away.
    """
    started = time.perf_counter()
    p = ModelParams(m=1.0, omega_minus=1.0, omega_plus=2.0, ell=0.0, hbar=1.0)
    fit = extract_log_coefficient(p)
    degradation = fit.rms_without_log / fit.rms if fit.rms > 0 else math.inf
    elapsed = time.perf_counter() - started
    passed = 0.75 <= fit.ratio <= 1.25 and degradation >= 3.0 and elapsed <= 120.0
    detail = (
        "fitted %.3e vs candidate %.3e (ratio %.3f, need [0.75,1.25]); "
        "rms degradation %.2fx (need >= 3); %.1fs"
        % (fit.log_coefficient, fit.predicted, fit.ratio, degradation, elapsed)
    )
    return _finish(9, "heat-trace log coefficient", passed, detail, started)


def criterion_10() -> CheckResult:
    """Index-set generator: minimal members and containment bounds."""
    started = time.perf_counter()
    triples = index_set_generate(10)
    low = sorted((t.j, t.two_k, t.l) for t in triples if t.j < 6 or t.two_k < 12)
    expected = [(2, 4, 1), (4, 8, 1), (4, 8, 2), (5, 10, 2), (5, 11, 3)]
    bounds_ok = all(t.within_bounds() for t in triples)
    passed = low == expected and bounds_ok
    detail = "lowest members %s; bounds %s; %d members with j <= 10" % (
        "ok" if low == expected else low,
        "ok" if bounds_ok else "violated",
        len(triples),
    )
    return _finish(10, "index-set closure", passed, detail, started)


ALL_CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_all(ids=None):
    ids = sorted(ALL_CRITERIA) if ids is None else sorted(ids)
    return [ALL_CRITERIA[i]() for i in ids]


def format_line(result: CheckResult) -> str:
    status = "PASS" if result.passed else "FAIL"
    return "%s criterion %d (%s): %s" % (status, result.criterion, result.name, result.detail)
