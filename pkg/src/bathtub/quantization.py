"""Exact eigenvalues, leading-order quantization and the correction series.

An energy E > 0 is an eigenvalue exactly when

    Phi(E) = sqrt(2m)*ell*sqrt(E)/hbar + theta(E/(2 hbar omega_-))
                                       + theta(E/(2 hbar omega_+))

is an integer multiple of pi; Phi is continuous, strictly increasing and
Phi(0) = -pi, so the n-th eigenvalue is the unique root of Phi(E) = pi*n.

Rather than root-finding on E directly, the solver works in the offset
d = E - cal_E(n) from the leading-order (action-quantized) energy
cal_E(n) = S^{-1}(2 pi hbar (n + 1/2)) and solves

    [S(cal_E + d) - S(cal_E)]/(2 hbar) + r(z_-) + r(z_+) = 0,

where r is the angle remainder.  Both sides are evaluated without forming
differences of large nearly equal numbers, so d carries full relative
precision even when it is ~1e-16 of E.  This matters: the correction-series
tests resolve d to many orders below E.

The correction series for d reads

    d = hbar * sum over (j, k, l) of
        hbar^j / (cal_E^k T(cal_E)^l) * P_{j,k,l}(tau_- cal_E/hbar,
                                                  tau_+ cal_E/hbar),

with two-variable trigonometric polynomials P.  The five lowest terms are
hard-coded below.  Three independent numerical cross-checks pin their
coefficients (see tests/test_quantization.py): a sign flip in the
(4,4,2)/(5,5,2) entries relative to a naive derivative bookkeeping, and the
1/(512 sqrt 2) normalization of the half-integer (5, 11/2, 3) entry, are
all confirmed by regression against exact eigenvalues at small hbar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError
from .model import ModelParams, action_inverse, action_S, period_T
from .special import r_value, theta_value
from .util import fmt_float, json_object_line

# lower bracket for the ground state (energies are strictly positive)
GROUND_EPS = 1e-12

# the expansion is only used away from the well bottom
MIN_EXPANSION_ENERGY = 0.1

CSV_COLUMNS = ("n", "E_exact", "E_bohr", "E_asymptotic", "delta")


class TrigPoly2:
    """Two-variable trigonometric polynomial sum c_{j,k} e^{i(jx+ky)}."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None, tol=0.0):
        cleaned = {}
        for key, value in (coeffs or {}).items():
            value = complex(value)
            if abs(value) > tol:
                cleaned[(int(key[0]), int(key[1]))] = value
        self.coeffs = cleaned

    @classmethod
    def constant(cls, value):
        return cls({(0, 0): value})

    @classmethod
    def cos_x(cls, n=1):
        return cls({(n, 0): 0.5, (-n, 0): 0.5})

    @classmethod
    def cos_y(cls, n=1):
        return cls({(0, n): 0.5, (0, -n): 0.5})

    @classmethod
    def sin_x(cls, n=1):
        return cls({(n, 0): -0.5j, (-n, 0): 0.5j})

    @classmethod
    def sin_y(cls, n=1):
        return cls({(0, n): -0.5j, (0, -n): 0.5j})

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            out[key] = out.get(key, 0.0) + value
        return TrigPoly2(out, tol=0.0)

    def __mul__(self, other):
        if isinstance(other, TrigPoly2):
            out = {}
            for (j1, k1), c1 in self.coeffs.items():
                for (j2, k2), c2 in other.coeffs.items():
                    key = (j1 + j2, k1 + k2)
                    out[key] = out.get(key, 0.0) + c1 * c2
            return TrigPoly2(out)
        return TrigPoly2({key: other * value for key, value in self.coeffs.items()})

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(abs(j) + abs(k) for j, k in self.coeffs)

    def is_real_valued(self, tol=1e-14) -> bool:
        for (j, k), value in self.coeffs.items():
            mirror = self.coeffs.get((-j, -k), 0.0)
            if abs(mirror - value.conjugate()) > tol * max(1.0, abs(value)):
                return False
        return True

    def __call__(self, x, y):
        """Evaluate; real part returned (all shipped polynomials are real)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        total = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for (j, k), value in self.coeffs.items():
            total = total + value * np.exp(1j * (j * x + k * y))
        out = total.real
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CorrectionTerm:
    """One term of the correction series; k is stored doubled (two_k = 2k)
    so half-integer exponents stay exact."""

    j: int
    two_k: int
    l: int
    poly: TrigPoly2

    @property
    def k(self) -> float:
        return self.two_k / 2.0


@dataclass(frozen=True, order=True)
class IndexTriple:
    j: int
    two_k: int
    l: int

    @property
    def k(self) -> float:
        return self.two_k / 2.0

    def within_bounds(self) -> bool:
        """Containment bound: j >= 2, j <= k <= (7j-2)/6, l <= (2j-1)/3."""
        return (
            self.j >= 2
            and 2 * self.j <= self.two_k
            and 3 * self.two_k <= 7 * self.j - 2
            and 3 * self.l <= 2 * self.j - 1
        )


def correction_polynomials(p: ModelParams):
    """The five lowest correction terms, ordered by (j, k, l).

    The (4,4,2) and (5,5,2) coefficients below are the regression-verified
    values; they differ from a naive reuse of the leading remainder term's
    derivative by an overall sign (and a factor 2 for (5,5,2)).
    """
    om2 = p.omega_minus**2
    op2 = p.omega_plus**2
    cos_pair = om2 * TrigPoly2.cos_x() + op2 * TrigPoly2.cos_y()
    sin_pair = p.omega_minus * TrigPoly2.sin_x() + p.omega_plus * TrigPoly2.sin_y()

    p221 = (1.0 / 16.0) * cos_pair
    p441 = (-5.0 / 128.0) * (om2**2 * TrigPoly2.cos_x() + op2**2 * TrigPoly2.cos_y()) + (
        1.0 / 1024.0
    ) * (om2**2 * TrigPoly2.sin_x(2) + op2**2 * TrigPoly2.sin_y(2))
    p442 = (-math.pi / 256.0) * (sin_pair * cos_pair)
    p552 = (-1.0 / 128.0) * (cos_pair * cos_pair)
    p5113 = (math.sqrt(p.m) * p.ell / (512.0 * math.sqrt(2.0))) * (cos_pair * cos_pair)

    return [
        CorrectionTerm(2, 4, 1, p221),
        CorrectionTerm(4, 8, 1, p441),
        CorrectionTerm(4, 8, 2, p442),
        CorrectionTerm(5, 10, 2, p552),
        CorrectionTerm(5, 11, 3, p5113),
    ]


def phase_Phi(E, p: ModelParams):
    """Left-hand side of the quantization condition; Phi(0) = -pi."""
    E = np.asarray(E, dtype=float)
    if np.any(E < 0):
        raise DomainError("phase_Phi requires E >= 0")
    from .special import theta_many

    flat = math.sqrt(2.0 * p.m) * p.ell * np.sqrt(E) / p.hbar
    out = (
        flat
        + theta_many(E / (2.0 * p.hbar * p.omega_minus))
        + theta_many(E / (2.0 * p.hbar * p.omega_plus))
    )
    return float(out[0]) if E.ndim == 0 else out


def bohr_sommerfeld(n, p: ModelParams) -> float:
    """Leading-order energy S^{-1}(2 pi hbar (n + 1/2))."""
    if n < 0:
        raise DomainError("index n must be nonnegative")
    return float(action_inverse(2.0 * math.pi * p.hbar * (n + 0.5), p))


def _action_difference(E0, d, p: ModelParams) -> float:
    """S(E0 + d) - S(E0), evaluated without cancellation."""
    b = math.sqrt(2.0 * p.m) * p.ell
    return 2.0 * b * d / (math.sqrt(E0 + d) + math.sqrt(E0)) + p.tau_sum * d


def delta_exact(n, p: ModelParams, tol=1e-12) -> float:
    """Offset of the n-th eigenvalue from its leading-order energy.

    Bracketed by the interlacing property (the root lies strictly between
    the neighboring leading-order energies), refined by Brent iteration
    (bisection with secant/inverse-quadratic steps) on the residual

        h(d) = [S(cal_E + d) - S(cal_E)]/(2 hbar) + r(z_-) + r(z_+).
    """
    if n < 0:
        raise DomainError("index n must be nonnegative")
    e_n = bohr_sommerfeld(n, p)
    lo = (max(bohr_sommerfeld(n - 1, p), GROUND_EPS) if n >= 1 else GROUND_EPS) - e_n
    hi = bohr_sommerfeld(n + 1, p) - e_n
    two_hbar = 2.0 * p.hbar
    sm = two_hbar * p.omega_minus
    sp = two_hbar * p.omega_plus

    def residual(d):
        E = e_n + d
        return _action_difference(e_n, d, p) / two_hbar + r_value(E / sm) + r_value(E / sp)

    res_lo = residual(lo)
    res_hi = residual(hi)
    if not (res_lo < 0.0 < res_hi):
        # monotonicity of Phi makes this unreachable; reaching it signals
        # a broken angle unwrapping
        raise ConvergenceError(
            "quantization residual does not bracket a root at n=%d "
            "(h(lo)=%g, h(hi)=%g)" % (n, res_lo, res_hi)
        )
    d = brentq(residual, lo, hi, xtol=5e-324, rtol=8.9e-16, maxiter=200)
    # one guarded secant polish against the already tiny residual
    r0 = residual(d)
    if r0 != 0.0:
        step = 1e-9 * max(abs(d), GROUND_EPS) or GROUND_EPS
        r1 = residual(d + step)
        if r1 != r0:
            cand = d - r0 * step / (r1 - r0)
            if lo < cand < hi and abs(residual(cand)) < abs(r0):
                d = cand
    if not (abs(d) <= tol * (e_n + abs(d)) or abs(residual(d)) <= 1e-12 * (1.0 + abs(n))):
        raise ConvergenceError("eigenvalue refinement stalled at n=%d" % n)
    return float(d)


def eigenvalue_exact(n, p: ModelParams, tol=1e-12) -> float:
    """The unique root of Phi(E) = pi*n."""
    return bohr_sommerfeld(n, p) + delta_exact(n, p, tol)


def eigenvalues_exact(n_lo, n_hi, p: ModelParams):
    """Exact eigenvalues for n in the half-open range [n_lo, n_hi)."""
    if n_hi < n_lo:
        raise DomainError("empty index range")
    return np.array([eigenvalue_exact(n, p) for n in range(n_lo, n_hi)])


def correction_series(E_bohr, p: ModelParams, order=6, min_energy=MIN_EXPANSION_ENERGY) -> float:
    """Energy increment from the correction terms with j < order or k < order.

    Only the five hard-coded terms exist, so ``order`` may not exceed 6.
    order=4 keeps just the (2,2,1) term; order=6 keeps all five.
    """
    E = float(E_bohr)
    if order > 6:
        raise DomainError("correction terms beyond order 6 are not available")
    if E <= min_energy:
        raise DomainError("correction series needs E_bohr > %g" % min_energy)
    T = period_T(E, p)
    x = p.tau_minus * E / p.hbar
    y = p.tau_plus * E / p.hbar
    total = 0.0
    for term in correction_polynomials(p):
        if not (term.j < order or term.k < order):
            continue
        total += p.hbar**term.j / (E**term.k * T**term.l) * term.poly(x, y)
    return p.hbar * total


@dataclass(frozen=True)
class EigenRecord:
    """One eigenvalue with its leading-order and series approximations."""

    n: int
    E_exact: float
    E_bohr: float
    E_asymptotic: float
    delta: float


def eigen_records(n_lo, n_hi, p: ModelParams, order=6):
    """Records for n in [n_lo, n_hi); E_asymptotic is NaN below the
    expansion's validity floor."""
    records = []
    for n in range(n_lo, n_hi):
        e_bohr = bohr_sommerfeld(n, p)
        d = delta_exact(n, p)
        if e_bohr > MIN_EXPANSION_ENERGY:
            e_asym = e_bohr + correction_series(e_bohr, p, order=order)
        else:
            e_asym = math.nan
        records.append(EigenRecord(n, e_bohr + d, e_bohr, e_asym, d))
    return records


def records_to_csv(records) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        lines.append(
            "%d,%s,%s,%s,%s"
            % (
                rec.n,
                fmt_float(rec.E_exact),
                fmt_float(rec.E_bohr),
                fmt_float(rec.E_asymptotic),
                fmt_float(rec.delta),
            )
        )
    return "\n".join(lines) + "\n"


def records_to_json_lines(records) -> str:
    lines = []
    for rec in records:
        lines.append(
            json_object_line(
                [
                    ("n", rec.n),
                    ("E_exact", rec.E_exact),
                    ("E_bohr", rec.E_bohr),
                    ("E_asymptotic", rec.E_asymptotic),
                    ("delta", rec.delta),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def index_set_generate(j_bound):
    """Closure of {(2k, 2k, 1)} under the two index-building operations,
    truncated to j <= j_bound.

    Operation 1 maps any m >= 1 members plus a shift n >= 2 to
    (sum j + n, sum k + n, sum l + 1); operation 2 maps any m >= 2 members
    to (sum j + m - 1, sum k + m - 1/2, sum l + 1).  Multiset sums are
    accumulated by dynamic programming on (sum j, sum 2k, sum l).
    """
    if j_bound > 20:
        raise DomainError("index-set generation is limited to j_bound <= 20")
    members = {(2 * i, 4 * i, 1) for i in range(1, j_bound // 2 + 1)}
    while True:
        produced = set()
        # sums over multisets of current members, keyed by multiset size
        size_sums = {1: set(members)}
        max_size = max(1, j_bound // 2)
        for m in range(2, max_size + 1):
            grown = set()
            for (j1, k1, l1) in size_sums[m - 1]:
                for (j2, k2, l2) in members:
                    if j1 + j2 <= j_bound:
                        grown.add((j1 + j2, k1 + k2, l1 + l2))
            if not grown:
                break
            size_sums[m] = grown
        for m, sums in size_sums.items():
            for (sj, sk2, sl) in sums:
                for shift in range(2, j_bound - sj + 1):
                    produced.add((sj + shift, sk2 + 2 * shift, sl + 1))
                if m >= 2 and sj + m - 1 <= j_bound:
                    produced.add((sj + m - 1, sk2 + 2 * m - 1, sl + 1))
        new = produced - members
        if not new:
            break
        members |= new
    return {IndexTriple(*t) for t in members}
