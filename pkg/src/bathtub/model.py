"""Physical model: bathtub potential, classical action/period, orbit catalog.

The potential has two quadratic ends of frequencies ``omega_minus`` (left,
for x < 0) and ``omega_plus`` (right, for x > ell) joined by a flat segment
of length ``ell >= 0``.  It is C^1 with second-derivative jumps at x = 0 and
x = ell.  All classical quantities (reduced action, period, periodic-orbit
catalog) are closed form; no trajectory integration is performed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

CONFIG_KEYS = ("m", "omega_minus", "omega_plus", "ell", "hbar")

# energies below this are snapped to the well bottom by action_inverse
ENERGY_FLOOR = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Defining parameters of the operator -(hbar^2/2m) d^2/dx^2 + V(x)."""

    m: float = 1.0
    omega_minus: float = 1.0
    omega_plus: float = 2.0
    ell: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.m > 0):
            raise DomainError("mass m must be positive")
        if not (self.omega_minus > 0 and self.omega_plus > 0):
            raise DomainError("frequencies omega_minus/omega_plus must be positive")
        if not (self.ell >= 0):
            raise DomainError("flat-segment length ell must be nonnegative")
        if not (self.hbar > 0):
            raise DomainError("hbar must be positive")

    @property
    def tau_minus(self) -> float:
        """Half-period of the left quadratic end, pi/omega_minus."""
        return math.pi / self.omega_minus

    @property
    def tau_plus(self) -> float:
        """Half-period of the right quadratic end, pi/omega_plus."""
        return math.pi / self.omega_plus

    @property
    def tau_sum(self) -> float:
        return self.tau_minus + self.tau_plus

    @property
    def omega_bar(self) -> float:
        """Harmonic mean of the two frequencies."""
        return 2.0 / (1.0 / self.omega_minus + 1.0 / self.omega_plus)

    @property
    def regime(self) -> str:
        """One of ``bathtub`` (ell > 0), ``asymmetric-oscillator`` (ell = 0,
        distinct frequencies) or ``harmonic-degenerate`` (plain oscillator,
        kept as a regression case)."""
        if self.ell > 0:
            return "bathtub"
        if self.omega_minus != self.omega_plus:
            return "asymmetric-oscillator"
        return "harmonic-degenerate"

    @property
    def is_degenerate(self) -> bool:
        return self.regime == "harmonic-degenerate"

    def to_config(self) -> str:
        """Serialize as a flat key=value block (one key per line)."""
        lines = []
        for key in CONFIG_KEYS:
            lines.append("%s=%r" % (key, float(getattr(self, key))))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config(cls, text: str) -> "ModelParams":
        """Parse a key=value block; unknown keys are rejected."""
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError("line %d: expected key=value, got %r" % (lineno, raw))
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError("line %d: unknown key %r" % (lineno, key))
            if key in values:
                raise ConfigError("line %d: duplicate key %r" % (lineno, key))
            try:
                values[key] = float(value.strip())
            except ValueError as exc:
                raise ConfigError("line %d: bad float %r" % (lineno, value)) from exc
        return cls(**values)


def potential(x, p: ModelParams):
    """Potential V(x); accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    left = 0.5 * p.m * p.omega_minus**2 * x**2
    right = 0.5 * p.m * p.omega_plus**2 * (x - p.ell) ** 2
    out = np.where(x < 0, left, np.where(x <= p.ell, 0.0, right))
    return float(out) if out.ndim == 0 else out


def action_S(E, p: ModelParams):
    """Reduced action S(E) = 2*sqrt(2m)*ell*sqrt(E) + (tau_+ + tau_-)*E."""
    E = np.asarray(E, dtype=float)
    if np.any(E < 0):
        raise DomainError("action_S requires E >= 0")
    out = 2.0 * math.sqrt(2.0 * p.m) * p.ell * np.sqrt(E) + p.tau_sum * E
    return float(out) if out.ndim == 0 else out


def period_T(E, p: ModelParams):
    """Orbit period T(E) = dS/dE = sqrt(2m)*ell/sqrt(E) + tau_+ + tau_-."""
    E = np.asarray(E, dtype=float)
    if np.any(E <= 0):
        raise DomainError("period_T requires E > 0")
    out = math.sqrt(2.0 * p.m) * p.ell / np.sqrt(E) + p.tau_sum
    return float(out) if out.ndim == 0 else out


def action_inverse(w, p: ModelParams):
    """The unique E >= 0 with action_S(E) = w.

    Solves the quadratic in u = sqrt(E) using the root form
    u = w / (b + sqrt(b^2 + c*w)) with b = sqrt(2m)*ell and c = tau_+ + tau_-,
    which has no cancellation for small w.  Energies below ``ENERGY_FLOOR``
    collapse to exactly 0.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("action_inverse requires w >= 0")
    b = math.sqrt(2.0 * p.m) * p.ell
    c = p.tau_sum
    u = w / (b + np.sqrt(b * b + c * w))
    E = u * u
    out = np.where(E < ENERGY_FLOOR, 0.0, E)
    return float(out) if out.ndim == 0 else out


# reflection label -> (alpha, beta) per the one-reflection catalog
REFLECTION_KINDS = {
    "0-": (1, 0),
    "0+": (0, -1),
    "ell-": (-1, 0),
    "ell+": (0, 1),
}


@dataclass(frozen=True)
class PeriodicOrbit:
    """A classical periodic trajectory with at most one reflection.

    ``period = k*T(E) + alpha*tau_- + beta*tau_+`` and
    ``action = k*S(E) + (alpha*tau_- + beta*tau_+)*E``; ``kind`` labels the
    reflection site/side ("0-", "0+", "ell-", "ell+") or "transmitted".
    """

    k: int
    alpha: int
    beta: int
    period: float
    action: float
    kind: str


def orbit_period(E, k, alpha, beta, p: ModelParams) -> float:
    return k * period_T(E, p) + alpha * p.tau_minus + beta * p.tau_plus


def orbit_action(E, k, alpha, beta, p: ModelParams) -> float:
    return k * action_S(E, p) + (alpha * p.tau_minus + beta * p.tau_plus) * E


def orbit_catalog(E, N, k_max, p: ModelParams, include_degenerate=False):
    """All periodic orbits with |k| <= k_max and at most N reflections.

    N = 0 gives the transmitted orbits only; N = 1 adds the four
    one-reflection families.  For ell = 0 the "0+" and "ell-" families do
    not exist geometrically and are skipped unless ``include_degenerate``
    is set (they remain well defined as index tuples).
    """
    if N not in (0, 1):
        raise DomainError("only reflection counts N in {0, 1} are supported")
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    if np.asarray(E).ndim != 0 or E <= 0:
        raise DomainError("orbit_catalog requires scalar E > 0")

    orbits = []
    for k in range(-k_max, k_max + 1):
        orbits.append(
            PeriodicOrbit(
                k, 0, 0,
                orbit_period(E, k, 0, 0, p),
                orbit_action(E, k, 0, 0, p),
                "transmitted",
            )
        )
        if N == 1:
            for kind, (alpha, beta) in REFLECTION_KINDS.items():
                if p.ell == 0 and kind in ("0+", "ell-") and not include_degenerate:
                    continue
                orbits.append(
                    PeriodicOrbit(
                        k, alpha, beta,
                        orbit_period(E, k, alpha, beta, p),
                        orbit_action(E, k, alpha, beta, p),
                        kind,
                    )
                )
    orbits.sort(key=lambda o: (o.period, o.k, o.alpha, o.beta))
    return orbits
