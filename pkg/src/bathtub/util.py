"""Small shared helpers: deterministic formatting and log-log slope fits."""

from __future__ import annotations

import math

import numpy as np


def fmt_float(x) -> str:
    """Format a float with 17 significant digits, locale independent."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def json_object_line(items) -> str:
    """One JSON object per line; floats rendered via :func:`fmt_float`."""
    parts = []
    for key, value in items:
        if isinstance(value, bool):
            rendered = "true" if value else "false"
        elif value is None:
            rendered = "null"
        elif isinstance(value, int):
            rendered = str(value)
        elif isinstance(value, float):
            rendered = fmt_float(value)
        else:
            rendered = '"%s"' % str(value)
        parts.append('"%s": %s' % (key, rendered))
    return "{" + ", ".join(parts) + "}"


def pairwise_sum(values):
    """Deterministic reduction; numpy's sum uses pairwise accumulation."""
    return np.sum(np.asarray(values))


def fit_loglog(x, y):
    """Least-squares slope of log(y) against log(x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise ValueError("need at least two points for a slope")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def envelope_slope(x, y, n_bins=16, floor=0.0):
    """Slope of the oscillation envelope of ``y`` against ``x``.

    Samples are grouped into logarithmically spaced bins and the maximum of
    each bin is fitted on log-log axes, which tracks the amplitude of an
    oscillatory decaying signal instead of its near-zero crossings.  Bins
    whose maximum falls at or below ``floor`` are dropped (double-precision
    noise floor).  Returns ``(slope, bin_x, bin_y)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    edges = np.geomspace(x.min() * 0.999, x.max() * 1.001, n_bins + 1)
    idx = np.digitize(x, edges) - 1
    bin_x, bin_y = [], []
    for b in range(n_bins):
        mask = idx == b
        if mask.any():
            bin_x.append(np.exp(np.mean(np.log(x[mask]))))
            bin_y.append(y[mask].max())
    bin_x = np.array(bin_x)
    bin_y = np.array(bin_y)
    keep = bin_y > floor
    if keep.sum() < 2:
        raise ValueError("not enough envelope bins above the floor")
    slope = float(np.polyfit(np.log(bin_x[keep]), np.log(bin_y[keep]), 1)[0])
    return slope, bin_x[keep], bin_y[keep]
