"""Nonparametric counterparts: counted tail dependence, correlation,
copula-scale bin counts, density-grid export, and event compositing.

The counted estimator thresholds each series at its own order statistics:
with m observations and threshold u, the high cutoff is the floor(u*m)-th
smallest value and exceedance is strict, so ties with the cutoff are
excluded.  Low-side events mirror the high side (value strictly below the
(m - floor(u*m) + 1)-th smallest).  The estimate divides the joint count by
m*(1-u) and is capped at 1, since the raw ratio can slightly exceed 1 when
u*m is not an integer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .copulas import Corner, TailMatrix
from .marginals import DailySeries, PseudoObservations
from .rotation import RotatedMixture, mixture_log_density

DEFAULT_THRESHOLD = 0.95


def _threshold_index(m: int, u: float) -> int:
    if not 0.0 < u < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {u}")
    if m * (1.0 - u) < 1.0:
        raise ValueError(f"m*(1-u) = {m * (1.0 - u):.3g} < 1: threshold too extreme for m={m}")
    return int(np.floor(u * m))


def _side_mask(values: np.ndarray, k: int, side: str) -> np.ndarray:
    ordered = np.sort(values)
    if side == "U":
        return values > ordered[k - 1]
    return values < ordered[values.size - k]


def corner_events(x, y, u: float, corner: Corner) -> np.ndarray:
    """Indices of days jointly beyond both marginal cutoffs for the corner.

    The corner's first letter applies to ``x``, the second to ``y``; only
    ranks matter, so raw or rank-transformed inputs give identical events.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("x and y must be 1-D of equal length")
    corner = Corner(corner)
    k = _threshold_index(x.size, u)
    mask_x = _side_mask(x, k, corner.value[0])
    mask_y = _side_mask(y, k, corner.value[1])
    if not mask_x.any() or not mask_y.any():
        raise ValueError(
            f"threshold u={u} leaves zero marginal exceedances for corner {corner.value}"
        )
    return np.flatnonzero(mask_x & mask_y)


def empirical_tail(pairs: PseudoObservations, u: float, corner: Corner) -> float:
    """Counted tail dependence estimate for one corner at threshold u."""
    count = corner_events(pairs.u1, pairs.u2, u, corner).size
    return min(1.0, count / (len(pairs) * (1.0 - u)))


def empirical_tail_matrix(pairs: PseudoObservations, u: float) -> TailMatrix:
    """All four counted estimates arranged as a tail matrix."""
    return TailMatrix(
        lambda_LU=empirical_tail(pairs, u, Corner.LU),
        lambda_UU=empirical_tail(pairs, u, Corner.UU),
        lambda_LL=empirical_tail(pairs, u, Corner.LL),
        lambda_UL=empirical_tail(pairs, u, Corner.UL),
    )


def correlation(a, b, method: str = "pearson") -> float:
    """Correlation of two aligned series (Pearson on the raw values).

    The conventional teleconnection measure; ``method="spearman"`` switches
    to rank correlation.
    """
    x = a.values if isinstance(a, DailySeries) else np.asarray(a, dtype=float)
    y = b.values if isinstance(b, DailySeries) else np.asarray(b, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("series must be 1-D and aligned")
    if x.size < 2:
        raise ValueError("need at least two observations")
    if method == "spearman":
        from scipy.stats import rankdata

        x = rankdata(x)
        y = rankdata(y)
    elif method != "pearson":
        raise ValueError(f"unknown correlation method {method!r}")
    sx = x.std()
    sy = y.std()
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for a zero-variance series")
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def bin_counts(pairs: PseudoObservations, width: float) -> np.ndarray:
    """Counts over square bins partitioning the unit square.

    Bins are half-open [a, a + width) with the final bin closed, so the
    counts always total the number of pairs.  ``counts[i, j]`` counts pairs
    with u2 in bin i and u1 in bin j (plot orientation).
    """
    n_bins = 1.0 / width
    if abs(n_bins - round(n_bins)) > 1e-9:
        raise ValueError(f"1/width must be an integer, got width={width}")
    n = int(round(n_bins))
    i = np.minimum((pairs.u2 / width).astype(int), n - 1)
    j = np.minimum((pairs.u1 / width).astype(int), n - 1)
    counts = np.zeros((n, n), dtype=np.int64)
    np.add.at(counts, (i, j), 1)
    return counts


@dataclass(frozen=True)
class DensityGrid:
    """Log mixture density at cell midpoints; values[i, j] sits at
    (u1 = axis1[j], u2 = axis2[i])."""

    values: np.ndarray
    axis1: np.ndarray
    axis2: np.ndarray


def density_grid(mix: RotatedMixture, resolution: int) -> DensityGrid:
    """Evaluate the log mixture density on a midpoint grid."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    axis = (np.arange(resolution) + 0.5) / resolution
    values = np.empty((resolution, resolution))
    # row blocks keep peak memory modest at high resolution
    block = max(1, 2_000_000 // resolution)
    for lo in range(0, resolution, block):
        hi = min(lo + block, resolution)
        u2 = np.repeat(axis[lo:hi], resolution)
        u1 = np.tile(axis, hi - lo)
        values[lo:hi] = mixture_log_density(mix, u1, u2).reshape(hi - lo, resolution)
    return DensityGrid(values=values, axis1=axis.copy(), axis2=axis.copy())


@dataclass(frozen=True)
class CompositeResult:
    """Mean auxiliary field over the days selected by a corner event."""

    event_indices: np.ndarray
    n_events: int
    mean_field: np.ndarray | None

    def event_dates(self, series: DailySeries) -> list:
        return [
            (int(series.years[i]), int(series.days[i])) for i in self.event_indices
        ]


def composite(a: DailySeries, b: DailySeries, u: float, corner: Corner, field) -> CompositeResult:
    """Average ``field`` over the days counted by the corner estimator.

    ``field`` is time-indexed with leading dimension matching the series;
    the mean is unweighted over event days.
    """
    if len(a) != len(b) or np.any(a.years != b.years) or np.any(a.days != b.days):
        raise ValueError("series must share one time index")
    field = np.asarray(field, dtype=float)
    if field.shape[0] != len(a):
        raise ValueError(
            f"field has {field.shape[0]} time steps but series has {len(a)}"
        )
    events = corner_events(a.values, b.values, u, corner)
    if events.size == 0:
        return CompositeResult(events, 0, None)
    return CompositeResult(events, int(events.size), field[events].mean(axis=0))
