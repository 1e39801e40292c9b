"""Rank-based transform of raw series to the unit square, plus axis remapping.

The probability integral transform used throughout is the empirical one:
value i maps to rank_i / (m + 1), with average ranks for ties.  The m + 1
denominator keeps pseudo-observations strictly interior, where copula
densities are evaluated; dividing by m instead would place the sample
maximum exactly at 1.  Externally fitted marginals enter through
:class:`QuantileTable` lookups rather than through any parametric family.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats


class AlignmentError(ValueError):
    """Two series that should share a time index do not."""

    def __init__(self, message: str, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


@dataclass(frozen=True)
class DailySeries:
    """Daily values with (winter, day-within-winter) time labels.

    A "year" label names one DJF winter block; day labels count from 0
    within the winter.  Labels must be strictly increasing.
    """

    values: np.ndarray
    years: np.ndarray
    days: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        years = np.asarray(self.years, dtype=np.int64)
        days = np.asarray(self.days, dtype=np.int64)
        if not (values.ndim == years.ndim == days.ndim == 1):
            raise ValueError("values, years, days must be 1-D")
        if not values.size == years.size == days.size:
            raise ValueError("values, years, days must have equal length")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise ValueError(f"non-finite values at indices {bad[:10].tolist()}")
        if values.size > 1:
            key = years[:-1] * 1000 + days[:-1]
            nxt = years[1:] * 1000 + days[1:]
            if np.any(nxt <= key):
                where = int(np.flatnonzero(nxt <= key)[0]) + 1
                raise ValueError(f"time labels not strictly increasing at index {where}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "days", days)

    def __len__(self) -> int:
        return self.values.size

    @classmethod
    def from_values(cls, values, start_year: int = 1979, days_per_year: int = 90) -> "DailySeries":
        """Attach synthetic consecutive winter labels to plain values."""
        values = np.asarray(values, dtype=float)
        idx = np.arange(values.size)
        return cls(values, start_year + idx // days_per_year, idx % days_per_year)

    def winters(self) -> np.ndarray:
        """Distinct winter labels, in chronological order."""
        return np.unique(self.years)

    def take_years(self, year_list) -> "DailySeries":
        """Concatenate whole winter blocks in the order given.

        Repeats are allowed (bootstrap resamples); the result is relabelled
        with consecutive block numbers so it remains a valid series.
        """
        chunks_v, chunks_d, new_years = [], [], []
        for block, year in enumerate(year_list):
            mask = self.years == year
            if not mask.any():
                raise ValueError(f"no observations for year {year}")
            chunks_v.append(self.values[mask])
            chunks_d.append(self.days[mask])
            new_years.append(np.full(int(mask.sum()), block, dtype=np.int64))
        return DailySeries(
            np.concatenate(chunks_v), np.concatenate(new_years), np.concatenate(chunks_d)
        )


@dataclass(frozen=True)
class PseudoObservations:
    """Paired pseudo-observations on the open unit square."""

    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        u1 = np.asarray(self.u1, dtype=float)
        u2 = np.asarray(self.u2, dtype=float)
        if u1.ndim != 1 or u2.ndim != 1 or u1.size != u2.size:
            raise ValueError("u1 and u2 must be 1-D of equal length")
        for name, a in (("u1", u1), ("u2", u2)):
            if not np.all(np.isfinite(a)) or np.any(a <= 0.0) or np.any(a >= 1.0):
                raise ValueError(f"{name} must lie strictly inside (0, 1)")
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)

    def __len__(self) -> int:
        return self.u1.size

    def swapped(self) -> "PseudoObservations":
        return PseudoObservations(self.u2, self.u1)


def empirical_pit(series) -> np.ndarray:
    """Map values to rank / (m + 1), averaging ranks over ties.

    Accepts a :class:`DailySeries` or a plain array.  The output is a
    permutation of {1/(m+1), ..., m/(m+1)} when values are distinct, and is
    invariant under strictly increasing transforms of the input.
    """
    values = series.values if isinstance(series, DailySeries) else np.asarray(series, float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("need a non-empty 1-D series")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise ValueError(f"non-finite values at indices {bad[:10].tolist()}")
    ranks = stats.rankdata(values, method="average")
    return ranks / (values.size + 1.0)


def pair_series(a: DailySeries, b: DailySeries) -> PseudoObservations:
    """Transform two time-aligned series and pair them elementwise."""
    if len(a) != len(b):
        raise AlignmentError(f"series lengths differ: {len(a)} vs {len(b)}")
    mismatch = np.flatnonzero((a.years != b.years) | (a.days != b.days))
    if mismatch.size:
        shown = mismatch[:10].tolist()
        raise AlignmentError(
            f"time indices differ at {mismatch.size} positions (first: {shown})",
            offenders=shown,
        )
    return PseudoObservations(empirical_pit(a), empirical_pit(b))


@dataclass(frozen=True)
class QuantileTable:
    """Tabulated quantile function of a marginal, optionally with densities.

    ``probabilities`` and ``quantiles`` must both be strictly increasing;
    ``densities`` (values of the marginal density at the quantiles) enable
    joint-density output on the physical scale.
    """

    probabilities: np.ndarray
    quantiles: np.ndarray
    densities: np.ndarray | None = None

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        q = np.asarray(self.quantiles, dtype=float)
        if p.ndim != 1 or p.size < 2 or p.shape != q.shape:
            raise ValueError("need matching 1-D probability and quantile grids (>= 2 rows)")
        if np.any(p <= 0.0) or np.any(p >= 1.0):
            raise ValueError("probabilities must lie in (0, 1)")
        if np.any(np.diff(p) <= 0.0) or np.any(np.diff(q) <= 0.0):
            raise ValueError("probabilities and quantiles must be strictly increasing")
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "quantiles", q)
        if self.densities is not None:
            d = np.asarray(self.densities, dtype=float)
            if d.shape != p.shape:
                raise ValueError("densities must match the probability grid")
            if np.any(d < 0.0):
                raise ValueError("densities must be nonnegative")
            object.__setattr__(self, "densities", d)

    def log_density_at(self, grid) -> np.ndarray:
        """ln f at the quantiles of the given probability points."""
        if self.densities is None:
            raise ValueError("table carries no density column")
        grid = _check_in_range(grid, self.probabilities)
        with np.errstate(divide="ignore"):
            return np.log(np.interp(grid, self.probabilities, self.densities))


def _check_in_range(grid, probs):
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < probs[0]) or np.any(grid > probs[-1]):
        raise ValueError(
            f"grid points outside table range [{probs[0]}, {probs[-1]}]; refusing to extrapolate"
        )
    return grid


def remap_axis(grid, table: QuantileTable) -> np.ndarray:
    """Monotone interpolation of the quantile function at probability points.

    Used to relabel copula-scale axes in physical units.
    """
    grid = _check_in_range(grid, table.probabilities)
    return np.interp(grid, table.probabilities, table.quantiles)
