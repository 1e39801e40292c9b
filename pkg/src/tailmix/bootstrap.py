"""Decade-stratified year-block bootstrap with percentile intervals.

A bootstrap dataset resamples whole winters (December-January-February
blocks) with replacement, keeping the number of winters drawn from each
decade stratum equal to the stratum's original count so that long-term
trends are preserved.  Within-winter serial dependence is never broken.
Replicate winters are concatenated in sampled order; the rank transform is
recomputed per replicate, so reassembly order does not affect estimates.

Intervals are percentile bootstrap: order statistics of the replicate
estimates (linear interpolation between the closest ones), which keeps the
interval for a tail dependence coefficient inside [0, 1] by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .copulas import Corner, TailMatrix
from .fitting import ConvergenceError, FitConfig, FitResult, fit, warm_started
from .marginals import DailySeries, pair_series
from .rng import generator
from .rotation import MIXTURE_CORNERS

DEFAULT_STRATA = ((1979, 1989), (1990, 1999), (2000, 2009), (2010, 2022))


@dataclass(frozen=True)
class BootstrapSpec:
    """Replication plan: strata are inclusive (first_year, last_year) ranges."""

    n_replicates: int = 200
    strata: tuple = DEFAULT_STRATA
    level: float = 0.95
    seed: int = 0
    max_failure_fraction: float = 0.10

    def __post_init__(self):
        if self.n_replicates < 1:
            raise ValueError("n_replicates must be >= 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must be in (0, 1)")
        strata = tuple((int(a), int(b)) for a, b in self.strata)
        for a, b in strata:
            if a > b:
                raise ValueError(f"stratum ({a}, {b}) is empty")
        for (a1, b1), (a2, b2) in zip(strata, strata[1:]):
            if a2 <= b1:
                raise ValueError("strata must be disjoint and in increasing order")
        object.__setattr__(self, "strata", strata)

    def stratum_of(self, year: int) -> int:
        for i, (a, b) in enumerate(self.strata):
            if a <= year <= b:
                return i
        raise ValueError(f"year {year} outside all strata {self.strata}")


def resample_years(years, spec: BootstrapSpec, replicate: int) -> np.ndarray:
    """One replicate's multiset of years, stratum counts preserved exactly.

    Deterministic per (spec.seed, replicate).
    """
    years = np.asarray(years, dtype=np.int64)
    membership = np.array([spec.stratum_of(int(y)) for y in years])
    rng = generator(spec.seed, "bootstrap-years", replicate)
    out = []
    for i in range(len(spec.strata)):
        members = years[membership == i]
        if members.size:
            out.append(rng.choice(members, size=members.size, replace=True))
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class TailIntervals:
    """Per-corner percentile intervals plus replicate bookkeeping."""

    intervals: dict
    estimates: np.ndarray  # shape (4, n_successful), corner order UU, LU, LL, UL
    n_failed: int
    unreliable: bool
    full_fit: FitResult

    def lower(self, corner: Corner) -> float:
        return self.intervals[Corner(corner)][0]

    def upper(self, corner: Corner) -> float:
        return self.intervals[Corner(corner)][1]


def bootstrap_tail_ci(
    a: DailySeries,
    b: DailySeries,
    spec: BootstrapSpec = BootstrapSpec(),
    fitcfg: FitConfig = FitConfig(),
    *,
    n_jobs: int = 1,
) -> TailIntervals:
    """Percentile intervals for the four tail entries of the fitted mixture.

    Replicates rebuild both series from the same resampled winters, rerun
    the rank transform and the fit (warm-started from the full-data fit),
    and record the four tail-matrix entries.  Failed replicate fits are
    dropped and counted; more than ``max_failure_fraction`` failures flags
    the result unreliable.
    """
    if len(a) != len(b) or np.any(a.years != b.years) or np.any(a.days != b.days):
        raise ValueError("series must share one time index")
    years = np.unique(a.years)
    for y in years:
        spec.stratum_of(int(y))  # validates coverage

    full_fit = fit(pair_series(a, b), fitcfg)
    replicate_cfg = warm_started(fitcfg, full_fit)

    def one_replicate(r: int):
        chosen = resample_years(years, spec, r)
        ra = a.take_years(chosen)
        rb = b.take_years(chosen)
        try:
            result = fit(pair_series(ra, rb), replicate_cfg)
        except ConvergenceError:
            return None
        return result.tail_matrix()

    if n_jobs != 1:
        from joblib import Parallel, delayed

        matrices = Parallel(n_jobs=n_jobs)(
            delayed(one_replicate)(r) for r in range(spec.n_replicates)
        )
    else:
        matrices = [one_replicate(r) for r in range(spec.n_replicates)]

    kept = [m for m in matrices if m is not None]
    n_failed = spec.n_replicates - len(kept)
    if not kept:
        raise ConvergenceError(
            "every bootstrap replicate failed to converge",
            diagnostics={"n_replicates": spec.n_replicates},
        )
    estimates = np.array([[m.entry(c) for m in kept] for c in MIXTURE_CORNERS])
    tail = 100.0 * (1.0 - spec.level) / 2.0
    intervals = {}
    for row, corner in zip(estimates, MIXTURE_CORNERS):
        lo, hi = np.percentile(row, [tail, 100.0 - tail], method="linear")
        intervals[corner] = (float(lo), float(hi))
    return TailIntervals(
        intervals=intervals,
        estimates=estimates,
        n_failed=n_failed,
        unreliable=n_failed > spec.max_failure_fraction * spec.n_replicates,
        full_fit=full_fit,
    )


@dataclass(frozen=True)
class LowerBoundEntry:
    box_index: int
    lower_bounds: dict
    n_failed: int
    unreliable: bool
    error: str | None


def lower_bound_map(
    boxset,
    base: int,
    spec: BootstrapSpec = BootstrapSpec(),
    fitcfg: FitConfig = FitConfig(),
    *,
    n_jobs: int = 1,
) -> list[LowerBoundEntry]:
    """Lower interval endpoints per box and corner, the robustness display."""
    base_series = boxset.boxes[base].series
    out = []
    for i, box in enumerate(boxset.boxes):
        try:
            ci = bootstrap_tail_ci(box.series, base_series, spec, fitcfg, n_jobs=n_jobs)
            out.append(
                LowerBoundEntry(
                    box_index=i,
                    lower_bounds={c: ci.lower(c) for c in Corner},
                    n_failed=ci.n_failed,
                    unreliable=ci.unreliable,
                    error=None,
                )
            )
        except (ConvergenceError, ValueError) as exc:
            out.append(
                LowerBoundEntry(
                    box_index=i,
                    lower_bounds={},
                    n_failed=spec.n_replicates,
                    unreliable=True,
                    error=str(exc),
                )
            )
    return out
