"""Coarse gridboxes from gridded daily data and pairwise dependence maps.

The domain is tiled with 4 degree latitude by 6 degree longitude boxes whose
edges sit at integer lines shifted by a small offset (default 0.1 degree),
so that native gridpoints never fall on a box edge and are therefore never
grouped into two coarse boxes.  A box is retained when more than the land
threshold (default 85%) of its native points are land, and its daily series
is the unweighted mean over the land points only (cosine-latitude weighting
is available behind a flag).

In a dependence map relative to a base box, the non-base box plays the
first coordinate (the X variable) of every pairwise statistic, so the
opposite-tail labels read: lambda_UL means the mapped box is high while the
base box is low.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .copulas import Corner, TailMatrix
from .empirical import correlation, empirical_tail_matrix
from .fitting import ConvergenceError, FitConfig, FitResult, fit
from .marginals import DailySeries, pair_series

BOX_LAT_SPAN = 4.0
BOX_LON_SPAN = 6.0
DEFAULT_OFFSET = 0.1
DEFAULT_LAND_THRESHOLD = 0.85
_EDGE_TOL = 1e-9


class TilingError(ValueError):
    """A native gridpoint sits exactly on a coarse box edge."""


@dataclass(frozen=True)
class GridBox:
    lon_min: float
    lon_max: float
    lat_min: float
    lat_max: float
    land_fraction: float
    n_cells: int
    series: DailySeries

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.lon_min + self.lon_max), 0.5 * (self.lat_min + self.lat_max))

    def contains(self, lon: float, lat: float) -> bool:
        return (self.lon_min <= lon < self.lon_max) and (self.lat_min <= lat < self.lat_max)


@dataclass(frozen=True)
class GridBoxSet:
    boxes: tuple[GridBox, ...]
    offset: float
    land_threshold: float

    def __len__(self) -> int:
        return len(self.boxes)

    def box_at(self, lon: float, lat: float) -> int:
        """Index of the retained box containing the point, else ValueError."""
        for i, box in enumerate(self.boxes):
            if box.contains(lon, lat):
                return i
        nearest = self.nearest_box(lon, lat)
        raise ValueError(
            f"no retained box contains ({lon}, {lat}); "
            f"nearest retained box is #{nearest} centered at {self.boxes[nearest].center}"
        )

    def nearest_box(self, lon: float, lat: float) -> int:
        centers = np.array([b.center for b in self.boxes])
        return int(np.argmin((centers[:, 0] - lon) ** 2 + (centers[:, 1] - lat) ** 2))


def _edges(anchor: float, span: float, lo: float, hi: float) -> np.ndarray:
    first = anchor + span * np.floor((lo - anchor) / span)
    n = int(np.ceil((hi - first) / span)) + 1
    return first + span * np.arange(n + 1)


def _assign(points: np.ndarray, edges: np.ndarray, what: str) -> np.ndarray:
    on_edge = np.isclose(points[:, None], edges[None, :], rtol=0.0, atol=_EDGE_TOL).any(axis=1)
    if on_edge.any():
        where = points[on_edge][:3]
        raise TilingError(
            f"native {what} values {where.tolist()} lie on box edges; cells must "
            f"nest inside a single box (adjust the offset)"
        )
    return np.searchsorted(edges, points, side="right") - 1


def build_gridboxes(
    values: np.ndarray,
    lons: np.ndarray,
    lats: np.ndarray,
    landmask: np.ndarray,
    *,
    years: np.ndarray | None = None,
    days: np.ndarray | None = None,
    offset: float = DEFAULT_OFFSET,
    land_threshold: float = DEFAULT_LAND_THRESHOLD,
    cosine_weights: bool = False,
) -> GridBoxSet:
    """Aggregate native daily values into retained coarse gridboxes.

    Parameters
    ----------
    values : ndarray, shape (n_time, n_lat, n_lon)
        Native daily data.
    lons, lats : 1-D ndarrays
        Native gridpoint coordinates.
    landmask : ndarray, shape (n_lat, n_lon)
        Nonzero where the native point is land.
    years, days : optional 1-D label arrays for the time axis.
    offset : degrees added to integer edge lines.
    land_threshold : boxes at or below this land fraction are discarded.
    cosine_weights : weight land points by cos(latitude) in the box mean.
    """
    values = np.asarray(values, dtype=float)
    lons = np.asarray(lons, dtype=float)
    lats = np.asarray(lats, dtype=float)
    landmask = np.asarray(landmask) != 0
    if values.ndim != 3 or values.shape[1:] != (lats.size, lons.size):
        raise ValueError("values must have shape (n_time, n_lat, n_lon)")
    if landmask.shape != (lats.size, lons.size):
        raise ValueError("landmask grid must match the data grid")
    n_time = values.shape[0]
    if years is None:
        years = np.arange(n_time) // 90
        days = np.arange(n_time) % 90
    years = np.asarray(years, dtype=np.int64)
    days = np.asarray(days, dtype=np.int64)

    lon_edges = _edges(offset, BOX_LON_SPAN, lons.min(), lons.max())
    lat_edges = _edges(offset, BOX_LAT_SPAN, lats.min(), lats.max())
    col = _assign(lons, lon_edges, "longitude")
    row = _assign(lats, lat_edges, "latitude")

    boxes = []
    for r in np.unique(row):
        for c in np.unique(col):
            in_box_lat = row == r
            in_box_lon = col == c
            n_cells = int(in_box_lat.sum()) * int(in_box_lon.sum())
            if n_cells == 0:
                continue
            box_mask = landmask[np.ix_(in_box_lat, in_box_lon)]
            land_fraction = float(box_mask.mean())
            if land_fraction <= land_threshold:
                continue
            sub = values[:, in_box_lat][:, :, in_box_lon]
            flat = sub.reshape(n_time, -1)[:, box_mask.ravel()]
            if cosine_weights:
                w = np.cos(np.deg2rad(np.broadcast_to(
                    lats[in_box_lat][:, None], box_mask.shape)))[box_mask]
                series_values = flat @ (w / w.sum())
            else:
                series_values = flat.mean(axis=1)
            boxes.append(
                GridBox(
                    lon_min=float(lon_edges[c]),
                    lon_max=float(lon_edges[c] + BOX_LON_SPAN),
                    lat_min=float(lat_edges[r]),
                    lat_max=float(lat_edges[r] + BOX_LAT_SPAN),
                    land_fraction=land_fraction,
                    n_cells=n_cells,
                    series=DailySeries(series_values, years, days),
                )
            )
    return GridBoxSet(boxes=tuple(boxes), offset=offset, land_threshold=land_threshold)


@dataclass(frozen=True)
class BoxDependence:
    """Dependence of one box on the base box (box is the X coordinate)."""

    box_index: int
    correlation: float
    empirical: TailMatrix
    fitted: TailMatrix | None
    fit_result: FitResult | None
    error: str | None


@dataclass(frozen=True)
class DependenceMap:
    base_index: int
    threshold: float
    entries: tuple[BoxDependence, ...]


def _pair_statistics(box_index, x_series, base_series, fitcfg, u, empirical_only):
    corr = correlation(x_series, base_series)
    pairs = pair_series(x_series, base_series)
    empirical = empirical_tail_matrix(pairs, u)
    if empirical_only:
        return BoxDependence(box_index, corr, empirical, None, None, None)
    try:
        result = fit(pairs, fitcfg)
        return BoxDependence(box_index, corr, empirical, result.tail_matrix(), result, None)
    except ConvergenceError as exc:
        return BoxDependence(box_index, corr, empirical, None, None, str(exc))


def dependence_map(
    boxset: GridBoxSet,
    base: int,
    fitcfg: FitConfig = FitConfig(),
    u: float = 0.95,
    *,
    empirical_only: bool = False,
    n_jobs: int = 1,
) -> DependenceMap:
    """Fit and count dependence of every retained box against the base box.

    Fit failures are recorded per box and do not abort the map.
    """
    if not 0 <= base < len(boxset):
        raise ValueError(f"base index {base} outside 0..{len(boxset) - 1}")
    base_series = boxset.boxes[base].series
    tasks = [
        (i, box.series, base_series, fitcfg, u, empirical_only)
        for i, box in enumerate(boxset.boxes)
    ]
    if n_jobs != 1:
        from joblib import Parallel, delayed

        entries = Parallel(n_jobs=n_jobs)(delayed(_pair_statistics)(*t) for t in tasks)
    else:
        entries = [_pair_statistics(*t) for t in tasks]
    return DependenceMap(base_index=base, threshold=u, entries=tuple(entries))


@dataclass(frozen=True)
class BandPairDependence:
    box1_index: int
    box2_index: int
    lon1: float
    lon2: float
    correlation: float
    empirical: TailMatrix
    fitted: TailMatrix | None
    error: str | None


def band_boxes(boxset: GridBoxSet, latitude: float) -> list[int]:
    """Indices of retained boxes whose latitude interval contains the value."""
    hits = [
        i for i, b in enumerate(boxset.boxes) if b.lat_min <= latitude < b.lat_max
    ]
    if not hits:
        raise ValueError(f"no retained boxes at latitude {latitude}")
    return hits


def band_profile(
    boxset: GridBoxSet,
    band1: float,
    band2: float,
    fitcfg: FitConfig = FitConfig(),
    u: float = 0.95,
) -> list[BandPairDependence]:
    """Pairwise dependence sweeping longitudes across two latitude bands.

    The band-1 box is the X coordinate of each pair.
    """
    idx1 = band_boxes(boxset, band1)
    idx2 = band_boxes(boxset, band2)
    out = []
    for i in idx1:
        for j in idx2:
            stats = _pair_statistics(
                j, boxset.boxes[i].series, boxset.boxes[j].series, fitcfg, u, False
            )
            out.append(
                BandPairDependence(
                    box1_index=i,
                    box2_index=j,
                    lon1=boxset.boxes[i].center[0],
                    lon2=boxset.boxes[j].center[0],
                    correlation=stats.correlation,
                    empirical=stats.empirical,
                    fitted=stats.fitted,
                    error=stats.error,
                )
            )
    return out
