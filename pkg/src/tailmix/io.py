"""File formats: pair/series CSVs, gridded binary/CSV, tables, and grids.

Numeric CSV output uses 17 significant digits so every file round-trips to
the exact double that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .marginals import DailySeries, QuantileTable

_FMT = "%.17g"


def fmt(x: float) -> str:
    return _FMT % float(x)


# ---------------------------------------------------------------------------
# Pair and series CSVs
# ---------------------------------------------------------------------------

def write_pairs_csv(path, u1, u2) -> None:
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    with open(path, "w") as fh:
        fh.write("u1,u2\n")
        for a, b in zip(u1, u2):
            fh.write(f"{fmt(a)},{fmt(b)}\n")


def read_pair_table(path):
    """Read a pair CSV: either (u1, u2) or (year, day, x, y) columns.

    Returns (x, y, years, days) with years/days None for the 2-column form.
    """
    with open(path) as fh:
        header = fh.readline().strip().lower().split(",")
        rows = np.loadtxt(fh, delimiter=",", ndmin=2) if _has_data(path) else np.empty((0, len(header)))
    if len(header) == 2:
        if rows.size == 0:
            return np.empty(0), np.empty(0), None, None
        return rows[:, 0], rows[:, 1], None, None
    if len(header) == 4:
        if rows.size == 0:
            return np.empty(0), np.empty(0), np.empty(0, np.int64), np.empty(0, np.int64)
        return (
            rows[:, 2],
            rows[:, 3],
            rows[:, 0].astype(np.int64),
            rows[:, 1].astype(np.int64),
        )
    raise ValueError(
        f"{path}: expected 2 columns (u1,u2) or 4 columns (year,day,x,y), got {len(header)}"
    )


def _has_data(path) -> bool:
    with open(path) as fh:
        fh.readline()
        return bool(fh.readline().strip())


def read_pair_series(path) -> tuple[DailySeries, DailySeries]:
    """Read a 4-column (year, day, x, y) CSV into two aligned series."""
    x, y, years, days = read_pair_table(path)
    if years is None:
        years = np.arange(x.size) // 90
        days = np.arange(x.size) % 90
    return DailySeries(x, years, days), DailySeries(y, years, days)


def write_pair_series_csv(path, a: DailySeries, b: DailySeries) -> None:
    with open(path, "w") as fh:
        fh.write("year,day,x,y\n")
        for yr, d, x, y in zip(a.years, a.days, a.values, b.values):
            fh.write(f"{yr},{d},{fmt(x)},{fmt(y)}\n")


# ---------------------------------------------------------------------------
# Gridded data: flat binary or CSV with a metadata header
# ---------------------------------------------------------------------------

_MAGIC = b"TMGRID1\n"


@dataclass(frozen=True)
class Gridded:
    """A gridded daily field with its native coordinate description."""

    values: np.ndarray  # (n_time, n_lat, n_lon)
    lon0: float
    lat0: float
    dlon: float
    dlat: float

    @property
    def lons(self) -> np.ndarray:
        return self.lon0 + self.dlon * np.arange(self.values.shape[2])

    @property
    def lats(self) -> np.ndarray:
        return self.lat0 + self.dlat * np.arange(self.values.shape[1])


def write_gridded(path, grid: Gridded) -> None:
    path = str(path)
    values = np.ascontiguousarray(grid.values, dtype=np.float64)
    n_time, n_lat, n_lon = values.shape
    if path.endswith(".csv"):
        with open(path, "w") as fh:
            fh.write(
                f"# n_lon={n_lon} n_lat={n_lat} n_time={n_time} "
                f"lon0={fmt(grid.lon0)} lat0={fmt(grid.lat0)} "
                f"dlon={fmt(grid.dlon)} dlat={fmt(grid.dlat)}\n"
            )
            flat = values.reshape(n_time, -1)
            for row in flat:
                fh.write(",".join(fmt(x) for x in row) + "\n")
        return
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        np.array([n_lon, n_lat, n_time], dtype="<i8").tofile(fh)
        np.array([grid.lon0, grid.lat0, grid.dlon, grid.dlat], dtype="<f8").tofile(fh)
        values.astype("<f8").tofile(fh)


def read_gridded(path) -> Gridded:
    path = str(path)
    if path.endswith(".csv"):
        with open(path) as fh:
            header = fh.readline()
            if not header.startswith("#"):
                raise ValueError(f"{path}: missing gridded CSV metadata header")
            meta = dict(kv.split("=") for kv in header[1:].split())
            n_lon, n_lat, n_time = (int(meta[k]) for k in ("n_lon", "n_lat", "n_time"))
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        values = data.reshape(n_time, n_lat, n_lon)
        return Gridded(
            values,
            float(meta["lon0"]),
            float(meta["lat0"]),
            float(meta["dlon"]),
            float(meta["dlat"]),
        )
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a tailmix gridded binary file")
        n_lon, n_lat, n_time = np.fromfile(fh, dtype="<i8", count=3)
        lon0, lat0, dlon, dlat = np.fromfile(fh, dtype="<f8", count=4)
        values = np.fromfile(fh, dtype="<f8", count=n_time * n_lat * n_lon)
    return Gridded(values.reshape(n_time, n_lat, n_lon), lon0, lat0, dlon, dlat)


# ---------------------------------------------------------------------------
# Quantile tables
# ---------------------------------------------------------------------------

def read_quantile_table(path) -> QuantileTable:
    """Two- or three-column CSV: probability, quantile[, density]."""
    data = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=_skiprows(path))
    if data.shape[1] == 2:
        return QuantileTable(data[:, 0], data[:, 1])
    if data.shape[1] == 3:
        return QuantileTable(data[:, 0], data[:, 1], data[:, 2])
    raise ValueError(f"{path}: quantile table needs 2 or 3 columns, got {data.shape[1]}")


def _skiprows(path) -> int:
    with open(path) as fh:
        first = fh.readline()
    try:
        float(first.split(",")[0])
        return 0
    except ValueError:
        return 1


def write_quantile_table(path, table: QuantileTable) -> None:
    with open(path, "w") as fh:
        if table.densities is None:
            fh.write("probability,quantile\n")
            for p, q in zip(table.probabilities, table.quantiles):
                fh.write(f"{fmt(p)},{fmt(q)}\n")
        else:
            fh.write("probability,quantile,density\n")
            for p, q, d in zip(table.probabilities, table.quantiles, table.densities):
                fh.write(f"{fmt(p)},{fmt(q)},{fmt(d)}\n")


# ---------------------------------------------------------------------------
# 2-D grids (density grids, bin counts, composite fields)
# ---------------------------------------------------------------------------

def write_grid_csv(path, values: np.ndarray, axis1, axis2) -> None:
    """Matrix rows with a one-line header carrying both axis vectors."""
    values = np.asarray(values)
    with open(path, "w") as fh:
        fh.write(
            "# axis1=" + ",".join(fmt(x) for x in np.asarray(axis1)) +
            " axis2=" + ",".join(fmt(x) for x in np.asarray(axis2)) + "\n"
        )
        for row in values:
            fh.write(",".join(fmt(x) for x in row) + "\n")


def read_grid_csv(path):
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("# axis1="):
            raise ValueError(f"{path}: missing grid axis header")
        body = header[2:].strip()
        a1_part, a2_part = body.split(" axis2=")
        axis1 = np.array([float(x) for x in a1_part[len("axis1="):].split(",")])
        axis2 = np.array([float(x) for x in a2_part.split(",")])
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    return values, axis1, axis2


# ---------------------------------------------------------------------------
# Dependence maps, intervals, composites
# ---------------------------------------------------------------------------

_CORNERS = ("LU", "UU", "LL", "UL")


def write_dependence_map_csv(path, boxset, dmap) -> None:
    cols = [
        "box", "lon_min", "lon_max", "lat_min", "lat_max", "land_fraction",
        "correlation",
    ]
    cols += [f"lambda_{c}" for c in _CORNERS]
    cols += [f"empirical_{c}" for c in _CORNERS]
    cols += ["converged", "error"]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for entry in dmap.entries:
            box = boxset.boxes[entry.box_index]
            row = [
                str(entry.box_index),
                fmt(box.lon_min), fmt(box.lon_max), fmt(box.lat_min), fmt(box.lat_max),
                fmt(box.land_fraction), fmt(entry.correlation),
            ]
            if entry.fitted is not None:
                row += [fmt(getattr(entry.fitted, f"lambda_{c}")) for c in _CORNERS]
            else:
                row += ["", "", "", ""]
            row += [fmt(getattr(entry.empirical, f"lambda_{c}")) for c in _CORNERS]
            if entry.fit_result is not None:
                row.append(str(int(entry.fit_result.converged)))
            else:
                row.append("")
            row.append(entry.error or "")
            fh.write(",".join(row) + "\n")


def write_band_profile_csv(path, pairs) -> None:
    cols = ["box1", "box2", "lon1", "lon2", "correlation"]
    cols += [f"lambda_{c}" for c in _CORNERS] + [f"empirical_{c}" for c in _CORNERS]
    cols += ["error"]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for p in pairs:
            row = [str(p.box1_index), str(p.box2_index), fmt(p.lon1), fmt(p.lon2), fmt(p.correlation)]
            if p.fitted is not None:
                row += [fmt(getattr(p.fitted, f"lambda_{c}")) for c in _CORNERS]
            else:
                row += ["", "", "", ""]
            row += [fmt(getattr(p.empirical, f"lambda_{c}")) for c in _CORNERS]
            row.append(p.error or "")
            fh.write(",".join(row) + "\n")


def write_intervals_csv(path, rows) -> None:
    """rows: iterables of (box_id, corner, lower, upper, n_failed, unreliable)."""
    with open(path, "w") as fh:
        fh.write("box,corner,lower,upper,n_failed,unreliable\n")
        for box_id, corner, lo, hi, n_failed, unreliable in rows:
            fh.write(
                f"{box_id},{corner},{fmt(lo)},{fmt(hi)},{n_failed},{int(unreliable)}\n"
            )


def write_composite(path_prefix, result, series, lons=None, lats=None) -> None:
    """Composite mean field as CSV plus a JSON sidecar with the event dates."""
    prefix = Path(path_prefix)
    sidecar = {
        "n_events": result.n_events,
        "event_dates": result.event_dates(series),
    }
    prefix.with_suffix(".json").write_text(json.dumps(sidecar, indent=2))
    if result.mean_field is not None:
        ny, nx = result.mean_field.shape
        axis1 = lons if lons is not None else np.arange(nx)
        axis2 = lats if lats is not None else np.arange(ny)
        write_grid_csv(prefix.with_suffix(".csv"), result.mean_field, axis1, axis2)
