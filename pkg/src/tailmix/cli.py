"""Command-line interface.

Every command accepts ``--config`` (a TOML file) and explicit flags; flags
win over config values.  All randomness flows from one ``--seed``; derived
streams are keyed by purpose and index, so runs are reproducible from the
config artifact alone.  Worker count for parallel sections comes from the
``TAILMIX_JOBS`` environment variable (default 1).
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import bootstrap as bt
from . import empirical as emp
from . import io as tio
from . import spatial as sp
from .copulas import Corner
from .fitting import ConvergenceError, FitConfig, fit
from .marginals import DailySeries, PseudoObservations, empirical_pit, pair_series
from .rng import derived_int
from .rotation import (
    mixture_from_json,
    mixture_tail_matrix,
    mixture_to_json,
    sample_mixture,
)


def _load_config(path):
    if path is None:
        return {}
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _cfg(config, section, key, flag_value, default):
    if flag_value is not None:
        return flag_value
    if section in config and key in config[section]:
        return config[section][key]
    if key in config:
        return config[key]
    return default


def _n_jobs() -> int:
    return int(os.environ.get("TAILMIX_JOBS", "1"))


def _fit_config(config, family, seed) -> FitConfig:
    section = config.get("fit", {})
    return FitConfig(
        base_family=_cfg(config, "fit", "family", family, "gumbel"),
        max_iterations=int(section.get("max_iterations", 500)),
        gradient_tolerance=float(section.get("gradient_tolerance", 1e-8)),
        min_observations=int(section.get("min_observations", 50)),
        theta_cap=float(section.get("theta_cap", 50.0)),
        seed=seed,
    )


def _read_mixture(path):
    try:
        return mixture_from_json(Path(path).read_text())
    except ValueError as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def _pairs_from_file(path) -> PseudoObservations:
    x, y, _, _ = tio.read_pair_table(path)
    if x.size == 0:
        raise click.ClickException(f"{path}: no data rows")
    return PseudoObservations(empirical_pit(x), empirical_pit(y))


def _load_boxset(data_path, landmask_path, config, offset, land_threshold):
    data = tio.read_gridded(data_path)
    mask = tio.read_gridded(landmask_path)
    if mask.values.shape[1:] != data.values.shape[1:]:
        raise click.ClickException("landmask grid does not match the data grid")
    offset = float(_cfg(config, "grid", "offset", offset, sp.DEFAULT_OFFSET))
    threshold = float(
        _cfg(config, "grid", "land_threshold", land_threshold, sp.DEFAULT_LAND_THRESHOLD)
    )
    try:
        return data, sp.build_gridboxes(
            data.values,
            data.lons,
            data.lats,
            mask.values[0],
            offset=offset,
            land_threshold=threshold,
        )
    except sp.TilingError as exc:
        raise click.ClickException(str(exc)) from exc


def _select_base(boxset, base_index, base_lon, base_lat):
    if base_index is not None:
        if not 0 <= base_index < len(boxset):
            raise click.ClickException(
                f"base index {base_index} outside 0..{len(boxset) - 1}"
            )
        return base_index
    if base_lon is None or base_lat is None:
        raise click.ClickException("give either --base-index or both --base-lon and --base-lat")
    try:
        return boxset.box_at(base_lon, base_lat)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
def main():
    """Four-corner tail dependence modeling for paired daily series."""


@main.command()
@click.option("--mixture", "mixture_path", required=True, type=click.Path(exists=True))
@click.option("--n", "n", type=int, default=None, help="Number of pairs.")
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def simulate(mixture_path, n, seed, config_path, out):
    """Sample pairs from a mixture JSON into a CSV (u1, u2)."""
    config = _load_config(config_path)
    n = int(_cfg(config, "simulate", "n", n, 1000))
    seed = int(_cfg(config, "simulate", "seed", seed, 0))
    mix = _read_mixture(mixture_path)
    pairs = sample_mixture(mix, n, derived_int(seed, "simulate"))
    tio.write_pairs_csv(out, pairs[:, 0], pairs[:, 1])
    click.echo(f"wrote {n} pairs to {out}")


@main.command("fit")
@click.option("--pairs", "pairs_path", type=click.Path(exists=True), default=None)
@click.option("--series-a", type=click.Path(exists=True), default=None)
@click.option("--series-b", type=click.Path(exists=True), default=None)
@click.option("--family", type=click.Choice(["gumbel", "joe", "clayton"]), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path(), help="Fitted mixture JSON.")
@click.option("--report", "report_path", type=click.Path(), default=None)
def fit_cmd(pairs_path, series_a, series_b, family, seed, config_path, out, report_path):
    """Rank-transform paired input and fit the rotated mixture."""
    config = _load_config(config_path)
    if pairs_path is not None:
        pairs = _pairs_from_file(pairs_path)
    elif series_a is not None and series_b is not None:
        sa, _ = tio.read_pair_series(series_a)
        sb, _ = tio.read_pair_series(series_b)
        pairs = pair_series(sa, sb)
    else:
        raise click.ClickException("give --pairs or both --series-a and --series-b")
    cfg = _fit_config(config, family, seed)
    try:
        result = fit(pairs, cfg)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    except ConvergenceError as exc:
        diag_path = Path(out).with_suffix(".diagnostics.json")
        diag = dict(exc.diagnostics)
        diag["best_params"] = [list(map(float, p)) for p in diag["best_params"]]
        diag_path.write_text(json.dumps(diag, indent=2))
        raise click.ClickException(f"fit did not converge; diagnostics in {diag_path}") from exc
    Path(out).write_text(mixture_to_json(result.mixture))
    report = result.to_dict()
    tm = result.tail_matrix()
    report["tail_matrix"] = {c.value: tm.entry(c) for c in Corner}
    report["negligible_weights"] = [c.value for c in result.negligible_weights()]
    text = json.dumps(report, indent=2)
    if report_path:
        Path(report_path).write_text(text)
    click.echo(text)


@main.command()
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", "-u", type=float, default=None)
@click.option("--bin-width", type=float, default=None)
@click.option("--bins-out", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def empirical(pairs_path, threshold, bin_width, bins_out, config_path, out):
    """Counted tail estimates (and optional bin counts) for a pair CSV."""
    config = _load_config(config_path)
    u = float(_cfg(config, "empirical", "threshold", threshold, emp.DEFAULT_THRESHOLD))
    x, y, _, _ = tio.read_pair_table(pairs_path)
    if x.size == 0:
        raise click.ClickException(f"{pairs_path}: no data rows")
    pairs = PseudoObservations(empirical_pit(x), empirical_pit(y))
    corr = emp.correlation(x, y)
    try:
        matrix = emp.empirical_tail_matrix(pairs, u)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    with open(out, "w") as fh:
        fh.write("statistic,value\n")
        fh.write(f"correlation,{tio.fmt(corr)}\n")
        for corner in ("LU", "UU", "LL", "UL"):
            fh.write(f"lambda_{corner},{tio.fmt(getattr(matrix, 'lambda_' + corner))}\n")
    if bin_width is not None:
        counts = emp.bin_counts(pairs, bin_width)
        edges = np.arange(counts.shape[0]) * bin_width
        tio.write_grid_csv(bins_out or "bin_counts.csv", counts, edges, edges)
    click.echo(f"wrote empirical statistics at u={u} to {out}")


@main.command("map")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--landmask", "landmask_path", required=True, type=click.Path(exists=True))
@click.option("--base-index", type=int, default=None)
@click.option("--base-lon", type=float, default=None)
@click.option("--base-lat", type=float, default=None)
@click.option("--threshold", "-u", type=float, default=None)
@click.option("--offset", type=float, default=None)
@click.option("--land-threshold", type=float, default=None)
@click.option("--family", type=click.Choice(["gumbel", "joe", "clayton"]), default=None)
@click.option("--empirical-only", is_flag=True, default=False)
@click.option("--bootstrap", "with_bootstrap", is_flag=True, default=False)
@click.option("--replicates", type=int, default=None)
@click.option("--bootstrap-out", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def map_cmd(
    data_path, landmask_path, base_index, base_lon, base_lat, threshold, offset,
    land_threshold, family, empirical_only, with_bootstrap, replicates,
    bootstrap_out, seed, config_path, out,
):
    """Dependence of every retained gridbox on a base gridbox."""
    config = _load_config(config_path)
    u = float(_cfg(config, "map", "threshold", threshold, emp.DEFAULT_THRESHOLD))
    _, boxset = _load_boxset(data_path, landmask_path, config, offset, land_threshold)
    if len(boxset) == 0:
        raise click.ClickException("no boxes pass the land threshold")
    base = _select_base(boxset, base_index, base_lon, base_lat)
    cfg = _fit_config(config, family, seed)
    dmap = sp.dependence_map(
        boxset, base, cfg, u, empirical_only=empirical_only, n_jobs=_n_jobs()
    )
    tio.write_dependence_map_csv(out, boxset, dmap)
    click.echo(f"wrote dependence map ({len(boxset)} boxes, base #{base}) to {out}")
    if with_bootstrap:
        spec = _bootstrap_spec(config, replicates, None, seed)
        entries = bt.lower_bound_map(boxset, base, spec, cfg, n_jobs=_n_jobs())
        rows = []
        for e in entries:
            for corner in Corner:
                if e.lower_bounds:
                    rows.append(
                        (e.box_index, corner.value, e.lower_bounds[corner], 1.0,
                         e.n_failed, e.unreliable)
                    )
        tio.write_intervals_csv(bootstrap_out or "lower_bounds.csv", rows)


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--landmask", "landmask_path", required=True, type=click.Path(exists=True))
@click.option("--lat1", type=float, required=True, help="Band of the X boxes.")
@click.option("--lat2", type=float, required=True)
@click.option("--threshold", "-u", type=float, default=None)
@click.option("--offset", type=float, default=None)
@click.option("--land-threshold", type=float, default=None)
@click.option("--family", type=click.Choice(["gumbel", "joe", "clayton"]), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def band(data_path, landmask_path, lat1, lat2, threshold, offset, land_threshold,
         family, seed, config_path, out):
    """Pairwise dependence along two fixed-latitude bands."""
    config = _load_config(config_path)
    u = float(_cfg(config, "band", "threshold", threshold, emp.DEFAULT_THRESHOLD))
    _, boxset = _load_boxset(data_path, landmask_path, config, offset, land_threshold)
    cfg = _fit_config(config, family, seed)
    try:
        pairs = sp.band_profile(boxset, lat1, lat2, cfg, u)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    tio.write_band_profile_csv(out, pairs)
    click.echo(f"wrote {len(pairs)} band pairs to {out}")


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--landmask", "landmask_path", required=True, type=click.Path(exists=True))
@click.option("--field", "field_path", required=True, type=click.Path(exists=True),
              help="Time-indexed auxiliary field (gridded file).")
@click.option("--box-a-lon", type=float, required=True)
@click.option("--box-a-lat", type=float, required=True)
@click.option("--box-b-lon", type=float, required=True)
@click.option("--box-b-lat", type=float, required=True)
@click.option("--corner", type=str, default=None)
@click.option("--threshold", "-u", type=float, default=None)
@click.option("--offset", type=float, default=None)
@click.option("--land-threshold", type=float, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_prefix", required=True, type=click.Path(),
              help="Prefix for the composite CSV and JSON sidecar.")
def composite(data_path, landmask_path, field_path, box_a_lon, box_a_lat, box_b_lon,
              box_b_lat, corner, threshold, offset, land_threshold, config_path, out_prefix):
    """Mean auxiliary field over joint-exceedance days of two gridboxes."""
    config = _load_config(config_path)
    u = float(_cfg(config, "composite", "threshold", threshold, emp.DEFAULT_THRESHOLD))
    corner = str(_cfg(config, "composite", "corner", corner, "UU"))
    try:
        corner = Corner(corner.upper())
    except ValueError:
        raise click.ClickException(
            f"corner must be one of LL, LU, UL, UU (got {corner!r})"
        ) from None
    _, boxset = _load_boxset(data_path, landmask_path, config, offset, land_threshold)
    a = boxset.boxes[_select_base(boxset, None, box_a_lon, box_a_lat)].series
    b = boxset.boxes[_select_base(boxset, None, box_b_lon, box_b_lat)].series
    field = tio.read_gridded(field_path)
    try:
        result = emp.composite(a, b, u, corner, field.values)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    tio.write_composite(out_prefix, result, a, field.lons, field.lats)
    if result.n_events == 0:
        click.echo(f"empty composite: no joint {corner.value} exceedances at u={u}")
    else:
        click.echo(f"composited {result.n_events} days into {out_prefix}.csv")


def _parse_strata(text):
    strata = []
    for part in text.split(","):
        a, b = part.split("-")
        strata.append((int(a), int(b)))
    return tuple(strata)


def _bootstrap_spec(config, replicates, strata, seed) -> bt.BootstrapSpec:
    section = config.get("bootstrap", {})
    if strata is None:
        strata = section.get("strata")
        strata = tuple(tuple(s) for s in strata) if strata else bt.DEFAULT_STRATA
    return bt.BootstrapSpec(
        n_replicates=int(replicates if replicates is not None else section.get("n_replicates", 200)),
        strata=strata,
        level=float(section.get("level", 0.95)),
        seed=int(seed),
    )


@main.command("bootstrap")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True),
              help="Pair CSV with year,day,x,y columns.")
@click.option("--replicates", type=int, default=None)
@click.option("--strata", type=str, default=None, help="e.g. 1979-1989,1990-1999")
@click.option("--family", type=click.Choice(["gumbel", "joe", "clayton"]), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def bootstrap_cmd(pairs_path, replicates, strata, family, seed, config_path, out):
    """Stratified year-block bootstrap intervals for the tail entries."""
    config = _load_config(config_path)
    sa, sb = tio.read_pair_series(pairs_path)
    spec = _bootstrap_spec(config, replicates, _parse_strata(strata) if strata else None, seed)
    cfg = _fit_config(config, family, seed)
    try:
        ci = bt.bootstrap_tail_ci(sa, sb, spec, cfg, n_jobs=_n_jobs())
    except (ValueError, ConvergenceError) as exc:
        raise click.ClickException(str(exc)) from exc
    rows = [
        ("pair", corner.value, *ci.intervals[corner], ci.n_failed, ci.unreliable)
        for corner in ci.intervals
    ]
    tio.write_intervals_csv(out, rows)
    click.echo(f"wrote {spec.n_replicates}-replicate intervals to {out}")


@main.command("density-grid")
@click.option("--mixture", "mixture_path", required=True, type=click.Path(exists=True))
@click.option("--resolution", type=int, default=None)
@click.option("--table-x", type=click.Path(exists=True), default=None,
              help="Quantile table remapping the u1 axis to physical units.")
@click.option("--table-y", type=click.Path(exists=True), default=None)
@click.option("--joint", is_flag=True, default=False,
              help="Emit the joint log density (needs density columns in both tables).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def density_grid_cmd(mixture_path, resolution, table_x, table_y, joint, config_path, out):
    """Log copula density on a midpoint grid, optionally on physical axes."""
    config = _load_config(config_path)
    resolution = int(_cfg(config, "density_grid", "resolution", resolution, 200))
    mix = _read_mixture(mixture_path)
    grid = emp.density_grid(mix, resolution)
    axis1, axis2 = grid.axis1, grid.axis2
    values = grid.values
    tx = tio.read_quantile_table(table_x) if table_x else None
    ty = tio.read_quantile_table(table_y) if table_y else None
    from .marginals import remap_axis

    try:
        if tx is not None:
            axis1 = remap_axis(grid.axis1, tx)
        if ty is not None:
            axis2 = remap_axis(grid.axis2, ty)
        if joint:
            if tx is None or ty is None:
                raise click.ClickException("--joint needs both --table-x and --table-y")
            values = values + ty.log_density_at(grid.axis2)[:, None]
            values = values + tx.log_density_at(grid.axis1)[None, :]
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    tio.write_grid_csv(out, values, axis1, axis2)
    click.echo(f"wrote {resolution}x{resolution} log-density grid to {out}")


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(exists=True))
@click.option("--landmask", "landmask_path", required=True, type=click.Path(exists=True))
@click.option("--offset", type=float, default=None)
@click.option("--land-threshold", type=float, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path(), help="Box series CSV.")
@click.option("--meta-out", type=click.Path(), default=None, help="Box metadata CSV.")
def aggregate(data_path, landmask_path, offset, land_threshold, config_path, out, meta_out):
    """Land-average gridded data into retained coarse gridbox series."""
    config = _load_config(config_path)
    _, boxset = _load_boxset(data_path, landmask_path, config, offset, land_threshold)
    if len(boxset) == 0:
        raise click.ClickException("no boxes pass the land threshold")
    first = boxset.boxes[0].series
    with open(out, "w") as fh:
        fh.write("year,day," + ",".join(f"box{i}" for i in range(len(boxset))) + "\n")
        for t in range(len(first)):
            row = [str(first.years[t]), str(first.days[t])]
            row += [tio.fmt(box.series.values[t]) for box in boxset.boxes]
            fh.write(",".join(row) + "\n")
    if meta_out:
        with open(meta_out, "w") as fh:
            fh.write("box,lon_min,lon_max,lat_min,lat_max,land_fraction,n_cells\n")
            for i, box in enumerate(boxset.boxes):
                fh.write(
                    f"{i},{tio.fmt(box.lon_min)},{tio.fmt(box.lon_max)},"
                    f"{tio.fmt(box.lat_min)},{tio.fmt(box.lat_max)},"
                    f"{tio.fmt(box.land_fraction)},{box.n_cells}\n"
                )
    click.echo(f"aggregated {len(boxset)} boxes into {out}")


if __name__ == "__main__":
    sys.exit(main())
