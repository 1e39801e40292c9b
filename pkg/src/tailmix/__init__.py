"""tailmix: four-corner tail dependence via mixtures of rotated copulas.

Models same-tail and opposite-tail dependence between pairs of daily series
with a convex mixture of four rotated single-corner Archimedean copulas,
fit by constrained maximum likelihood on rank-transformed data, with
counted tail estimators, spatial gridbox aggregation, event compositing,
and stratified year-block bootstrap uncertainty.
"""

from .bootstrap import BootstrapSpec, TailIntervals, bootstrap_tail_ci, lower_bound_map, resample_years
from .copulas import (
    CopulaSpec,
    Corner,
    Family,
    TailMatrix,
    cdf,
    clamp_unit,
    clayton,
    gaussian,
    gumbel,
    joe,
    log_density,
    sample,
    student,
    tail_matrix,
)
from .empirical import (
    CompositeResult,
    bin_counts,
    composite,
    correlation,
    density_grid,
    empirical_tail,
    empirical_tail_matrix,
)
from .fitting import ConvergenceError, FitConfig, FitResult, fit, gradient, neg_log_likelihood
from .marginals import (
    AlignmentError,
    DailySeries,
    PseudoObservations,
    QuantileTable,
    empirical_pit,
    pair_series,
    remap_axis,
)
from .rotation import (
    RotatedComponent,
    RotatedMixture,
    Rotation,
    component_tail_matrix,
    mixture_cdf,
    mixture_from_json,
    mixture_log_density,
    mixture_tail_matrix,
    mixture_to_json,
    rotated_cdf,
    rotated_log_density,
    sample_mixture,
)
from .spatial import GridBox, GridBoxSet, band_profile, build_gridboxes, dependence_map

__version__ = "0.1.0"
