"""Shared independent oracles for the test suite.

These deliberately re-derive quantities through routes different from the
library code: finite differences of the CDF for densities, double-loop
counting for the tail estimator, and the explicit incomplete-beta form of
the Student CDF.
"""

import numpy as np
from scipy import special


def fd_mixed_second(cdf_func, u, v, h=1e-5):
    """Second mixed central finite difference of a CDF: a density oracle."""
    return (
        cdf_func(u + h, v + h)
        - cdf_func(u + h, v - h)
        - cdf_func(u - h, v + h)
        + cdf_func(u - h, v - h)
    ) / (4.0 * h * h)


def brute_corner_events(x, y, u, corner):
    """O(m^2) reimplementation of the corner event counter.

    Thresholds are order statistics found by counting comparisons rather
    than sorting; exceedance is strict on both coordinates.
    """
    x = list(map(float, x))
    y = list(map(float, y))
    m = len(x)
    k = int(np.floor(u * m))

    def kth_smallest(vals, kk):
        best = None
        for candidate in sorted(vals):
            below = sum(1 for w in vals if w <= candidate)
            if below >= kk:
                best = candidate
                break
        return best

    hi_x = kth_smallest(x, k)
    lo_x = kth_smallest(x, m - k + 1)
    hi_y = kth_smallest(y, k)
    lo_y = kth_smallest(y, m - k + 1)

    events = []
    for i in range(m):
        ok_x = x[i] > hi_x if corner[0] == "U" else x[i] < lo_x
        ok_y = y[i] > hi_y if corner[1] == "U" else y[i] < lo_y
        if ok_x and ok_y:
            events.append(i)
    return events


def brute_empirical_tail(x, y, u, corner):
    count = len(brute_corner_events(x, y, u, corner))
    return min(1.0, count / (len(x) * (1.0 - u)))


def student_cdf_betainc(x, nu):
    """Student-t CDF through the regularized incomplete beta function."""
    x = np.asarray(x, dtype=float)
    tail = 0.5 * special.betainc(nu / 2.0, 0.5, nu / (nu + x * x))
    return np.where(x <= 0, tail, 1.0 - tail)


def student_corner_betainc(nu, rho):
    """Tail coefficient 2*T_{nu+1}(-sqrt((nu+1)(1-rho)/(1+rho)))."""
    arg = -np.sqrt((nu + 1.0) * (1.0 - rho) / (1.0 + rho))
    return float(2.0 * student_cdf_betainc(arg, nu + 1.0))


def ks_critical_1pct(n):
    """Asymptotic 1% critical value of the one-sample KS statistic."""
    return 1.6276 / np.sqrt(n)
