"""Bivariate normal rectangle probabilities to near machine precision.

The standard-normal CDF of a correlated pair is written as the independent
product plus a correction integral over the correlation,

    Phi2(x, y; rho) = Phi(x) Phi(y)
        + (1/2pi) * int_0^{asin rho} exp(-(x^2 + y^2 - 2 x y sin t) / (2 cos^2 t)) dt,

where the sine substitution removes the 1/sqrt(1-r^2) singularity of the
direct correlation integral.  The integrand is smooth on [0, pi/2), so a
fixed-order Gauss-Legendre rule converges geometrically; 128 nodes give
full double precision for |rho| <= 0.999.
"""

from __future__ import annotations

import numpy as np
from scipy import special

_N_NODES = 128
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_N_NODES)


def bvn_cdf(x, y, rho: float):
    """P(X <= x, Y <= y) for standard normal (X, Y) with correlation rho.

    Broadcasts over ``x`` and ``y``; ``rho`` must lie in (-1, 1).
    """
    if not -1.0 < rho < 1.0:
        raise ValueError(f"correlation must be in (-1, 1), got {rho}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    base = special.ndtr(x) * special.ndtr(y)
    if rho == 0.0:
        return base
    tmax = np.arcsin(rho)
    t = 0.5 * tmax * (_GL_X + 1.0)
    w = 0.5 * abs(tmax) * _GL_W
    sin_t = np.sin(t)
    cos2_t = np.cos(t) ** 2
    xx = x[..., None]
    yy = y[..., None]
    integrand = np.exp(-(xx * xx + yy * yy - 2.0 * xx * yy * sin_t) / (2.0 * cos2_t))
    return base + np.sign(tmax) * (integrand * w).sum(axis=-1) / (2.0 * np.pi)
