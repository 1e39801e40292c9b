"""Bivariate copula families: CDFs, log densities, tail coefficients, samplers.

Families covered, with their dependence parameters:

* Gumbel(theta),  theta in [1, inf):  upper-upper tail dependence 2 - 2**(1/theta)
* Joe(theta),     theta in [1, inf):  upper-upper tail dependence 2 - 2**(1/theta)
* Clayton(theta), theta in [-1, inf) \\ {0}:  lower-lower 2**(-1/theta) for theta > 0
* Gaussian(rho),  rho in (-1, 1):  asymptotically independent in all corners
* Student(nu, rho):  same-corner and opposite-corner dependence
  2 * T_{nu+1}(-sqrt((nu+1)(1 -+ rho)/(1 +- rho)))

Archimedean densities are evaluated analytically in log space; intermediate
powers such as (-ln u)**theta are kept as logarithms so that evaluation
stays finite near the corners of the unit square for theta up to the
optimizer cap (50).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .bvnorm import bvn_cdf

#: Half-width of the clamping band applied before density evaluation.
UNIT_EPS = 1e-12

#: Largest dependence parameter tolerated by the Archimedean evaluators.
THETA_MAX = 50.0


class Family(str, enum.Enum):
    """Supported base copula families."""

    GUMBEL = "gumbel"
    JOE = "joe"
    CLAYTON = "clayton"
    GAUSSIAN = "gaussian"
    STUDENT = "student"


ARCHIMEDEAN_FAMILIES = (Family.GUMBEL, Family.JOE, Family.CLAYTON)


class Corner(str, enum.Enum):
    """Corner of the unit square; first letter refers to the first coordinate.

    ``LU`` means the first coordinate is low while the second is high.
    """

    LL = "LL"
    LU = "LU"
    UL = "UL"
    UU = "UU"


@dataclass(frozen=True)
class CopulaSpec:
    """A base copula family with its parameters.

    Exactly the parameters relevant to the family must be supplied:
    ``theta`` for the Archimedean families, ``rho`` for Gaussian, and
    ``(nu, rho)`` for Student.  Out-of-range parameters are rejected at
    construction time.
    """

    family: Family
    theta: float | None = None
    rho: float | None = None
    nu: float | None = None

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if family in ARCHIMEDEAN_FAMILIES:
            if self.theta is None or self.rho is not None or self.nu is not None:
                raise ValueError(f"{family.value} takes exactly one parameter theta")
            th = float(self.theta)
            if not np.isfinite(th):
                raise ValueError("theta must be finite")
            if family in (Family.GUMBEL, Family.JOE) and th < 1.0:
                raise ValueError(f"{family.value} requires theta >= 1, got {th}")
            if family is Family.CLAYTON and (th < -1.0 or th == 0.0):
                raise ValueError(f"clayton requires theta in [-1, inf) without 0, got {th}")
            object.__setattr__(self, "theta", th)
        elif family is Family.GAUSSIAN:
            if self.rho is None or self.theta is not None or self.nu is not None:
                raise ValueError("gaussian takes exactly one parameter rho")
            rho = float(self.rho)
            if not -1.0 < rho < 1.0:
                raise ValueError(f"gaussian requires rho in (-1, 1), got {rho}")
            object.__setattr__(self, "rho", rho)
        else:
            if self.nu is None or self.rho is None or self.theta is not None:
                raise ValueError("student takes parameters nu and rho")
            nu, rho = float(self.nu), float(self.rho)
            if not nu > 0.0:
                raise ValueError(f"student requires nu > 0, got {nu}")
            if not -1.0 < rho < 1.0:
                raise ValueError(f"student requires rho in (-1, 1), got {rho}")
            object.__setattr__(self, "nu", nu)
            object.__setattr__(self, "rho", rho)

    def is_single_corner(self) -> bool:
        """True when all tail dependence sits in one corner (mixture-eligible)."""
        if self.family in (Family.GUMBEL, Family.JOE):
            return True
        return self.family is Family.CLAYTON and self.theta > 0


def gumbel(theta: float) -> CopulaSpec:
    return CopulaSpec(Family.GUMBEL, theta=theta)


def joe(theta: float) -> CopulaSpec:
    return CopulaSpec(Family.JOE, theta=theta)


def clayton(theta: float) -> CopulaSpec:
    return CopulaSpec(Family.CLAYTON, theta=theta)


def gaussian(rho: float) -> CopulaSpec:
    return CopulaSpec(Family.GAUSSIAN, rho=rho)


def student(nu: float, rho: float) -> CopulaSpec:
    return CopulaSpec(Family.STUDENT, nu=nu, rho=rho)


@dataclass(frozen=True)
class TailMatrix:
    """The four tail dependence coefficients arranged by corner.

    Mirrors the graphical layout of a copula density: reading the 2x2
    matrix as a picture of the unit square,

        [ lambda_LU  lambda_UU ]
        [ lambda_LL  lambda_UL ]

    with the first coordinate on the horizontal axis.
    """

    lambda_LU: float
    lambda_UU: float
    lambda_LL: float
    lambda_UL: float

    def __post_init__(self):
        for corner in Corner:
            value = self.entry(corner)
            if not (np.isfinite(value) and -1e-12 <= value <= 1.0 + 1e-12):
                raise ValueError(f"lambda_{corner.value} = {value} outside [0, 1]")

    def entry(self, corner: Corner) -> float:
        return getattr(self, f"lambda_{Corner(corner).value}")

    def as_array(self) -> np.ndarray:
        """2x2 array in the documented corner arrangement."""
        return np.array(
            [[self.lambda_LU, self.lambda_UU], [self.lambda_LL, self.lambda_UL]]
        )

    def total(self) -> float:
        return self.lambda_LU + self.lambda_UU + self.lambda_LL + self.lambda_UL

    @staticmethod
    def zeros() -> "TailMatrix":
        return TailMatrix(0.0, 0.0, 0.0, 0.0)


def clamp_unit(values, eps: float = UNIT_EPS):
    """Clamp values into [eps, 1-eps], returning (clamped, n_clamped).

    Rank-transformed data never reaches the clamping band; user-supplied
    grids may, and the count makes that observable.
    """
    values = np.asarray(values, dtype=float)
    clamped = np.clip(values, eps, 1.0 - eps)
    return clamped, int(np.count_nonzero(clamped != values))


def _validate_unit(name, a, open_interval: bool):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    if open_interval:
        if np.any(a <= 0.0) or np.any(a >= 1.0):
            raise ValueError(f"{name} must lie strictly inside (0, 1)")
    else:
        if np.any(a < 0.0) or np.any(a > 1.0):
            raise ValueError(f"{name} must lie in [0, 1]")


# ---------------------------------------------------------------------------
# CDFs
# ---------------------------------------------------------------------------

def _gumbel_cdf(theta, u, v):
    # C(u,v) = exp(-((-ln u)^theta + (-ln v)^theta)^(1/theta))
    lx = np.log(-np.log(u))
    ly = np.log(-np.log(v))
    ln_s = np.logaddexp(theta * lx, theta * ly) / theta
    return np.exp(-np.exp(ln_s))


def _joe_log_a(theta, u, v):
    # A = (1-u)^theta + (1-v)^theta - (1-u)^theta (1-v)^theta, in log space
    lp = theta * np.log1p(-u)
    lq = theta * np.log1p(-v)
    lse = np.logaddexp(lp, lq)
    return lse + np.log1p(-np.exp(lp + lq - lse))


def _joe_cdf(theta, u, v):
    # C(u,v) = 1 - A^(1/theta)
    return -np.expm1(_joe_log_a(theta, u, v) / theta)


def _clayton_log_g(theta, u, v):
    # G = u^(-theta) + v^(-theta) - 1 for theta > 0, in log space
    a = -theta * np.log(u)
    b = -theta * np.log(v)
    m = np.maximum(a, b)
    return m + np.log(np.exp(a - m) + np.exp(b - m) - np.exp(-m))


def _clayton_cdf(theta, u, v):
    if theta > 0:
        return np.exp(-_clayton_log_g(theta, u, v) / theta)
    # theta in [-1, 0): support is restricted to u^(-theta) + v^(-theta) > 1
    g = u ** (-theta) + v ** (-theta) - 1.0
    return np.where(g > 0.0, np.maximum(g, 1e-300) ** (-1.0 / theta), 0.0)


def _gaussian_cdf(rho, u, v):
    return bvn_cdf(special.ndtri(u), special.ndtri(v), rho)


_CHI_NODES = 384
_CHI_GL_X, _CHI_GL_W = np.polynomial.legendre.leggauss(_CHI_NODES)
_CHI_Q = 0.5 * (_CHI_GL_X + 1.0)
_CHI_W = 0.5 * _CHI_GL_W
_chi_scale_cache: dict[float, np.ndarray] = {}


def _chi_scales(nu: float) -> np.ndarray:
    # sqrt(W/nu) at Gauss-Legendre quantiles of W ~ chi2(nu)
    scales = _chi_scale_cache.get(nu)
    if scales is None:
        scales = np.sqrt(stats.chi2.ppf(_CHI_Q, nu) / nu)
        _chi_scale_cache[nu] = scales
    return scales


def _student_cdf(nu, rho, u, v):
    # Bivariate t CDF as a scale mixture of bivariate normals, integrated
    # against the chi2 quantile measure with a fixed Gauss-Legendre rule.
    x = stats.t.ppf(u, nu)
    y = stats.t.ppf(v, nu)
    s = _chi_scales(nu)
    flat_x = np.atleast_1d(x).ravel()
    flat_y = np.atleast_1d(y).ravel()
    out = np.empty(flat_x.size)
    step = 128  # the normal-CDF quadrature adds a node axis; keep memory flat
    for lo in range(0, flat_x.size, step):
        hi = min(lo + step, flat_x.size)
        vals = bvn_cdf(
            flat_x[lo:hi, None] * s[None, :], flat_y[lo:hi, None] * s[None, :], rho
        )
        out[lo:hi] = vals @ _CHI_W
    return out.reshape(np.shape(x))


def cdf(spec: CopulaSpec, u, v):
    """Copula CDF C(u1, u2), broadcast over array inputs in [0, 1].

    The grounded and uniform-margin boundary conditions
    C(u,0) = C(0,v) = 0, C(u,1) = u, C(1,v) = v hold exactly.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _validate_unit("u", u, open_interval=False)
    _validate_unit("v", v, open_interval=False)
    u, v = np.broadcast_arrays(u, v)

    zero = (u == 0.0) | (v == 0.0)
    u_is_1 = u == 1.0
    v_is_1 = v == 1.0
    boundary = zero | u_is_1 | v_is_1
    ui = np.where(boundary, 0.5, u)
    vi = np.where(boundary, 0.5, v)

    if spec.family is Family.GUMBEL:
        interior = _gumbel_cdf(spec.theta, ui, vi)
    elif spec.family is Family.JOE:
        interior = _joe_cdf(spec.theta, ui, vi)
    elif spec.family is Family.CLAYTON:
        interior = _clayton_cdf(spec.theta, ui, vi)
    elif spec.family is Family.GAUSSIAN:
        interior = _gaussian_cdf(spec.rho, ui, vi)
    else:
        interior = _student_cdf(spec.nu, spec.rho, ui, vi)

    out = np.where(zero, 0.0, np.where(u_is_1, v, np.where(v_is_1, u, interior)))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Log densities and their theta derivatives
# ---------------------------------------------------------------------------

def _gumbel_core(theta, x, y, lx, ly, *, dtheta=False):
    """Gumbel log density from precomputed x = -ln u and lx = ln x.

    ``theta`` broadcasts against the data arrays, so a (4, 1) parameter
    column evaluates all four mixture components in one call.
    """
    ln_w = np.logaddexp(theta * lx, theta * ly)
    ln_s = ln_w / theta
    s = np.exp(ln_s)
    logpdf = (
        -s
        + (theta - 1.0) * (lx + ly)
        + (1.0 - 2.0 * theta) * ln_s
        + np.log(s + theta - 1.0)
        + x
        + y
    )
    if not dtheta:
        return logpdf
    # d(ln w)/d(theta) is the w-weighted mean of lx and ly
    d_ln_w = lx * np.exp(theta * lx - ln_w) + ly * np.exp(theta * ly - ln_w)
    d_ln_s = (d_ln_w - ln_s) / theta
    d_s = s * d_ln_s
    deriv = (
        -d_s
        + (lx + ly)
        - 2.0 * ln_s
        + (1.0 - 2.0 * theta) * d_ln_s
        + (d_s + 1.0) / (s + theta - 1.0)
    )
    return logpdf, deriv


def _gumbel_logpdf(theta, u, v, *, dtheta=False):
    x = -np.log(u)
    y = -np.log(v)
    return _gumbel_core(theta, x, y, np.log(x), np.log(y), dtheta=dtheta)


def _joe_core(theta, a, b, *, dtheta=False):
    """Joe log density from precomputed a = ln(1-u), b = ln(1-v)."""
    lp = theta * a
    lq = theta * b
    lse = np.logaddexp(lp, lq)
    ln_a = lse + np.log1p(-np.exp(lp + lq - lse))
    with np.errstate(divide="ignore"):
        ln_tail = np.logaddexp(np.log(np.maximum(theta - 1.0, 0.0)), ln_a)
    logpdf = (1.0 / theta - 2.0) * ln_a + (theta - 1.0) * (a + b) + ln_tail
    if not dtheta:
        return logpdf
    one_minus_q = -np.expm1(lq)
    one_minus_p = -np.expm1(lp)
    d_ln_a = a * one_minus_q * np.exp(lp - ln_a) + b * one_minus_p * np.exp(lq - ln_a)
    a_val = np.exp(ln_a)
    deriv = (
        -ln_a / theta**2
        + (1.0 / theta - 2.0) * d_ln_a
        + (a + b)
        + (1.0 + a_val * d_ln_a) / (theta - 1.0 + a_val)
    )
    return logpdf, deriv


def _joe_logpdf(theta, u, v, *, dtheta=False):
    return _joe_core(theta, np.log1p(-u), np.log1p(-v), dtheta=dtheta)


def _clayton_core(theta, ln_u, ln_v, *, dtheta=False):
    """Clayton (theta > 0) log density from precomputed ln u, ln v."""
    a = -theta * ln_u
    b = -theta * ln_v
    m = np.maximum(a, b)
    ln_g = m + np.log(np.exp(a - m) + np.exp(b - m) - np.exp(-m))
    logpdf = np.log1p(theta) - (theta + 1.0) * (ln_u + ln_v) - (2.0 + 1.0 / theta) * ln_g
    if not dtheta:
        return logpdf
    d_ln_g = (a * np.exp(a - ln_g) + b * np.exp(b - ln_g)) / theta
    deriv = (
        1.0 / (1.0 + theta)
        - (ln_u + ln_v)
        + ln_g / theta**2
        - (2.0 + 1.0 / theta) * d_ln_g
    )
    return logpdf, deriv


def _clayton_logpdf(theta, u, v, *, dtheta=False):
    if theta < 0:
        if dtheta:
            raise ValueError("theta derivative requires clayton theta > 0")
        g = u ** (-theta) + v ** (-theta) - 1.0
        with np.errstate(divide="ignore"):
            return np.where(
                g > 0.0,
                np.log1p(theta)
                - (theta + 1.0) * (np.log(u) + np.log(v))
                - (2.0 + 1.0 / theta) * np.log(np.maximum(g, 1e-300)),
                -np.inf,
            )
    return _clayton_core(theta, np.log(u), np.log(v), dtheta=dtheta)


def _gaussian_logpdf(rho, u, v):
    x = special.ndtri(u)
    y = special.ndtri(v)
    r2 = 1.0 - rho * rho
    return -0.5 * np.log(r2) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (
        2.0 * r2
    )


def _student_logpdf(nu, rho, u, v):
    x = stats.t.ppf(u, nu)
    y = stats.t.ppf(v, nu)
    r2 = 1.0 - rho * rho
    q = (x * x - 2.0 * rho * x * y + y * y) / r2
    ln_joint = (
        special.gammaln((nu + 2.0) / 2.0)
        + special.gammaln(nu / 2.0)
        - 2.0 * special.gammaln((nu + 1.0) / 2.0)
        - 0.5 * np.log(r2)
        - (nu + 2.0) / 2.0 * np.log1p(q / nu)
    )
    ln_margins = -(nu + 1.0) / 2.0 * (np.log1p(x * x / nu) + np.log1p(y * y / nu))
    return ln_joint - ln_margins


def log_density(spec: CopulaSpec, u, v):
    """Log copula density ln c(u1, u2) at strictly interior points.

    Inputs are clamped into [1e-12, 1 - 1e-12] before evaluation (use
    :func:`clamp_unit` to count clamping); exact boundary input raises.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _validate_unit("u", u, open_interval=True)
    _validate_unit("v", v, open_interval=True)
    u, _ = clamp_unit(u)
    v, _ = clamp_unit(v)

    if spec.family is Family.GUMBEL:
        out = _gumbel_logpdf(spec.theta, u, v)
    elif spec.family is Family.JOE:
        out = _joe_logpdf(spec.theta, u, v)
    elif spec.family is Family.CLAYTON:
        out = _clayton_logpdf(spec.theta, u, v)
    elif spec.family is Family.GAUSSIAN:
        out = _gaussian_logpdf(spec.rho, u, v)
    else:
        out = _student_logpdf(spec.nu, spec.rho, u, v)
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def log_density_dtheta(spec: CopulaSpec, u, v):
    """(ln c, d ln c / d theta) for an Archimedean spec; used by the fitter."""
    if spec.family not in ARCHIMEDEAN_FAMILIES:
        raise ValueError("theta derivative only defined for Archimedean families")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _validate_unit("u", u, open_interval=True)
    _validate_unit("v", v, open_interval=True)
    u, _ = clamp_unit(u)
    v, _ = clamp_unit(v)
    if spec.family is Family.GUMBEL:
        return _gumbel_logpdf(spec.theta, u, v, dtheta=True)
    if spec.family is Family.JOE:
        return _joe_logpdf(spec.theta, u, v, dtheta=True)
    return _clayton_logpdf(spec.theta, u, v, dtheta=True)


# ---------------------------------------------------------------------------
# Tail dependence
# ---------------------------------------------------------------------------

def _student_corner(nu: float, rho: float) -> float:
    # 2 * T_{nu+1}(-sqrt((nu+1)(1-rho)/(1+rho)))
    return 2.0 * stats.t.cdf(-np.sqrt((nu + 1.0) * (1.0 - rho) / (1.0 + rho)), nu + 1.0)


def tail_matrix(spec: CopulaSpec) -> TailMatrix:
    """Asymptotic tail dependence coefficients of the unrotated family."""
    if spec.family in (Family.GUMBEL, Family.JOE):
        return TailMatrix(0.0, 2.0 - 2.0 ** (1.0 / spec.theta), 0.0, 0.0)
    if spec.family is Family.CLAYTON:
        if spec.theta > 0:
            return TailMatrix(0.0, 0.0, 2.0 ** (-1.0 / spec.theta), 0.0)
        return TailMatrix.zeros()
    if spec.family is Family.GAUSSIAN:
        # all four indicators of Table-style tabulations vanish on rho in (-1, 1)
        return TailMatrix.zeros()
    same = _student_corner(spec.nu, spec.rho)
    opposite = _student_corner(spec.nu, -spec.rho)
    return TailMatrix(opposite, same, same, opposite)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def _positive_stable(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Kanter's sampler for the positive stable law with LT exp(-t**alpha)."""
    angle = rng.uniform(0.0, np.pi, size)
    rate = rng.standard_exponential(size)
    factor = (np.sin((1.0 - alpha) * angle) / rate) ** ((1.0 - alpha) / alpha)
    return factor * np.sin(alpha * angle) / np.sin(angle) ** (1.0 / alpha)


def _sibuya(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Sibuya(alpha) frailty by exact inversion of the survival function.

    P(V > n) = Gamma(n + 1 - alpha) / (Gamma(1 - alpha) Gamma(n + 1)); the
    asymptotic form 1 / (n**alpha * Gamma(1 - alpha)) seeds the search.
    """
    if alpha >= 1.0:
        return np.ones(size, dtype=np.int64)
    uni = rng.uniform(size=size)
    lg_1ma = special.gammaln(1.0 - alpha)

    def survival(n):
        return np.exp(special.gammaln(n + 1.0 - alpha) - lg_1ma - special.gammaln(n + 1.0))

    guess = (uni * special.gamma(1.0 - alpha)) ** (-1.0 / alpha)
    n = np.maximum(1, np.minimum(guess, 2.0**62).astype(np.int64))
    # want the smallest n >= 1 with survival(n) < uni
    for _ in range(128):
        low = survival(n) >= uni
        if not low.any():
            break
        n[low] += 1
    for _ in range(128):
        high = (n > 1) & (survival(n - 1.0) < uni)
        if not high.any():
            break
        n[high] -= 1
    return n


def _frailty_pairs(spec: CopulaSpec, n: int, rng: np.random.Generator):
    e1 = rng.standard_exponential(n)
    e2 = rng.standard_exponential(n)
    theta = spec.theta
    if spec.family is Family.GUMBEL:
        frailty = _positive_stable(1.0 / theta, n, rng)
        alpha = 1.0 / theta
        return np.exp(-((e1 / frailty) ** alpha)), np.exp(-((e2 / frailty) ** alpha))
    if spec.family is Family.CLAYTON:
        frailty = rng.gamma(1.0 / theta, 1.0, n)
        return (1.0 + e1 / frailty) ** (-1.0 / theta), (1.0 + e2 / frailty) ** (
            -1.0 / theta
        )
    frailty = _sibuya(1.0 / theta, n, rng).astype(float)
    u1 = 1.0 - (-np.expm1(-e1 / frailty)) ** (1.0 / theta)
    u2 = 1.0 - (-np.expm1(-e2 / frailty)) ** (1.0 / theta)
    return u1, u2


def _elliptical_pairs(spec: CopulaSpec, n: int, rng: np.random.Generator):
    rho = spec.rho
    z1 = rng.standard_normal(n)
    z2 = rho * z1 + np.sqrt(1.0 - rho * rho) * rng.standard_normal(n)
    if spec.family is Family.GAUSSIAN:
        return special.ndtr(z1), special.ndtr(z2)
    scale = np.sqrt(rng.chisquare(spec.nu, n) / spec.nu)
    return stats.t.cdf(z1 / scale, spec.nu), stats.t.cdf(z2 / scale, spec.nu)


def sample(spec: CopulaSpec, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` exact pairs from the copula; deterministic for a fixed seed.

    Gumbel uses a positive-stable frailty, Clayton a gamma frailty, Joe a
    Sibuya frailty, and the elliptical families correlated draws pushed
    through their marginal CDFs.  Returns an (n, 2) array.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    if n == 0:
        return np.empty((0, 2))
    if spec.family in (Family.GUMBEL, Family.JOE) and spec.theta == 1.0:
        u1, u2 = rng.uniform(size=n), rng.uniform(size=n)
    elif spec.family in ARCHIMEDEAN_FAMILIES:
        if spec.family is Family.CLAYTON and spec.theta < 0:
            u1, u2 = _clayton_negative_pairs(spec.theta, n, rng)
        else:
            u1, u2 = _frailty_pairs(spec, n, rng)
    else:
        u1, u2 = _elliptical_pairs(spec, n, rng)
    return np.column_stack([u1, u2])


def _clayton_negative_pairs(theta: float, n: int, rng: np.random.Generator):
    # conditional inversion; the gamma-frailty construction needs theta > 0
    if theta == -1.0:
        raise ValueError("clayton theta = -1 is singular and cannot be sampled")
    u = rng.uniform(size=n)
    w = rng.uniform(size=n)
    v = (u ** (-theta) * (w ** (-theta / (1.0 + theta)) - 1.0) + 1.0) ** (-1.0 / theta)
    return u, v
