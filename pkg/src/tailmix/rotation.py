"""Rotations of a base copula and the four-corner mixture copula.

A rotation reorients the dependent corner of a single-corner copula.  For
the exchangeable base families used here, quarter turns coincide with
coordinate reflections, which have the simpler CDF algebra:

    R0   : C(u, v)
    R90  : v - C(1 - u, v)
    R180 : u + v - 1 + C(1 - u, 1 - v)
    R270 : u - C(u, 1 - v)

The mixture assigns one rotation per corner with fixed order
UU, LU, LL, UL (components 1..4), which removes label-switching ambiguity
from fitting and reporting.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np
from scipy import special

from .copulas import (
    ARCHIMEDEAN_FAMILIES,
    CopulaSpec,
    Corner,
    Family,
    TailMatrix,
    cdf,
    log_density,
    log_density_dtheta,
    sample,
    tail_matrix,
)


class Rotation(enum.IntEnum):
    """Quarter-turn rotations; composition adds angles modulo 360."""

    R0 = 0
    R90 = 90
    R180 = 180
    R270 = 270

    def compose(self, other: "Rotation") -> "Rotation":
        return Rotation((int(self) + int(other)) % 360)


#: Corner receiving the dependence of a UU-corner base under each rotation.
ROTATION_CORNER = {
    Rotation.R0: Corner.UU,
    Rotation.R90: Corner.LU,
    Rotation.R180: Corner.LL,
    Rotation.R270: Corner.UL,
}

#: Component order of a mixture: one rotation per corner.
MIXTURE_ROTATIONS = (Rotation.R0, Rotation.R90, Rotation.R180, Rotation.R270)
MIXTURE_CORNERS = (Corner.UU, Corner.LU, Corner.LL, Corner.UL)

# Corner relabelling under each reflection (u-reflection for R90, both for
# R180, v-reflection for R270), applied to a full tail matrix.
_CORNER_MAP = {
    Rotation.R0: {c: c for c in Corner},
    Rotation.R90: {Corner.UU: Corner.LU, Corner.LU: Corner.UU,
                   Corner.UL: Corner.LL, Corner.LL: Corner.UL},
    Rotation.R180: {Corner.UU: Corner.LL, Corner.LL: Corner.UU,
                    Corner.LU: Corner.UL, Corner.UL: Corner.LU},
    Rotation.R270: {Corner.UU: Corner.UL, Corner.UL: Corner.UU,
                    Corner.LU: Corner.LL, Corner.LL: Corner.LU},
}


@dataclass(frozen=True)
class RotatedComponent:
    """A base copula together with the rotation placing its corner."""

    base: CopulaSpec
    rotation: Rotation

    def __post_init__(self):
        object.__setattr__(self, "rotation", Rotation(self.rotation))


def _reflect(rotation: Rotation, u, v):
    if rotation is Rotation.R0:
        return u, v
    if rotation is Rotation.R90:
        return 1.0 - u, v
    if rotation is Rotation.R180:
        return 1.0 - u, 1.0 - v
    return u, 1.0 - v


def rotated_cdf(comp: RotatedComponent, u, v):
    """CDF of the rotated copula."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    rot = comp.rotation
    if rot is Rotation.R0:
        return cdf(comp.base, u, v)
    if rot is Rotation.R90:
        return v - cdf(comp.base, 1.0 - u, v)
    if rot is Rotation.R180:
        return u + v - 1.0 + cdf(comp.base, 1.0 - u, 1.0 - v)
    return u - cdf(comp.base, u, 1.0 - v)


def rotated_log_density(comp: RotatedComponent, u, v):
    """Log density of the rotated copula at interior points."""
    ru, rv = _reflect(comp.rotation, np.asarray(u, float), np.asarray(v, float))
    return log_density(comp.base, ru, rv)


def rotated_log_density_dtheta(comp: RotatedComponent, u, v):
    ru, rv = _reflect(comp.rotation, np.asarray(u, float), np.asarray(v, float))
    return log_density_dtheta(comp.base, ru, rv)


def component_tail_matrix(comp: RotatedComponent) -> TailMatrix:
    """Tail matrix of the rotated component.

    Requires a single-corner base (Gumbel, Joe, or Clayton with theta > 0);
    multi-corner bases such as the Student copula cannot serve as mixture
    components.
    """
    if not comp.base.is_single_corner():
        raise ValueError(
            f"{comp.base.family.value} is not single-corner; "
            "mixture components require Gumbel, Joe, or Clayton with theta > 0"
        )
    base_matrix = tail_matrix(comp.base)
    mapping = _CORNER_MAP[comp.rotation]
    entries = {mapping[c].value: base_matrix.entry(c) for c in Corner}
    return TailMatrix(
        lambda_LU=entries["LU"],
        lambda_UU=entries["UU"],
        lambda_LL=entries["LL"],
        lambda_UL=entries["UL"],
    )


@dataclass(frozen=True)
class RotatedMixture:
    """Convex mixture of four rotations of one single-corner family.

    ``components[k]`` carries rotation ``MIXTURE_ROTATIONS[k]`` so that the
    weights line up with corners UU, LU, LL, UL in that order.
    """

    components: tuple[RotatedComponent, RotatedComponent, RotatedComponent, RotatedComponent]
    weights: tuple[float, float, float, float]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 4:
            raise ValueError("a mixture has exactly 4 components")
        rotations = tuple(c.rotation for c in comps)
        if rotations != MIXTURE_ROTATIONS:
            raise ValueError(f"component rotations must be {MIXTURE_ROTATIONS}, got {rotations}")
        families = {c.base.family for c in comps}
        if len(families) != 1:
            raise ValueError("mixture components must share one base family")
        for c in comps:
            if not c.base.is_single_corner():
                raise ValueError(
                    "mixture components require a single-corner base "
                    "(Gumbel, Joe, or Clayton with theta > 0)"
                )
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (4,):
            raise ValueError("weights must have length 4")
        if np.any(w < 0.0) or not np.isfinite(w).all():
            raise ValueError("weights must be nonnegative and finite")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {w.sum()!r}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @classmethod
    def from_params(cls, family, weights, thetas) -> "RotatedMixture":
        family = Family(family)
        comps = tuple(
            RotatedComponent(CopulaSpec(family, theta=float(th)), rot)
            for th, rot in zip(thetas, MIXTURE_ROTATIONS, strict=True)
        )
        return cls(components=comps, weights=tuple(float(w) for w in weights))

    @property
    def family(self) -> Family:
        return self.components[0].base.family

    @property
    def thetas(self) -> tuple[float, float, float, float]:
        return tuple(c.base.theta for c in self.components)

    def weight_for(self, corner: Corner) -> float:
        return self.weights[MIXTURE_CORNERS.index(Corner(corner))]


def independence_mixture(family=Family.GUMBEL) -> RotatedMixture:
    """Equal-weight mixture with every component at independence."""
    family = Family(family)
    theta = 1.0 if family in (Family.GUMBEL, Family.JOE) else 1e-12
    return RotatedMixture.from_params(family, (0.25,) * 4, (theta,) * 4)


def mixture_cdf(mix: RotatedMixture, u, v):
    """CDF of the mixture: the weighted sum of rotated component CDFs."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    for w, comp in zip(mix.weights, mix.components):
        if w > 0.0:
            out = out + w * rotated_cdf(comp, u, v)
    return float(out) if out.ndim == 0 else out


def mixture_log_density(mix: RotatedMixture, u, v):
    """Log mixture density via log-sum-exp over the weighted components."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    shape = np.broadcast_shapes(u.shape, v.shape)
    terms = np.full((4,) + shape, -np.inf)
    for k, (w, comp) in enumerate(zip(mix.weights, mix.components)):
        if w > 0.0:
            terms[k] = np.log(w) + rotated_log_density(comp, u, v)
    out = special.logsumexp(terms, axis=0)
    return float(out) if np.ndim(out) == 0 else out


def mixture_tail_matrix(mix: RotatedMixture) -> TailMatrix:
    """Entrywise weighted sum of the component tail matrices.

    The entry total never exceeds one: each component contributes at most
    its weight, and the weights sum to one.
    """
    acc = np.zeros((2, 2))
    for w, comp in zip(mix.weights, mix.components):
        acc += w * component_tail_matrix(comp).as_array()
    return TailMatrix(
        lambda_LU=acc[0, 0], lambda_UU=acc[0, 1],
        lambda_LL=acc[1, 0], lambda_UL=acc[1, 1],
    )


def sample_mixture(mix: RotatedMixture, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` pairs from the mixture; deterministic for a fixed seed."""
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    picks = rng.choice(4, size=n, p=np.asarray(mix.weights))
    out = np.empty((n, 2))
    for k, comp in enumerate(mix.components):
        mask = picks == k
        count = int(mask.sum())
        if count == 0:
            continue
        base_pairs = sample(comp.base, count, int(rng.integers(2**63)))
        ru, rv = _reflect(comp.rotation, base_pairs[:, 0], base_pairs[:, 1])
        out[mask, 0] = ru
        out[mask, 1] = rv
    return out


# ---------------------------------------------------------------------------
# Serialization: the canonical fitted-model artifact
# ---------------------------------------------------------------------------

def mixture_to_dict(mix: RotatedMixture) -> dict:
    return {
        "family": mix.family.value,
        "weights": list(mix.weights),
        "thetas": list(mix.thetas),
        "corner_order": [c.value for c in MIXTURE_CORNERS],
    }


def mixture_from_dict(doc: dict) -> RotatedMixture:
    try:
        family = doc["family"]
        weights = doc["weights"]
        thetas = doc["thetas"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"mixture document missing field: {exc}") from exc
    order = doc.get("corner_order", [c.value for c in MIXTURE_CORNERS])
    expected = [c.value for c in MIXTURE_CORNERS]
    if list(order) != expected:
        raise ValueError(f"corner_order must be {expected}, got {list(order)}")
    return RotatedMixture.from_params(family, weights, thetas)


def mixture_to_json(mix: RotatedMixture) -> str:
    return json.dumps(mixture_to_dict(mix), indent=2)


def mixture_from_json(text: str) -> RotatedMixture:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid mixture JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return mixture_from_dict(doc)
