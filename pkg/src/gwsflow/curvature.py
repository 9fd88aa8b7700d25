"""Ricci curvature data of invariant metrics.

An invariant metric on a generalized Wallach space is a positive triple
(x1, x2, x3); its Ricci tensor is diagonal with components

    r_i = 1/(2 x_i) + (a_i/2) (x_i/(x_j x_k) - x_j/(x_k x_i) - x_k/(x_i x_j)),

(i, j, k) cyclic.  The metric has positive Ricci curvature exactly when all
three components are positive; the zero set of r_i is a cone (the components
are homogeneous of degree -1).

The flow preserves the weighted product V = x1^(1/a1) x2^(1/a2) x3^(1/a3);
the level set V = 1 is the invariant surface the numerical experiments run on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import SpaceParams

#: a metric counts as outside the positivity region once min r_i falls to this level
BOUNDARY_TOL = 1e-12

#: two metric components closer than this (relative to the largest) make the
#: metric exceptional; exceptional metrics are flagged, not rejected
GENERIC_RTOL = 1e-9

# exponent clamp keeping exp() finite through wild intermediate states
_EXP_CLAMP = 350.0


@dataclass(frozen=True)
class MetricPoint:
    """A positive triple (x1, x2, x3) representing an invariant metric."""

    x1: float
    x2: float
    x3: float

    def __post_init__(self) -> None:
        for name, value in (("x1", self.x1), ("x2", self.x2), ("x3", self.x3)):
            if not (value > 0.0) or not math.isfinite(value):
                raise ValueError(f"{name}={value!r} must be a positive finite real")

    @property
    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)

    @property
    def is_generic(self) -> bool:
        """False when two components coincide within tolerance (such metrics
        evolve along invariant curves and carry no 2D dynamics)."""
        x1, x2, x3 = self.as_tuple
        scale = max(x1, x2, x3)
        return min(abs(x1 - x2), abs(x2 - x3), abs(x3 - x1)) > GENERIC_RTOL * scale

    def scaled(self, lam: float) -> "MetricPoint":
        return MetricPoint(lam * self.x1, lam * self.x2, lam * self.x3)


@dataclass(frozen=True)
class RicciComponents:
    r1: float
    r2: float
    r3: float

    @property
    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r1, self.r2, self.r3)

    @property
    def minimum(self) -> float:
        return min(self.r1, self.r2, self.r3)


def ricci_components(a: SpaceParams, x: MetricPoint) -> RicciComponents:
    """The three Ricci components of the metric x on the space a."""
    x1, x2, x3 = x.as_tuple

    def comp(ai, xi, xj, xk):
        return 1.0 / (2.0 * xi) + (ai / 2.0) * (
            xi / (xj * xk) - xj / (xk * xi) - xk / (xi * xj))

    return RicciComponents(
        comp(a.a1, x1, x2, x3), comp(a.a2, x2, x3, x1), comp(a.a3, x3, x1, x2))


def _clamped_exp(z: float) -> float:
    if z > _EXP_CLAMP:
        z = _EXP_CLAMP
    elif z < -_EXP_CLAMP:
        z = -_EXP_CLAMP
    return math.exp(z)


def ricci_components_log(a1: float, a2: float, a3: float,
                         u1: float, u2: float, u3: float
                         ) -> tuple[float, float, float, float]:
    """Ricci components at x = exp(u), evaluated scale-invariantly.

    Factoring out the geometric mean exploits the degree -1 homogeneity:
    r(e^c y) = e^-c r(y).  The centered exponentials keep the evaluation free
    of spurious overflow/underflow for the extreme coordinate spreads reached
    near degeneration, where the direct formula would divide by zero.

    Returns (r1, r2, r3, floor) where ``floor`` is the roundoff level of the
    evaluation: the components cancel large terms near degeneration, so a
    computed value within ``floor`` of zero carries no trustworthy sign.
    """
    c = (u1 + u2 + u3) / 3.0
    y1 = _clamped_exp(u1 - c)
    y2 = _clamped_exp(u2 - c)
    y3 = _clamped_exp(u3 - c)
    # y1*y2*y3 recomputed via exp of the centered sum so it can never be 0 or inf
    d = 2.0 * _clamped_exp((u1 - c) + (u2 - c) + (u3 - c))
    s = _clamped_exp(-c)
    q1, q2, q3 = y1 * y1, y2 * y2, y3 * y3
    r1 = s * (y2 * y3 + a1 * (q1 - q2 - q3)) / d
    r2 = s * (y3 * y1 + a2 * (q2 - q3 - q1)) / d
    r3 = s * (y1 * y2 + a3 * (q3 - q1 - q2)) / d
    m = max(y2 * y3, y3 * y1, y1 * y2, q1 + q2 + q3)
    floor = 32.0 * 2.220446049250313e-16 * s * m / d
    return r1, r2, r3, floor


def in_positive_region(a: SpaceParams, x: MetricPoint,
                       boundary_tol: float = BOUNDARY_TOL) -> bool:
    """True when the metric has (strictly) positive Ricci curvature.

    The region is open; points within ``boundary_tol`` of a cone count as
    outside so that exit decisions are stable under rounding.
    """
    return ricci_components(a, x).minimum > boundary_tol


def log_first_integral(a: SpaceParams, x: MetricPoint) -> float:
    """ln V = sum_i (1/a_i) ln x_i, the conserved quantity in log form."""
    return (math.log(x.x1) / a.a1 + math.log(x.x2) / a.a2 + math.log(x.x3) / a.a3)


def first_integral(a: SpaceParams, x: MetricPoint) -> float:
    """The conserved weighted product V = x1^(1/a1) x2^(1/a2) x3^(1/a3).

    Evaluated in log space: the exponents 1/a_i can be large and the direct
    powers overflow long before the metric itself is extreme.
    """
    return math.exp(log_first_integral(a, x))


def project_to_sigma(a: SpaceParams, x: MetricPoint) -> MetricPoint:
    """Rescale x onto the invariant surface V = 1.

    The scaling lambda = V^(-1/sum(1/a_i)) is the unique one, since V is
    homogeneous of degree sum(1/a_i) under x -> lambda x.
    """
    total = 1.0 / a.a1 + 1.0 / a.a2 + 1.0 / a.a3
    lam = math.exp(-log_first_integral(a, x) / total)
    return x.scaled(lam)
