"""Closed-form classification of Ricci-positivity behavior under the flow.

The decision quantities are theta = a1 + a2 + a3 - 1/2 and the per-component
thresholds

    theta_i(a_i) = a_i - 1/2 + (1/2) sqrt((1 - 2 a_i)/(1 + 2 a_i)).

Known rules, each surfaced as an explicit :class:`Verdict`:

* theta >= max_i theta_i(a_i)  =>  every metric with positive Ricci curvature
  keeps it (``AllPreserve``);
* a1 + a2 + a3 < 1/2  =>  some metric loses positivity (``SomeLose``);
* equal parameters a in (0, 1/2) obey a full trichotomy with thresholds 1/6
  and a* (the unique real root of 32 a^3 + 16 a^2 + 2 a - 1): all lose below
  1/6, some preserve on [1/6, a*), all preserve on [a*, 1/2).

Parameter triples matching none of these fall in a genuinely open region and
are reported ``Indeterminate`` rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import FamilySpec, SpaceParams, make_space

#: absolute tolerance for all threshold comparisons; ties resolve toward the
#: preserving verdict, matching the non-strict inequality theta >= theta_i
COMPARE_TOL = 1e-12

VERDICT_KINDS = ("AllLose", "SomeLose", "SomePreserve", "AllPreserve", "Indeterminate")


@dataclass(frozen=True)
class Verdict:
    """Classification outcome plus the numbers that produced it."""

    kind: str
    rule: str
    certificates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "rule": self.rule}
        d.update(self.certificates)
        return d


def theta_i(a: float) -> float:
    """Per-component preservation threshold; defined on [0, 1/2], zero at both
    endpoints, positive and below 1/6 in between."""
    if not (0.0 <= a <= 0.5):
        raise ValueError(f"theta_i needs a in [0, 1/2], got {a!r}")
    return a - 0.5 + 0.5 * math.sqrt((1.0 - 2.0 * a) / (1.0 + 2.0 * a))


def preserve_inequalities(a: SpaceParams) -> tuple[bool, tuple[float, float, float]]:
    """The three polynomial residuals 4(1+2a_i)(a_j+a_k)^2 - (1-2a_i).

    All residuals nonnegative is equivalent to theta >= max_i theta_i (square
    the threshold inequality; both sides are positive on the open cube).
    Returns (all nonnegative?, residuals).
    """
    if not a.in_open_cube:
        raise ValueError("preserve_inequalities needs parameters in the open cube (0, 1/2)^3")

    def residual(ai, aj, ak):
        return 4.0 * (1.0 + 2.0 * ai) * (aj + ak) ** 2 - (1.0 - 2.0 * ai)

    res = (residual(a.a1, a.a2, a.a3), residual(a.a2, a.a3, a.a1), residual(a.a3, a.a1, a.a2))
    return min(res) >= -COMPARE_TOL, res


def a_star_exact() -> float:
    """The equal-parameter threshold a*, in closed form.

    a* = (mu - 1)^2 / (12 mu) with mu = cbrt(28 + 3 sqrt(87)); this is the
    unique real root of 32 a^3 + 16 a^2 + 2 a - 1, which lies in (1/6, 1/4).
    """
    mu = (28.0 + 3.0 * math.sqrt(87.0)) ** (1.0 / 3.0)
    return (mu - 1.0) ** 2 / (12.0 * mu)


def equal_threshold_cubic(a: float) -> float:
    """32 a^3 + 16 a^2 + 2 a - 1, whose sign at equal parameters decides
    theta >= theta_i."""
    return ((32.0 * a + 16.0) * a + 2.0) * a - 1.0


@dataclass(frozen=True)
class CubicRoots:
    """Real roots (ascending, with multiplicity) and the discriminant."""

    roots: tuple[float, ...]
    discriminant: float


def real_roots_cubic(c3: float, c2: float, c1: float, c0: float) -> CubicRoots:
    """All real roots of c3 x^3 + c2 x^2 + c1 x + c0, Newton-polished.

    Roots come from the companion-matrix eigenvalues (np.roots); Newton steps
    then push each residual to ~1e-13 of the polynomial's local scale, which
    is what the threshold comparisons downstream need.  The discriminant sign
    tells one real root (negative) from three (positive).
    """
    if c3 == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    disc = (18.0 * c3 * c2 * c1 * c0 - 4.0 * c2 ** 3 * c0 + c2 ** 2 * c1 ** 2
            - 4.0 * c3 * c1 ** 3 - 27.0 * c3 ** 2 * c0 ** 2)

    def p(x):
        return ((c3 * x + c2) * x + c1) * x + c0

    def dp(x):
        return (3.0 * c3 * x + 2.0 * c2) * x + c1

    roots = []
    for z in np.roots([c3, c2, c1, c0]):
        # companion eigenvalues of a near-multiple root scatter off the axis by
        # ~eps^(1/m); keep candidates whose imaginary part is at that level
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        x = float(z.real)
        for _ in range(8):
            d = dp(x)
            if d == 0.0:
                break
            step = p(x) / d
            x -= step
            if abs(step) <= 1e-17 * max(1.0, abs(x)):
                break
        scale = max(abs(c3 * x ** 3), abs(c2 * x ** 2), abs(c1 * x), abs(c0), 1e-300)
        if abs(p(x)) <= 1e-12 * scale:
            roots.append(x)
    return CubicRoots(tuple(sorted(roots)), disc)


def _rule(text: str) -> str:
    return text


def classify_equal(a: float) -> Verdict:
    """Equal-parameter trichotomy with thresholds 1/6 and a*."""
    if not (0.0 < a < 0.5):
        raise ValueError(f"equal-parameter classification needs a in (0, 1/2), got {a!r}")
    astar = a_star_exact()
    certificates = {"a": a, "one_sixth": 1.0 / 6.0, "a_star": astar,
                    "theta": 3.0 * a - 0.5, "theta_i": [theta_i(a)] * 3}
    if a >= astar - COMPARE_TOL:
        kind, rule = "AllPreserve", "equal parameters: a >= a*"
    elif a >= 1.0 / 6.0 - COMPARE_TOL:
        kind, rule = "SomePreserve", "equal parameters: 1/6 <= a < a*"
    else:
        kind, rule = "AllLose", "equal parameters: a < 1/6"
    return Verdict(kind, rule, certificates)


def classify_general(a: SpaceParams, conjecture: bool = False) -> Verdict:
    """Classify an arbitrary triple in the open cube.

    Coinciding parameters delegate to the sharper equal-parameter trichotomy.
    With ``conjecture`` set, the sum boundary a1+a2+a3 = 1/2 is also classified
    SomeLose; by default only the proven strict inequality fires.  Whether
    SomeLose can be strengthened to AllLose for theta <= 0 is open, so the rule
    text says which statement is proven and which is conjectured.
    """
    if not a.in_open_cube:
        raise ValueError("classification needs parameters in the open cube (0, 1/2)^3")
    vals = a.as_tuple
    if max(vals) - min(vals) <= COMPARE_TOL:
        return classify_equal(vals[0])
    thetas = [theta_i(v) for v in vals]
    certificates = {"theta": a.theta, "theta_i": thetas, "a_star": a_star_exact()}
    if a.theta >= max(thetas) - COMPARE_TOL:
        return Verdict("AllPreserve", "theta >= max theta_i", certificates)
    if a.theta < -COMPARE_TOL:
        return Verdict("SomeLose", "a1+a2+a3 < 1/2 (loss for all metrics is conjectured, "
                                   "not proven)", certificates)
    if conjecture and a.theta <= COMPARE_TOL:
        return Verdict("SomeLose", "a1+a2+a3 = 1/2, included by the conjectured boundary "
                                   "case", certificates)
    return Verdict("Indeterminate", "theta >= 0 but below max theta_i: no proven rule "
                                    "applies", certificates)


def partial_solutions(eps: float, t: float) -> SpaceParams:
    """An explicit family inside the all-preserve region.

    a1 = a2 = eps (t+1),  a3 = (1 - 16 eps^2)/(2 (1 + 16 eps^2)) (t+1),
    valid for 0 < t < 32 eps^2 / (1 - 16 eps^2).  The construction is verified
    directly against the preservation inequalities rather than trusting any
    a-priori bound on eps.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    if eps >= 0.25:
        raise ValueError(f"eps={eps!r} leaves no admissible t (needs 16 eps^2 < 1 with "
                         "a positive bound)")
    t_bound = 32.0 * eps ** 2 / (1.0 - 16.0 * eps ** 2)
    if not (0.0 < t < t_bound):
        raise ValueError(f"t={t!r} outside the admissible interval (0, {t_bound})")
    s = t + 1.0
    a12 = eps * s
    a3 = (1.0 - 16.0 * eps ** 2) / (2.0 * (1.0 + 16.0 * eps ** 2)) * s
    params = SpaceParams(a12, a12, a3, 2.0 * a12 + a3 - 0.5)
    if not params.in_open_cube:
        raise ValueError(f"resulting triple {params.as_tuple} leaves the open cube (0, 1/2)^3")
    ok, residuals = preserve_inequalities(params)
    if not ok:
        raise ValueError(f"construction failed its own inequalities: residuals={residuals}")
    return params


def classify_spec(spec: FamilySpec, conjecture: bool = False) -> Verdict:
    params = make_space(spec)
    if not params.in_open_cube:
        return Verdict("Indeterminate", "parameters on the cube boundary: the closed-form "
                                        "criteria need the open cube", {"theta": params.theta})
    return classify_general(params, conjecture=conjecture)


def family_scan(family: int, equal_k: range | list[int] | None = None,
                l_values: range | list[int] | None = None,
                conjecture: bool = False) -> list[tuple[FamilySpec, Verdict]]:
    """Verdict per instance of one family.

    Rows 1-3 scan over ``equal_k`` (k = l = m); rows 4-5 over ``l_values``;
    rows 6-15 ignore both and yield their single instance.  Empty ranges give
    an empty table.
    """
    specs: list[FamilySpec] = []
    if family in (1, 2, 3):
        if equal_k is None:
            raise ValueError(f"family {family} scan needs equal_k")
        specs = [FamilySpec(family, k=k, l=k, m=k) for k in equal_k]
    elif family in (4, 5):
        if l_values is None:
            raise ValueError(f"family {family} scan needs l_values")
        specs = [FamilySpec(family, l=l) for l in l_values]
    else:
        specs = [FamilySpec(family)]
    return [(spec, classify_spec(spec, conjecture=conjecture)) for spec in specs]
