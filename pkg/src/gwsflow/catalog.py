"""Parameter catalog of generalized Wallach spaces.

Every generalized Wallach space (GWS) is described, for the purposes of the
flow studied here, by a triple (a1, a2, a3) in the cube (0, 1/2]^3.  The
fifteen families realized by a simple compact group are tabulated in
``FAMILIES``; rows 1-3 are indexed by integers k >= l >= m >= 1, rows 4-5 by a
single integer l, rows 6-15 are isolated spaces with fixed rational
parameters.

The derived quantity theta = a1 + a2 + a3 - 1/2 drives the classification of
Ricci-positivity behavior (see :mod:`gwsflow.classify`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SpaceParams:
    """Parameter triple of a generalized Wallach space, with theta precomputed."""

    a1: float
    a2: float
    a3: float
    theta: float

    @property
    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a1, self.a2, self.a3)

    @property
    def in_open_cube(self) -> bool:
        """True when the triple lies in (0, 1/2)^3, where the closed-form
        classification criteria apply; boundary values a_i = 1/2 are legal
        space parameters but sit outside that open cube."""
        return all(0.0 < a < 0.5 for a in self.as_tuple)

    @property
    def is_equal(self) -> bool:
        return self.a1 == self.a2 == self.a3

    def to_dict(self) -> dict:
        return {"a1": self.a1, "a2": self.a2, "a3": self.a3, "theta": self.theta}


def validate_params(a1: float, a2: float, a3: float) -> SpaceParams:
    """Validate a raw triple: every component must lie in (0, 1/2].

    Rejection names the offending component.  theta is computed from the
    floating-point sum.
    """
    for name, value in (("a1", a1), ("a2", a2), ("a3", a3)):
        if not (0.0 < value <= 0.5):
            raise ValueError(f"{name}={value!r} outside the admissible interval (0, 1/2]")
    return SpaceParams(float(a1), float(a2), float(a3), a1 + a2 + a3 - 0.5)


def equal_params(a: float) -> SpaceParams:
    """The space with a1 = a2 = a3 = a (contains the Wallach spaces W6, W12, W24)."""
    return validate_params(a, a, a)


def _exact(a1: Fraction, a2: Fraction, a3: Fraction) -> SpaceParams:
    """Build from exact rationals so the theta identities hold to machine precision."""
    for name, value in (("a1", a1), ("a2", a2), ("a3", a3)):
        if not (0 < value <= HALF):
            raise ValueError(f"{name}={value} outside the admissible interval (0, 1/2]")
    return SpaceParams(float(a1), float(a2), float(a3), float(a1 + a2 + a3 - HALF))


@dataclass(frozen=True)
class Family:
    """One row of the classification of GWS with a simple group."""

    id: int
    group: str
    subgroup: str
    param_names: tuple[str, ...]
    formula: str


FAMILIES: dict[int, Family] = {
    1: Family(1, "so(k+l+m)", "so(k)+so(l)+so(m)", ("k", "l", "m"),
              "a_i = (k,l,m) / (2(k+l+m-2))"),
    2: Family(2, "su(k+l+m)", "su(k)+su(l)+su(m)", ("k", "l", "m"),
              "a_i = (k,l,m) / (2(k+l+m))"),
    3: Family(3, "sp(k+l+m)", "sp(k)+sp(l)+sp(m)", ("k", "l", "m"),
              "a_i = (k,l,m) / (2(k+l+m+1))"),
    4: Family(4, "su(2l), l>=2", "u(l)", ("l",),
              "a = ((l+1)/(4l), (l-1)/(4l), 1/4)"),
    5: Family(5, "so(2l), l>=4", "u(1)+u(l-1)", ("l",),
              "a = ((l-2)/(4(l-1)), (l-2)/(4(l-1)), 1/(2(l-1)))"),
    6: Family(6, "e6", "su(4)+2sp(1)+R", (), "a = (1/4, 1/4, 1/6)"),
    7: Family(7, "e6", "so(8)+R^2", (), "a = (1/6, 1/6, 1/6)"),
    8: Family(8, "e6", "sp(3)+sp(1)", (), "a = (1/4, 1/8, 7/24)"),
    9: Family(9, "e7", "so(8)+3sp(1)", (), "a = (2/9, 2/9, 2/9)"),
    10: Family(10, "e7", "su(6)+sp(1)+R", (), "a = (2/9, 1/6, 5/18)"),
    11: Family(11, "e7", "so(8)", (), "a = (5/18, 5/18, 5/18)"),
    12: Family(12, "e8", "so(12)+2sp(1)", (), "a = (1/5, 1/5, 4/15)"),
    13: Family(13, "e8", "so(8)+so(8)", (), "a = (4/15, 4/15, 4/15)"),
    14: Family(14, "f4", "so(5)+2sp(1)", (), "a = (5/18, 5/18, 1/9)"),
    15: Family(15, "f4", "so(8)", (), "a = (1/9, 1/9, 1/9)"),
}

_FIXED_ROWS: dict[int, tuple[Fraction, Fraction, Fraction]] = {
    6: (Fraction(1, 4), Fraction(1, 4), Fraction(1, 6)),
    7: (Fraction(1, 6), Fraction(1, 6), Fraction(1, 6)),
    8: (Fraction(1, 4), Fraction(1, 8), Fraction(7, 24)),
    9: (Fraction(2, 9), Fraction(2, 9), Fraction(2, 9)),
    10: (Fraction(2, 9), Fraction(1, 6), Fraction(5, 18)),
    11: (Fraction(5, 18), Fraction(5, 18), Fraction(5, 18)),
    12: (Fraction(1, 5), Fraction(1, 5), Fraction(4, 15)),
    13: (Fraction(4, 15), Fraction(4, 15), Fraction(4, 15)),
    14: (Fraction(5, 18), Fraction(5, 18), Fraction(1, 9)),
    15: (Fraction(1, 9), Fraction(1, 9), Fraction(1, 9)),
}


@dataclass(frozen=True)
class FamilySpec:
    """A concrete instance of one of the fifteen families.

    Rows 1-3 take integers k >= l >= m >= 1 (the symmetry convention is
    enforced, not silently reordered); row 4 takes l >= 2, row 5 takes l >= 4;
    rows 6-15 take no parameters.
    """

    family: int
    k: int | None = None
    l: int | None = None
    m: int | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family id {self.family}; expected 1..15")
        if self.family in (1, 2, 3):
            if self.k is None or self.l is None or self.m is None:
                raise ValueError(f"family {self.family} needs integer parameters k, l, m")
            for name in ("k", "l", "m"):
                v = getattr(self, name)
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ValueError(f"{name}={v!r} must be an integer")
            if not (self.k >= self.l >= self.m >= 1):
                raise ValueError(
                    f"family {self.family} requires k >= l >= m >= 1, got "
                    f"(k, l, m) = ({self.k}, {self.l}, {self.m})")
        elif self.family in (4, 5):
            if self.l is None or self.k is not None or self.m is not None:
                raise ValueError(f"family {self.family} takes a single integer parameter l")
            if not isinstance(self.l, int) or isinstance(self.l, bool):
                raise ValueError(f"l={self.l!r} must be an integer")
            bound = 2 if self.family == 4 else 4
            if self.l < bound:
                raise ValueError(f"family {self.family} requires l >= {bound}, got l={self.l}")
        else:
            if (self.k, self.l, self.m) != (None, None, None):
                raise ValueError(f"family {self.family} takes no parameters")

    def label(self) -> str:
        if self.family in (1, 2, 3):
            return f"{self.family}(k={self.k},l={self.l},m={self.m})"
        if self.family in (4, 5):
            return f"{self.family}(l={self.l})"
        return str(self.family)

    def to_dict(self) -> dict:
        d: dict = {"family": self.family}
        for name in ("k", "l", "m"):
            if getattr(self, name) is not None:
                d[name] = getattr(self, name)
        return d


def make_space(spec: FamilySpec) -> SpaceParams:
    """Parameter triple of the given family instance, computed in exact rationals."""
    f = spec.family
    if f in (1, 2, 3):
        shift = {1: -2, 2: 0, 3: 1}[f]
        den = 2 * (spec.k + spec.l + spec.m + shift)
        return _exact(Fraction(spec.k, den), Fraction(spec.l, den), Fraction(spec.m, den))
    if f == 4:
        l = spec.l
        return _exact(Fraction(l + 1, 4 * l), Fraction(l - 1, 4 * l), Fraction(1, 4))
    if f == 5:
        l = spec.l
        return _exact(Fraction(l - 2, 4 * (l - 1)), Fraction(l - 2, 4 * (l - 1)),
                      Fraction(1, 2 * (l - 1)))
    return _exact(*_FIXED_ROWS[f])


def theta_closed_form(spec: FamilySpec) -> float:
    """The tabulated closed form of theta for the parameterized rows 1-3."""
    s = spec.k + spec.l + spec.m
    if spec.family == 1:
        return float(Fraction(1, s - 2))
    if spec.family == 2:
        return 0.0
    if spec.family == 3:
        return float(Fraction(-1, 2 * (s + 1)))
    raise ValueError("closed-form theta is tabulated for families 1-3 only")


def smallest_instance(family: int) -> FamilySpec:
    """The least parameter choice allowed by the family's constraints."""
    if family in (1, 2, 3):
        return FamilySpec(family, k=1, l=1, m=1)
    if family == 4:
        return FamilySpec(family, l=2)
    if family == 5:
        return FamilySpec(family, l=4)
    return FamilySpec(family)
