"""The two base manifolds and their cohomogeneity-one constants.

Both S^4 and CP^2 carry an isometric SO(3) action whose orbit space is a
closed interval [0, L].  Everything the rest of the library needs to know
about the group structure is condensed into a handful of constants: the
interval length, the slopes the collapsing profile functions must attain at
the endpoints, the circle-radius ratios rho_pm(b)/b entering the
Grove-Ziller construction, and the gluing radii r_max^pm of the two disk
bundles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParams


@dataclass(frozen=True)
class SpaceKind:
    """Constants of one of the two admissible base manifolds.

    Attributes:
        name: "S4" or "CP2".
        L: length of the orbit interval [0, L].
        pole_slope_0: required phi'(0).
        pole_slope_L: required xi'(L).
        rho_ratio_minus: rho_-(b)/b, circle radius ratio at r=0.
        rho_ratio_plus: rho_+(b)/b, circle radius ratio at r=L.
        r_max_minus: gluing radius of the disk bundle over B_-.
        r_max_plus: gluing radius of the disk bundle over B_+.
    """

    name: str
    L: float
    pole_slope_0: float
    pole_slope_L: float
    rho_ratio_minus: float
    rho_ratio_plus: float
    r_max_minus: float
    r_max_plus: float

    def __post_init__(self):
        assert abs((self.r_max_minus + self.r_max_plus) - self.L) < 1e-15

    @property
    def is_s4(self) -> bool:
        return self.name == "S4"


S4 = SpaceKind(
    name="S4",
    L=math.pi / 3,
    pole_slope_0=2.0,
    pole_slope_L=-2.0,
    rho_ratio_minus=0.5,
    rho_ratio_plus=0.5,
    r_max_minus=math.pi / 6,
    r_max_plus=math.pi / 6,
)

CP2 = SpaceKind(
    name="CP2",
    L=math.pi / 4,
    pole_slope_0=1.0,
    pole_slope_L=-2.0,
    rho_ratio_minus=1.0,
    rho_ratio_plus=0.5,
    r_max_minus=math.pi / 6,
    r_max_plus=math.pi / 12,
)

SPACES = {"S4": S4, "CP2": CP2}


def space_by_name(name: str) -> SpaceKind:
    key = name.strip().upper()
    if key not in SPACES:
        raise InvalidParams(f"unknown space {name!r}: expected one of s4, cp2")
    return SPACES[key]


def max_beta_bound(space: SpaceKind, a: float) -> float:
    """Largest admissible plateau value b for cone parameter a.

    S4: b < (pi/3) sqrt(a-1)/sqrt(a);  CP2: b < (pi/6) sqrt(a-1)/sqrt(a).
    """
    factor = math.pi / 3 if space.is_s4 else math.pi / 6
    return factor * math.sqrt(a - 1.0) / math.sqrt(a)
