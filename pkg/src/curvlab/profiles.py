"""Profile triples (phi, psi, xi) on the orbit interval.

A diagonal invariant metric on S^4 or CP^2 is dr^2 + phi^2 Q|n1 + psi^2 Q|n2
+ xi^2 Q|n3 along a geodesic crossing all orbits; the three profile
functions are the whole metric.  This module builds the three families used
throughout:

* the standard (round / Fubini-Study) closed-form profiles,
* Grove-Ziller profiles driven by a concave bump function on each disk
  bundle, plateauing at a constant b,
* affine interpolations between the two,

and validates the endpoint (smoothness) conditions that let the metric
extend over the singular orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import stencils
from .errors import GridMismatch, InvalidParams, ShootingFailed
from .spaces import SpaceKind, max_beta_bound

DEFAULT_GRID = 1024


# ---------------------------------------------------------------------------
# profile triple representations


@dataclass(frozen=True, eq=False)
class ClosedFormTriple:
    """Profile triple given by callables with exact first/second derivatives."""

    space: SpaceKind
    length: float
    phi: Callable
    psi: Callable
    xi: Callable
    dphi: Callable
    dpsi: Callable
    dxi: Callable
    d2phi: Callable
    d2psi: Callable
    d2xi: Callable

    def sample(self, n_grid: int = DEFAULT_GRID) -> "SampledTriple":
        r = np.linspace(0.0, self.length, n_grid + 1)
        return SampledTriple(
            space=self.space,
            r=r,
            phi=np.asarray(self.phi(r), dtype=float),
            psi=np.asarray(self.psi(r), dtype=float),
            xi=np.asarray(self.xi(r), dtype=float),
            dphi=np.asarray(self.dphi(r), dtype=float),
            dpsi=np.asarray(self.dpsi(r), dtype=float),
            dxi=np.asarray(self.dxi(r), dtype=float),
            d2phi=np.asarray(self.d2phi(r), dtype=float),
            d2psi=np.asarray(self.d2psi(r), dtype=float),
            d2xi=np.asarray(self.d2xi(r), dtype=float),
        )


@dataclass(frozen=True, eq=False)
class SampledTriple:
    """Profile triple sampled on a uniform grid including both endpoints.

    Derivative arrays are optional; when present they come from an exact
    chain rule (closed forms or the bump ODE) rather than finite
    differences, and downstream code may use them as the oracle route.
    """

    space: SpaceKind
    r: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    xi: np.ndarray
    dphi: np.ndarray | None = None
    dpsi: np.ndarray | None = None
    dxi: np.ndarray | None = None
    d2phi: np.ndarray | None = None
    d2psi: np.ndarray | None = None
    d2xi: np.ndarray | None = None

    @property
    def n_grid(self) -> int:
        return len(self.r) - 1

    @property
    def dr(self) -> float:
        return float(self.r[1] - self.r[0])

    @property
    def length(self) -> float:
        return float(self.r[-1])

    @property
    def has_exact_derivatives(self) -> bool:
        return self.dphi is not None

    def values(self) -> np.ndarray:
        return np.stack([self.phi, self.psi, self.xi])


ProfileTriple = ClosedFormTriple | SampledTriple


def as_sampled(p: ProfileTriple, n_grid: int = DEFAULT_GRID) -> SampledTriple:
    return p if isinstance(p, SampledTriple) else p.sample(n_grid)


# ---------------------------------------------------------------------------
# standard metrics


def standard_profiles(space: SpaceKind) -> ClosedFormTriple:
    """Closed-form profiles of the round (S4) or Fubini-Study (CP2) metric."""
    s3 = math.sqrt(3.0)
    if space.is_s4:
        return ClosedFormTriple(
            space=space,
            length=space.L,
            phi=lambda r: 2.0 * np.sin(r),
            psi=lambda r: s3 * np.cos(r) + np.sin(r),
            xi=lambda r: s3 * np.cos(r) - np.sin(r),
            dphi=lambda r: 2.0 * np.cos(r),
            dpsi=lambda r: -s3 * np.sin(r) + np.cos(r),
            dxi=lambda r: -s3 * np.sin(r) - np.cos(r),
            d2phi=lambda r: -2.0 * np.sin(r),
            d2psi=lambda r: -(s3 * np.cos(r) + np.sin(r)),
            d2xi=lambda r: -(s3 * np.cos(r) - np.sin(r)),
        )
    return ClosedFormTriple(
        space=space,
        length=space.L,
        phi=np.sin,
        psi=np.cos,
        xi=lambda r: np.cos(2.0 * r),
        dphi=np.cos,
        dpsi=lambda r: -np.sin(r),
        dxi=lambda r: -2.0 * np.sin(2.0 * r),
        d2phi=lambda r: -np.sin(r),
        d2psi=lambda r: -np.cos(r),
        d2xi=lambda r: -4.0 * np.cos(2.0 * r),
    )


# ---------------------------------------------------------------------------
# bump function

# Shape of the curvature profile kappa driving the bump ODE -f'' = kappa f.
# kappa(r) = (alpha/r0^2) * eta(r/r0) with eta below: even in r (so f stays
# odd to all orders at 0), positive on [0, 1), vanishing to all orders at 1.
#
# A monotone nonincreasing kappa cannot reach plateau heights above
# (2/pi) r0 (Sturm/Wronskian comparison with the constant profile), which
# rules it out for the default parameters; the bend is instead concentrated
# late by a normalized Beta-style hump x^(2p) (1-x^2)^mb.  The polynomial
# factors keep the sixth derivative small enough for 4th-order stencils on
# production grids, while the exp factor supplies flatness to all orders.
_ETA_EPS0 = 0.02
_ETA_P = 10
_ETA_MB = 5
_ETA_MF = 6
_ETA_Q = 1e-3
_ETA_PEAK = (_ETA_P / (_ETA_P + _ETA_MB)) ** _ETA_P * (
    _ETA_MB / (_ETA_P + _ETA_MB)
) ** _ETA_MB
_UNIT_STEP = 1.0 / 16384


def _eta(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    m = x < 1.0
    xm = x[m]
    x2 = xm * xm
    u = 1.0 - x2
    hump = (x2**_ETA_P) * (u**_ETA_MB) / _ETA_PEAK
    out[m] = (_ETA_EPS0 * u**_ETA_MF + hump) * np.exp(-_ETA_Q * x2 / u)
    return out


def _rk4_unit(alpha: float, eta_half: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 for F'' = -alpha eta F on [0,1], F(0)=0, F'(0)=1.

    A fixed-step integrator keeps the global error a smooth function of x;
    adaptive dense output carries per-step jitter that finite differences
    of the sampled profiles would amplify by 1/dr^2.
    """
    h = _UNIT_STEP
    n = round(1.0 / h)
    e0, em = eta_half[0::2], eta_half[1::2]
    F = np.empty(n + 1)
    G = np.empty(n + 1)
    f, g = 0.0, 1.0
    F[0], G[0] = f, g
    for k in range(n):
        a0, am, a1 = -alpha * e0[k], -alpha * em[k], -alpha * e0[k + 1]
        k1f, k1g = g, a0 * f
        k2f, k2g = g + 0.5 * h * k1g, am * (f + 0.5 * h * k1f)
        k3f, k3g = g + 0.5 * h * k2g, am * (f + 0.5 * h * k2f)
        k4f, k4g = g + h * k3g, a1 * (f + h * k3f)
        f += (h / 6.0) * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        g += (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        F[k + 1], G[k + 1] = f, g
    return F, G


@lru_cache(maxsize=1)
def _unit_bump() -> tuple[float, float, np.ndarray, np.ndarray]:
    """Calibrate the scale-free bump once per process.

    Finds the amplitude alpha* with F'(1) = 0; the plateau condition then
    fixes r0 = y / e* with e* = F(1).  Returns (alpha*, e*, F, F') on the
    unit grid.
    """
    n = round(1.0 / _UNIT_STEP)
    eta_half = _eta(np.arange(2 * n + 1) * (_UNIT_STEP / 2.0))
    hi = 1.0
    while _rk4_unit(hi, eta_half)[1][-1] > 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise ShootingFailed("unit bump calibration: no bracket for alpha")
    alpha = brentq(lambda a: _rk4_unit(a, eta_half)[1][-1], hi / 2.0, hi,
                   xtol=1e-15, rtol=8.9e-16)
    F, G = _rk4_unit(alpha, eta_half)
    return float(alpha), float(F[-1]), F, G


def bump_efficiency() -> float:
    """Plateau height per unit transition length, f(r0)/r0, of the bump family."""
    return _unit_bump()[1]


def _unit_eval(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(F, F') anywhere in [0,1]: one partial RK4 step from the stored node."""
    alpha, _, F, G = _unit_bump()
    h = _UNIT_STEP
    n = len(F) - 1
    k = np.minimum((x / h).astype(int), n - 1)
    dx = x - k * h
    x0 = k * h
    f0, g0 = F[k], G[k]
    a0 = -alpha * _eta(x0)
    am = -alpha * _eta(x0 + 0.5 * dx)
    a1 = -alpha * _eta(x0 + dx)
    k1f, k1g = g0, a0 * f0
    k2f, k2g = g0 + 0.5 * dx * k1g, am * (f0 + 0.5 * dx * k1f)
    k3f, k3g = g0 + 0.5 * dx * k2g, am * (f0 + 0.5 * dx * k2f)
    k4f, k4g = g0 + dx * k3g, a1 * (f0 + dx * k3f)
    fv = f0 + (dx / 6.0) * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
    gv = g0 + (dx / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
    return fv, gv


@dataclass(frozen=True, eq=False)
class BumpFn:
    """Concave cap profile f on [0, r_max] with exact plateau.

    f(0)=0, f'(0)=1, f'' <= 0, f increasing on [0, r0), f == y on
    [r0, r_max]; the disk curvature -f''/f is positive on [0, r0) and
    vanishes to all orders at r0.
    """

    r_max: float
    r0: float
    y: float
    r: np.ndarray
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    alpha: float = field(repr=False)
    residuals: dict = field(repr=False)

    def evaluate(self, r) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(f, f', f'') at arbitrary points of [0, r_max]."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        _, eff, _, _ = _unit_bump()
        x = np.minimum(r / self.r0, 1.0)
        fu, gu = _unit_eval(x)
        scale = self.y / (self.r0 * eff)  # plateau lands exactly on y
        inside = r < self.r0
        f = np.where(inside, self.r0 * fu * scale, self.y)
        df = np.where(inside, gu * scale, 0.0)
        d2f = -self.kappa(r) * f
        return f, df, d2f

    def kappa(self, r) -> np.ndarray:
        """Disk curvature profile -f''/f."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return (self.alpha / self.r0**2) * _eta(r / self.r0)


def build_bump(a: float, b: float, rho: float, r_max: float,
               n_samples: int = 1024, tol: float = 1e-8) -> BumpFn:
    """Construct the bump by the curvature-profile shoot.

    The two shooting conditions f'(r0) = 0 and f(r0) = y decouple under the
    scaling r -> r/r0: a single amplitude calibration fixes the shape, and
    r0 is then y divided by the family's efficiency.
    """
    if not a > 1.0:
        raise InvalidParams(f"cone parameter must satisfy a > 1 (got a={a})")
    y = rho * math.sqrt(a) / math.sqrt(a - 1.0)
    if y >= r_max:
        raise InvalidParams(
            f"plateau height y = rho*sqrt(a)/sqrt(a-1) = {y:.6g} must be < r_max = {r_max:.6g}"
        )
    alpha, eff, F, G = _unit_bump()
    r0 = y / eff
    if r0 >= r_max:
        raise ShootingFailed(
            f"required efficiency y/r_max = {y / r_max:.4f} exceeds the bump "
            f"family's efficiency {eff:.4f}; lower b or raise a",
            residuals={"needed": y / r_max, "available": eff},
        )
    residuals = {"plateau_value": 0.0, "plateau_slope": abs(float(G[-1]))}
    if residuals["plateau_slope"] > tol:
        raise ShootingFailed("bump shoot residuals exceed tolerance", residuals)

    r = np.linspace(0.0, r_max, n_samples + 1)
    bump = BumpFn(r_max=r_max, r0=r0, y=y, r=r,
                  f=np.empty(0), df=np.empty(0), d2f=np.empty(0),
                  alpha=alpha, residuals=residuals)
    f, df, d2f = bump.evaluate(r)
    object.__setattr__(bump, "f", f)
    object.__setattr__(bump, "df", df)
    object.__setattr__(bump, "d2f", d2f)
    return bump


# ---------------------------------------------------------------------------
# Grove-Ziller profiles


@dataclass(frozen=True, eq=False)
class GZParams:
    """Validated Grove-Ziller parameters with both disk-bundle bumps."""

    space: SpaceKind
    a: float
    b: float
    y_minus: float
    y_plus: float
    bump_minus: BumpFn
    bump_plus: BumpFn

    @property
    def r0(self) -> float:
        return self.bump_minus.r0


def validate_gz_params(space: SpaceKind, a: float, b: float) -> tuple[float, float]:
    """Check the admissibility inequalities; return plateau heights (y-, y+).

    Raises InvalidParams naming the violated inequality.
    """
    if not a > 1.0:
        raise InvalidParams(f"cone parameter must satisfy a > 1 (got a={a})")
    if not a <= 4.0 / 3.0 + 1e-12:
        raise InvalidParams(f"cone parameter must satisfy a <= 4/3 (got a={a})")
    if not b > 0.0:
        raise InvalidParams(f"plateau value must satisfy b > 0 (got b={b})")
    bound = max_beta_bound(space, a)
    if not b < bound:
        raise InvalidParams(
            f"{space.name} requires b < {bound:.6g} "
            f"(= {'pi/3' if space.is_s4 else 'pi/6'} * sqrt(a-1)/sqrt(a)); got b={b}"
        )
    ratio = math.sqrt(a) / math.sqrt(a - 1.0)
    y_minus = space.rho_ratio_minus * b * ratio
    y_plus = space.rho_ratio_plus * b * ratio
    if not y_minus < space.r_max_minus:
        raise InvalidParams(
            f"minus-side plateau height y- = {y_minus:.6g} must be < r_max- = {space.r_max_minus:.6g}"
        )
    if not y_plus < space.r_max_plus:
        raise InvalidParams(
            f"plus-side plateau height y+ = {y_plus:.6g} must be < r_max+ = {space.r_max_plus:.6g}"
        )
    return y_minus, y_plus


def make_gz_params(space: SpaceKind, a: float, b: float) -> GZParams:
    y_minus, y_plus = validate_gz_params(space, a, b)
    bump_minus = build_bump(a, b, space.rho_ratio_minus * b, space.r_max_minus)
    bump_plus = build_bump(a, b, space.rho_ratio_plus * b, space.r_max_plus)
    return GZParams(space=space, a=a, b=b, y_minus=y_minus, y_plus=y_plus,
                    bump_minus=bump_minus, bump_plus=bump_plus)


def default_gz_params(space: SpaceKind) -> GZParams:
    """Library defaults: a = 4/3 and b = 0.4 (S4) or 0.2 (CP2)."""
    return make_gz_params(space, 4.0 / 3.0, 0.4 if space.is_s4 else 0.2)


def _gz_chain(params: GZParams, bump: BumpFn, r) -> tuple[np.ndarray, ...]:
    """phi = f b sqrt(a)/sqrt(f^2 + a rho^2) and its two derivatives.

    rho is recovered from the bump's plateau height: y = rho sqrt(a)/sqrt(a-1).
    """
    a, b = params.a, params.b
    rho = bump.y * math.sqrt(a - 1.0) / math.sqrt(a)
    f, df, d2f = bump.evaluate(r)
    arho2 = a * rho * rho
    den = f * f + arho2
    root = np.sqrt(den)
    g = b * math.sqrt(a) * f / root
    gp = b * math.sqrt(a) * arho2 / (den * root)
    gpp = -3.0 * b * math.sqrt(a) * arho2 * f / (den * den * root)
    val = g
    d1 = gp * df
    d2 = gpp * df * df + gp * d2f
    # the plateau is an algebraic identity; enforce it exactly
    plateau = np.asarray(r) >= bump.r0
    val = np.where(plateau, b, val)
    d1 = np.where(plateau, 0.0, d1)
    d2 = np.where(plateau, 0.0, d2)
    return val, d1, d2


def gz_profiles(space: SpaceKind, params: GZParams, n_grid: int = DEFAULT_GRID) -> SampledTriple:
    """Sampled Grove-Ziller triple on [0, L].

    phi is bump-driven on the minus disk bundle and constant b beyond; xi is
    the mirrored expression driven by the plus-side bump; psi == b.  On S4
    the two sides are reflections of each other: phi(r) = xi(L - r).
    """
    if params.space.name != space.name:
        raise InvalidParams("params were built for a different space")
    r = np.linspace(0.0, space.L, n_grid + 1)
    phi, dphi, d2phi = _gz_chain(params, params.bump_minus, r)
    xi_m, dxi_m, d2xi_m = _gz_chain(params, params.bump_plus, space.L - r)
    b = params.b
    return SampledTriple(
        space=space,
        r=r,
        phi=phi,
        psi=np.full_like(r, b),
        xi=xi_m,
        dphi=dphi,
        dpsi=np.zeros_like(r),
        dxi=-dxi_m,
        d2phi=d2phi,
        d2psi=np.zeros_like(r),
        d2xi=d2xi_m,
    )


# ---------------------------------------------------------------------------
# interpolation, rescaling


def interpolate(s: float, p0: ProfileTriple, p1: ProfileTriple) -> ProfileTriple:
    """Pointwise affine combination (1-s) p0 + s p1 of two triples.

    Mixed representations are allowed: the closed-form triple is sampled
    onto the partner's grid.  Two sampled triples must share the grid.
    """
    if p0.space.name != p1.space.name:
        raise GridMismatch(
            f"cannot interpolate across spaces {p0.space.name} and {p1.space.name}"
        )
    if isinstance(p0, ClosedFormTriple) and isinstance(p1, ClosedFormTriple):
        if abs(p0.length - p1.length) > 1e-12:
            raise GridMismatch("closed-form triples cover different intervals")
        c0, c1 = 1.0 - s, s
        mk = lambda f0, f1: (lambda r: c0 * f0(r) + c1 * f1(r))  # noqa: E731
        return ClosedFormTriple(
            space=p0.space, length=p0.length,
            phi=mk(p0.phi, p1.phi), psi=mk(p0.psi, p1.psi), xi=mk(p0.xi, p1.xi),
            dphi=mk(p0.dphi, p1.dphi), dpsi=mk(p0.dpsi, p1.dpsi), dxi=mk(p0.dxi, p1.dxi),
            d2phi=mk(p0.d2phi, p1.d2phi), d2psi=mk(p0.d2psi, p1.d2psi), d2xi=mk(p0.d2xi, p1.d2xi),
        )
    if isinstance(p0, ClosedFormTriple):
        p0 = p0.sample(p1.n_grid)
    if isinstance(p1, ClosedFormTriple):
        p1 = p1.sample(p0.n_grid)
    if len(p0.r) != len(p1.r) or abs(p0.length - p1.length) > 1e-12:
        raise GridMismatch(
            f"grids differ: {p0.n_grid}+1 nodes on [0, {p0.length:.6g}] vs "
            f"{p1.n_grid}+1 nodes on [0, {p1.length:.6g}]"
        )
    c0, c1 = 1.0 - s, s
    comb = lambda a0, a1: None if a0 is None or a1 is None else c0 * a0 + c1 * a1  # noqa: E731
    return SampledTriple(
        space=p0.space, r=p0.r,
        phi=c0 * p0.phi + c1 * p1.phi,
        psi=c0 * p0.psi + c1 * p1.psi,
        xi=c0 * p0.xi + c1 * p1.xi,
        dphi=comb(p0.dphi, p1.dphi), dpsi=comb(p0.dpsi, p1.dpsi), dxi=comb(p0.dxi, p1.dxi),
        d2phi=comb(p0.d2phi, p1.d2phi), d2psi=comb(p0.d2psi, p1.d2psi), d2xi=comb(p0.d2xi, p1.d2xi),
    )


def interpolated_profiles(space: SpaceKind, params: GZParams, s: float,
                          n_grid: int = DEFAULT_GRID) -> SampledTriple:
    """The family g_s: Grove-Ziller at s=0, standard at s=1."""
    gz = gz_profiles(space, params, n_grid)
    std = standard_profiles(space).sample(n_grid)
    return interpolate(s, gz, std)


def rescale(p: ProfileTriple, lam: float) -> ProfileTriple:
    """Homothety g -> lam^2 g: functions become lam * f(r / lam) on [0, lam L]."""
    if not lam > 0.0:
        raise InvalidParams(f"homothety factor must be positive (got {lam})")
    if isinstance(p, ClosedFormTriple):
        mkv = lambda f: (lambda r: lam * f(np.asarray(r) / lam))  # noqa: E731
        mkd = lambda f: (lambda r: f(np.asarray(r) / lam))  # noqa: E731
        mkdd = lambda f: (lambda r: f(np.asarray(r) / lam) / lam)  # noqa: E731
        return ClosedFormTriple(
            space=p.space, length=lam * p.length,
            phi=mkv(p.phi), psi=mkv(p.psi), xi=mkv(p.xi),
            dphi=mkd(p.dphi), dpsi=mkd(p.dpsi), dxi=mkd(p.dxi),
            d2phi=mkdd(p.d2phi), d2psi=mkdd(p.d2psi), d2xi=mkdd(p.d2xi),
        )
    scl = lambda a, c: None if a is None else c * a  # noqa: E731
    return SampledTriple(
        space=p.space, r=lam * p.r,
        phi=lam * p.phi, psi=lam * p.psi, xi=lam * p.xi,
        dphi=scl(p.dphi, 1.0), dpsi=scl(p.dpsi, 1.0), dxi=scl(p.dxi, 1.0),
        d2phi=scl(p.d2phi, 1.0 / lam), d2psi=scl(p.d2psi, 1.0 / lam), d2xi=scl(p.d2xi, 1.0 / lam),
    )


# ---------------------------------------------------------------------------
# smoothness report


@dataclass(frozen=True)
class SmoothnessReport:
    space: str
    tol: float
    residuals: dict[str, float]
    passed: dict[str, bool]

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    def as_dict(self) -> dict:
        return {
            cond: {"residual": self.residuals[cond], "pass": self.passed[cond]}
            for cond in self.residuals
        }


def check_smoothness(p: ProfileTriple, tol: float = 1e-6) -> SmoothnessReport:
    """Residuals of the endpoint smoothness conditions (i)-(vi).

    Endpoint values and slopes are measured with one-sided 4th-order
    stencils; the even/odd structure of the stated combinations is measured
    by parity-restricted polynomial fits on the 8 nodes nearest each
    endpoint.
    """
    sp = as_sampled(p)
    space = sp.space
    dr = sp.dr
    phi, psi, xi = sp.phi, sp.psi, sp.xi
    r8 = sp.r[:8]
    z8 = sp.r[-1] - sp.r[-1:-9:-1]

    res: dict[str, float] = {}
    res["i"] = max(
        abs(float(phi[0])),
        abs(stencils.one_sided_deriv1(phi, dr, at_start=True) - space.pole_slope_0),
        stencils.parity_fit_residual(r8, phi[:8], "odd"),
    )
    res["ii"] = stencils.parity_fit_residual(r8, (psi**2 + xi**2)[:8], "even")
    res["iii"] = stencils.parity_fit_residual(
        r8, (psi**2 - xi**2)[:8], "odd" if space.is_s4 else "r2even"
    )
    res["iv"] = max(
        abs(float(xi[-1])),
        abs(stencils.one_sided_deriv1(xi, dr, at_start=False) - space.pole_slope_L),
        stencils.parity_fit_residual(z8, xi[-1:-9:-1], "odd"),
    )
    res["v"] = stencils.parity_fit_residual(z8, (psi**2 + phi**2)[-1:-9:-1], "even")
    res["vi"] = stencils.parity_fit_residual(z8, (psi**2 - phi**2)[-1:-9:-1], "odd")

    passed = {cond: bool(val < tol) for cond, val in res.items()}
    return SmoothnessReport(space=space.name, tol=tol, residuals=res, passed=passed)
