"""Curvature operator of a diagonal invariant metric along the geodesic.

In the wedge basis pairing each coordinate 2-plane with its complement,
{e2^e3, e0^e1, e3^e1, e0^e2, e1^e2, e0^e3}, the curvature operator is block
diagonal with three symmetric 2x2 blocks R1, R2, R3.  Diagonal entries are
sectional curvatures of coordinate planes; the off-diagonal entry of R_i is
the mixed component R_{ijkl} with all indices distinct.  Primes denote
arclength derivatives.

Entries have removable singularities at the poles (phi -> 0 at r=0, xi -> 0
at r=L); nodes within NGHOST grid spacings of a pole are filled by
polynomial extrapolation from the nearest safe interior nodes, checked at
two orders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import stencils
from .errors import OutOfRange, PoleEvaluationFailed
from .profiles import (
    ClosedFormTriple,
    GZParams,
    ProfileTriple,
    SampledTriple,
)
from .spaces import SpaceKind

H_BLOCK = np.array([[0.0, 1.0], [1.0, 0.0]])

# Relative two-order extrapolation disagreement that aborts evaluation.
# Smooth metrics sit far below this (~1e-10 for the standard ones); the
# threshold only fires on states whose pole limits are not removable.
POLE_TOL = 0.05


def hodge_star() -> np.ndarray:
    """The Hodge star in the paired wedge basis: three copies of [[0,1],[1,0]]."""
    return np.array([H_BLOCK, H_BLOCK, H_BLOCK])


def blocks_from_values(
    phi, psi, xi, dphi, dpsi, dxi, d2phi, d2psi, d2xi
) -> np.ndarray:
    """Assemble the three curvature blocks from profile values and derivatives.

    All arguments broadcast; the result has shape (..., 3, 2, 2).  Pole
    singularities are left as inf/nan for the caller to repair.
    """
    phi2, psi2, xi2 = phi * phi, psi * psi, xi * xi
    denom = 4.0 * phi2 * psi2 * xi2

    r1_11 = (
        psi2 * psi2 + xi2 * xi2 - phi2 * phi2 + 2.0 * (xi2 - phi2) * (phi2 - psi2)
    ) / denom - dpsi * dxi / (psi * xi)
    r2_11 = (
        phi2 * phi2 + xi2 * xi2 - psi2 * psi2 + 2.0 * (phi2 - psi2) * (psi2 - xi2)
    ) / denom - dphi * dxi / (phi * xi)
    r3_11 = (
        phi2 * phi2 + psi2 * psi2 - xi2 * xi2 + 2.0 * (psi2 - xi2) * (xi2 - phi2)
    ) / denom - dphi * dpsi / (phi * psi)

    r1_12 = (
        dpsi * (psi2 + phi2 - xi2) / (2.0 * phi * psi2 * xi)
        + dxi * (xi2 + phi2 - psi2) / (2.0 * phi * psi * xi2)
        - dphi / (psi * xi)
    )
    r2_12 = (
        dphi * (phi2 + psi2 - xi2) / (2.0 * phi2 * psi * xi)
        + dxi * (xi2 + psi2 - phi2) / (2.0 * phi * psi * xi2)
        - dpsi / (phi * xi)
    )
    r3_12 = (
        dphi * (phi2 + xi2 - psi2) / (2.0 * phi2 * psi * xi)
        + dpsi * (psi2 + xi2 - phi2) / (2.0 * phi * psi2 * xi)
        - dxi / (phi * psi)
    )

    r1_22 = -d2phi / phi
    r2_22 = -d2psi / psi
    r3_22 = -d2xi / xi

    shape = np.broadcast(phi, dphi).shape
    out = np.empty(shape + (3, 2, 2))
    for i, (a, m, c) in enumerate(
        [(r1_11, r1_12, r1_22), (r2_11, r2_12, r2_22), (r3_11, r3_12, r3_22)]
    ):
        out[..., i, 0, 0] = a
        out[..., i, 0, 1] = m
        out[..., i, 1, 0] = m
        out[..., i, 1, 1] = c
    return out


@dataclass(frozen=True)
class CurvatureBlocks:
    """The three 2x2 blocks at a stated point r."""

    r: float
    blocks: np.ndarray  # (3, 2, 2)

    @property
    def R1(self) -> np.ndarray:
        return self.blocks[0]

    @property
    def R2(self) -> np.ndarray:
        return self.blocks[1]

    @property
    def R3(self) -> np.ndarray:
        return self.blocks[2]

    def bianchi_sum(self) -> float:
        """[R1]_12 + [R2]_12 + [R3]_12; zero by the first Bianchi identity."""
        return float(self.blocks[:, 0, 1].sum())


@dataclass(frozen=True)
class BlockField:
    """Curvature blocks at every grid node."""

    r: np.ndarray
    blocks: np.ndarray  # (N+1, 3, 2, 2)
    pole_disagreement: float

    def at(self, j: int) -> CurvatureBlocks:
        return CurvatureBlocks(r=float(self.r[j]), blocks=self.blocks[j])

    def nearest(self, r: float) -> CurvatureBlocks:
        j = int(np.argmin(np.abs(self.r - r)))
        return self.at(j)

    def bianchi_sums(self) -> np.ndarray:
        return self.blocks[:, :, 0, 1].sum(axis=1)

    def max_abs_sec(self) -> float:
        return float(np.abs(np.diagonal(self.blocks, axis1=-2, axis2=-1)).max())


def _repair_poles(raw: np.ndarray, pole_tol: float) -> tuple[np.ndarray, float]:
    """Extrapolate entry functions onto the NGHOST nodes nearest each pole."""
    flat = raw.reshape(raw.shape[0], -1).T  # (9, N+1)
    disagree = stencils.pole_disagreement(flat)
    scale = 1.0 + np.abs(flat[:, stencils.POLE_SOURCES]).max()
    if disagree > pole_tol * scale:
        raise PoleEvaluationFailed(
            f"pole extrapolation disagrees between orders by {disagree:.3e} "
            f"(tolerance {pole_tol:.1e} x scale {scale:.3e})"
        )
    fixed = stencils.pole_extrapolate(flat)
    return fixed.T.reshape(raw.shape).copy(), disagree


def block_field(
    p: ProfileTriple,
    n_grid: int | None = None,
    route: str = "auto",
    pole_tol: float = POLE_TOL,
) -> BlockField:
    """Curvature blocks at every node of the triple's grid.

    route "fd" differentiates the sampled values with parity-aware stencils
    (the default for sampled triples); "exact" uses the triple's exact
    derivative data (closed forms or ODE chain); "auto" prefers exact.
    """
    if isinstance(p, ClosedFormTriple):
        sp = p.sample(n_grid or 1024)
        use_exact = route != "fd"
    else:
        sp = p
        use_exact = (route == "exact") or (route == "auto" and sp.has_exact_derivatives)
        if route == "exact" and not sp.has_exact_derivatives:
            raise OutOfRange("triple carries no exact derivative arrays")

    if use_exact:
        d1 = np.stack([sp.dphi, sp.dpsi, sp.dxi])
        d2 = np.stack([sp.d2phi, sp.d2psi, sp.d2xi])
    else:
        d1, d2 = stencils.profile_derivatives(sp.phi, sp.psi, sp.xi, sp.space, sp.dr)

    with np.errstate(divide="ignore", invalid="ignore"):
        raw = blocks_from_values(
            sp.phi, sp.psi, sp.xi, d1[0], d1[1], d1[2], d2[0], d2[1], d2[2]
        )
    fixed, disagree = _repair_poles(raw, pole_tol)
    return BlockField(r=sp.r, blocks=fixed, pole_disagreement=disagree)


def curvature_blocks(p: ProfileTriple, r: float, n_grid: int = 1024) -> CurvatureBlocks:
    """The three blocks at the grid node nearest r.

    Sampled triples are differentiated with the parity-aware stencils; for
    closed-form triples the exact derivatives are used.  Nodes within
    NGHOST spacings of a pole carry extrapolated values.
    """
    route = "fd" if isinstance(p, SampledTriple) else "auto"
    field = block_field(p, n_grid=n_grid, route=route)
    if not (-1e-12 <= r <= field.r[-1] + 1e-12):
        raise OutOfRange(f"r={r} outside [0, {field.r[-1]:.6g}]")
    return field.nearest(r)


# ---------------------------------------------------------------------------
# Grove-Ziller closed forms


def gz_blocks_closed_form(params: GZParams, p: SampledTriple, r: float) -> CurvatureBlocks:
    """Blocks of the Grove-Ziller metric from the printed closed forms.

    Valid on the minus disk bundle (0, r_max^-]; uses the ODE-chain
    derivatives carried by the triple, independent of the finite-difference
    route in curvature_blocks.
    """
    if not (0.0 < r <= params.space.r_max_minus + 1e-12):
        raise OutOfRange(f"r={r} outside (0, r_max^-]")
    field = gz_block_field(params, p)
    return field.nearest(r)


def gz_block_field(params: GZParams, p: SampledTriple) -> BlockField:
    """Vectorized closed-form blocks on the interior minus-side nodes."""
    if not p.has_exact_derivatives:
        raise OutOfRange("gz closed forms need the chain derivative arrays")
    b = params.b
    mask = (p.r > 0) & (p.r <= params.space.r_max_minus + 1e-12)
    phi, dphi, d2phi = p.phi[mask], p.dphi[mask], p.d2phi[mask]
    b2, b4 = b * b, b**4
    n = phi.shape[0]
    blocks = np.empty((n, 3, 2, 2))
    blocks[:, 0, 0, 0] = (4.0 * b2 - 3.0 * phi * phi) / (4.0 * b4)
    blocks[:, 0, 0, 1] = blocks[:, 0, 1, 0] = -dphi / b2
    blocks[:, 0, 1, 1] = -d2phi / phi
    for i in (1, 2):
        blocks[:, i, 0, 0] = phi * phi / (4.0 * b4)
        blocks[:, i, 0, 1] = blocks[:, i, 1, 0] = dphi / (2.0 * b2)
        blocks[:, i, 1, 1] = 0.0
    return BlockField(r=p.r[mask], blocks=blocks, pole_disagreement=0.0)


def gz_inequality_values(params: GZParams, p: SampledTriple) -> np.ndarray:
    """(4b^2 - 3 phi^2)(-phi'') - 9 phi phi'^2 on the minus-side nodes."""
    b = params.b
    mask = (p.r > 0) & (p.r <= params.space.r_max_minus + 1e-12)
    if p.has_exact_derivatives:
        phi, dphi, d2phi = p.phi[mask], p.dphi[mask], p.d2phi[mask]
    else:
        d1, d2 = stencils.profile_derivatives(p.phi, p.psi, p.xi, p.space, p.dr)
        phi, dphi, d2phi = p.phi[mask], d1[0][mask], d2[0][mask]
    return (4.0 * b * b - 3.0 * phi * phi) * (-d2phi) - 9.0 * phi * dphi * dphi


def gz_inequality_check(params: GZParams, p: SampledTriple) -> float:
    """Minimum of the differential inequality over the minus-side grid."""
    return float(gz_inequality_values(params, p).min())


# ---------------------------------------------------------------------------
# Ricci


@dataclass(frozen=True)
class RicciDiagonal:
    """Ricci curvatures of the orthonormal frame e0..e3 at a stated r."""

    r: float
    ric00: float
    ric11: float
    ric22: float
    ric33: float

    def as_array(self) -> np.ndarray:
        return np.array([self.ric00, self.ric11, self.ric22, self.ric33])


def ricci_from_blocks(blocks: np.ndarray) -> np.ndarray:
    """Frame Ricci values from block entries, shape (..., 4).

    Ric(e_a, e_a) sums the sectional curvatures of the three coordinate
    planes containing e_a; each appears as a diagonal block entry.
    """
    sec01 = blocks[..., 0, 1, 1]
    sec23 = blocks[..., 0, 0, 0]
    sec02 = blocks[..., 1, 1, 1]
    sec31 = blocks[..., 1, 0, 0]
    sec03 = blocks[..., 2, 1, 1]
    sec12 = blocks[..., 2, 0, 0]
    out = np.empty(blocks.shape[:-3] + (4,))
    out[..., 0] = sec01 + sec02 + sec03
    out[..., 1] = sec01 + sec12 + sec31
    out[..., 2] = sec02 + sec12 + sec23
    out[..., 3] = sec03 + sec31 + sec23
    return out


def ricci_diagonal(p: ProfileTriple, r: float, n_grid: int = 1024) -> RicciDiagonal:
    blocks = curvature_blocks(p, r, n_grid=n_grid)
    v = ricci_from_blocks(blocks.blocks)
    return RicciDiagonal(r=blocks.r, ric00=float(v[0]), ric11=float(v[1]),
                         ric22=float(v[2]), ric33=float(v[3]))


# ---------------------------------------------------------------------------
# warm-up demo: T^2-invariant metrics on S^3


def s3_torus_curvature(phi, xi, r: float, h: float = 1e-3) -> tuple[float, float, float]:
    """Eigenvalues of the (diagonal) curvature operator of
    dr^2 + phi^2 dtheta1^2 + xi^2 dtheta2^2 on S^3.

    phi and xi are callables; derivatives are taken by central differences
    with step h.  Returns (-phi''/phi, -xi''/xi, -phi' xi'/(phi xi)).
    """
    if not 0.0 < r < np.pi / 2:
        raise OutOfRange("r must lie in (0, pi/2)")

    def d1(f, x):
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)

    def d2(f, x):
        return (
            -f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)
        ) / (12 * h * h)

    lam1 = -d2(phi, r) / phi(r)
    lam2 = -d2(xi, r) / xi(r)
    lam3 = -d1(phi, r) * d1(xi, r) / (phi(r) * xi(r))
    return float(lam1), float(lam2), float(lam3)
