"""Finite-difference machinery on the orbit interval.

Profiles live on uniform grids r_k = k*dr, k = 0..N, with the two singular
orbits at k=0 and k=N.  Smooth invariant metrics obey pointwise reflection
rules there (phi odd at r=0, psi/xi swapping or even, everything suitably
mirrored at r=L), so derivatives are taken with 4th-order central stencils
on ghost-extended arrays.  The ghost rules keep the truncation error itself
parity-correct, which is what makes curvature entries with removable
singularities finite on the grid.

Second-derivative stencils subtract the center value first so that constant
arrays differentiate to exactly zero; Grove-Ziller plateaus rely on this.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .spaces import SpaceKind

NGHOST = 4

# Channel order used throughout: 0=h (lapse), 1=phi, 2=psi, 3=xi.
_CH_H, _CH_PHI, _CH_PSI, _CH_XI = 0, 1, 2, 3


@lru_cache(maxsize=32)
def ghost_maps(space_name: str, n_nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Channel/node gather maps and signs for the parity ghost extension.

    Returns (chan, node, sign), each (4, n_nodes + 2*NGHOST), such that
    ext[c, j] = F[chan[c, j], node[c, j]] * sign[c, j] extends
    F = [h, phi, psi, xi] past both poles by the reflection rules.
    """
    n = n_nodes
    chan = np.empty((4, n + 2 * NGHOST), dtype=np.int64)
    node = np.empty((4, n + 2 * NGHOST), dtype=np.int64)
    sign = np.ones((4, n + 2 * NGHOST))

    left = slice(0, NGHOST)
    right = slice(NGHOST + n, 2 * NGHOST + n)
    kl = np.arange(NGHOST, 0, -1)  # position p holds the mirror of node NGHOST-p
    kr = np.arange(1, NGHOST + 1)  # right ghost j holds the mirror of node (n-1)-j-1...
    for c in range(4):
        chan[c, :] = c
        node[c, NGHOST : NGHOST + n] = np.arange(n)
        node[c, left] = kl
        node[c, right] = (n - 1) - kr

    is_s4 = space_name == "S4"
    # r = 0 rules
    chan[_CH_H, left] = _CH_H
    chan[_CH_PHI, left] = _CH_PHI
    sign[_CH_PHI, left] = -1.0
    if is_s4:
        chan[_CH_PSI, left] = _CH_XI
        chan[_CH_XI, left] = _CH_PSI
    else:
        chan[_CH_PSI, left] = _CH_PSI
        chan[_CH_XI, left] = _CH_XI
    # r = L rules (both spaces)
    chan[_CH_H, right] = _CH_H
    chan[_CH_PHI, right] = _CH_PSI
    chan[_CH_PSI, right] = _CH_PHI
    chan[_CH_XI, right] = _CH_XI
    sign[_CH_XI, right] = -1.0
    return chan, node, sign


def extend_fields(fields: np.ndarray, space: SpaceKind) -> np.ndarray:
    """Ghost-extend stacked fields (4, N+1) -> (4, N+1+2*NGHOST)."""
    n = fields.shape[1]
    chan, node, sign = ghost_maps(space.name, n)
    return fields.ravel()[chan * n + node] * sign


def deriv1(ext: np.ndarray, dr: float, margin: int = 0) -> np.ndarray:
    """4th-order first derivative of a ghost-extended array.

    Returns values on core nodes widened by `margin` on each side
    (margin <= NGHOST - 2).
    """
    s = NGHOST - margin
    n = ext.shape[-1]
    a = ext[..., s - 2 : n - s - 2]
    b = ext[..., s - 1 : n - s - 1]
    c = ext[..., s + 1 : n - s + 1]
    d = ext[..., s + 2 : n - s + 2]
    # grouped so constant arrays differentiate to exactly zero
    return ((a - d) + 8.0 * (c - b)) / (12.0 * dr)


def deriv2(ext: np.ndarray, dr: float) -> np.ndarray:
    """4th-order second derivative on core nodes; exact zero on constants."""
    s = NGHOST
    n = ext.shape[-1]
    f0 = ext[..., s : n - s]
    dm2 = ext[..., s - 2 : n - s - 2] - f0
    dm1 = ext[..., s - 1 : n - s - 1] - f0
    dp1 = ext[..., s + 1 : n - s + 1] - f0
    dp2 = ext[..., s + 2 : n - s + 2] - f0
    return (16.0 * (dm1 + dp1) - (dm2 + dp2)) / (12.0 * dr * dr)


def profile_derivatives(
    phi: np.ndarray, psi: np.ndarray, xi: np.ndarray, space: SpaceKind, dr: float
) -> tuple[np.ndarray, np.ndarray]:
    """First and second r-derivatives of (phi, psi, xi), shapes (3, N+1)."""
    fields = np.stack([np.ones_like(phi), phi, psi, xi])
    ext = extend_fields(fields, space)
    d1 = deriv1(ext, dr)
    d2 = deriv2(ext, dr)
    return d1[1:], d2[1:]


def arclength_derivatives(
    fields: np.ndarray, space: SpaceKind, dr: float
) -> tuple[np.ndarray, np.ndarray]:
    """Arclength derivatives f' = f_r/h and f'' = (f_r/h)_r/h of (phi,psi,xi).

    `fields` is the stacked (4, N+1) array [h, phi, psi, xi].  The second
    derivative is a two-pass stencil: v = f_r/h is formed on a 2-node margin
    and differentiated again, so the result is 4th order in dr.
    """
    ext = extend_fields(fields, space)
    vm = deriv1(ext, dr, margin=2) / ext[0:1, 2:-2]  # (4, N+5) incl. 2-node margins
    n = vm.shape[1]
    a = vm[1:, 0 : n - 4]
    b = vm[1:, 1 : n - 3]
    c = vm[1:, 3 : n - 1]
    d = vm[1:, 4:n]
    d2 = ((a - d) + 8.0 * (c - b)) / (12.0 * dr) / fields[0]
    d1 = vm[1:, 2:-2]
    return d1, d2


def one_sided_deriv1(values: np.ndarray, dr: float, at_start: bool) -> float:
    """4th-order one-sided first derivative at the first or last node."""
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * dr)
    if at_start:
        return float(c @ values[:5])
    return float(-(c @ values[-1:-6:-1]))


# Polynomial extrapolation toward the poles.  Entry functions of smooth
# metrics extend continuously to r=0 and r=L; nodes within NGHOST*dr of a
# pole are replaced by least-squares polynomial extrapolations from the
# twelve nearest safe interior nodes.  Weights depend only on node offsets,
# not on dr.
POLE_SOURCES = np.arange(NGHOST, NGHOST + 12)
EXTRAP_ORDERS = (4, 5)


@lru_cache(maxsize=8)
def _extrap_weights(degree: int) -> np.ndarray:
    """(NGHOST, 12) weights: target offsets 0..NGHOST-1 from source offsets 4..15."""
    x = POLE_SOURCES / POLE_SOURCES[-1]
    v = np.vander(x, degree + 1, increasing=True)
    pinv = np.linalg.pinv(v)
    targets = np.arange(NGHOST) / POLE_SOURCES[-1]
    e = np.vander(targets, degree + 1, increasing=True)
    return e @ pinv


def pole_extrapolate(values: np.ndarray, degree: int = EXTRAP_ORDERS[1]) -> np.ndarray:
    """Replace the NGHOST nodes nearest each pole by extrapolated values.

    `values` has node count along the last axis; both poles are treated.
    """
    w = _extrap_weights(degree)
    out = np.array(values, copy=True)
    out[..., :NGHOST] = values[..., POLE_SOURCES] @ w.T
    out[..., -NGHOST:] = values[..., -1 - POLE_SOURCES] @ w.T[:, ::-1]
    return out


def pole_disagreement(values: np.ndarray) -> float:
    """Max difference between the two extrapolation orders at the poles."""
    wlo, whi = _extrap_weights(EXTRAP_ORDERS[0]), _extrap_weights(EXTRAP_ORDERS[1])
    left = values[..., POLE_SOURCES]
    right = values[..., -1 - POLE_SOURCES]
    d = max(
        np.abs(left @ (whi - wlo).T).max(),
        np.abs(right @ (whi - wlo).T).max(),
    )
    return float(d)


_PARITY_POWERS = {"even": (0, 2, 4, 6), "odd": (1, 3, 5), "r2even": (2, 4, 6)}


def parity_fit_residual(r: np.ndarray, values: np.ndarray, parity: str) -> float:
    """Max-abs residual of a local polynomial fit with the given parity.

    Fits the 8 supplied nodes (nearest an endpoint, endpoint at r=0 in the
    local coordinate) to a degree-6 polynomial restricted to even, odd, or
    r^2*(even) powers.
    """
    powers = _PARITY_POWERS[parity]
    scale = np.abs(r).max()
    x = r / scale
    basis = np.stack([x**p for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    return float(np.abs(values - basis @ coef).max())
