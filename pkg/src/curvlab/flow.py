"""Ricci flow of the diagonal profile system by method of lines.

The metric h(r,t)^2 dr^2 + phi^2 Q|n1 + psi^2 Q|n2 + xi^2 Q|n3 evolves by
dg/dt = -2 Ric.  Keeping the coordinate grid fixed and evolving the lapse h
avoids re-parametrizing to arclength: curvature formulas take arclength
derivatives f' = f_r / h, f'' = (f_r/h)_r / h.  The system is only weakly
parabolic (no h'' term appears in dh/dt), but explicit RK4 with a
conservative CFL policy is stable over the short horizons of interest.

Mixed-sign detection scans snapshots with the exact tau-interval
certificates; a verdict of Mixed at any node is refined by Grassmannian
sampling to exhibit a concrete negatively curved plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels, stencils
from .curvature import blocks_from_values, ricci_from_blocks
from .errors import BlowUp, NonPositiveMetric, StepRejected
from .positivity import certify_bounds, min_sec_bruteforce
from .profiles import ProfileTriple, SampledTriple, as_sampled
from .spaces import SpaceKind


@dataclass
class FlowState:
    """Grid samples of the evolving metric at time t (h is the lapse)."""

    space: SpaceKind
    t: float
    r: np.ndarray
    h: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    xi: np.ndarray

    @property
    def dr(self) -> float:
        return float(self.r[1] - self.r[0])

    def fields(self) -> np.ndarray:
        return np.stack([self.h, self.phi, self.psi, self.xi])

    def copy(self) -> "FlowState":
        return FlowState(self.space, self.t, self.r,
                         self.h.copy(), self.phi.copy(), self.psi.copy(), self.xi.copy())

    @classmethod
    def from_profiles(cls, p: ProfileTriple, n_grid: int = 512) -> "FlowState":
        sp = as_sampled(p, n_grid)
        return cls(space=sp.space, t=0.0, r=sp.r, h=np.ones_like(sp.r),
                   phi=sp.phi.copy(), psi=sp.psi.copy(), xi=sp.xi.copy())


@dataclass(frozen=True)
class FlowEvent:
    """First detection of a negatively curved plane along the flow."""

    t: float
    r: float
    plane: str | np.ndarray
    sec: float


@dataclass(frozen=True)
class DtPolicy:
    """Explicit-step CFL policy dt = cfl * (min(h) dr)^2 / max(1, max|sec|)."""

    cfl: float = 0.2
    recompute_every: int = 16
    blowup_threshold: float = 1e6
    max_steps: int = 50_000_000

    def as_dict(self) -> dict:
        return {"kind": "cfl", "cfl": self.cfl,
                "recompute_every": self.recompute_every,
                "blowup_threshold": self.blowup_threshold}


def _validate(fields: np.ndarray, t: float):
    h, phi, psi, xi = fields
    if not (h > 0.0).all():
        raise NonPositiveMetric(f"lapse h reached <= 0 at t={t:.6g}")
    if not (phi[1:] > 0.0).all() or not (xi[:-1] > 0.0).all() or not (psi > 0.0).all():
        raise NonPositiveMetric(f"a profile reached <= 0 at t={t:.6g}")


def _blocks_of_fields(fields: np.ndarray, space: SpaceKind, dr: float) -> np.ndarray:
    """Curvature blocks of a lapse state, poles repaired, shape (N+1,3,2,2)."""
    d1, d2 = stencils.arclength_derivatives(fields, space, dr)
    _, phi, psi, xi = fields
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = blocks_from_values(phi, psi, xi, d1[0], d1[1], d1[2], d2[0], d2[1], d2[2])
    flat = raw.reshape(raw.shape[0], -1).T
    return stencils.pole_extrapolate(flat).T.reshape(raw.shape)


def _rhs(fields: np.ndarray, space: SpaceKind, dr: float) -> tuple[np.ndarray, float]:
    """Time derivative of (h, phi, psi, xi) and max |sec| for the CFL policy."""
    d1, d2 = stencils.arclength_derivatives(fields, space, dr)
    _, phi, psi, xi = fields
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = blocks_from_values(phi, psi, xi, d1[0], d1[1], d1[2], d2[0], d2[1], d2[2])
        ric = ricci_from_blocks(raw)
    ric = stencils.pole_extrapolate(ric.T).T
    out = -fields * ric.T
    out[1, 0] = 0.0
    out[3, -1] = 0.0
    s = stencils.NGHOST
    max_sec = float(np.abs(np.diagonal(raw[s:-s], axis1=-2, axis2=-1)).max())
    return out, max_sec


def flow_rhs(state: FlowState) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(dh/dt, dphi/dt, dpsi/dt, dxi/dt) = -(field) * (its frame Ricci value)."""
    fields = state.fields()
    _validate(fields, state.t)
    out, _ = _rhs(fields, state.space, state.dr)
    return out[0], out[1], out[2], out[3]


def geometric_snapshots(t_max: float, t_first: float = 1e-6, ratio: float = 1.15) -> np.ndarray:
    """Geometric snapshot ladder in (0, t_max]; dense enough near 0 that the
    first mixed-sign time is localized to ~15%."""
    if t_max <= 0.0:
        return np.array([])
    times = [min(t_first, t_max)]
    while times[-1] < t_max:
        times.append(min(times[-1] * ratio, t_max))
    return np.array(times)


def mixed_margin(state_blocks: np.ndarray) -> np.ndarray:
    """Per-node tau-maximized margins (negative where sec has mixed sign)."""
    _, _, _, _, margin = certify_bounds(state_blocks)
    return margin


def initial_margin_noise(p: SampledTriple, space: SpaceKind) -> float:
    """Discretization floor for margins: chain route vs the flow's own
    stencil route (lapse one) at t=0.

    Used to set the detection threshold; the flow immediately smooths the
    profiles, so the t=0 value bounds later stencil noise.  Runs comparing
    event times across grid resolutions must share one threshold (taken
    from the coarser grid), otherwise the threshold-crossing time scales
    with the grid noise instead of the geometry.
    """
    from .curvature import block_field

    if not p.has_exact_derivatives:
        return 1e-8
    m_exact = mixed_margin(block_field(p, route="exact").blocks)
    state = FlowState.from_profiles(p, p.n_grid)
    m_flow = mixed_margin(_blocks_of_fields(state.fields(), space, state.dr))
    return float(np.abs(m_exact - m_flow).max())


def integrate(
    state0: FlowState,
    t_max: float,
    dt_policy: DtPolicy | None = None,
    snapshot_times: np.ndarray | None = None,
    stop_on_mixed: bool = False,
    mixed_tol: float = 1e-8,
) -> list[FlowState]:
    """Explicit RK4 method-of-lines trajectory with snapshot states.

    Snapshot times are hit exactly (steps are clipped), so event times are
    comparable across grid resolutions.  With stop_on_mixed the run halts
    at the first snapshot containing a node with margin < -mixed_tol.
    """
    policy = dt_policy or DtPolicy()
    space, dr = state0.space, state0.dr
    fields = np.ascontiguousarray(state0.fields(), dtype=float)
    _validate(fields, state0.t)
    t = float(state0.t)
    snaps = geometric_snapshots(t_max) if snapshot_times is None else np.asarray(snapshot_times)
    snaps = snaps[(snaps > t) & (snaps <= t_max + 1e-300)]
    stops = list(np.unique(np.concatenate([snaps, [t_max]])))

    def snap() -> FlowState:
        return FlowState(space, t, state0.r, fields[0].copy(), fields[1].copy(),
                         fields[2].copy(), fields[3].copy())

    trajectory = [state0.copy()]
    if t_max <= t:
        return trajectory

    use_kernel = _kernels.HAVE_NUMBA
    if use_kernel:
        chan, node, sign = stencils.ghost_maps(space.name, fields.shape[1])
        weights = np.ascontiguousarray(stencils._extrap_weights(stencils.EXTRAP_ORDERS[1]))
        workspace = _kernels.make_workspace(fields.shape[1])

    _, max_sec = _rhs(fields, space, dr)
    steps_since = 0
    n_steps = 0
    while stops:
        target = stops.pop(0)
        while t < target - 1e-18:
            if steps_since >= policy.recompute_every:
                steps_since = 0
                if not use_kernel:
                    _, max_sec = _rhs(fields, space, dr)
                if max_sec > policy.blowup_threshold:
                    raise BlowUp(f"max |sec| = {max_sec:.3e} at t={t:.6g}")
                if not (np.isfinite(max_sec) and np.isfinite(fields).all()):
                    raise StepRejected(
                        f"state became non-finite at t={t:.6g}; "
                        "shrink the CFL factor or refine the grid"
                    )
            dt = policy.cfl * (fields[0].min() * dr) ** 2 / max(1.0, max_sec)
            if not dt > 0.0:
                raise StepRejected(f"time step collapsed to {dt:.3e} at t={t:.6g}")
            dt = min(dt, target - t)
            if use_kernel:
                max_sec = _kernels.rk4_step(fields, dt, chan, node, sign, weights,
                                            dr, *workspace)
            else:
                k1, _ = _rhs(fields, space, dr)
                k2, _ = _rhs(fields + 0.5 * dt * k1, space, dr)
                k3, _ = _rhs(fields + 0.5 * dt * k2, space, dr)
                k4, _ = _rhs(fields + dt * k3, space, dr)
                fields += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                fields[1, 0] = 0.0
                fields[3, -1] = 0.0
            t += dt
            steps_since += 1
            n_steps += 1
            if n_steps > policy.max_steps:
                raise StepRejected(f"exceeded {policy.max_steps} steps")
        _validate(fields, t)
        t = target  # land exactly on the stop time
        trajectory.append(snap())
        if stop_on_mixed:
            blocks = _blocks_of_fields(fields, space, dr)
            if (mixed_margin(blocks) < -mixed_tol).any():
                return trajectory
    return trajectory


def detect_mixed_sign(
    trajectory: list[FlowState],
    mixed_tol: float = 1e-8,
    n_refine: int = 10_000,
    seed: int = 0,
) -> FlowEvent | None:
    """Earliest snapshot exhibiting a negatively curved plane, or None.

    Each snapshot is certified node by node; on a Mixed verdict the worst
    node's blocks are handed to the Grassmannian sampler (plus coordinate
    planes) to produce a concrete witness plane.  Sampling is escalated
    once if the margin is negative but no sampled plane is; if it still
    fails, later (more negative) snapshots are scanned.
    """
    for state in trajectory:
        blocks = _blocks_of_fields(state.fields(), state.space, state.dr)
        margins = mixed_margin(blocks)
        j = int(margins.argmin())
        if margins[j] >= -mixed_tol:
            continue
        for n in (n_refine, 10 * n_refine):
            bf = min_sec_bruteforce(blocks[j], n=n, seed=seed)
            if bf.min_sec < 0.0:
                plane = bf.plane_label if bf.plane_label is not None else bf.sigma
                return FlowEvent(t=state.t, r=float(state.r[j]), plane=plane,
                                 sec=bf.min_sec)
    return None


def monitor_offdiagonal(state: FlowState) -> float:
    """Max |Ric(e_i, e_j)|, i != j, by brute-force frame sums.

    The evolved family is diagonal by construction, so the frame sums
    couple only complementary coordinate 2-planes and vanish identically;
    this assertion documents the diagonality assumption for CP2, where
    general invariant metrics admit an off-diagonal g(E23, E31) term.
    """
    from .positivity import plane_components

    blocks = _blocks_of_fields(state.fields(), state.space, state.dr)
    n = blocks.shape[0]
    r6 = np.zeros((n, 6, 6))
    for i in range(3):
        r6[:, 2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blocks[:, i]
    eye = np.eye(4)
    worst = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            total = np.zeros(n)
            for k in range(4):
                if k == i or k == j:
                    continue
                pik = plane_components(eye[i], eye[k])
                pjk = plane_components(eye[j], eye[k])
                total += pik @ r6 @ pjk
            worst = max(worst, float(np.abs(total).max()))
    return worst


def homothety_error(trajectory: list[FlowState], einstein_const: float) -> float:
    """Sup-norm deviation from the exact shrinker g(t) = (1 - 2 lambda t) g(0)."""
    base = trajectory[0].fields()
    worst = 0.0
    for state in trajectory[1:]:
        factor = math.sqrt(max(1.0 - 2.0 * einstein_const * state.t, 0.0))
        worst = max(worst, float(np.abs(state.fields() - factor * base).max()))
    return worst
