"""File formats: CSV dumps, JSON reports, flow run directories.

All numbers are written with 17 significant digits and lowercase exponents
so doubles round-trip exactly and identical runs produce byte-identical
files.  JSON is serialized by a small canonical writer (sorted keys, fixed
float rendering) rather than json.dumps, which does not let one control
float formatting.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .curvature import BlockField
from .flow import FlowEvent, FlowState
from .positivity import BruteForceResult, certify_bounds
from .profiles import SampledTriple, SmoothnessReport


def fmt(x: float) -> str:
    """17-significant-digit decimal, round-trip exact for doubles."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def to_json(obj, indent: int = 0) -> str:
    """Canonical JSON: sorted dict keys, floats via fmt()."""
    pad = "  " * indent
    pad1 = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad1}"{k}": {to_json(obj[k], indent + 1)}' for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{pad1}{to_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return fmt(obj)


def write_json(path: Path, obj) -> None:
    path.write_text(to_json(obj) + "\n")


def write_profile_csv(path: Path, p: SampledTriple) -> None:
    """CSV dump `r,phi,psi,xi`, one row per node."""
    rows = ["r,phi,psi,xi"]
    for k in range(len(p.r)):
        rows.append(f"{fmt(p.r[k])},{fmt(p.phi[k])},{fmt(p.psi[k])},{fmt(p.xi[k])}")
    path.write_text("\n".join(rows) + "\n")


def write_curvature_csv(path: Path, field: BlockField) -> None:
    """CSV dump of the three 2x2 blocks at every node."""
    header = "r," + ",".join(
        f"R{i}_{ab}" for i in (1, 2, 3) for ab in ("11", "12", "22")
    )
    rows = [header]
    for k in range(len(field.r)):
        b = field.blocks[k]
        vals = [field.r[k]]
        for i in range(3):
            vals += [b[i, 0, 0], b[i, 0, 1], b[i, 1, 1]]
        rows.append(",".join(fmt(v) for v in vals))
    path.write_text("\n".join(rows) + "\n")


def smoothness_report_dict(rep: SmoothnessReport) -> dict:
    return rep.as_dict()


_VERDICT_NAMES = {1: "StrictlyPositive", 0: "NonnegativeOnly", -1: "Mixed"}


def certification_report(
    field: BlockField,
    degeneracy_tol: float,
    n_samples: int = 4096,
    seed: int = 0,
) -> list[dict]:
    """Per-node records {r, tau_lo, tau_hi, margin, verdict, min_sec_sampled}.

    Verdicts tolerate margins within the field's pole-extrapolation
    disagreement, which bounds the trustworthiness of the near-pole block
    entries.  One seeded batch of sample planes (plus the coordinate
    planes) is shared across nodes; the sampled minimum is a falsifier
    column, not a proof.
    """
    from .positivity import _COORDINATE_PLANES, plane_components, sec_of_planes

    code, witness, lo, hi, margin = certify_bounds(
        field.blocks, degeneracy_tol, abs_tol=field.pole_disagreement
    )
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_samples, 4))
    y = rng.standard_normal((n_samples, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    y -= (y * x).sum(axis=1, keepdims=True) * x
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    sigma = plane_components(x, y)
    eye = np.eye(4)
    coord = np.stack([plane_components(eye[i], eye[j]) for _, (i, j) in _COORDINATE_PLANES])
    sigma = np.concatenate([coord, sigma])
    secs = sec_of_planes(field.blocks[:, None, :, :, :], sigma[None, :, :])
    min_sec = secs.min(axis=1)

    out = []
    for k in range(len(field.r)):
        empty = lo[k] > hi[k]
        out.append(
            {
                "r": float(field.r[k]),
                "tau_lo": None if empty else float(lo[k]),
                "tau_hi": None if empty else float(hi[k]),
                "margin": float(margin[k]),
                "verdict": _VERDICT_NAMES[int(code[k])],
                "min_sec_sampled": float(min_sec[k]),
            }
        )
    return out


def write_snapshot_csv(path: Path, state: FlowState) -> None:
    """Snapshot file: a `t` header line, then `r,h,phi,psi,xi` rows."""
    rows = [f"t,{fmt(state.t)}", "r,h,phi,psi,xi"]
    for k in range(len(state.r)):
        rows.append(
            f"{fmt(state.r[k])},{fmt(state.h[k])},{fmt(state.phi[k])},"
            f"{fmt(state.psi[k])},{fmt(state.xi[k])}"
        )
    path.write_text("\n".join(rows) + "\n")


def event_dict(ev: FlowEvent) -> dict:
    plane = ev.plane if isinstance(ev.plane, str) else [float(v) for v in ev.plane]
    return {"t": ev.t, "r": ev.r, "plane": plane, "sec": ev.sec}


def write_flow_run(
    out_dir: Path,
    trajectory: list[FlowState],
    manifest_extra: dict,
    events: list[FlowEvent],
) -> Path:
    """Write one snapshot file per state plus the run manifest."""
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for k, state in enumerate(trajectory):
        name = f"snapshot_{k:04d}.csv"
        write_snapshot_csv(out_dir / name, state)
        names.append(name)
    manifest = dict(manifest_extra)
    manifest["snapshots"] = names
    manifest["events"] = [event_dict(e) for e in events]
    write_json(out_dir / "manifest.json", manifest)
    return out_dir / "manifest.json"


def bruteforce_dict(bf: BruteForceResult) -> dict:
    return {
        "min_sec": bf.min_sec,
        "plane_label": bf.plane_label,
        "sigma": [float(v) for v in bf.sigma],
    }
