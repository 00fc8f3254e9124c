"""Command-line front end.

    curvlab certify      --space s4 --metric gz --a 1.3333 --b 0.4
    curvlab flow         --space s4 --metric interpolated --s 0.001 --tmax 0.01
    curvlab reproduce thmB --space cp2
    curvlab profile-dump --space s4 --metric standard --out profiles.csv

Exit codes: 0 success, 1 claim-not-reproduced, 2 invalid config,
3 numerical failure.  Flags override the optional key=value config file;
identical config and seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import flow as fl
from . import positivity as pos
from . import profiles as pf
from . import reports
from .curvature import block_field
from .errors import (
    BlowUp,
    CurvlabError,
    InvalidParams,
    NonPositiveMetric,
    PoleEvaluationFailed,
    ReproductionFailed,
    ShootingFailed,
    StepRejected,
)
from .spaces import SpaceKind, space_by_name

NUMERICAL_ERRORS = (ShootingFailed, PoleEvaluationFailed, NonPositiveMetric,
                    StepRejected, BlowUp)

DEFAULT_B = {"S4": 0.4, "CP2": 0.2}
METRICS = ("standard", "gz", "interpolated")


@dataclass
class RunConfig:
    space: SpaceKind
    metric: str = "standard"
    a: float = 4.0 / 3.0
    b: float | None = None
    s: float = 0.0
    n_grid: int = 1024
    t_max: float = 0.01
    seed: int = 0
    out: Path | None = None

    @property
    def b_value(self) -> float:
        return DEFAULT_B[self.space.name] if self.b is None else self.b

    def validate(self) -> None:
        if self.metric not in METRICS:
            raise InvalidParams(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not 0.0 <= self.s <= 1.0:
            raise InvalidParams(f"interpolation parameter must satisfy 0 <= s <= 1, got {self.s}")
        if self.n_grid < 64:
            raise InvalidParams(f"grid must have at least 64 intervals, got {self.n_grid}")
        if self.t_max < 0.0:
            raise InvalidParams(f"tmax must be nonnegative, got {self.t_max}")
        if self.metric != "standard":
            pf.validate_gz_params(self.space, self.a, self.b_value)

    def as_dict(self) -> dict:
        return {
            "space": self.space.name,
            "metric": self.metric,
            "a": self.a,
            "b": self.b_value,
            "s": self.s,
            "grid": self.n_grid,
            "tmax": self.t_max,
            "seed": self.seed,
        }


def _read_config_file(path: Path) -> dict[str, str]:
    """Flat UTF-8 key=value file; blank lines and #-comments ignored."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidParams(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = {
    "space": str, "metric": str, "a": float, "b": float, "s": float,
    "grid": int, "tmax": float, "seed": int, "out": str,
}


def build_config(args: argparse.Namespace) -> RunConfig:
    file_vals: dict = {}
    if args.config is not None:
        raw = _read_config_file(Path(args.config))
        for key, text in raw.items():
            if key not in _CONFIG_KEYS:
                raise InvalidParams(f"unknown config key {key!r}")
            try:
                file_vals[key] = _CONFIG_KEYS[key](text)
            except ValueError as exc:
                raise InvalidParams(f"config key {key!r}: {exc}") from exc

    def pick(flag, key, default=None):
        if flag is not None:
            return flag
        return file_vals.get(key, default)

    space = space_by_name(pick(args.space, "space", "s4"))
    cfg = RunConfig(
        space=space,
        metric=pick(args.metric, "metric", "standard"),
        a=pick(args.a, "a", 4.0 / 3.0),
        b=pick(args.b, "b", None),
        s=pick(args.s, "s", 0.0),
        n_grid=pick(args.grid, "grid", 1024),
        t_max=pick(args.tmax, "tmax", 0.01),
        seed=pick(args.seed, "seed", 0),
        out=Path(p) if (p := pick(args.out, "out", None)) is not None else None,
    )
    cfg.validate()
    return cfg


def build_triple(cfg: RunConfig) -> pf.SampledTriple:
    if cfg.metric == "standard":
        return pf.standard_profiles(cfg.space).sample(cfg.n_grid)
    params = pf.make_gz_params(cfg.space, cfg.a, cfg.b_value)
    if cfg.metric == "gz":
        return pf.gz_profiles(cfg.space, params, cfg.n_grid)
    return pf.interpolated_profiles(cfg.space, params, cfg.s, cfg.n_grid)


# ---------------------------------------------------------------------------
# subcommands


def cmd_certify(cfg: RunConfig) -> int:
    triple = build_triple(cfg)
    field = block_field(triple, route="auto")
    records = reports.certification_report(field, pos.DEGENERACY_TOL, seed=cfg.seed)
    out = cfg.out or Path("certification.json")
    reports.write_json(out, {"config": cfg.as_dict(), "nodes": records})
    n_mixed = sum(1 for rec in records if rec["verdict"] == "Mixed")
    counts = {}
    for rec in records:
        counts[rec["verdict"]] = counts.get(rec["verdict"], 0) + 1
    print(f"certified {len(records)} nodes: {counts} -> {out}")
    return 1 if n_mixed else 0


def cmd_profile_dump(cfg: RunConfig) -> int:
    triple = build_triple(cfg)
    out = cfg.out or Path("profiles.csv")
    reports.write_profile_csv(out, triple)
    rep = pf.check_smoothness(triple)
    print(reports.to_json(rep.as_dict()))
    print(f"wrote {len(triple.r)} nodes -> {out}")
    return 0


def _flow_tolerance(cfg: RunConfig, triple: pf.SampledTriple) -> float:
    if triple.has_exact_derivatives:
        return max(3.0 * fl.initial_margin_noise(triple, cfg.space), 1e-8)
    return 1e-8


def cmd_flow(cfg: RunConfig) -> int:
    triple = build_triple(cfg)
    state0 = fl.FlowState.from_profiles(triple, cfg.n_grid)
    out = cfg.out or Path("flow_run")
    mixed_tol = _flow_tolerance(cfg, triple)
    manifest: dict = {
        "config": cfg.as_dict(),
        "dt_policy": fl.DtPolicy().as_dict(),
        "mixed_tol": mixed_tol,
    }
    trajectory: list[fl.FlowState] = [state0]
    try:
        trajectory = fl.integrate(state0, cfg.t_max)
        status = 0
    except NUMERICAL_ERRORS as exc:
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        status = 3
    events = [] if len(trajectory) < 2 else (
        [ev] if (ev := fl.detect_mixed_sign(trajectory, mixed_tol=mixed_tol,
                                            seed=cfg.seed)) else [])
    if cfg.metric == "standard":
        lam = 3.0 if cfg.space.is_s4 else 6.0
        manifest["einstein_constant"] = lam
        manifest["homothety_error"] = fl.homothety_error(trajectory, lam)
    reports.write_flow_run(out, trajectory, manifest, events)
    print(f"flowed to t={trajectory[-1].t:.6g} with {len(trajectory)} snapshots -> {out}/")
    if events:
        ev = events[0]
        print(f"NegativePlane event: t={ev.t:.6g} r={ev.r:.6g} sec={ev.sec:.6g}")
    return status


def bisect_certified_s(space: SpaceKind, params: pf.GZParams, n_grid: int = 1024,
                       iters: int = 40) -> float:
    """Largest s (by bisection) with every node strictly certified and the
    explicit witness positive-definite at every node."""

    def ok(s: float) -> bool:
        gs = pf.interpolated_profiles(space, params, s, n_grid)
        field = block_field(gs, route="exact")
        code, *_ = pos.certify_bounds(field.blocks)
        if int(code.min()) != 1:
            return False
        tau = pos.paper_tau_witness(space, params, s, gs.r)
        return bool(pos._lambda_min(field.blocks, tau).min() > 0.0)

    lo = 1e-6
    if not ok(lo):
        return 0.0
    hi = 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _witness_min_lambda(space: SpaceKind, params: pf.GZParams, s: float,
                        n_grid: int) -> float:
    gs = pf.interpolated_profiles(space, params, s, n_grid)
    field = block_field(gs, route="exact")
    tau = pos.paper_tau_witness(space, params, s, gs.r)
    return float(pos._lambda_min(field.blocks, tau).min())


def cmd_reproduce(which: str, cfg: RunConfig) -> int:
    params = pf.make_gz_params(cfg.space, cfg.a, cfg.b_value)
    out = cfg.out or Path(f"reproduce_{which}_{cfg.space.name.lower()}.json")
    s_star = bisect_certified_s(cfg.space, params, cfg.n_grid)
    if s_star <= 0.0:
        reports.write_json(out, {"config": cfg.as_dict(), "s_star": 0.0, "ok": False})
        print("FAILED: no certified s found")
        return 1

    if which == "thmB":
        result = {"config": cfg.as_dict(), "s_star": s_star, "checks": {}}
        all_ok = True
        for s in (s_star / 2.0, s_star / 4.0):
            gs = pf.interpolated_profiles(cfg.space, params, s, cfg.n_grid)
            field = block_field(gs, route="exact")
            code, _, _, _, margin = pos.certify_bounds(field.blocks)
            lam_w = _witness_min_lambda(cfg.space, params, s, cfg.n_grid)
            ok = bool(int(code.min()) == 1 and lam_w > 0.0)
            all_ok &= ok
            result["checks"][f"s={s:.9e}"] = {
                "all_strictly_positive": bool(int(code.min()) == 1),
                "min_margin": float(margin.min()),
                "witness_min_eigenvalue": lam_w,
                "ok": ok,
            }
        result["ok"] = all_ok
        reports.write_json(out, result)
        print(f"thmB on {cfg.space.name}: s* = {s_star:.6e}, "
              f"checks at s*/2 and s*/4 {'pass' if all_ok else 'FAIL'} -> {out}")
        return 0 if all_ok else 1

    if which != "thmA":
        raise InvalidParams(f"unknown reproduction target {which!r}")

    s = s_star / 2.0
    gz = pf.gz_profiles(cfg.space, params, cfg.n_grid)
    mixed_tol = max(3.0 * fl.initial_margin_noise(gz, cfg.space), 1e-8)
    result = {"config": cfg.as_dict(), "s_star": s_star, "s": s,
              "mixed_tol": mixed_tol}

    traj = fl.integrate(fl.FlowState.from_profiles(gz, cfg.n_grid), cfg.t_max,
                        stop_on_mixed=True, mixed_tol=mixed_tol)
    gz_event = fl.detect_mixed_sign(traj, mixed_tol=mixed_tol, seed=cfg.seed)
    result["gz_event"] = reports.event_dict(gz_event) if gz_event else None

    gs = pf.interpolated_profiles(cfg.space, params, s, cfg.n_grid)
    state0 = fl.FlowState.from_profiles(gs, cfg.n_grid)
    m0 = fl.mixed_margin(fl._blocks_of_fields(state0.fields(), cfg.space, state0.dr))
    t0_strict = bool(m0.min() > mixed_tol)
    traj = fl.integrate(state0, cfg.t_max, stop_on_mixed=True, mixed_tol=mixed_tol)
    gs_event = fl.detect_mixed_sign(traj, mixed_tol=mixed_tol, seed=cfg.seed)
    result["gs_initially_strict"] = t0_strict
    result["gs_event"] = reports.event_dict(gs_event) if gs_event else None
    ok = bool(gz_event and gs_event and t0_strict)
    result["ok"] = ok
    reports.write_json(out, result)
    if ok:
        print(f"thmA on {cfg.space.name}: sec>0 metric (s={s:.3e}) develops a "
              f"negative plane at t={gs_event.t:.3e} -> {out}")
    else:
        print(f"thmA on {cfg.space.name}: FAILED "
              f"(gz_event={bool(gz_event)}, gs_event={bool(gs_event)}, "
              f"initial_strict={t0_strict}) -> {out}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvlab",
        description="Cohomogeneity-one metrics on S4/CP2: curvature, "
                    "positivity certificates, Ricci flow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--space", choices=["s4", "cp2"], default=None)
        p.add_argument("--metric", choices=list(METRICS), default=None)
        p.add_argument("--a", type=float, default=None)
        p.add_argument("--b", type=float, default=None)
        p.add_argument("--s", type=float, default=None)
        p.add_argument("--grid", type=int, default=None)
        p.add_argument("--tmax", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--out", type=str, default=None)

    for name in ("certify", "flow", "profile-dump"):
        add_common(sub.add_parser(name))
    rep = sub.add_parser("reproduce")
    rep.add_argument("which", choices=["thmA", "thmB"])
    add_common(rep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "flow":
            return cmd_flow(cfg)
        if args.command == "profile-dump":
            return cmd_profile_dump(cfg)
        return cmd_reproduce(args.which, cfg)
    except InvalidParams as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except ReproductionFailed as exc:
        print(f"reproduction failed: {exc}", file=sys.stderr)
        return 1
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except CurvlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
