"""Command-line front end.

``irs-mac regions`` computes boundary CSVs for the requested methods on one
seeded realization plus a containment/area comparison JSON and a run
manifest. ``irs-mac validate`` sweeps seeded realizations through the
cross-method invariants (bound orderings, deployment-containment checks,
SDP certificates) and reports pass/fail counts.

Exit codes: 0 success, 1 validation failure, 2 usage/config error.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channel_model import (
    Deployment,
    ScenarioConfig,
    effective_channel,
    generate_realization,
    load_scenario_config,
)
from .distributed_capacity import distributed_capacity_region
from .oracle import BudgetExceededError, GridSpec, oracle_region
from .rate_geometry import (
    RateRegion,
    contains,
    mac_pentagon,
    pentagon_region,
    region_area,
)
from .rate_profile_inner import (
    DecodingOrder,
    RateProfileQuery,
    centralized_contains_distributed,
    heuristic_twin_phases,
    inner_bound,
    maximize_rate_profile,
)
from .sdr_outer import build_quadratic_form, outer_bound, received_power

METHODS = ("no-irs", "distributed", "centralized-inner", "centralized-outer",
           "heuristic", "oracle")
DEFAULT_METHODS = METHODS[:-1]

CONTAINMENT_TOL = 1e-6

_THREADS_ENV = "IRS_MAC_THREADS"


@dataclass
class RunManifest:
    config: dict
    rng_seed: int
    methods: list[str]
    runtime_s: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    library_version: str = __version__

    def to_json_dict(self) -> dict:
        return {
            "library_version": self.library_version,
            "config": self.config,
            "rng_seed": self.rng_seed,
            "methods": self.methods,
            "runtime_s": self.runtime_s,
            "outputs": self.outputs,
        }


class UsageError(Exception):
    """Bad flags or config; maps to exit code 2."""


def _write_region_csv(path: Path, region: RateRegion) -> None:
    lines = [f"# irs-mac v{__version__}", "r1_bps_hz,r2_bps_hz"]
    lines += [f"{v.r1!r},{v.r2!r}" for v in region.vertices]
    path.write_text("\n".join(lines) + "\n")


def _config_snapshot(cfg: ScenarioConfig) -> dict:
    return {
        "m_total": cfg.m_total,
        "m_split": list(cfg.m_split),
        "p_max": list(cfg.p_max),
        "noise_power": cfg.noise_power,
        "ap_position": list(cfg.ap_position),
        "user_positions": [list(p) for p in cfg.user_positions],
        "irs_positions_distributed": [list(p) for p in cfg.irs_positions_distributed],
        "irs_position_centralized": list(cfg.irs_position_centralized),
        "pathloss_ref": cfg.pathloss_ref,
        "pathloss_exponent": cfg.pathloss_exponent,
        "direct_links_enabled": cfg.direct_links_enabled,
        "twin_mode": cfg.twin_mode,
        "rng_seed": cfg.rng_seed,
    }


def _compute_method(method: str, real, cfg: ScenarioConfig, alpha_samples: int,
                    oracle_grid: GridSpec):
    """Returns (region, extras dict for the comparison/trace JSON)."""
    if method == "no-irs":
        pent = mac_pentagon(abs(real.h_bar[0]), abs(real.h_bar[1]),
                            cfg.p_max[0], cfg.p_max[1], cfg.noise_power)
        return pentagon_region(pent), {}
    if method == "distributed":
        sol = distributed_capacity_region(real, cfg)
        return sol.region, {"gains": list(sol.gains)}
    if method == "centralized-inner":
        ib = inner_bound(real, cfg, alpha_samples=alpha_samples)
        return ib.region, {"inner": ib}
    if method == "centralized-outer":
        ob = outer_bound(real, cfg)
        return ob.region, {"sdp": ob.sdp.to_json_dict(),
                           "caps": [ob.r1_cap, ob.r2_cap, ob.r12_cap]}
    if method == "heuristic":
        if not cfg.twin_mode:
            raise UsageError("the heuristic method needs twin_mode = true")
        phases = heuristic_twin_phases(real, 0.0, 0.0)
        gains = [abs(effective_channel(real, phases, k)) for k in (0, 1)]
        pent = mac_pentagon(gains[0], gains[1], cfg.p_max[0], cfg.p_max[1],
                            cfg.noise_power)
        return pentagon_region(pent), {"gains": gains}
    if method == "oracle":
        region = oracle_region(real, cfg, oracle_grid, Deployment.CENTRALIZED)
        return region, {}
    raise UsageError(f"unknown method {method!r}")


def _inner_samples_csv(path: Path, ib) -> None:
    lines = [f"# irs-mac v{__version__}",
             "alpha,order,r1_bps_hz,r2_bps_hz,sweeps,beta"]
    for s in ib.samples:
        lines.append(f"{s.alpha!r},{s.order.value},{s.pair.r1!r},{s.pair.r2!r},"
                     f"{s.sweeps},{s.beta!r}")
    path.write_text("\n".join(lines) + "\n")


def cmd_regions(config_path: str, methods, out_dir: str,
                seed: int | None = None, alpha_samples: int = 100,
                oracle_l0: int = 256, verbose_trace: bool = False) -> RunManifest:
    """Compute one region CSV per method plus comparison and manifest JSON."""
    cfg = load_scenario_config(config_path)
    if seed is not None:
        cfg = cfg.replace(rng_seed=seed)
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    real = generate_realization(cfg)
    grid = GridSpec(l0=oracle_l0)

    manifest = RunManifest(config=_config_snapshot(cfg), rng_seed=cfg.rng_seed,
                           methods=list(methods))
    regions: dict[str, RateRegion] = {}
    extras: dict[str, dict] = {}
    skipped: dict[str, str] = {}

    def run_one(method):
        t0 = time.perf_counter()
        region, extra = _compute_method(method, real, cfg, alpha_samples, grid)
        return method, region, extra, time.perf_counter() - t0

    workers = int(os.environ.get(_THREADS_ENV, "0")) or min(4, len(methods)) or 1
    results = []
    if workers > 1 and len(methods) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_one, m) for m in methods]
            for fut in futures:
                try:
                    results.append(fut.result())
                except BudgetExceededError as exc:
                    skipped["oracle"] = str(exc)
    else:
        for m in methods:
            try:
                results.append(run_one(m))
            except BudgetExceededError as exc:
                skipped[m] = str(exc)

    for method, region, extra, dt in results:
        regions[method] = region
        extras[method] = extra
        manifest.runtime_s[method] = dt

    for method in sorted(regions):
        csv_path = out / f"{method}.csv"
        _write_region_csv(csv_path, regions[method])
        manifest.outputs[method] = str(csv_path)
        if method == "centralized-inner":
            samples_path = out / "centralized-inner-samples.csv"
            _inner_samples_csv(samples_path, extras[method]["inner"])
            manifest.outputs["centralized-inner-samples"] = str(samples_path)
            if verbose_trace:
                trace_path = out / "centralized-inner-traces.json"
                traces = [{"alpha": s.alpha, "order": s.order.value,
                           **s.trace.to_json_dict()}
                          for s in extras[method]["inner"].samples]
                trace_path.write_text(json.dumps(traces, indent=1))
                manifest.outputs["centralized-inner-traces"] = str(trace_path)
        if method == "centralized-outer":
            sdp_path = out / "centralized-outer-sdp.json"
            sdp_path.write_text(json.dumps(extras[method]["sdp"], indent=1))
            manifest.outputs["centralized-outer-sdp"] = str(sdp_path)

    comparison = {
        "library_version": __version__,
        "tolerance": CONTAINMENT_TOL,
        "skipped": skipped,
        "areas": {m: region_area(r) for m, r in regions.items()},
        "contains": {
            outer_m: {inner_m: contains(regions[outer_m], regions[inner_m],
                                        tol=CONTAINMENT_TOL)
                      for inner_m in sorted(regions)}
            for outer_m in sorted(regions)
        },
    }
    comparison_path = out / "comparison.json"
    comparison_path.write_text(json.dumps(comparison, indent=1, sort_keys=True))
    manifest.outputs["comparison"] = str(comparison_path)

    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest.to_json_dict(), indent=1,
                                        sort_keys=True))
    for p in manifest.outputs.values():
        if not (Path(p).exists() and Path(p).stat().st_size > 0):
            raise RuntimeError(f"output {p} missing or empty")
    return manifest


def cmd_validate(seed_count: int, sizes, base_cfg: ScenarioConfig | None = None,
                 alpha_samples: int = 25, report=print) -> int:
    """Run the cross-method invariant suite over seeded realizations.

    For each size M and seed: with direct links, checks the containment
    chain no-IRS <= distributed and inner <= outer, the per-user corner
    consistency of the inner bound against the outer caps, the SDP
    certificate against 100 random phase vectors, and the alternating
    optimizer's monotonicity; with zero direct links and twin fading, checks
    that the centralized deployment covers the distributed region. Returns
    the number of failed checks.
    """
    base = base_cfg or ScenarioConfig()
    checks = {
        "no_irs_within_distributed": 0,
        "distributed_region_valid": 0,
        "inner_within_outer": 0,
        "corner_consistency": 0,
        "sdp_certificate": 0,
        "beta_monotone": 0,
        "centralized_covers_distributed": 0,
    }
    failures = dict.fromkeys(checks, 0)

    for m in sizes:
        split = (m // 2, m - m // 2)
        for seed in range(seed_count):
            cfg = base.replace(m_total=m, m_split=split, rng_seed=seed)
            real = generate_realization(cfg)

            pent = mac_pentagon(abs(real.h_bar[0]), abs(real.h_bar[1]),
                                cfg.p_max[0], cfg.p_max[1], cfg.noise_power)
            no_irs = pentagon_region(pent)
            dist = distributed_capacity_region(real, cfg)
            checks["no_irs_within_distributed"] += 1
            if not contains(dist.region, no_irs, tol=CONTAINMENT_TOL):
                failures["no_irs_within_distributed"] += 1
            checks["distributed_region_valid"] += 1
            try:
                dist.region.validate()
            except ValueError:
                failures["distributed_region_valid"] += 1

            ib = inner_bound(real, cfg, alpha_samples=alpha_samples)
            ob = outer_bound(real, cfg)
            checks["inner_within_outer"] += 1
            if not contains(ob.region, ib.region, tol=1e-9):
                failures["inner_within_outer"] += 1

            checks["corner_consistency"] += 1
            t1 = maximize_rate_profile(
                real, cfg, RateProfileQuery(1.0, DecodingOrder.USER1_FIRST))
            t2 = maximize_rate_profile(
                real, cfg, RateProfileQuery(1.0, DecodingOrder.USER2_FIRST))
            if (abs(t1.final_r - ob.r1_cap) > 1e-9
                    or abs(t2.final_r - ob.r2_cap) > 1e-9):
                failures["corner_consistency"] += 1

            checks["sdp_certificate"] += 1
            form = build_quadratic_form(real, cfg)
            report_sdp = ob.sdp
            rng = np.random.default_rng(np.random.SeedSequence((seed, m, 7)))
            bound = form.constant + report_sdp.dual_value
            ok = report_sdp.gap <= 1e-6 * (1.0 + np.linalg.norm(form.matrix)) + 1e-12
            for _ in range(100):
                phi = np.exp(2j * np.pi * rng.random(cfg.m_total))
                if received_power(real, cfg, phi) > bound + 1e-9 * (1.0 + abs(bound)):
                    ok = False
                    break
            if not ok:
                failures["sdp_certificate"] += 1

            checks["beta_monotone"] += 1
            if any(b < a for s in ib.samples
                   for a, b in zip(s.trace.beta_history, s.trace.beta_history[1:])):
                failures["beta_monotone"] += 1

            cfg0 = cfg.replace(direct_links_enabled=False)
            real0 = generate_realization(cfg0)
            checks["centralized_covers_distributed"] += 1
            ok, _ = centralized_contains_distributed(real0, cfg0)
            if not ok:
                failures["centralized_covers_distributed"] += 1

    total_failures = sum(failures.values())
    for name in checks:
        status = "PASS" if failures[name] == 0 else "FAIL"
        report(f"{status} {name}: {checks[name] - failures[name]}/{checks[name]}")
    report(f"{'PASS' if total_failures == 0 else 'FAIL'} total: "
           f"{sum(checks.values()) - total_failures}/{sum(checks.values())} checks")
    return total_failures


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irs-mac",
        description="Capacity regions of a reflecting-surface-aided two-user MAC")
    parser.add_argument("--version", action="version",
                        version=f"irs-mac {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    regions = sub.add_parser("regions", help="compute region CSVs for one realization")
    regions.add_argument("--config", required=True, help="scenario file path")
    regions.add_argument("--seed", type=int, default=None,
                         help="override the scenario rng_seed")
    regions.add_argument("--methods", default=",".join(DEFAULT_METHODS),
                         help=f"comma-separated subset of: {', '.join(METHODS)}")
    regions.add_argument("--alpha-samples", type=int, default=100,
                         help="rate-profile samples for the inner bound")
    regions.add_argument("--oracle-l0", type=int, default=256,
                         help="phase-grid points per element for the oracle")
    regions.add_argument("--out", default="out", help="output directory")
    regions.add_argument("--verbose-trace", action="store_true",
                         help="dump per-alpha optimizer traces as JSON")

    validate = sub.add_parser("validate", help="run the invariant suite")
    validate.add_argument("--config", default=None, help="optional scenario file")
    validate.add_argument("--seeds", type=int, default=20,
                          help="number of seeded realizations per size")
    validate.add_argument("--sizes", default="2,4",
                          help="comma-separated element counts")
    validate.add_argument("--alpha-samples", type=int, default=25)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "regions":
            methods = [m.strip() for m in args.methods.split(",") if m.strip()]
            cmd_regions(args.config, methods, args.out, seed=args.seed,
                        alpha_samples=args.alpha_samples,
                        oracle_l0=args.oracle_l0,
                        verbose_trace=args.verbose_trace)
            return 0
        if args.command == "validate":
            base = load_scenario_config(args.config) if args.config else None
            sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            if args.seeds < 0:
                raise UsageError("--seeds must be >= 0")
            failures = cmd_validate(args.seeds, sizes, base_cfg=base,
                                    alpha_samples=args.alpha_samples)
            return 0 if failures == 0 else 1
        raise UsageError(f"unknown command {args.command!r}")
    except (UsageError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
