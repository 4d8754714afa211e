"""Experiment runner: reproducible configurations in, CSV + JSON manifests out.

Subcommands
-----------
entropy-curve   block entropy S_L(t) over a time grid (exact solution)
verify-theorem  linear growth bound and the full bound chain over a time grid
bessel-check    weighted-sum / tail / pair bound grids for the Bessel layer
oracle-compare  small-N cross-path deviations (state vector vs correlation matrix)
tebd-run        open-boundary TEBD resource profile (bond growth, entropies)
bounds-table    closed-form bound tables (growth, approximation, bond dimension)

Every run writes one CSV (deterministic body for a fixed config and seed)
and one JSON manifest echoing the full configuration, package versions and
wall-clock time.  Exit codes: 0 success, 1 invalid configuration, 2 at
least one checked inequality violated.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import NUMBA_ENABLED
from .bessel import (
    bessel_j_row,
    cubic_sum_lower_bound,
    cubic_sum_tail_bound,
    j0_j1_lower_bound,
    weighted_cubic_sum,
)
from .bounds import (
    EPSILON_THRESHOLD,
    BoundHypotheses,
    approx_entropy_lower_bound,
    bond_dim_lower_bound,
    entropy_growth_bound,
    verify_entropy_bound,
)
from .ed_oracle import (
    build_spin_hamiltonian,
    evolve_state,
    initial_state,
    jw_correlation_matrices,
    reduced_entropy,
    spectral_decomposition,
)
from .entropy import BoundChainReport, cm_block_entropy
from .ising_exact import gamma_t_fourier
from .mps_tebd import TruncationPolicy, run_quench


class ConfigError(ValueError):
    pass


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_manifest(path: Path, command: str, cfg: dict, summary: dict, outputs, wall: float) -> None:
    doc = {
        "command": command,
        "config": cfg,
        "summary": summary,
        "outputs": [str(p) for p in outputs],
        "wall_clock_s": wall,
        "versions": {
            "quenchlab": __version__,
            "numpy": np.__version__,
            "numba_enabled": NUMBA_ENABLED,
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))  # map preserves grid order


def _float_grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise ConfigError(f"empty grid: max {hi} < min {lo}")
    n = int(round((hi - lo) / step))
    grid = [lo + i * step for i in range(n + 1)]
    if grid[-1] < hi - 1e-12:
        grid.append(hi)
    return grid


def _parse_list(text: str, cast) -> list:
    try:
        return [cast(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"could not parse list {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (violations, summary dict)
# ---------------------------------------------------------------------------

def _run_entropy_curve(cfg: dict, outdir: Path):
    n, block = cfg["n"], cfg["block"]
    if n < 1 or not 1 <= block <= n:
        raise ConfigError(f"need 1 <= block <= n, got n={n}, block={block}")
    grid = _float_grid(cfg["t_min"], cfg["t_max"], cfg["t_step"])

    def point(t):
        cm = gamma_t_fourier(n, t, limit="finite")
        return (t, cm_block_entropy(cm, block))

    rows = _pool_map(point, grid, cfg["threads"])
    _write_csv(outdir / "entropy_curve.csv", "t,s_block_bits", rows)
    summary = {"points": len(rows), "s_first_bits": rows[0][1], "s_last_bits": rows[-1][1]}
    return 0, summary, [outdir / "entropy_curve.csv"]


def _run_verify_theorem(cfg: dict, outdir: Path):
    n, block = cfg["n"], cfg["block"]
    if n < 1 or not 1 <= block <= n // 2:
        raise ConfigError(f"need 1 <= block <= n/2, got n={n}, block={block}")
    grid = (
        _parse_list(cfg["t_grid"], float)
        if cfg.get("t_grid")
        else _float_grid(cfg["t_min"], cfg["t_max"], cfg["t_step"])
    )
    if not grid:
        raise ConfigError("empty time grid")
    reports = _pool_map(
        lambda t: verify_entropy_bound(n, block, [t])[0], grid, cfg["threads"]
    )
    with open(outdir / "verify_theorem.csv", "w") as fh:
        fh.write(BoundChainReport.CSV_COLUMNS + "\n")
        for r in reports:
            fh.write(r.to_csv_row() + "\n")
    applicable = [r for r in reports if r.hypotheses_ok]
    violations = sum(1 for r in applicable if r.growth_margin < 0)
    summary = {
        "points": len(reports),
        "applicable": len(applicable),
        "violations": violations,
        "min_growth_margin_bits": min((r.growth_margin for r in applicable), default=None),
    }
    return violations, summary, [outdir / "verify_theorem.csv"]


def _run_bessel_check(cfg: dict, outdir: Path):
    rows = []
    violations = 0

    def record(check, p1, p2, value, bound, ok):
        nonlocal violations
        if not ok:
            violations += 1
        rows.append((check, p1, p2, value, bound, int(ok)))

    # partial cubic sums against the closed-form lower bound
    for z in _float_grid(1.0, cfg["lower_z_max"], cfg["z_step"]):
        total = weighted_cubic_sum(z, int(math.ceil(z)) + 80)
        bound = cubic_sum_lower_bound(z)
        record("cubic_sum_lower", z, None, total, bound, total >= bound)

    # partial tails against the tail bound
    for k in range(2, cfg["tail_k_max"] + 1):
        z_top = math.e * k / 4.0
        for j in range(1, 9):
            z = z_top * j / 8.0
            row = bessel_j_row(z, k + 200)
            orders = np.arange(k + 1, k + 201, dtype=float)
            tail = float(np.dot(orders**3, row.values[k + 1:] ** 2))
            bound = cubic_sum_tail_bound(k, z)
            record("cubic_sum_tail", float(k), z, tail, bound, tail <= bound)

    # adjacent-pair lower bound
    for z in _float_grid(1.0, cfg["pair_z_max"], cfg["z_step"]):
        row = bessel_j_row(z, 1)
        value = float(row.values[0] ** 2 + row.values[1] ** 2)
        bound = j0_j1_lower_bound(z)
        record("j0_j1_lower", z, None, value, bound, value >= bound)

    # squared-sum normalization identity
    for z in _float_grid(0.0, 60.0, 0.5):
        row = bessel_j_row(z, int(math.ceil(z)) + 40)
        resid = row.normalization_residual()
        record("normalization", z, None, resid, 1e-10, resid <= 1e-10)

    # three-term recurrence residual
    for z in _float_grid(0.5, 50.0, 0.5):
        n_top = int(z) + 10
        row = bessel_j_row(z, n_top + 1)
        v = row.values
        ns = np.arange(1, n_top + 1)
        resid = float(np.max(np.abs(v[ns - 1] + v[ns + 1] - (2 * ns / z) * v[ns])))
        record("recurrence", z, None, resid, 1e-9, resid <= 1e-9)

    _write_csv(outdir / "bessel_check.csv", "check,param1,param2,value,bound,ok", rows)
    summary = {"checks": len(rows), "violations": violations}
    return violations, summary, [outdir / "bessel_check.csv"]


def _run_oracle_compare(cfg: dict, outdir: Path):
    n_list = _parse_list(cfg["n_list"], int)
    t_list = _parse_list(cfg["t_list"], float)
    tol = cfg["tolerance"]
    if any(n < 2 for n in n_list):
        raise ConfigError("oracle comparison needs n >= 2")
    rows = []
    violations = 0
    for n in n_list:
        hamiltonian = build_spin_hamiltonian(n, boundary="periodic")
        decomp = spectral_decomposition(hamiltonian)
        psi0 = initial_state(n)
        states = [evolve_state(psi0, hamiltonian, t, decomposition=decomp) for t in t_list]
        cms = jw_correlation_matrices(states)
        for t, psi, cm in zip(t_list, states, cms):
            fourier = gamma_t_fourier(n, t, limit="finite")
            cm_dev = float(np.max(np.abs(cm.to_modewise().data - fourier.data)))
            for block in range(1, n // 2 + 1):
                s_cm = cm_block_entropy(fourier, block)
                s_sv = reduced_entropy(psi, block)
                ds = abs(s_cm - s_sv)
                ok = ds <= tol and cm_dev <= tol
                if not ok:
                    violations += 1
                rows.append((n, t, block, s_cm, s_sv, ds, cm_dev, int(ok)))
    _write_csv(
        outdir / "oracle_compare.csv",
        "n,t,block,s_cm_bits,s_statevector_bits,entropy_dev,cm_entry_dev,ok",
        rows,
    )
    summary = {
        "rows": len(rows),
        "violations": violations,
        "max_entropy_dev": max(r[5] for r in rows),
        "max_cm_entry_dev": max(r[6] for r in rows),
    }
    return violations, summary, [outdir / "oracle_compare.csv"]


def _run_tebd(cfg: dict, outdir: Path):
    n = cfg["n"]
    if n < 2:
        raise ConfigError(f"need n >= 2, got {n}")
    if cfg["max_bond"] is None and cfg["discard_tol"] is None:
        raise ConfigError("set --max-bond, --discard-tol or both")
    policy = TruncationPolicy(max_bond=cfg["max_bond"], discard_tol=cfg["discard_tol"])
    samples = run_quench(
        n,
        cfg["t_final"],
        cfg["dt"],
        policy,
        order=cfg["order"],
        sample_every=cfg["sample_every"],
        with_fidelity=None if not cfg["no_fidelity"] else False,
    )
    rows = [
        (s.t, s.max_bond, s.half_chain_entropy, s.error_bound, s.fidelity)
        for s in samples
    ]
    _write_csv(outdir / "tebd_run.csv", "t,max_bond,s_half_bits,eps_hat,fidelity", rows)

    # consistency against the bond-dimension bound on the half chain
    violations = 0
    checked = 0
    for s in samples[1:]:
        hyp = BoundHypotheses(N=n, L=n // 2, t=s.t)
        if hyp.satisfied() and s.error_bound < EPSILON_THRESHOLD:
            checked += 1
            need = bond_dim_lower_bound(s.t, s.error_bound).log2_d
            if math.log2(s.max_bond) < need:
                violations += 1
    summary = {
        "samples": len(samples),
        "final_max_bond": samples[-1].max_bond,
        "final_half_chain_entropy_bits": samples[-1].half_chain_entropy,
        "final_eps_hat": samples[-1].error_bound,
        "bond_bound_points_checked": checked,
        "violations": violations,
    }
    return violations, summary, [outdir / "tebd_run.csv"]


def _run_bounds_table(cfg: dict, outdir: Path):
    grid = _float_grid(cfg["t_min"], cfg["t_max"], cfg["t_step"])
    epsilons = _parse_list(cfg["epsilons"], float)
    rows = []
    for t in grid:
        for eps in epsilons:
            approx = approx_entropy_lower_bound(t, eps, max(1, round(4.0 * t / math.e)))
            bond = bond_dim_lower_bound(t, eps)
            rows.append(
                (
                    t,
                    eps,
                    entropy_growth_bound(t),
                    approx.unoptimized,
                    approx.optimized,
                    bond.log2_d,
                    bond.min_d,
                )
            )
    _write_csv(
        outdir / "bounds_table.csv",
        "t,epsilon,growth_bound_bits,approx_unoptimized_bits,approx_optimized_bits,log2_bond_dim,min_bond_dim",
        rows,
    )
    summary = {"rows": len(rows), "epsilon_threshold": EPSILON_THRESHOLD}
    return 0, summary, [outdir / "bounds_table.csv"]


_HANDLERS = {
    "entropy-curve": _run_entropy_curve,
    "verify-theorem": _run_verify_theorem,
    "bessel-check": _run_bessel_check,
    "oracle-compare": _run_oracle_compare,
    "tebd-run": _run_tebd,
    "bounds-table": _run_bounds_table,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file of defaults; explicit flags win")
    p.add_argument("--output-dir", default=None, help="directory for CSV and manifest output")
    p.add_argument("--seed", type=int, default=None, help="seed echoed into the manifest")
    p.add_argument("--threads", type=int, default=None, help="worker threads for grid fan-out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quenchlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy-curve", help="exact block entropy over a time grid")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--block", type=int, default=None)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-step", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("verify-theorem", help="growth bound and bound chain over a grid")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--block", type=int, default=None)
    p.add_argument("--t-grid", default=None, help="comma list of times; overrides min/max/step")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-step", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("bessel-check", help="weighted-sum bound grids")
    p.add_argument("--z-step", type=float, default=None)
    p.add_argument("--lower-z-max", type=float, default=None)
    p.add_argument("--pair-z-max", type=float, default=None)
    p.add_argument("--tail-k-max", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("oracle-compare", help="cross-path deviations at small N")
    p.add_argument("--n-list", default=None, help="comma list of odd chain sizes")
    p.add_argument("--t-list", default=None, help="comma list of times")
    p.add_argument("--tolerance", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("tebd-run", help="open-boundary TEBD resource profile")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--t-final", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--discard-tol", type=float, default=None)
    p.add_argument("--max-bond", type=int, default=None)
    p.add_argument("--order", type=int, default=None, choices=[1, 2])
    p.add_argument("--sample-every", type=int, default=None)
    p.add_argument("--no-fidelity", action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("bounds-table", help="closed-form bound tables")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-step", type=float, default=None)
    p.add_argument("--epsilons", default=None, help="comma list of accuracies")
    _add_common(p)

    return parser


_DEFAULTS = {
    "entropy-curve": {"n": 101, "block": 20, "t_min": 0.0, "t_max": 13.0, "t_step": 0.5},
    "verify-theorem": {"n": 101, "block": 20, "t_grid": None, "t_min": 4.0, "t_max": 13.0, "t_step": 1.0},
    "bessel-check": {"z_step": 0.1, "lower_z_max": 50.0, "pair_z_max": 100.0, "tail_k_max": 60},
    "oracle-compare": {"n_list": "5,7,9,11", "t_list": "0,0.5,1,2,4", "tolerance": 1e-8},
    "tebd-run": {
        "n": 20, "t_final": 6.0, "dt": 0.02, "discard_tol": 1e-10, "max_bond": None,
        "order": 2, "sample_every": 5, "no_fidelity": False,
    },
    "bounds-table": {"t_min": 4.0, "t_max": 13.0, "t_step": 1.0, "epsilons": "0,0.1,0.3,0.5,0.7"},
}

_COMMON_DEFAULTS = {"output_dir": ".", "seed": 0, "threads": 1}


def _merge_config(args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS[args.command])
    cfg.update(_COMMON_DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        outdir = Path(cfg["output_dir"])
        outdir.mkdir(parents=True, exist_ok=True)
        start = time.perf_counter()
        violations, summary, outputs = _HANDLERS[args.command](cfg, outdir)
        wall = time.perf_counter() - start
    except (ConfigError, ValueError) as exc:
        # precondition failures raised by the library name the violated
        # constraint; both count as invalid configuration
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    manifest = outdir / f"{args.command.replace('-', '_')}_manifest.json"
    _write_manifest(manifest, args.command, cfg, summary, outputs, wall)
    if violations:
        print(f"{args.command}: {violations} violated check(s); see {manifest}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
