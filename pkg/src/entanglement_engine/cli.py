"""Command-line front end: one subcommand per dataset family.

    entanglement-engine <subcommand> --config PATH [--out DIR] [--format csv|json] [--threads N]

Exit status is 0 on success, 2 for an invalid configuration and 3 for a
numerical failure (including any failed check under ``validate``).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (AnalyticSelector, Quantity, analytic_transient, steady_activity,
                       steady_coherence, steady_current, steady_internal_activity,
                       steady_kur, steady_noise)
from .config import RunConfig, load_config
from .datasets import Dataset, write_dataset
from .errors import ConfigInvalid, EngineError, InvalidParameter, NoSignChange, NumericalFailure, ZeroBias
from .kur import ActivityMode, kur_series, violation_windows
from .metrics import concurrence_series, critical_point, current_coherence_ratio_series, steady_point
from .model import EngineParams, InitialKind, initial_state
from .observables import EARLY_TIME, NoiseKernel
from .validation import run_invariant_suite

SUBCOMMANDS = ("evolve", "noise", "kur", "sweep", "witness", "validate")


def _kernel(cfg: RunConfig, p: EngineParams, kind: InitialKind, for_noise: bool) -> NoiseKernel:
    G = p.big_gamma
    return NoiseKernel.build(p, initial_state(kind, p), cfg.grid.t_max_in_inverse_gamma / G,
                             step=cfg.noise.step_in_inverse_gamma / G, for_noise=for_noise)


def _rows(cfg: RunConfig) -> np.ndarray:
    return cfg.stride * np.arange(cfg.grid.n_points)


def steady_summary(p: EngineParams) -> dict:
    """Closed-form steady-state values stored alongside every dataset."""
    try:
        kur = steady_kur(p)
    except ZeroBias:
        kur = None
    return {
        "current_l_over_gamma_l": steady_current(p) / p.gamma_l,
        "coherence": steady_coherence(p),
        "s_ll_over_gamma_l": steady_noise(p) / p.gamma_l,
        "activity_over_gamma_l": steady_activity(p) / p.gamma_l,
        "internal_activity_over_gamma_l": steady_internal_activity(p) / p.gamma_l,
        "kur": kur,
    }


def _base_meta(p: EngineParams) -> dict:
    return {"params": vars(p).copy(), "regime": p.regime.value,
            "warnings": p.validity_warnings(), "steady_state": steady_summary(p)}


def evolve_dataset(cfg: RunConfig, p: EngineParams) -> Dataset:
    k = _kernel(cfg, p, cfg.initial_state, for_noise=False)
    idx = _rows(cfg)
    t = k.times[idx]
    c = k.coherences()[idx]
    pops = k.populations()[idx]
    cols = {
        "t_gamma": t * p.big_gamma,
        "current_l_over_gamma_l": k.currents("L")[idx] / p.gamma_l,
        "current_r_over_gamma_r": k.currents("R")[idx] / p.gamma_r,
        "internal_current_over_gamma_l": k.internal_currents()[idx] / p.gamma_l,
        "activity_l_over_gamma_l": k.activities("L")[idx] / p.gamma_l,
        "activity_r_over_gamma_r": k.activities("R")[idx] / p.gamma_r,
        "internal_activity_over_gamma_l": k.internal_activities()[idx] / p.gamma_l,
        "coherence_re": c.real,
        "coherence_im": c.imag,
        "concurrence": concurrence_series(k)[idx],
        "ratio_i_over_2gc": current_coherence_ratio_series(k)[idx],
        "r1": pops[:, 0], "r2": pops[:, 1], "r3": pops[:, 2], "r4": pops[:, 3],
    }
    sel_i = AnalyticSelector(cfg.initial_state, Quantity.CURRENT_L)
    sel_c = AnalyticSelector(cfg.initial_state, Quantity.COHERENCE)
    cols["analytic_current_l_over_gamma_l"] = analytic_transient(sel_i, p, t).real / p.gamma_l
    analytic_c = analytic_transient(sel_c, p, t)
    cols["analytic_coherence_re"] = analytic_c.real
    cols["analytic_coherence_im"] = analytic_c.imag
    return _table("evolve", cols, _base_meta(p))


def noise_dataset(cfg: RunConfig, p: EngineParams) -> Dataset:
    k = _kernel(cfg, p, cfg.initial_state, for_noise=True)
    idx = _rows(cfg)
    cols = {
        "t_gamma": k.times[idx] * p.big_gamma,
        "current_l_over_gamma_l": k.currents("L")[idx] / p.gamma_l,
        "current_r_over_gamma_l": k.currents("R")[idx] / p.gamma_l,
    }
    for a in "LR":
        for b in "LR":
            cols[f"s_{a.lower()}{b.lower()}_over_gamma_l"] = k.noise_series(a, b, idx) / p.gamma_l
    return _table("noise", cols, _base_meta(p))


def kur_dataset(cfg: RunConfig, p: EngineParams) -> Dataset:
    k = _kernel(cfg, p, cfg.initial_state, for_noise=True)
    idx = _rows(cfg)
    base = kur_series(k, ActivityMode.BATHS_ONLY, idx)
    full = kur_series(k, ActivityMode.WITH_INTERNAL, idx)
    cols = {
        "t_gamma": base.grid,
        "r_left": base.r_left,
        "r_asym": base.r_asym,
        "r_left_with_internal": full.r_left,
        "r_asym_with_internal": full.r_asym,
        "current_l_over_gamma_l": k.currents("L")[idx] / p.gamma_l,
        "current_r_over_gamma_l": k.currents("R")[idx] / p.gamma_l,
        "activity_over_gamma_l": (k.activities("L")[idx] + k.activities("R")[idx]) / p.gamma_l,
        "internal_activity_over_gamma_l": k.internal_activities()[idx] / p.gamma_l,
    }
    meta = _base_meta(p)
    meta["violation_windows"] = {
        f"{which}_{series.activity_mode.value}": [list(w) for w in violation_windows(series, which)]
        for series in (base, full) for which in ("left", "asym")
    }
    meta["kur_gaps"] = int(np.isnan(base.r_left).sum() + np.isnan(base.r_asym).sum())
    return _table("kur", cols, meta)


def sweep_dataset(cfg: RunConfig, threads: int) -> Dataset:
    if cfg.sweep is None:
        raise ConfigInvalid("sweep: the sweep subcommand needs a [sweep] section")
    params = [p for _, p in cfg.sweep_params()]
    points = _map(steady_point, params, threads)
    var = cfg.sweep.variable
    names = ["t_l", "mu_l", "current_l_over_gamma_l", "concurrence", "coherence",
             "r1", "r2", "r3", "r4"]
    rows = [[p.t_l, p.mu_l, pt.steady_current / p.gamma_l, pt.steady_concurrence,
             pt.steady_coherence, *pt.state.populations]
            for p, pt in zip(params, points)]
    meta = {"params": vars(cfg.params).copy(), "sweep_variable": var}
    return Dataset("sweep", names, rows, meta)


def _witness_bracket(cfg: RunConfig, p: EngineParams) -> tuple[float, float]:
    hi = p.t_l
    if cfg.sweep is not None and cfg.sweep.variable == "t_l":
        hi = max(hi, *cfg.sweep.values)
    return p.t_r, hi


def witness_dataset(cfg: RunConfig, p: EngineParams) -> Dataset:
    bracket = _witness_bracket(cfg, p)
    try:
        t_crit, i_crit = critical_point(p, bracket)
    except NoSignChange as exc:
        raise NumericalFailure(f"critical current: {exc}") from None
    rows = []
    for kind in InitialKind:
        k = _kernel(cfg, p, kind, for_noise=False)
        idx = _rows(cfg)
        conc = concurrence_series(k)[idx]
        cur = k.currents("L")[idx]
        fail = np.flatnonzero((cur > i_crit) & (conc == 0.0))
        t = k.times[idx] * p.big_gamma
        first = t[fail[0]] if fail.size else np.nan
        last = t[fail[-1]] if fail.size else np.nan
        rows.append([kind.value, int(fail.size), first, last, float(cur.max() / p.gamma_l)])
    meta = _base_meta(p)
    meta.update({"t_l_crit": t_crit, "i_crit_over_gamma_l": i_crit / p.gamma_l,
                 "bracket": list(bracket)})
    names = ["initial_state", "n_failures", "first_failure_t_gamma", "last_failure_t_gamma",
             "max_current_l_over_gamma_l"]
    return Dataset("witness", names, rows, meta)


def validate_dataset(cfg: RunConfig, p: EngineParams) -> Dataset:
    checks = run_invariant_suite(p, cfg.grid.t_max_in_inverse_gamma)
    rows = [[c.name, c.passed, c.value, c.tolerance] for c in checks]
    meta = _base_meta(p)
    meta["failed"] = [c.name for c in checks if not c.passed]
    meta["report"] = [c.line() for c in checks]
    return Dataset("validate", ["check", "passed", "value", "tolerance"], rows, meta)


def _table(name: str, cols: dict, meta: dict) -> Dataset:
    arrays = [np.asarray(v, dtype=float) for v in cols.values()]
    if "t_gamma" in cols:
        # short-time values are emitted but flagged
        meta["early_time_rows"] = int(np.count_nonzero(np.asarray(cols["t_gamma"]) < EARLY_TIME))
    return Dataset(name, list(cols), [list(r) for r in zip(*arrays)], meta)


def _map(fn, items, threads: int):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


_PER_POINT = {
    "evolve": evolve_dataset,
    "noise": noise_dataset,
    "kur": kur_dataset,
    "witness": witness_dataset,
    "validate": validate_dataset,
}


def build_datasets(command: str, cfg: RunConfig, threads: int = 1) -> list[Dataset]:
    """Compute every dataset a subcommand emits, in a deterministic order."""
    if command == "sweep":
        return [sweep_dataset(cfg, threads)]
    fn = _PER_POINT[command]
    points = cfg.sweep_params()
    datasets = _map(lambda vp: fn(cfg, vp[1]), points, threads)
    if cfg.sweep is not None:
        for (value, _), ds in zip(points, datasets):
            ds.name = f"{ds.name}_{cfg.sweep.variable}={value:g}"
            ds.metadata["sweep_value"] = value
    return datasets


def run(command: str, config_path, out=None, fmt=None, threads: int = 1, echo=print) -> int:
    """Execute one subcommand and return the process exit status."""
    try:
        if command not in SUBCOMMANDS:
            raise ConfigInvalid(f"unknown subcommand {command!r}")
        if threads < 1:
            raise ConfigInvalid("--threads: must be >= 1")
        cfg = load_config(config_path)
        out_dir = Path(out if out is not None else cfg.outputs.directory)
        fmt = fmt or cfg.outputs.format
        datasets = build_datasets(command, cfg, threads)
        for ds in datasets:
            path = write_dataset(ds, out_dir, fmt, command, cfg.echo())
            echo(f"wrote {path}")
        if command == "validate":
            failed = []
            for ds in datasets:
                echo(f"[{ds.name}]")
                for line in ds.metadata["report"]:
                    echo(line)
                failed += ds.metadata["failed"]
            if failed:
                raise NumericalFailure("invariant violated: " + "; ".join(dict.fromkeys(failed)))
    except (ConfigInvalid, InvalidParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entanglement-engine",
                                     description="Two-qubit entanglement engine datasets.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="run configuration file")
    parser.add_argument("--out", help="output directory (overrides outputs.directory)")
    parser.add_argument("--format", choices=("csv", "json"), help="overrides outputs.format")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.subcommand, args.config, args.out, args.format, args.threads)


if __name__ == "__main__":
    sys.exit(main())
