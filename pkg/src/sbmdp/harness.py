"""Seeded experiment harness: JSON configs, trial execution, CSV sweeps."""

from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .certificates import build_binary, build_general, verify_binary, verify_general
from .concentration import check_concentration, default_constants
from .errors import InvalidParams, SbmdpError
from .models import (
    GSSBM,
    GroundTruth,
    SbmParams,
    cluster_matrix,
    generate,
    params_from_dict,
    permute_instance,
    same_clustering,
)
from .privacy import PrivacyParams, stbl, stbl_fast
from .sdp import SolveOptions, recover

MODES = ("nonprivate", "stbl", "fast")

CSV_COLUMNS = ("variant", "n", "a", "b", "rho", "xi", "eps", "delta_exp",
               "mode", "seed", "recovered", "bottom", "conc_pass",
               "cert_valid", "ms")


@dataclass(frozen=True)
class ExperimentConfig:
    variant: str
    grid: dict
    trials: int
    seed_base: int
    mode: str
    output: str
    c_stab: float | None = None
    workers: int = 1
    permute: bool = False
    max_evals: int = 2000

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        try:
            cfg = cls(
                variant=d["variant"],
                grid={k: list(v) for k, v in d["grid"].items()},
                trials=int(d["trials"]),
                seed_base=int(d.get("seed_base", 0)),
                mode=d.get("mode", "nonprivate"),
                output=d["output"],
                c_stab=d.get("c_stab"),
                workers=int(d.get("workers", 1)),
                permute=bool(d.get("permute", False)),
                max_evals=int(d.get("max_evals", 2000)),
            )
        except KeyError as exc:
            raise InvalidParams(f"config missing field {exc}") from None
        if cfg.mode not in MODES:
            raise InvalidParams(f"mode must be one of {MODES}, got {cfg.mode!r}")
        if cfg.trials < 1:
            raise InvalidParams("trials must be at least 1")
        if not cfg.grid or any(len(v) == 0 for v in cfg.grid.values()):
            raise InvalidParams("grid must be nonempty in every dimension")
        return cfg

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def cells(self) -> list[dict]:
        keys = sorted(self.grid)
        out = []
        for combo in itertools.product(*(self.grid[k] for k in keys)):
            cell = dict(zip(keys, combo))
            cell["variant"] = self.variant
            out.append(cell)
        return out


@dataclass(frozen=True)
class TrialResult:
    cell: dict
    seed: int
    recovered: bool
    bottom: bool
    conc_pass: bool
    cert_valid: bool
    # wall time; excluded from equality so identical seeds compare identical
    ms: float = field(compare=False, default=0.0)

    def row(self, mode: str) -> list[str]:
        cell = self.cell
        rho = cell.get("rho")
        if cell.get("rhos") is not None:
            rho = ";".join(str(x) for x in cell["rhos"])
        fields = {
            "variant": cell["variant"],
            "n": cell["n"],
            "a": cell["a"],
            "b": cell.get("b", ""),
            "rho": "" if rho is None else rho,
            "xi": cell.get("xi", ""),
            "eps": cell.get("eps", ""),
            "delta_exp": cell.get("delta_exp", ""),
            "mode": mode,
            "seed": self.seed,
            "recovered": int(self.recovered),
            "bottom": int(self.bottom),
            "conc_pass": int(self.conc_pass),
            "cert_valid": int(self.cert_valid),
            "ms": f"{self.ms:.3f}",
        }
        return [str(fields[c]) for c in CSV_COLUMNS]


def _cell_params(cell: dict) -> SbmParams:
    d = {k: v for k, v in cell.items()
         if k in ("variant", "n", "a", "b", "rho", "xi", "rhos")}
    if d.get("variant") == GSSBM:
        d["rhos"] = tuple(d["rhos"])
    return params_from_dict(d)


def trial_seed(seed_base: int, cell_index: int, trial_index: int) -> int:
    """Deterministic per-trial stream id from (base, cell, trial)."""
    ss = np.random.SeedSequence(entropy=seed_base,
                                spawn_key=(cell_index, trial_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial(
    cell: dict,
    seed: int,
    mode: str = "nonprivate",
    c_stab: float | None = None,
    permute: bool = False,
    solve_opts: SolveOptions = SolveOptions(),
    max_evals: int = 2000,
) -> TrialResult:
    """Generate one instance, recover per mode, and score against the truth."""
    params = _cell_params(cell)
    t0 = time.perf_counter()
    g, gt = generate(params, seed)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(
        entropy=seed, spawn_key=(1,))))
    if permute:
        g, gt = permute_instance(g, gt, rng)
    target = cluster_matrix(gt)

    eps = float(cell.get("eps", math.inf))
    delta_exp = float(cell.get("delta_exp", 0.0))
    if c_stab is None:
        c_stab = delta_exp + 2.0 if mode != "nonprivate" else 0.0

    conc_pass, cert_valid = _diagnostics(g, gt, params, eps, c_stab)

    if mode == "nonprivate":
        res = recover(g, params, solve_opts)
        recovered = res.matrix is not None and same_clustering(res.matrix, target)
        bottom = False
    elif mode == "fast":
        priv = PrivacyParams.from_exponent(eps, delta_exp, params.n)
        outcome = stbl_fast(g, params, priv, c_stab, rng,
                            solve_opts=solve_opts, max_evals=max_evals,
                            budget_s=60.0)
        bottom = outcome.bottom
        recovered = (not bottom) and same_clustering(outcome.result, target)
    else:
        priv = PrivacyParams.from_exponent(eps, delta_exp, params.n)
        f = lambda h: recover(h, params, solve_opts).matrix
        outcome = stbl(g, f, priv, rng, max_evals=max_evals, budget_s=60.0)
        bottom = outcome.bottom
        recovered = (not bottom) and same_clustering(outcome.result, target)

    ms = (time.perf_counter() - t0) * 1e3
    return TrialResult(cell, seed, recovered, bottom, conc_pass, cert_valid, ms)


def _diagnostics(g, gt: GroundTruth, params: SbmParams,
                 eps: float, c_stab: float) -> tuple[bool, bool]:
    """Concentration and certificate validity against the true labels."""
    constants = None
    conc_pass = False
    try:
        constants = default_constants(params, eps if eps > 0 else math.inf, c_stab)
        conc_pass = check_concentration(g, gt, params, constants).passed
    except SbmdpError:
        conc_pass = False
    try:
        if params.variant == GSSBM:
            cert_valid = verify_general(
                build_general(g, gt, params, constants), gt).valid
        else:
            cert_valid = verify_binary(build_binary(g, gt, params), gt).valid
    except SbmdpError:
        cert_valid = False
    return conc_pass, cert_valid


def _run_indexed(args) -> tuple[int, list[str]]:
    index, cell, seed, mode, c_stab, permute, max_evals = args
    try:
        result = run_trial(cell, seed, mode=mode, c_stab=c_stab,
                           permute=permute, max_evals=max_evals)
        return index, result.row(mode)
    except SbmdpError:
        # failure row: trial errors never abort the sweep
        failed = TrialResult(cell, seed, False, True, False, False, 0.0)
        return index, failed.row(mode)


def sweep(config: ExperimentConfig, timestamp: str | None = None) -> Path:
    """Run every (cell, trial) combination and write the results CSV.

    One data row per trial, then per-cell aggregate lines as '#' comments
    (recovery rate, bottom rate, concentration rate, certificate rate, mean
    milliseconds). Deterministic except for the timestamp header.
    """
    cells = config.cells()
    tasks = []
    for ci, cell in enumerate(cells):
        for ti in range(config.trials):
            seed = trial_seed(config.seed_base, ci, ti)
            tasks.append((len(tasks), cell, seed, config.mode, config.c_stab,
                          config.permute, config.max_evals))

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            indexed = list(pool.map(_run_indexed, tasks))
    else:
        indexed = [_run_indexed(t) for t in tasks]
    rows = [row for _, row in sorted(indexed, key=lambda pair: pair[0])]

    if timestamp is None:
        timestamp = time.strftime("%Y-%m-%dT%H:%M:%S")
    lines = [f"# sbmdp sweep {timestamp}", ",".join(CSV_COLUMNS)]
    lines.extend(",".join(row) for row in rows)
    lines.append("# aggregates")
    per_cell = len(rows) // len(cells) if cells else 0
    col = {name: i for i, name in enumerate(CSV_COLUMNS)}
    for ci, cell in enumerate(cells):
        block = rows[ci * per_cell:(ci + 1) * per_cell]
        if not block:
            continue
        agg = {
            "recovery_rate": np.mean([int(r[col["recovered"]]) for r in block]),
            "bottom_rate": np.mean([int(r[col["bottom"]]) for r in block]),
            "conc_rate": np.mean([int(r[col["conc_pass"]]) for r in block]),
            "cert_rate": np.mean([int(r[col["cert_valid"]]) for r in block]),
            "mean_ms": np.mean([float(r[col["ms"]]) for r in block]),
        }
        desc = ";".join(f"{k}={cell[k]}" for k in sorted(cell))
        stats = ",".join(f"{k}={v:.6f}" for k, v in agg.items())
        lines.append(f"# cell {ci} {desc} {stats}")

    out = Path(config.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")
    return out


def read_rows(path) -> list[dict]:
    """Parse the data rows of a sweep CSV back into dictionaries."""
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#") or line.startswith(CSV_COLUMNS[0] + ","):
            continue
        if not line.strip():
            continue
        rows.append(dict(zip(CSV_COLUMNS, line.split(","))))
    return rows
