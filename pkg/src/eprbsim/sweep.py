"""Sweep orchestration and result serialization.

A sweep evaluates one row per grid point (theta, or threshold at fixed
theta).  Rows are emitted in grid order and all randomness is derived
per point from the configured seed, so identical configurations yield
byte-identical output files at any thread count.
"""
from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng, stats
from .experiment import (PAIR_COLUMNS, PAIR_NAMES, CfdRun, NonCfdRun,
                         run_cfd, run_noncfd)
from .params import (DEFAULT_N, DEFAULT_SEED, DEFAULT_THETA_STEPS,
                     DEFAULT_THRESHOLD, DEFAULT_V_MAX_MAG, DEFAULT_V_MIN_MAG,
                     DEFAULT_D, ModelParams, SettingsQuad)

THETA_COLUMNS = [
    "theta",
    "E11", "E12", "E21", "E22",
    "E1_1", "E1_2", "E2_1", "E2_2",
    "S", "S_ref", "E_ref", "S_hat",
    "J_eberhard", "J_ch",
    "delta", "bound",
    "n_pass_11", "n_pass_12", "n_pass_21", "n_pass_22",
    "pass_fraction", "N", "seed",
]
THRESHOLD_COLUMNS = ["threshold"] + THETA_COLUMNS

THRESHOLD_SWEEP_THETA = 3.0 * math.pi / 8.0

_TOL = 1e-9


@dataclass
class RunConfig:
    """Everything a CLI invocation needs; all angles in radians."""

    mode: str = "cfd"
    n: int = DEFAULT_N
    d: float = DEFAULT_D
    v_min_mag: float = DEFAULT_V_MIN_MAG
    v_max_mag: float = DEFAULT_V_MAX_MAG
    threshold: float = DEFAULT_THRESHOLD
    theta_start: float = 0.0
    theta_end: float = math.pi
    theta_steps: int = DEFAULT_THETA_STEPS
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "csv"
    angle_unit: str = "rad"
    dump_trials: str | None = None
    threshold_sweep: tuple[float, float, int] | None = None
    threads: int = 1
    delta_denominator: str = "max-pair"

    def validate(self) -> None:
        if self.mode not in ("cfd", "noncfd", "oracles"):
            raise ValueError(f"mode must be cfd, noncfd or oracles, got {self.mode!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.theta_steps < 1:
            raise ValueError(f"theta-steps must be >= 1, got {self.theta_steps}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.angle_unit not in ("rad", "deg"):
            raise ValueError(f"angle-unit must be rad or deg, got {self.angle_unit!r}")
        if self.delta_denominator not in ("max-pair", "setting-quota"):
            raise ValueError(
                "delta-denominator must be max-pair or setting-quota, "
                f"got {self.delta_denominator!r}"
            )
        rng.validate_seed(self.seed)
        if self.threshold_sweep is not None and self.threshold_sweep[2] < 1:
            raise ValueError(
                f"threshold-sweep steps must be >= 1, got {self.threshold_sweep[2]}"
            )
        # Raises with a message naming the offending field.
        self.model_params()

    def model_params(self, threshold: float | None = None) -> ModelParams:
        return ModelParams(
            d=self.d,
            v_min_mag=self.v_min_mag,
            v_max_mag=self.v_max_mag,
            threshold=self.threshold if threshold is None else threshold,
        )


# ----------------------------------------------------------- row assembly

def _cfd_row(params: ModelParams, theta: float, n: int, point_seed: int,
             cfg_seed: int, delta_denominator: str):
    quad = SettingsQuad.for_theta(theta)
    run = run_cfd(params, quad, n, point_seed)
    x, v, w = run.x, run.v, run.w

    photon = [stats.pair_estimate(x[:, i], x[:, j], w[:, i], w[:, j])
              for i, j in PAIR_COLUMNS]
    detect = [stats.pair_estimate(x[:, i], x[:, j]) for i, j in PAIR_COLUMNS]
    singles = [stats.single_average(x[:, c], w[:, c])[0] for c in range(4)]

    s = stats.chsh(*(p.e for p in photon))
    s_hat = stats.chsh(*(d.e for d in detect))
    if s_hat is None or abs(s_hat) > 2.0 + _TOL:
        raise RuntimeError(f"detection-event |S| exceeded 2: {s_hat}")

    pair_records = {name: (x[:, i], x[:, j], w[:, i], w[:, j])
                    for name, (i, j) in zip(PAIR_NAMES, PAIR_COLUMNS)}
    j_eb = stats.eberhard_total_selected(pair_records)
    j_ch = stats.ch_total_selected(pair_records)
    j_eb_det = stats.eberhard_total(x[:, 0], x[:, 1], x[:, 2], x[:, 3])
    j_ch_det = stats.ch_total(*((x[:, c] == 1).astype(np.int64)
                                for c in range(4)))
    if j_eb_det < 0 or j_ch_det < 0:
        raise RuntimeError(
            f"detection-event count combination went negative: "
            f"J_eb={j_eb_det}, J_ch={j_ch_det}")

    n_prime = int(np.count_nonzero(np.all(w == 1, axis=1)))
    n_passes = tuple(p.n_pass for p in photon)
    delta, bound = stats.delta_ratio(n_prime, n_passes, delta_denominator,
                                     per_setting_total=n)
    if s is not None and bound is not None and abs(s) > bound + _TOL:
        raise RuntimeError(f"photon |S|={abs(s)} exceeded bound {bound}")

    e_ref, s_ref = stats.quantum_reference(theta)
    row = {
        "theta": theta,
        "E11": photon[0].e, "E12": photon[1].e,
        "E21": photon[2].e, "E22": photon[3].e,
        "E1_1": singles[0], "E1_2": singles[1],
        "E2_1": singles[2], "E2_2": singles[3],
        "S": s, "S_ref": s_ref, "E_ref": e_ref, "S_hat": s_hat,
        "J_eberhard": j_eb, "J_ch": j_ch,
        "delta": delta, "bound": bound,
        "n_pass_11": photon[0].n_pass, "n_pass_12": photon[1].n_pass,
        "n_pass_21": photon[2].n_pass, "n_pass_22": photon[3].n_pass,
        "pass_fraction": float(w.mean()),
        "N": n, "seed": cfg_seed,
    }
    return row, run


def _noncfd_row(params: ModelParams, theta: float, quota: int, point_seed: int,
                cfg_seed: int):
    quad = SettingsQuad.for_theta(theta)
    run = run_noncfd(params, quad, quota, point_seed)

    photon = [stats.pair_estimate(p.x1, p.x2, p.w1, p.w2) for p in run.pairs]
    detect = [stats.pair_estimate(p.x1, p.x2) for p in run.pairs]
    s = stats.chsh(*(p.e for p in photon))
    s_hat = stats.chsh(*(d.e for d in detect))

    # Station singles merge the two record subsets that used the setting.
    def merged_single(subsets, side):
        if side == 1:
            xs = np.concatenate([run.pairs[i].x1 for i in subsets])
            ws = np.concatenate([run.pairs[i].w1 for i in subsets])
        else:
            xs = np.concatenate([run.pairs[i].x2 for i in subsets])
            ws = np.concatenate([run.pairs[i].w2 for i in subsets])
        return stats.single_average(xs, ws)[0]

    singles = [
        merged_single((0, 1), 1),   # side 1 at a1
        merged_single((2, 3), 1),   # side 1 at a1p
        merged_single((0, 2), 2),   # side 2 at a2
        merged_single((1, 3), 2),   # side 2 at a2p
    ]

    pair_records = {name: (p.x1, p.x2, p.w1, p.w2)
                    for name, p in zip(PAIR_NAMES, run.pairs)}
    j_eb = stats.eberhard_total_selected(pair_records)
    j_ch = stats.ch_total_selected(pair_records)

    w_all = np.concatenate([np.concatenate([p.w1, p.w2]) for p in run.pairs])
    e_ref, s_ref = stats.quantum_reference(theta)
    row = {
        "theta": theta,
        "E11": photon[0].e, "E12": photon[1].e,
        "E21": photon[2].e, "E22": photon[3].e,
        "E1_1": singles[0], "E1_2": singles[1],
        "E2_1": singles[2], "E2_2": singles[3],
        "S": s, "S_ref": s_ref, "E_ref": e_ref, "S_hat": s_hat,
        "J_eberhard": j_eb, "J_ch": j_ch,
        # Pair selection accounting does not apply without quadruples.
        "delta": None, "bound": None,
        "n_pass_11": photon[0].n_pass, "n_pass_12": photon[1].n_pass,
        "n_pass_21": photon[2].n_pass, "n_pass_22": photon[3].n_pass,
        "pass_fraction": float(w_all.mean()),
        "N": quota, "seed": cfg_seed,
    }
    return row, run


def _evaluate_point(cfg: RunConfig, params: ModelParams, theta: float,
                    index: int):
    point_seed = rng.derive_seed(cfg.seed, index)
    if cfg.mode == "cfd":
        return _cfd_row(params, theta, cfg.n, point_seed, cfg.seed,
                        cfg.delta_denominator)
    return _noncfd_row(params, theta, cfg.n, point_seed, cfg.seed)


def theta_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.theta_start, cfg.theta_end, cfg.theta_steps)


def sweep_theta(cfg: RunConfig):
    """One row per theta grid point.  Returns (columns, rows)."""
    params = cfg.model_params()
    thetas = theta_grid(cfg)
    dump = _TrialDumper(cfg.dump_trials, cfg.mode) if cfg.dump_trials else None

    def job(args):
        index, theta = args
        return _evaluate_point(cfg, params, float(theta), index)

    rows = []
    if cfg.threads > 1 and dump is None:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            for row, _run in pool.map(job, enumerate(thetas)):
                rows.append(row)
    else:
        for item in enumerate(thetas):
            row, run = job(item)
            rows.append(row)
            if dump is not None:
                dump.write_run(run)
    if dump is not None:
        dump.close()
    return THETA_COLUMNS, rows


def sweep_threshold(cfg: RunConfig):
    """One row per threshold at fixed theta; documents S -> S_ref convergence."""
    start, stop, steps = cfg.threshold_sweep
    thresholds = np.linspace(start, stop, steps)
    theta = THRESHOLD_SWEEP_THETA
    rows = []
    for index, thr in enumerate(thresholds):
        params = cfg.model_params(threshold=float(thr))
        point_seed = rng.derive_seed(cfg.seed, index)
        if cfg.mode == "cfd":
            row, _run = _cfd_row(params, theta, cfg.n, point_seed, cfg.seed,
                                 cfg.delta_denominator)
        else:
            row, _run = _noncfd_row(params, theta, cfg.n, point_seed, cfg.seed)
        row = {"threshold": float(thr), **row}
        rows.append(row)
    return THRESHOLD_COLUMNS, rows


# ------------------------------------------------------------ serialization

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def rows_to_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def rows_to_json(columns, rows) -> str:
    ordered = [{c: row[c] for c in columns} for row in rows]
    return json.dumps(ordered, indent=2) + "\n"


def write_rows(cfg: RunConfig, columns, rows) -> None:
    text = rows_to_csv(columns, rows) if cfg.format == "csv" \
        else rows_to_json(columns, rows)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)


class _TrialDumper:
    """Raw per-trial record writer (comma separated, one line per record)."""

    CFD_HEADER = ("k,a1,a1p,a2,a2p,x1,x1p,x2,x2p,"
                  "v1,v1p,v2,v2p,w1,w1p,w2,w2p")
    NONCFD_HEADER = "k,setting1,setting2,x1,x2,v1,v2,w1,w2"

    def __init__(self, path: str, mode: str):
        self.fh = open(path, "w", newline="")
        self.mode = mode
        self.fh.write((self.CFD_HEADER if mode == "cfd"
                       else self.NONCFD_HEADER) + "\n")

    def write_run(self, run) -> None:
        if isinstance(run, CfdRun):
            self._write_cfd(run)
        else:
            self._write_noncfd(run)

    def _write_cfd(self, run: CfdRun) -> None:
        a = run.quad.as_tuple()
        settings = ",".join("%.17g" % ai for ai in a)
        x, v, w = run.x, run.v, run.w
        for k in range(run.n):
            self.fh.write(
                f"{k},{settings},"
                f"{x[k, 0]},{x[k, 1]},{x[k, 2]},{x[k, 3]},"
                f"{'%.17g' % v[k, 0]},{'%.17g' % v[k, 1]},"
                f"{'%.17g' % v[k, 2]},{'%.17g' % v[k, 3]},"
                f"{w[k, 0]},{w[k, 1]},{w[k, 2]},{w[k, 3]}\n"
            )

    def _write_noncfd(self, run: NonCfdRun) -> None:
        ks = np.concatenate([p.k for p in run.pairs])
        order = np.argsort(ks, kind="stable")
        pair_of = np.concatenate([np.full(p.k.shape[0], i, np.int8)
                                  for i, p in enumerate(run.pairs)])
        offs = np.concatenate([np.arange(p.k.shape[0]) for p in run.pairs])
        for idx in order:
            p = run.pairs[pair_of[idx]]
            i = offs[idx]
            self.fh.write(
                f"{int(p.k[i])},{'%.17g' % p.side1_setting},"
                f"{'%.17g' % p.side2_setting},"
                f"{p.x1[i]},{p.x2[i]},"
                f"{'%.17g' % p.v1[i]},{'%.17g' % p.v2[i]},"
                f"{p.w1[i]},{p.w2[i]}\n"
            )

    def close(self) -> None:
        self.fh.close()
