"""Event-by-event experiment runners.

The CFD (counterfactually definite) mode sends the same source pair
through both settings of each side, producing a quadruple of outcomes
per trial.  The non-CFD mode flips a fair coin per side per trial and
records only the chosen pair of settings.  All randomness is drawn from
counter-based streams keyed by trial index, so runs are bit-reproducible
for a given seed regardless of chunking or thread count.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import rng, station
from .params import HALF_PI, TWO_PI, ModelParams, SettingsQuad

# Column order of the per-trial station arrays in CFD runs.
STATION_NAMES = ("a1", "a1p", "a2", "a2p")
# (side-1 column, side-2 column) per setting pair, in fixed pair order
# 11=(a1,a2), 12=(a1,a2p), 21=(a1p,a2), 22=(a1p,a2p).
PAIR_COLUMNS = ((0, 2), (0, 3), (1, 2), (1, 3))
PAIR_NAMES = ("11", "12", "21", "22")


class SourceEvent(NamedTuple):
    phi1: float
    phi2: float


def source_phis(seed: int, n: int, start: int = 0):
    """Polarization angles of n source pairs: phi1 uniform, phi2 orthogonal."""
    phi1 = TWO_PI * rng.uniforms(seed, rng.SOURCE, n, start)
    phi2 = np.mod(phi1 + HALF_PI, TWO_PI)
    return phi1, phi2


def generate_source_event(seed: int, k: int) -> SourceEvent:
    """Source pair of trial k; deterministic in (seed, k)."""
    phi1, phi2 = source_phis(seed, 1, start=k)
    return SourceEvent(float(phi1[0]), float(phi2[0]))


@dataclass
class CfdRun:
    """One CFD run: all four stations observed for every trial.

    x, v, w are (n, 4) arrays in STATION_NAMES column order.
    """

    params: ModelParams
    quad: SettingsQuad
    n: int
    seed: int
    phi1: np.ndarray
    phi2: np.ndarray
    x: np.ndarray
    v: np.ndarray
    w: np.ndarray


@dataclass
class NonCfdPairData:
    """Trials recorded for one chosen setting pair in a non-CFD run."""

    side1_setting: float
    side2_setting: float
    k: np.ndarray
    x1: np.ndarray
    v1: np.ndarray
    w1: np.ndarray
    x2: np.ndarray
    v2: np.ndarray
    w2: np.ndarray


@dataclass
class NonCfdRun:
    params: ModelParams
    quad: SettingsQuad
    quota: int
    seed: int
    pairs: tuple
    n_trials: int
    primed_counts: tuple


def _check_quadruple_identities(x: np.ndarray) -> None:
    """Per-trial algebraic identities of +-1 quadruples; hard errors."""
    x1, x1p, x2, x2p = x[:, 0], x[:, 1], x[:, 2], x[:, 3]
    s = x1 * x2 - x1 * x2p + x1p * x2 + x1p * x2p
    if not np.all(np.abs(s) == 2):
        raise RuntimeError("CFD identity violated: s outside {-2, +2}")
    for b in (
        x1 * x1p + x1 * x2 + x1p * x2,
        x1 * x1p + x1 * x2p + x1p * x2p,
        x1 * x2 + x1 * x2p + x2 * x2p,
        x1p * x2 + x1p * x2p + x2 * x2p,
    ):
        if not np.all((b == -1) | (b == 3)):
            raise RuntimeError("CFD identity violated: b outside {-1, +3}")


def cfd_from_inputs(params: ModelParams, quad: SettingsQuad, phi1, phi2,
                    r_cols, rhat_cols, n: int | None = None,
                    seed: int = 0) -> CfdRun:
    """Evaluate a CFD run from explicit inputs (test hook).

    r_cols and rhat_cols are sequences of four arrays in STATION_NAMES
    order.
    """
    phi1 = np.asarray(phi1, dtype=np.float64)
    phi2 = np.asarray(phi2, dtype=np.float64)
    if n is None:
        n = phi1.shape[0]
    settings = quad.as_tuple()
    phis = (phi1, phi1, phi2, phi2)
    x = np.empty((n, 4), np.int8)
    v = np.empty((n, 4), np.float64)
    for col in range(4):
        xc, vc = station.station_respond_batch(
            settings[col], phis[col], r_cols[col], rhat_cols[col], params
        )
        x[:, col] = xc
        v[:, col] = vc
    w = station.identify_photon(v, params.threshold)
    _check_quadruple_identities(x)
    return CfdRun(params=params, quad=quad, n=n, seed=seed,
                  phi1=phi1, phi2=phi2, x=x, v=v, w=w)


def run_cfd(params: ModelParams, quad: SettingsQuad, n: int, seed: int) -> CfdRun:
    """Simulate n CFD trials; every station gets fresh draws each trial."""
    rng.validate_seed(seed)
    if n < 1:
        raise ValueError("n must be >= 1")
    phi1, phi2 = source_phis(seed, n)
    r_cols = [rng.uniforms(seed, s, n) for s in rng.R_STREAMS]
    rhat_cols = [rng.uniforms(seed, s, n) for s in rng.RHAT_STREAMS]
    return cfd_from_inputs(params, quad, phi1, phi2, r_cols, rhat_cols,
                           n=n, seed=seed)


def run_noncfd(params: ModelParams, quad: SettingsQuad, quota: int,
               seed: int) -> NonCfdRun:
    """Simulate trials with per-trial random setting choices.

    Each side picks its primed setting on a fair coin.  Trials keep
    arriving until every one of the four setting pairs has quota
    records; a pair that is already full ignores further trials.
    """
    rng.validate_seed(seed)
    if quota < 1:
        raise ValueError("quota must be >= 1")

    counts = [0, 0, 0, 0]
    kept: list[list[np.ndarray]] = [[], [], [], []]
    k0 = 0
    chunk = max(4096, int(1.2 * quota))
    while min(counts) < quota:
        u1 = rng.uniforms(seed, rng.CHOICE_1, chunk, start=k0)
        u2 = rng.uniforms(seed, rng.CHOICE_2, chunk, start=k0)
        primed1 = u1 < 0.5
        primed2 = u2 < 0.5
        pair_idx = 2 * primed1.astype(np.int8) + primed2.astype(np.int8)
        for p in range(4):
            need = quota - counts[p]
            if need <= 0:
                continue
            ks = k0 + np.flatnonzero(pair_idx == p)
            take = ks[:need]
            if take.size:
                kept[p].append(take)
                counts[p] += take.size
        k0 += chunk

    pair_settings = (
        (quad.a1, quad.a2), (quad.a1, quad.a2p),
        (quad.a1p, quad.a2), (quad.a1p, quad.a2p),
    )
    pairs = []
    last_k = 0
    for p in range(4):
        ks = np.concatenate(kept[p])
        last_k = max(last_k, int(ks[-1]))
        phi1 = TWO_PI * rng.uniforms_at(seed, rng.SOURCE, ks)
        phi2 = np.mod(phi1 + HALF_PI, TWO_PI)
        r1 = rng.uniforms_at(seed, rng.R_1, ks)
        rhat1 = rng.uniforms_at(seed, rng.RHAT_1, ks)
        r2 = rng.uniforms_at(seed, rng.R_2, ks)
        rhat2 = rng.uniforms_at(seed, rng.RHAT_2, ks)
        a1_p, a2_p = pair_settings[p]
        x1, v1 = station.station_respond_batch(a1_p, phi1, r1, rhat1, params)
        x2, v2 = station.station_respond_batch(a2_p, phi2, r2, rhat2, params)
        pairs.append(NonCfdPairData(
            side1_setting=a1_p, side2_setting=a2_p, k=ks,
            x1=x1, v1=v1, w1=station.identify_photon(v1, params.threshold),
            x2=x2, v2=v2, w2=station.identify_photon(v2, params.threshold),
        ))

    # The run stops at the trial that fills the last quota; marginals are
    # counted over exactly that many coin flips.
    n_trials = last_k + 1
    n1p = int(np.count_nonzero(
        rng.uniforms(seed, rng.CHOICE_1, n_trials) < 0.5))
    n2p = int(np.count_nonzero(
        rng.uniforms(seed, rng.CHOICE_2, n_trials) < 0.5))

    return NonCfdRun(params=params, quad=quad, quota=quota, seed=seed,
                     pairs=tuple(pairs), n_trials=n_trials,
                     primed_counts=(n1p, n2p))
