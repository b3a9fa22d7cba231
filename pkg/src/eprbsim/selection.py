"""Time-window view of threshold selection.

Rescaling voltages onto [0, 1] turns the photon identification
threshold into a local time window: a voltage passing the threshold is
the same event as its time delay falling strictly inside the window.
Both comparisons use the strict boundary convention.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .params import ModelParams


class SelectionResult(NamedTuple):
    pass1: object
    pass2: object
    pass_pair: object
    coincident: object


def _span_or_raise(params: ModelParams) -> float:
    if params.span == 0.0:
        raise ValueError(
            "time view undefined for degenerate voltage range "
            f"(v_min_mag == v_max_mag == {params.v_min_mag})"
        )
    return params.span


def to_time(v, params: ModelParams):
    """Map a voltage in [-v_max_mag, -v_min_mag] to a delay in [0, 1]."""
    span = _span_or_raise(params)
    return (v + params.v_max_mag) / span


def window_size(threshold: float, params: ModelParams) -> float:
    """Window width W in [0, 1] equivalent to the given threshold."""
    span = _span_or_raise(params)
    return (threshold + params.v_max_mag) / span


def select_by_window(t1, t2, w) -> SelectionResult:
    """Apply the local window to both delays.

    pass_i is strict (t_i < w) to match identify_photon exactly.  The
    coincidence predicate |t1 - t2| <= w is implied by both passes but
    not equivalent to them.
    """
    p1 = np.less(t1, w)
    p2 = np.less(t2, w)
    both = np.logical_and(p1, p2)
    coinc = np.less_equal(np.abs(np.subtract(t1, t2)), w)
    if np.isscalar(t1) and np.isscalar(t2):
        return SelectionResult(bool(p1), bool(p2), bool(both), bool(coinc))
    return SelectionResult(p1, p2, both, coinc)
