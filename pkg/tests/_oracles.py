"""Independent oracles shared by the test modules.

Everything here is deliberately brute force (Monte-Carlo slot draws, dense
grids, naive bisection) and never calls the code paths it is used to check.
"""

from __future__ import annotations

import numpy as np

from laa_balancer.radio import RatePrimitives, WifiMacParams
from laa_balancer.balancer import BalancerInput


def mc_wifi_throughput(params: WifiMacParams, n_slots: int, seed: int):
    """Slot-level Monte-Carlo of the slotted channel with fixed taus.

    Each station transmits independently with probability tau in every
    channel slot; exactly one transmitter delivers a payload, any other
    outcome wastes the slot.  Returns per-station bps.
    """
    rng = np.random.default_rng(seed)
    taus = np.asarray(params.taus())
    draws = rng.random((n_slots, params.n_stations)) < taus
    n_tx = draws.sum(axis=1)
    idle_slots = int((n_tx == 0).sum())
    busy_slots = n_slots - idle_slots
    elapsed = idle_slots * params.idle_slot + busy_slots * params.busy_slot
    success = n_tx == 1
    bits = draws[success].sum(axis=0) * params.payload_bits
    return bits / elapsed


def bianchi_tau_bisect(cw_min: int, retry_stages: int, n_stations: int) -> float:
    """Brute-force bisection on the saturated-DCF fixed-point residual."""
    w, m = float(cw_min), retry_stages

    def residual(tau: float) -> float:
        p = 1.0 - (1.0 - tau) ** (n_stations - 1)
        series = sum((2.0 * p) ** i for i in range(m))
        return tau - 2.0 / (w + 1.0 + p * w * series)

    lo, hi = 1e-12, 1.0 - 1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def random_instance(rng: np.random.Generator) -> BalancerInput:
    """Random rates log-uniform in [1e5, 1e8] bps, counts 1..10, load (0,1]."""
    n_m, n_f, n_w = (int(v) for v in rng.integers(1, 11, size=3))

    def draw(n):
        return 10.0 ** rng.uniform(5.0, 8.0, size=n)

    a, b = draw(n_m), draw(n_m)
    rates = RatePrimitives(
        s_m_noabs=tuple(np.minimum(a, b)),
        s_m_abs=tuple(np.maximum(a, b)),
        s_f_l=tuple(draw(n_f)),
        s_f_u=tuple(draw(n_f)),
        s_w_hat=tuple(draw(n_w)),
    )
    r_bar_w = 1.0 - float(rng.uniform(0.0, 1.0))  # lies in (0, 1]
    return BalancerInput(rates, r_bar_w)


def dense_argmax_1d(fn, lower: float, upper: float, n: int = 200_001) -> float:
    """Argmax of a scalar function by dense sampling (endpoint-safe)."""
    xs = np.linspace(lower, upper, n)
    vals = np.array([fn(x) for x in xs])
    return float(xs[int(np.nanargmax(vals))])
