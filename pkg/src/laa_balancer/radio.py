"""SINR, Shannon rates and WiFi slotted-channel throughput primitives.

All powers are linear watts internally; dBm is converted at the config
boundary.  Rates are bits per second, durations are seconds.  Every function
here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

# Defaults for the fixed-MCS setup: 64-QAM 5/6 on a 20 MHz channel.
LTE_MAC_CAP_BPS = 75e6
WIFI_MAC_RATE_BPS = 65e6
REF_BAND_BW_HZ = 20e6

SINR_REGIMES = ("sue_licensed", "sue_unlicensed", "mue_noabs", "mue_abs")


class ConvergenceError(RuntimeError):
    """Fixed-point iteration failed to converge (pathological parameters)."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0.0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(watts) + 30.0


def _as_tuple(values, n: int, name: str) -> tuple[float, ...]:
    """Broadcast a scalar to n entries, or validate a length-n sequence."""
    if isinstance(values, (int, float)):
        return (float(values),) * n
    out = tuple(float(v) for v in values)
    if len(out) != n:
        raise ValueError(f"{name}: expected {n} entries, got {len(out)}")
    return out


@dataclass(frozen=True)
class RadioEnvironment:
    """Received and interference powers for every link, in watts.

    ``bw_per_ue`` maps "mue" / "sue_licensed" / "sue_unlicensed" to the
    per-UE bandwidth share on that (class, band) combination.
    """

    p_sbs_sue: tuple[float, ...]
    p_mbs_mue: tuple[float, ...]
    i_mbs_sue: tuple[float, ...]
    i_sbs_mue: tuple[float, ...]
    i_wlan_sue: tuple[float, ...]
    noise: float
    bw_per_ue: Mapping[str, float]

    def __post_init__(self):
        if self.noise <= 0.0:
            raise ValueError("thermal noise must be strictly positive")
        n_sue, n_mue = len(self.p_sbs_sue), len(self.p_mbs_mue)
        if not (len(self.i_mbs_sue) == len(self.i_wlan_sue) == n_sue):
            raise ValueError("per-SUE vectors must have equal length")
        if len(self.i_sbs_mue) != n_mue:
            raise ValueError("per-MUE vectors must have equal length")
        for name in ("p_sbs_sue", "p_mbs_mue", "i_mbs_sue", "i_sbs_mue", "i_wlan_sue"):
            if any(v < 0.0 for v in getattr(self, name)):
                raise ValueError(f"{name}: powers must be nonnegative")
        for key, bw in self.bw_per_ue.items():
            if bw <= 0.0:
                raise ValueError(f"bw_per_ue[{key!r}] must be positive")

    @property
    def n_sue(self) -> int:
        return len(self.p_sbs_sue)

    @property
    def n_mue(self) -> int:
        return len(self.p_mbs_mue)

    @classmethod
    def from_bands(
        cls,
        p_sbs_sue,
        p_mbs_mue,
        i_mbs_sue,
        i_sbs_mue,
        noise: float,
        licensed_bw: float = REF_BAND_BW_HZ,
        unlicensed_bw: float = REF_BAND_BW_HZ,
        i_wlan_sue=0.0,
    ) -> "RadioEnvironment":
        """Build an environment with a round-robin equal bandwidth split.

        Each cell splits its band evenly across its own UEs, so a UE's share
        is band_bw / n_cell_ues and the per-band shares sum to the band.
        """
        n_sue = len(p_sbs_sue) if not isinstance(p_sbs_sue, (int, float)) else None
        n_mue = len(p_mbs_mue) if not isinstance(p_mbs_mue, (int, float)) else None
        if n_sue is None or n_mue is None:
            raise ValueError("per-UE powers must be sequences (one entry per UE)")
        bw = {
            "mue": licensed_bw / max(n_mue, 1),
            "sue_licensed": licensed_bw / max(n_sue, 1),
            "sue_unlicensed": unlicensed_bw / max(n_sue, 1),
        }
        return cls(
            p_sbs_sue=_as_tuple(p_sbs_sue, n_sue, "p_sbs_sue"),
            p_mbs_mue=_as_tuple(p_mbs_mue, n_mue, "p_mbs_mue"),
            i_mbs_sue=_as_tuple(i_mbs_sue, n_sue, "i_mbs_sue"),
            i_sbs_mue=_as_tuple(i_sbs_mue, n_mue, "i_sbs_mue"),
            i_wlan_sue=_as_tuple(i_wlan_sue, n_sue, "i_wlan_sue"),
            noise=noise,
            bw_per_ue=bw,
        )


def sinr(env: RadioEnvironment, node: int, regime: str) -> float:
    """Linear SINR for one node: P / (noise + I), I selected per regime.

    ``mue_abs`` has no interference term: the small cell sends only control
    and reference signals during its muted subframes.
    """
    if regime not in SINR_REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if env.noise <= 0.0:
        raise ValueError("noise must be positive")
    if regime == "sue_licensed":
        p, i = env.p_sbs_sue, env.i_mbs_sue
    elif regime == "sue_unlicensed":
        p, i = env.p_sbs_sue, env.i_wlan_sue
    elif regime == "mue_noabs":
        p, i = env.p_mbs_mue, env.i_sbs_mue
    else:  # mue_abs
        p, i = env.p_mbs_mue, tuple(0.0 for _ in env.p_mbs_mue)
    if not 0 <= node < len(p):
        raise KeyError(f"node {node} out of range for regime {regime!r}")
    return p[node] / (env.noise + i[node])


def shannon_rate(bw: float, gamma: float, cap: float | None = None) -> float:
    """bw * log2(1 + gamma), optionally clamped to a MAC-layer cap."""
    if bw < 0.0 or gamma < 0.0:
        raise ValueError("bandwidth and SINR must be nonnegative")
    rate = bw * math.log2(1.0 + gamma)
    if cap is not None:
        rate = min(rate, cap)
    return rate


@dataclass(frozen=True)
class WifiMacParams:
    """Slotted-channel MAC parameters for the WiFi stations.

    ``tau`` is the stationary per-slot transmission probability; pass a
    scalar (same value for every station), a per-station sequence, or None
    to derive it from the contention-window parameters via bianchi_tau.
    ``busy_slot`` defaults to payload airtime + SIFS + ACK + DIFS at the
    configured MAC rate; collisions occupy the same duration.
    """

    n_stations: int = 1
    tau: float | Sequence[float] | None = None
    payload_bits: float = 12000.0
    idle_slot: float = 9e-6
    sifs: float = 16e-6
    difs: float = 34e-6
    ack_duration: float = 24e-6
    mac_rate: float = WIFI_MAC_RATE_BPS
    cw_min: int = 16
    retry_stages: int = 6
    busy_slot: float | None = None

    def __post_init__(self):
        if self.n_stations < 0:
            raise ValueError("n_stations must be nonnegative")
        if not 0.0 < self.sifs < self.difs:
            raise ValueError("need 0 < SIFS < DIFS")
        if self.payload_bits <= 0.0 or self.mac_rate <= 0.0:
            raise ValueError("payload and MAC rate must be positive")
        if self.cw_min < 1 or self.retry_stages < 0:
            raise ValueError("contention window parameters out of range")
        if self.busy_slot is None:
            object.__setattr__(self, "busy_slot", self.frame_airtime())
        if not self.idle_slot < self.busy_slot:
            raise ValueError("idle slot must be shorter than busy slot")
        if self.tau is not None:
            for t in self.taus():
                if not 0.0 < t < 1.0:
                    raise ValueError("tau must lie strictly inside (0, 1)")

    def frame_airtime(self) -> float:
        return self.payload_bits / self.mac_rate + self.sifs + self.ack_duration + self.difs

    def taus(self) -> tuple[float, ...]:
        """Per-station transmission probabilities (derived when tau is None)."""
        if self.tau is None:
            t = bianchi_tau(self.cw_min, self.retry_stages, self.n_stations)
            return (t,) * self.n_stations
        if isinstance(self.tau, (int, float)):
            return (float(self.tau),) * self.n_stations
        out = tuple(float(t) for t in self.tau)
        if len(out) != self.n_stations:
            raise ValueError("tau vector length must equal n_stations")
        return out


def wifi_slot_probabilities(params: WifiMacParams):
    """Per-station success probability plus idle/busy slot probabilities.

    p_succ[w] = tau_w * prod_{i != w} (1 - tau_i); p_idle = prod (1 - tau_i);
    p_busy = 1 - p_idle, so p_idle + p_busy = 1 exactly.
    """
    if params.n_stations < 1:
        raise ValueError("need at least one station")
    taus = params.taus()
    p_idle = 1.0
    for t in taus:
        p_idle *= 1.0 - t
    p_succ = []
    for w, t in enumerate(taus):
        prod = 1.0
        for i, ti in enumerate(taus):
            if i != w:
                prod *= 1.0 - ti
        p_succ.append(t * prod)
    return tuple(p_succ), p_idle, 1.0 - p_idle


def bianchi_tau(
    cw_min: int,
    retry_stages: int,
    n_stations: int,
    tol: float = 1e-10,
    max_iter: int = 100_000,
) -> float:
    """Saturated-DCF per-slot transmission probability.

    Solves the coupled fixed point tau = 2 / (W + 1 + p*W*sum_{i<m}(2p)^i)
    with p = 1 - (1 - tau)^(n-1), by damped iteration.  For a single station
    this reduces to tau = 2 / (W + 1).
    """
    if cw_min < 1 or n_stations < 1 or retry_stages < 0:
        raise ValueError("cw_min >= 1, n_stations >= 1, retry_stages >= 0 required")
    w = float(cw_min)
    m = retry_stages

    def tau_of_p(p: float) -> float:
        series = sum((2.0 * p) ** i for i in range(m))
        return 2.0 / (w + 1.0 + p * w * series)

    tau = tau_of_p(0.0)
    if n_stations == 1:
        return tau
    for _ in range(max_iter):
        p = 1.0 - (1.0 - tau) ** (n_stations - 1)
        nxt = 0.5 * tau + 0.5 * tau_of_p(p)
        if abs(nxt - tau) < tol:
            return nxt
        tau = nxt
    raise ConvergenceError("DCF fixed point did not converge")


def wifi_exclusive_throughput(params: WifiMacParams, station: int = 0) -> float:
    """Per-station throughput when WLAN has the channel to itself.

    (p_succ * payload) / (p_idle*idle_slot + p_busy*busy_slot); the
    denominator is the mean duration of one channel slot.
    """
    p_succ, p_idle, p_busy = wifi_slot_probabilities(params)
    if not 0 <= station < params.n_stations:
        raise KeyError(f"station {station} out of range")
    mean_slot = p_idle * params.idle_slot + p_busy * params.busy_slot
    if mean_slot <= 0.0:
        raise ValueError("mean slot duration must be positive")
    return p_succ[station] * params.payload_bits / mean_slot


@dataclass(frozen=True)
class RatePrimitives:
    """The five per-node rate constants consumed by the optimizer (bps)."""

    s_m_noabs: tuple[float, ...]
    s_m_abs: tuple[float, ...]
    s_f_l: tuple[float, ...]
    s_f_u: tuple[float, ...]
    s_w_hat: tuple[float, ...]

    def __post_init__(self):
        if len(self.s_m_noabs) != len(self.s_m_abs):
            raise ValueError("MUE rate vectors must have equal length")
        if len(self.s_f_l) != len(self.s_f_u):
            raise ValueError("SUE rate vectors must have equal length")
        for name in ("s_m_noabs", "s_m_abs", "s_f_l", "s_f_u", "s_w_hat"):
            if any(v < 0.0 for v in getattr(self, name)):
                raise ValueError(f"{name}: rates must be nonnegative")
        for lo, hi in zip(self.s_m_noabs, self.s_m_abs):
            if lo > hi * (1.0 + 1e-12) + 1e-12:
                raise ValueError("removing interference must not lower an MUE rate")

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.s_m_noabs), len(self.s_f_l), len(self.s_w_hat)

    @classmethod
    def from_environment(
        cls,
        env: RadioEnvironment,
        wifi: WifiMacParams,
        lte_cap_bps: float | None = None,
        ref_band_bw: float = REF_BAND_BW_HZ,
    ) -> "RatePrimitives":
        """Derive every rate constant from link SINRs and MAC parameters.

        When ``lte_cap_bps`` is given (fixed-MCS mode) each UE's Shannon rate
        is clamped to its bandwidth share of the cap.
        """

        def cap_for(bw: float) -> float | None:
            if lte_cap_bps is None:
                return None
            return lte_cap_bps * bw / ref_band_bw

        bw_m = env.bw_per_ue["mue"]
        bw_fl = env.bw_per_ue["sue_licensed"]
        bw_fu = env.bw_per_ue["sue_unlicensed"]
        s_m_noabs = tuple(
            shannon_rate(bw_m, sinr(env, m, "mue_noabs"), cap_for(bw_m))
            for m in range(env.n_mue)
        )
        s_m_abs = tuple(
            shannon_rate(bw_m, sinr(env, m, "mue_abs"), cap_for(bw_m))
            for m in range(env.n_mue)
        )
        s_f_l = tuple(
            shannon_rate(bw_fl, sinr(env, f, "sue_licensed"), cap_for(bw_fl))
            for f in range(env.n_sue)
        )
        s_f_u = tuple(
            shannon_rate(bw_fu, sinr(env, f, "sue_unlicensed"), cap_for(bw_fu))
            for f in range(env.n_sue)
        )
        if wifi.n_stations > 0:
            s_w = tuple(wifi_exclusive_throughput(wifi, w) for w in range(wifi.n_stations))
        else:
            s_w = ()
        return cls(s_m_noabs, s_m_abs, s_f_l, s_f_u, s_w)


def epoch_throughputs(rates: RatePrimitives, d):
    """Per-node epoch throughputs for a decision with fields alpha, beta.

    s_m = beta*s_m_noabs + (1-beta)*s_m_abs
    s_f = beta*s_f_l + (1-alpha)*s_f_u
    s_w = alpha*s_w_hat
    """
    a, b = float(d.alpha), float(d.beta)
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError("alpha and beta must lie in [0, 1]")
    s_m = tuple(b * no + (1.0 - b) * ab for no, ab in zip(rates.s_m_noabs, rates.s_m_abs))
    s_f = tuple(b * sl + (1.0 - a) * su for sl, su in zip(rates.s_f_l, rates.s_f_u))
    s_w = tuple(a * sw for sw in rates.s_w_hat)
    return s_m, s_f, s_w


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path loss coefficients."""

    pl0_db: float = 40.0
    d0_m: float = 1.0
    exponent_outdoor: float = 3.5
    exponent_indoor: float = 4.0
    wall_db: float = 0.0  # added once for indoor endpoints


def path_loss(distance: float, environment: str, params: PathLossParams) -> float:
    """Deterministic loss in dB: PL0 + 10*n*log10(d/d0) (+ wall penetration)."""
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    if environment == "outdoor":
        n, wall = params.exponent_outdoor, 0.0
    elif environment == "indoor":
        n, wall = params.exponent_indoor, params.wall_db
    else:
        raise ValueError(f"unknown environment {environment!r}")
    return params.pl0_db + 10.0 * n * math.log10(distance / params.d0_m) + wall
