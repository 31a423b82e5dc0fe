"""Efficiency, Jain fairness and cross-run aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

CI_Z_95 = 1.96  # normal-approximation quantile for a 95% interval

_CI_FIELDS = ("wlan_bps", "mbs_bps", "sbs_bps", "total_bps", "jain")


def jain_index(throughputs: Sequence[float]) -> float:
    """(sum s)^2 / (N * sum s^2); lies in [1/N, 1]."""
    n = len(throughputs)
    if n < 1:
        raise ValueError("need at least one throughput value")
    if any(s < 0.0 for s in throughputs):
        raise ValueError("throughputs must be nonnegative")
    sq = sum(s * s for s in throughputs)
    if sq == 0.0:
        raise ValueError("all-zero throughput vector has no fairness index")
    total = sum(throughputs)
    return total * total / (n * sq)


def efficiency(throughputs: Sequence[float]) -> float:
    """Total network throughput: plain sum."""
    if any(s < 0.0 for s in throughputs):
        raise ValueError("throughputs must be nonnegative")
    return float(sum(throughputs))


@dataclass(frozen=True)
class MetricsReport:
    """Per-class aggregate throughputs (bps), total, and Jain fairness.

    ``ci`` carries 95% half-widths per field after summarize_runs; it is
    None on single-run reports.
    """

    wlan_bps: float
    mbs_bps: float
    sbs_bps: float
    total_bps: float
    jain: float
    ci: Mapping[str, float] | None = None

    @classmethod
    def from_node_throughputs(
        cls,
        mue_bps: Sequence[float],
        sue_bps: Sequence[float],
        sta_bps: Sequence[float],
    ) -> "MetricsReport":
        """Aggregate per-node throughputs; Jain runs over all nodes.

        Rates below 1 bps count as zero (a cell muted to the sensing floor
        delivers nothing in practice).
        """
        sta = [s if s >= 1.0 else 0.0 for s in sta_bps]
        mue = [s if s >= 1.0 else 0.0 for s in mue_bps]
        sue = [s if s >= 1.0 else 0.0 for s in sue_bps]
        everyone = [*mue, *sue, *sta]
        return cls(
            wlan_bps=efficiency(sta),
            mbs_bps=efficiency(mue),
            sbs_bps=efficiency(sue),
            total_bps=efficiency(everyone),
            jain=jain_index(everyone),
        )


def summarize_runs(
    per_run: Sequence[MetricsReport], confidence: float = 0.95
) -> MetricsReport:
    """Mean report across runs with normal-approximation CI half-widths."""
    if len(per_run) < 2:
        raise ValueError("need at least two runs to summarize")
    if abs(confidence - 0.95) > 1e-12:
        raise ValueError("only the 95% level is supported")
    n = len(per_run)
    means, half = {}, {}
    for name in _CI_FIELDS:
        vals = [getattr(r, name) for r in per_run]
        mu = sum(vals) / n
        var = sum((v - mu) ** 2 for v in vals) / (n - 1)
        means[name] = mu
        half[name] = CI_Z_95 * math.sqrt(var / n)
    return MetricsReport(ci=half, **means)
