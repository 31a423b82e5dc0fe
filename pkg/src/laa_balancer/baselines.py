"""The five comparison allocation schemes.

Every case reduces to maximizing a weighted sum of logs of affine functions
over one variable on an interval, so a single concave 1-D maximizer backs
them all.
"""

from __future__ import annotations

import enum
from typing import Sequence

from .balancer import ALPHA_FLOOR, BalancerInput, Decision

PF_TOL = 1e-10


class ObjectiveUndefinedError(ValueError):
    """The log objective is undefined on the whole interval."""


class BaselineCase(enum.Enum):
    """Comparison schemes; the int value is the conventional case number."""

    NO_MUTING_LICENSED = 1  # PF muting on unlicensed only, full-time licensed tx
    NO_MUTING_UNLICENSED = 2  # PF muting on licensed only, full-time unlicensed tx
    NO_TX_LICENSED = 3  # unlicensed-only small cell, PF muting vs WLAN
    NO_TX_UNLICENSED = 4  # licensed-only small cell, PF muting vs macro
    INDEPENDENT_MUTING = 5  # both bands, each solved in isolation

    @classmethod
    def from_name(cls, name: str) -> "BaselineCase":
        name = name.strip().lower()
        for case in cls:
            if name in (f"case{case.value}", case.name.lower()):
                return case
        raise ValueError(f"unknown baseline case {name!r}")


def solve_pf_1d(
    terms: Sequence[tuple[float, float, float]], lower: float, upper: float
) -> float:
    """Maximize sum_i n_i*log(a_i + b_i*x) over [lower, upper].

    ``terms`` holds (weight, a, b) triples.  The objective is concave, so
    its derivative sum n_i*b_i/(a_i+b_i*x) is decreasing and bisection on it
    finds the maximizer; an endpoint is returned when the derivative does
    not change sign.
    """
    if not terms or lower >= upper:
        raise ValueError("need a nonempty term list and a nonempty interval")
    lo, hi = lower, upper
    for n, a, b in terms:
        if n <= 0.0:
            raise ValueError("term weights must be positive")
        if b > 0.0:
            lo = max(lo, -a / b)
        elif b < 0.0:
            hi = min(hi, -a / b)
        elif a <= 0.0:
            raise ObjectiveUndefinedError("constant term is never positive")
    if lo >= hi:
        raise ObjectiveUndefinedError("objective undefined on the entire interval")

    def deriv(x: float) -> float:
        total = 0.0
        for n, a, b in terms:
            den = a + b * x
            if den <= 0.0:
                total += float("inf") if b > 0.0 else float("-inf")
            else:
                total += n * b / den
        return total

    # keep strictly inside the positivity domain when it was shrunk
    eps = (hi - lo) * 1e-12
    left = lo + eps if lo > lower else lower
    right = hi - eps if hi < upper else upper
    if deriv(left) <= 0.0:
        return left
    if deriv(right) >= 0.0:
        return right
    for _ in range(200):
        mid = 0.5 * (left + right)
        if right - left < PF_TOL:
            return mid
        d = deriv(mid)
        if d > 0.0:
            left = mid
        elif d < 0.0:
            right = mid
        else:
            return mid
    return 0.5 * (left + right)


def _alpha_unlicensed_only(inp: BalancerInput) -> float:
    """PF split of the unlicensed band between the small cell and WLAN."""
    rates = inp.rates
    terms = [(1.0, su, -su) for su in rates.s_f_u]
    terms += [(1.0, 0.0, sw) for sw in rates.s_w_hat]
    return solve_pf_1d(terms, ALPHA_FLOOR, inp.r_bar_w)


def _beta_licensed_only(inp: BalancerInput) -> float:
    """PF split of the licensed band between the macro and small cell."""
    rates = inp.rates
    terms = [(1.0, ab, no - ab) for no, ab in zip(rates.s_m_noabs, rates.s_m_abs)]
    terms += [(1.0, 0.0, sl) for sl in rates.s_f_l]
    return solve_pf_1d(terms, 0.0, 1.0)


def solve_case(inp: BalancerInput, case: BaselineCase) -> Decision:
    """Decision (alpha, beta) for one comparison scheme.

    Case 5 solves the two bands independently and may return alpha > beta;
    that violation of the coupling constraint is the point of the case.
    """
    rates = inp.rates
    if case is BaselineCase.NO_MUTING_LICENSED:
        # beta pinned to 1; PF muting on the unlicensed band only.  The MUE
        # log-terms depend on neither variable once beta is fixed, so they
        # cannot move the argmax and are left out.
        terms = [(1.0, sl + su, -su) for sl, su in zip(rates.s_f_l, rates.s_f_u)]
        terms += [(1.0, 0.0, sw) for sw in rates.s_w_hat]
        alpha = solve_pf_1d(terms, ALPHA_FLOOR, inp.r_bar_w)
        return Decision(alpha, 1.0)
    if case is BaselineCase.NO_MUTING_UNLICENSED:
        # transmit (almost) all the time on unlicensed: alpha at the sensing
        # floor so the log stays finite; WLAN throughput is effectively 0.
        alpha = ALPHA_FLOOR
        terms = [(1.0, ab, no - ab) for no, ab in zip(rates.s_m_noabs, rates.s_m_abs)]
        terms += [
            (1.0, (1.0 - alpha) * su, sl)
            for sl, su in zip(rates.s_f_l, rates.s_f_u)
        ]
        beta = solve_pf_1d(terms, 0.0, 1.0)
        return Decision(alpha, beta)
    if case is BaselineCase.NO_TX_LICENSED:
        return Decision(_alpha_unlicensed_only(inp), 0.0)
    if case is BaselineCase.NO_TX_UNLICENSED:
        return Decision(1.0, _beta_licensed_only(inp))
    if case is BaselineCase.INDEPENDENT_MUTING:
        return Decision(_alpha_unlicensed_only(inp), _beta_licensed_only(inp))
    raise ValueError(f"unhandled case {case}")
