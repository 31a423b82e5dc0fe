"""Joint licensed/unlicensed muting optimizer.

Maximizes the sum of log-throughputs over the muting fraction alpha
(unlicensed) and the transmission fraction beta (licensed), subject to
alpha <= r_bar_w (don't under-utilize the unlicensed band), alpha <= beta
(transmit on at least one band at any time) and box bounds.  The program is
concave, so the optimum is found by enumerating the six multiplier patterns
that can be active, solving each pattern's stationarity system in closed
form or by bisection, and keeping the pattern that is primal and dual
feasible.  A brute-force grid search over the feasible box is provided as an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .radio import RatePrimitives, epoch_throughputs

ALPHA_FLOOR = 1e-9  # alpha must stay positive so the cell can keep sensing
BISECT_TOL = 1e-10
PRIMAL_TOL = 1e-9
DUAL_TOL = 1e-9
DECISION_TIE_TOL = 1e-6
UTILITY_TIE_TOL = 1e-6

# 0-based indices of the multipliers allowed to be nonzero per candidate.
_NONZERO_LAMBDAS = {1: (0, 5), 2: (5,), 3: (0, 1), 4: (0,), 5: (1,), 6: ()}


class InfeasibleInputError(ValueError):
    """Input violates a model assumption (e.g. zero WiFi offered load)."""


class UndefinedUtilityError(ValueError):
    """Some node's composite throughput is zero or negative."""


class NoFeasibleCandidateError(RuntimeError):
    """No multiplier pattern satisfies primal and dual feasibility."""


@dataclass(frozen=True)
class Decision:
    """Muting fraction on unlicensed (alpha) and transmit fraction on
    licensed (beta).  Bounds [0, 1] are enforced here; the solver
    additionally guarantees alpha > 0 and alpha <= beta on its own output
    (comparison schemes may legitimately emit alpha > beta)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ValueError("alpha and beta must lie in [0, 1]")


@dataclass(frozen=True)
class BalancerInput:
    rates: RatePrimitives
    r_bar_w: float  # normalized WiFi offered load, sensed on the channel

    def __post_init__(self):
        if not self.r_bar_w > 0.0:
            raise InfeasibleInputError(
                "r_bar_w must be positive: with no WiFi load the "
                "unlicensed-utilization constraint forces alpha = 0, which "
                "conflicts with the positive-sensing requirement"
            )
        if self.r_bar_w > 1.0:
            raise InfeasibleInputError("r_bar_w is a normalized load, must be <= 1")


@dataclass(frozen=True)
class KktCertificate:
    candidate: int
    lambdas: tuple[float, float, float, float, float, float]
    primal_ok: bool
    dual_ok: bool
    utility: float


def utility_log(rates: RatePrimitives, d) -> float:
    """Sum of natural logs of every node's composite epoch throughput."""
    s_m, s_f, s_w = epoch_throughputs(rates, d)
    total = 0.0
    for s in (*s_m, *s_f, *s_w):
        if s <= 0.0:
            raise UndefinedUtilityError(
                f"composite throughput {s} is not positive at "
                f"alpha={d.alpha}, beta={d.beta}"
            )
        total += math.log(s)
    return total


def _utility_or_neginf(rates: RatePrimitives, alpha: float, beta: float) -> float:
    try:
        return utility_log(rates, Decision(alpha, beta))
    except UndefinedUtilityError:
        return -math.inf


def _ratio(num: float, den: float) -> float:
    if den <= 0.0:
        if num == 0.0:
            return 0.0
        return math.inf if num > 0.0 else -math.inf
    return num / den


def _du_dalpha(rates: RatePrimitives, alpha: float, beta: float) -> float:
    """dU/dalpha = N_w/alpha - sum_f s_u / (beta*s_l + (1-alpha)*s_u)."""
    n_w = len(rates.s_w_hat)
    total = _ratio(float(n_w), alpha) if n_w else 0.0
    for sl, su in zip(rates.s_f_l, rates.s_f_u):
        total -= _ratio(su, beta * sl + (1.0 - alpha) * su)
    return total


def _du_dbeta(rates: RatePrimitives, alpha: float, beta: float) -> float:
    """dU/dbeta = sum_m (s_no-s_abs)/(beta*s_no+(1-beta)*s_abs)
    + sum_f s_l/(beta*s_l+(1-alpha)*s_u)."""
    total = 0.0
    for no, ab in zip(rates.s_m_noabs, rates.s_m_abs):
        total += _ratio(no - ab, beta * no + (1.0 - beta) * ab)
    for sl, su in zip(rates.s_f_l, rates.s_f_u):
        total += _ratio(sl, beta * sl + (1.0 - alpha) * su)
    return total


def _bisect_decreasing(
    f: Callable[[float], float], lo: float, hi: float, tol: float = BISECT_TOL
) -> float | None:
    """Root of a nonincreasing function on [lo, hi]; None when unbracketed."""
    flo, fhi = f(lo), f(hi)
    if flo < 0.0 or fhi > 0.0:
        return None
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        fm = f(mid)
        if fm > 0.0:
            lo = mid
        elif fm < 0.0:
            hi = mid
        else:
            return mid
    return 0.5 * (lo + hi)


def _beta_stationary(rates: RatePrimitives, alpha: float) -> tuple[float, bool]:
    """Root of dU/dbeta(alpha, .) on [0, 1], clamped; bool marks interior."""
    f = lambda b: _du_dbeta(rates, alpha, b)
    if f(0.0) <= 0.0:
        return 0.0, False
    if f(1.0) >= 0.0:
        return 1.0, False
    root = _bisect_decreasing(f, 0.0, 1.0)
    return root, True


def solve_candidate(inp: BalancerInput, k: int):
    """Stationarity solution and multipliers for multiplier pattern k.

    Returns (Decision | None, KktCertificate); a None decision marks a
    pattern whose stationarity equation has no root inside the box.
    """
    if k not in _NONZERO_LAMBDAS:
        raise ValueError("candidate index must be in 1..6")
    rates, rbw = inp.rates, inp.r_bar_w
    lam = [0.0] * 6
    alpha = beta = None

    if k == 1:
        alpha, beta = rbw, 1.0
        lam[0] = _du_dalpha(rates, alpha, beta)
        lam[5] = _du_dbeta(rates, alpha, beta)
    elif k == 2:
        beta = 1.0
        alpha = _bisect_decreasing(
            lambda a: _du_dalpha(rates, a, 1.0), ALPHA_FLOOR, 1.0
        )
        if alpha is not None:
            lam[5] = _du_dbeta(rates, alpha, beta)
    elif k == 3:
        alpha = beta = rbw
        lam[1] = -_du_dbeta(rates, alpha, beta)
        lam[0] = _du_dalpha(rates, alpha, beta) - lam[1]
    elif k == 4:
        alpha = rbw
        beta, interior = _beta_stationary(rates, alpha)
        if not interior:
            beta = None
        else:
            lam[0] = _du_dalpha(rates, alpha, beta)
    elif k == 5:
        diag = lambda a: _du_dalpha(rates, a, a) + _du_dbeta(rates, a, a)
        alpha = _bisect_decreasing(diag, ALPHA_FLOOR, 1.0)
        beta = alpha
        if alpha is not None:
            lam[1] = _du_dalpha(rates, alpha, beta)
    else:  # k == 6: joint interior stationary point by nested bisection
        def outer(a: float) -> float:
            b, _ = _beta_stationary(rates, a)
            return _du_dalpha(rates, a, b)

        alpha = _bisect_decreasing(outer, ALPHA_FLOOR, 1.0)
        if alpha is not None:
            beta, interior = _beta_stationary(rates, alpha)
            if not interior:
                alpha = beta = None

    if alpha is None or beta is None:
        cert = KktCertificate(k, tuple(lam), False, False, -math.inf)
        return None, cert

    d = Decision(alpha, beta)
    cert = KktCertificate(
        k, tuple(lam), False, False, _utility_or_neginf(rates, alpha, beta)
    )
    primal_ok, dual_ok = check_kkt(inp, cert, d)
    cert = KktCertificate(k, tuple(lam), primal_ok, dual_ok, cert.utility)
    return d, cert


def check_kkt(inp: BalancerInput, cert: KktCertificate, d: Decision):
    """Primal/dual feasibility verdicts for a candidate's solution."""
    primal_ok = (
        d.alpha <= inp.r_bar_w + PRIMAL_TOL
        and d.alpha <= d.beta + PRIMAL_TOL
        and ALPHA_FLOOR - PRIMAL_TOL <= d.alpha <= 1.0 + PRIMAL_TOL
        and -PRIMAL_TOL <= d.beta <= 1.0 + PRIMAL_TOL
    )
    nz = _NONZERO_LAMBDAS[cert.candidate]
    dual_ok = all(cert.lambdas[i] >= -DUAL_TOL for i in nz)
    return primal_ok, dual_ok


def solve_holistic(inp: BalancerInput):
    """Optimal (alpha, beta) with its certificate.

    Evaluates the six candidate patterns in order and returns the first
    primal- and dual-feasible one.  On degenerate (flat) instances where
    several feasible candidates tie in utility but disagree in decision, the
    tie is broken toward larger beta, then larger alpha.
    """
    feasible = []
    for k in range(1, 7):
        d, cert = solve_candidate(inp, k)
        if d is not None and cert.primal_ok and cert.dual_ok:
            feasible.append((d, cert))
    if not feasible:
        raise NoFeasibleCandidateError(
            "no candidate satisfies the KKT conditions; check that every "
            "node class has positive rates and that WiFi is present"
        )
    first_d, first_cert = feasible[0]
    agree = all(
        abs(d.alpha - first_d.alpha) <= DECISION_TIE_TOL
        and abs(d.beta - first_d.beta) <= DECISION_TIE_TOL
        for d, _ in feasible
    )
    if agree:
        return first_d, first_cert
    best_u = max(cert.utility for _, cert in feasible)
    top = [(d, c) for d, c in feasible if c.utility >= best_u - UTILITY_TIE_TOL]
    top.sort(key=lambda dc: (dc[0].beta, dc[0].alpha), reverse=True)
    return top[0]


def grid_oracle(inp: BalancerInput, resolution: float) -> Decision:
    """Exhaustive argmax of the utility over the feasible grid.

    Evaluates every (alpha, beta) with alpha in (0, 1], beta in [0, 1],
    alpha <= min(beta, r_bar_w), at the given step (plus the exact boundary
    values r_bar_w and 1).  Ties break toward larger alpha, then larger
    beta.  Independent of the candidate machinery above.
    """
    if not 0.0 < resolution <= 0.1:
        raise ValueError("resolution must lie in (0, 0.1]")
    rates, rbw = inp.rates, inp.r_bar_w
    steps = int(round(1.0 / resolution))
    alphas = np.unique(
        np.concatenate([np.linspace(resolution, 1.0, steps), [rbw, 1.0]])
    )
    alphas = alphas[(alphas > 0.0) & (alphas <= 1.0)]
    betas = np.unique(np.concatenate([np.linspace(0.0, 1.0, steps + 1), [rbw]]))

    n_w = len(rates.s_w_hat)
    wifi_col = np.zeros(alphas.shape)
    if n_w:
        with np.errstate(divide="ignore"):
            for sw in rates.s_w_hat:
                wifi_col += np.log(alphas * sw)
    mue_row = np.zeros(betas.shape)
    with np.errstate(divide="ignore"):
        for no, ab in zip(rates.s_m_noabs, rates.s_m_abs):
            mue_row += np.log(betas * no + (1.0 - betas) * ab)
    util = wifi_col[:, None] + mue_row[None, :]
    with np.errstate(divide="ignore"):
        for sl, su in zip(rates.s_f_l, rates.s_f_u):
            util += np.log(betas[None, :] * sl + (1.0 - alphas[:, None]) * su)

    feas = (alphas[:, None] <= betas[None, :] + 1e-15) & (
        alphas[:, None] <= rbw + 1e-15
    )
    if not feas.any():
        raise InfeasibleInputError("empty feasible grid")
    util = np.where(feas, util, -np.inf)
    best = util.max()
    if best == -math.inf:
        raise UndefinedUtilityError("utility undefined on the whole feasible grid")
    ties = np.argwhere(util == best)
    ia, ib = max(ties, key=lambda t: (alphas[t[0]], betas[t[1]]))
    return Decision(float(alphas[ia]), float(betas[ib]))


def alpha_single_sue(t_f_l: float, s_f_u: float, n_w: int) -> tuple[float, bool]:
    """Closed-form muting fraction for the one-SUE diagnostic.

    alpha = N_w*(T_f_l + s_f_u) / (s_f_u*(N_w + 1)), clamped to 1; the flag
    reports whether clamping occurred.  T_f_l is the throughput the small
    cell actually attains on the licensed band.
    """
    if s_f_u <= 0.0:
        raise ValueError("s_f_u must be positive")
    if n_w < 1:
        raise ValueError("need at least one WiFi station")
    raw = n_w * (t_f_l + s_f_u) / (s_f_u * (n_w + 1))
    if raw > 1.0:
        return 1.0, True
    return raw, False
